// lrgeo: boundary-proximity diagnostic for a single-covariate logistic
// regression, with optional Monte-Carlo sampling study and plot data.

#include "lrgeo/cli_report.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    lrgeo::RunConfig cfg;
    std::string covariate;

    CLI::App app{"Boundary-proximity diagnostic for logistic regression"};
    app.set_config("--config", "", "INI/TOML file supplying any of the options below");
    app.add_option("--input-path", cfg.input_path, "CSV file with a header row")->required();
    app.add_option("--response-column", cfg.response_column, "0/1 response column")->capture_default_str();
    app.add_option("--covariate-columns", cfg.covariate_columns, "covariate column (exactly one)")
        ->required();
    app.add_flag("--center,!--no-center", cfg.center, "center the covariate (default on)");
    app.add_option("--level", cfg.level, "chi-squared calibration level")->capture_default_str();
    app.add_option("--marginal-factor", cfg.marginal_factor, "upper edge of the MARGINAL band, in thresholds")
        ->capture_default_str();
    app.add_option("--reps", cfg.reps, "sampling replicates; 0 skips the sampling study")->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    app.add_option("--edgeworth-grid-resolution", cfg.edgeworth_grid_resolution, "grid points per axis")
        ->capture_default_str();
    app.add_option("--edgeworth-grid-half-width", cfg.edgeworth_grid_half_width,
                   "grid half-width in standard deviations")
        ->capture_default_str();
    app.add_option("--contour-points", cfg.contour_points, "points on the diagnostic contour")
        ->capture_default_str();
    app.add_option("--threads", cfg.threads, "worker threads for sampling (0 = all cores)")
        ->capture_default_str();
    app.add_option("--output-dir", cfg.output_dir, "directory for report.json and CSV files")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: InvalidArguments: " << e.what() << "\n";
        return 2;
    }

    return lrgeo::run(cfg, std::cerr);
}
