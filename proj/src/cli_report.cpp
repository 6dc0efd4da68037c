#include "lrgeo/cli_report.hpp"

#include "lrgeo/sampling_lab.hpp"
#include "report_schema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace lrgeo {

using nlohmann::json;

// ---------------------------------------------------------------------------
// CSV

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_line(const std::string& line, std::size_t line_no) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (quoted) throw InputError("MalformedCsv", "unterminated quote on line " + std::to_string(line_no));
    fields.push_back(trim(cur));
    return fields;
}

std::optional<double> parse_real(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* begin = s.data();
    if (*begin == '+') ++begin;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

Dataset parse_csv(const std::filesystem::path& path, const std::string& response_column,
                  const std::vector<std::string>& covariate_columns) {
    std::ifstream in(path);
    if (!in) throw InputError("FileNotFound", "cannot open " + path.string());

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_csv_line(line, line_no);
            break;
        }
    }
    if (header.empty()) throw InputError("EmptyFile", path.string() + " has no header row");
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

    auto column_of = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw InputError("MissingColumn", "column '" + name + "' not found");
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t response_idx = column_of(response_column);
    std::vector<std::size_t> cov_idx;
    for (const auto& c : covariate_columns) cov_idx.push_back(column_of(c));

    std::vector<std::vector<double>> rows;
    std::vector<int> t;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line, line_no);
        if (fields.size() != header.size())
            throw InputError("MalformedCsv", "line " + std::to_string(line_no) + " has " +
                                                 std::to_string(fields.size()) + " fields, header has " +
                                                 std::to_string(header.size()));
        const std::string& resp = fields[response_idx];
        int y;
        if (resp == "0") y = 0;
        else if (resp == "1") y = 1;
        else {
            const auto v = parse_real(resp);
            if (!v || (*v != 0.0 && *v != 1.0))
                throw InputError("NonBinaryResponse", "response '" + resp + "' on line " +
                                                          std::to_string(line_no) + " is not 0 or 1");
            y = *v == 1.0 ? 1 : 0;
        }
        std::vector<double> row{1.0};
        for (std::size_t idx : cov_idx) {
            const auto v = parse_real(fields[idx]);
            if (!v)
                throw InputError("MalformedCsv", "value '" + fields[idx] + "' in column '" + header[idx] +
                                                     "' on line " + std::to_string(line_no) +
                                                     " is not a real number");
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
        t.push_back(y);
    }
    if (rows.empty()) throw InputError("EmptyFile", path.string() + " has no data rows");

    Matrix x(rows.size(), 1 + cov_idx.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j) x(i, j) = rows[i][j];
    if (x.rows() < x.cols() || matrix_rank(x) < x.cols())
        throw InputError("RankDeficient", "design matrix (intercept + covariates) is rank deficient");
    return Dataset(std::move(x), std::move(t));
}

// ---------------------------------------------------------------------------
// JSON output

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_into(const json& j, int indent, int depth, std::string& out) {
    const std::string pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
    const std::string close_pad = indent > 0 ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : json(format_double(v)).dump();
            break;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                break;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad + json(it.key()).dump() + (indent > 0 ? ": " : ":");
                dump_into(it.value(), indent, depth + 1, out);
            }
            out += nl + close_pad + "}";
            break;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                break;
            }
            // Arrays of scalars stay on one line.
            const bool flat = std::none_of(j.begin(), j.end(), [](const json& e) { return e.is_structured(); });
            out += "[";
            if (!flat) out += nl;
            bool first = true;
            for (const auto& e : j) {
                if (!first) {
                    out += flat ? ", " : ",";
                    if (!flat) out += nl;
                }
                first = false;
                if (!flat) out += pad;
                dump_into(e, indent, depth + 1, out);
            }
            if (!flat) out += nl + close_pad;
            out += "]";
            break;
        }
        default: out += j.dump(); break;
    }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
    std::string out;
    dump_into(j, indent, 0, out);
    out += "\n";
    return out;
}

// ---------------------------------------------------------------------------
// Schema validation

namespace {

bool has_type(const json& v, const std::string& type) {
    if (type == "object") return v.is_object();
    if (type == "array") return v.is_array();
    if (type == "string") return v.is_string();
    if (type == "boolean") return v.is_boolean();
    if (type == "null") return v.is_null();
    if (type == "integer") return v.is_number_integer();
    if (type == "number") return v.is_number();
    return false;
}

void validate_node(const json& v, const json& schema, const std::string& where,
                   std::vector<std::string>& errors) {
    if (schema.contains("type")) {
        const json& ty = schema["type"];
        bool ok = false;
        if (ty.is_string()) ok = has_type(v, ty.get<std::string>());
        else
            for (const auto& t : ty) ok = ok || has_type(v, t.get<std::string>());
        if (!ok) {
            errors.push_back(where + ": expected type " + ty.dump() + ", got " + v.type_name());
            return;
        }
    }
    if (schema.contains("const") && v != schema["const"])
        errors.push_back(where + ": expected constant " + schema["const"].dump());
    if (schema.contains("enum")) {
        const auto& options = schema["enum"];
        if (std::find(options.begin(), options.end(), v) == options.end())
            errors.push_back(where + ": value " + v.dump() + " not in " + options.dump());
    }
    if (schema.contains("minimum") && v.is_number() && v.get<double>() < schema["minimum"].get<double>())
        errors.push_back(where + ": below minimum " + schema["minimum"].dump());
    if (v.is_object()) {
        if (schema.contains("required"))
            for (const auto& key : schema["required"])
                if (!v.contains(key.get<std::string>()))
                    errors.push_back(where + ": missing required field " + key.dump());
        if (schema.contains("properties"))
            for (auto it = schema["properties"].begin(); it != schema["properties"].end(); ++it)
                if (v.contains(it.key())) validate_node(v[it.key()], it.value(), where + "." + it.key(), errors);
    }
    if (v.is_array() && schema.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i)
            validate_node(v[i], schema["items"], where + "[" + std::to_string(i) + "]", errors);
    }
}

}  // namespace

std::vector<std::string> validate_against_schema(const json& doc, const json& schema) {
    std::vector<std::string> errors;
    validate_node(doc, schema, "$", errors);
    return errors;
}

const json& report_schema() {
    static const json schema = json::parse(detail::kReportSchemaText);
    return schema;
}

// ---------------------------------------------------------------------------
// run

namespace {

json to_json(const Vector& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

json to_json(const SymmetricMatrix& m) {
    json a = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(m(i, j));
        a.push_back(row);
    }
    return a;
}

struct CsvTable {
    std::string header;
    std::vector<std::vector<std::string>> rows;

    std::string text() const {
        std::string out = header + "\n";
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ",";
                out += r[i];
            }
            out += "\n";
        }
        return out;
    }
};

const char* const kOutputFiles[] = {"report.json",       "polytope.csv",    "contour.csv",
                                    "suffstat_samples.csv", "mle_samples.csv", "edgeworth_grid.csv"};

void check_config(const RunConfig& c) {
    if (!(c.level > 0.0 && c.level < 1.0)) throw InputError("InvalidConfig", "level must lie in (0, 1)");
    if (!(c.marginal_factor >= 1.0)) throw InputError("InvalidConfig", "marginal factor must be >= 1");
    if (c.covariate_columns.size() != 1)
        throw InputError("UnsupportedDimension", "exactly one covariate column is supported, got " +
                                                     std::to_string(c.covariate_columns.size()));
    if (c.edgeworth_grid_resolution < 2) throw InputError("InvalidConfig", "edgeworth grid resolution must be >= 2");
    if (!(c.edgeworth_grid_half_width > 0.0))
        throw InputError("InvalidConfig", "edgeworth grid half-width must be positive");
    if (c.contour_points < 3) throw InputError("InvalidConfig", "contour needs at least 3 points");
}

}  // namespace

int run(const RunConfig& config, std::ostream& err) {
    std::map<std::string, std::string> files;
    json report;
    try {
        check_config(config);
        Dataset raw = parse_csv(config.input_path, config.response_column, config.covariate_columns);

        Vector offsets(raw.d(), 0.0);
        std::optional<Dataset> centered;
        if (config.center) {
            CenteredDataset c = center_covariates(raw);
            offsets = std::move(c.offsets);
            centered.emplace(std::move(c.data));
        }
        const Dataset& data = centered ? *centered : raw;

        DiagnosticOptions opts;
        opts.level = config.level;
        opts.marginal_factor = config.marginal_factor;
        const DiagnosticReport diag = boundary_diagnostic(data, opts);
        const bool separated = diag.status == DiagnosticStatus::Separated;

        report["schema_version"] = kReportSchemaVersion;
        report["input"] = {{"path", config.input_path.string()},
                           {"response_column", config.response_column},
                           {"covariate_columns", config.covariate_columns},
                           {"n", data.n()},
                           {"d", data.d()}};
        report["config"] = {{"center", config.center},
                            {"level", config.level},
                            {"marginal_factor", config.marginal_factor},
                            {"reps", config.reps},
                            {"seed", config.seed},
                            {"edgeworth_grid_resolution", config.edgeworth_grid_resolution},
                            {"edgeworth_grid_half_width", config.edgeworth_grid_half_width}};
        report["status"] = std::string(to_string(diag.status));
        report["verdict"] = separated ? std::string("SEPARATED") : std::string(to_string(diag.verdict));
        report["threshold"] = diag.threshold;
        report["level"] = diag.level;
        report["recession_direction"] = separated ? to_json(diag.recession) : json(nullptr);
        report["offsets"] = to_json(offsets);
        report["boundary_contact"] = diag.boundary_contact;

        if (separated) {
            report["beta_hat"] = nullptr;
            report["beta_hat_uncentered"] = nullptr;
            report["mu_hat"] = nullptr;
            report["sigma_hat"] = nullptr;
            report["dist_sq"] = "separated";
            report["closest_face"] = nullptr;
        } else {
            Vector uncentered = diag.beta_hat;
            for (std::size_t j = 0; j < offsets.size(); ++j) uncentered[0] -= diag.beta_hat[j] * offsets[j];
            report["beta_hat"] = to_json(diag.beta_hat);
            report["beta_hat_uncentered"] = to_json(uncentered);
            report["mu_hat"] = to_json(diag.mu_hat);
            report["sigma_hat"] = to_json(diag.sigma_hat);
            report["dist_sq"] = diag.dist_sq;
            report["closest_face"] = {{"edge", diag.closest_face.edge},
                                      {"vertex_a", to_json(diag.closest_face.vertex_a)},
                                      {"vertex_b", to_json(diag.closest_face.vertex_b)},
                                      {"closest", to_json(diag.closest_face.closest)}};
        }

        if (diag.polytope) {
            CsvTable poly{"x,y", {}};
            json verts = json::array();
            for (const auto& v : diag.polytope->vertices) {
                poly.rows.push_back({format_double(v[0]), format_double(v[1])});
                verts.push_back({v[0], v[1]});
            }
            const auto& first = diag.polytope->vertices.front();
            poly.rows.push_back({format_double(first[0]), format_double(first[1])});
            files["polytope.csv"] = poly.text();
            report["polytope"] = {{"vertex_count", diag.polytope->size()},
                                  {"file", "polytope.csv"},
                                  {"vertices", verts}};
        } else {
            report["polytope"] = nullptr;
        }

        report["sampling"] = nullptr;
        if (!separated) {
            const Point2 mu{diag.mu_hat[0], diag.mu_hat[1]};
            const SymmetricMatrix metric = inverse_spd(diag.sigma_hat);
            CsvTable contour{"x,y", {}};
            auto pts = contour_points(mu, metric, diag.threshold, config.contour_points);
            pts.push_back(pts.front());
            for (const auto& p : pts) contour.rows.push_back({format_double(p[0]), format_double(p[1])});
            files["contour.csv"] = contour.text();

            const ModelMoments moments = model_moments(data.x(), diag.beta_hat);
            CsvTable grid{"x,y,density", {}};
            const std::size_t res = config.edgeworth_grid_resolution;
            const double sx = std::sqrt(moments.sigma(0, 0));
            const double sy = std::sqrt(moments.sigma(1, 1));
            const double hw = config.edgeworth_grid_half_width;
            for (std::size_t i = 0; i < res; ++i) {
                const double gx = mu[0] - hw * sx + 2.0 * hw * sx * static_cast<double>(i) / (res - 1);
                for (std::size_t j = 0; j < res; ++j) {
                    const double gy = mu[1] - hw * sy + 2.0 * hw * sy * static_cast<double>(j) / (res - 1);
                    const Vector z{gx, gy};
                    grid.rows.push_back(
                        {format_double(gx), format_double(gy), format_double(edgeworth_density(z, moments))});
                }
            }
            files["edgeworth_grid.csv"] = grid.text();

            if (config.reps > 0) {
                const RngStream rng(config.seed, 0);
                const SuffStatSample ss = sample_suffstats(data.x(), diag.beta_hat, config.reps, rng, config.threads);
                const MleSample ms = sample_mles(data.x(), diag.beta_hat, config.reps, rng.split(0xB17A), config.threads);

                CsvTable sst{"x,y,on_boundary", {}};
                std::size_t on_boundary = 0;
                for (std::size_t r = 0; r < ss.draws.size(); ++r) {
                    sst.rows.push_back({format_double(ss.draws[r][0]), format_double(ss.draws[r][1]),
                                        ss.on_boundary[r] ? "1" : "0"});
                    on_boundary += ss.on_boundary[r];
                }
                files["suffstat_samples.csv"] = sst.text();

                CsvTable mst{"alpha,beta", {}};
                Vector slopes;
                for (const auto& b : ms.interior_estimates) {
                    mst.rows.push_back({format_double(b[0]), format_double(b[1])});
                    slopes.push_back(b[1]);
                }
                files["mle_samples.csv"] = mst.text();

                json skew = nullptr;
                try {
                    skew = skewness(slopes);
                } catch (const DegenerateSample&) {
                }
                report["sampling"] = {
                    {"reps", config.reps},
                    {"seed", config.seed},
                    {"boundary_count", ms.boundary_count},
                    {"nonconverged_count", ms.nonconverged_count},
                    {"interior_count", ms.interior_estimates.size()},
                    {"boundary_hit_rate", static_cast<double>(ms.boundary_count) / static_cast<double>(ms.total)},
                    {"suffstat_boundary_fraction",
                     static_cast<double>(on_boundary) / static_cast<double>(ss.draws.size())},
                    {"beta_skewness", skew}};
            }
        }
    } catch (const InputError& e) {
        err << "error: " << e.code() << ": " << e.what() << "\n";
        return 2;
    } catch (const DatasetError& e) {
        err << "error: InvalidDataset: " << e.what() << "\n";
        return 2;
    } catch (const NoConvergence& e) {
        err << "error: NoConvergence: " << e.what() << "\n";
        return 3;
    } catch (const NotPositiveDefinite& e) {
        err << "error: NotPositiveDefinite: " << e.what() << "\n";
        return 3;
    }

    files["report.json"] = dump_json(report);

    try {
        std::filesystem::create_directories(config.output_dir);
        for (const char* name : kOutputFiles) std::filesystem::remove(config.output_dir / name);
        for (const auto& [name, text] : files) {
            std::ofstream out(config.output_dir / name, std::ios::binary);
            out << text;
            if (!out) throw std::runtime_error("failed writing " + (config.output_dir / name).string());
        }
    } catch (const std::exception& e) {
        err << "error: OutputError: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace lrgeo
