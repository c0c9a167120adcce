#include "fidsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

namespace fidsim {

namespace {

void require_known_keys(const nlohmann::json& obj, const std::vector<std::string>& known,
                        const char* where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
            throw ConfigError(std::string("unknown key '") + it.key() + "' in " + where);
        }
    }
}

PauliSum parse_terms(const nlohmann::json& arr, int n_qubits, const char* where) {
    if (!arr.is_array()) throw ConfigError(std::string(where) + ": expected an array of terms");
    PauliSum p(n_qubits, {});
    for (const auto& t : arr) {
        if (!t.is_array() || t.size() != 2 || !t[0].is_number() || !t[1].is_string()) {
            throw ConfigError(std::string(where) + ": each term must be [coefficient, word]");
        }
        p.add(t[0].get<double>(), t[1].get<std::string>());
    }
    return p;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    return out;
}

void write_header_comment(std::ofstream& out, bool deterministic) {
    if (!deterministic) out << "# generated-at " << std::time(nullptr) << "\n";
}

}  // namespace

SweepMode sweep_mode_from_string(const std::string& s) {
    if (s == "exact_only") return SweepMode::exact_only;
    if (s == "quantum") return SweepMode::quantum;
    if (s == "both") return SweepMode::both;
    if (s == "ff") return SweepMode::ff;
    throw ConfigError("unknown sweep mode '" + s + "'");
}

std::string to_string(SweepMode m) {
    switch (m) {
        case SweepMode::exact_only: return "exact_only";
        case SweepMode::quantum: return "quantum";
        case SweepMode::both: return "both";
        case SweepMode::ff: return "ff";
    }
    return "?";
}

ScalingKind scaling_kind_from_string(const std::string& s) {
    if (s == "heisenberg") return ScalingKind::heisenberg;
    if (s == "gap_general") return ScalingKind::gap_general;
    if (s == "gap_ff") return ScalingKind::gap_ff;
    if (s == "ff_vs_general") return ScalingKind::ff_vs_general;
    throw ConfigError("unknown scaling kind '" + s + "'");
}

std::string to_string(ScalingKind k) {
    switch (k) {
        case ScalingKind::heisenberg: return "heisenberg";
        case ScalingKind::gap_general: return "gap_general";
        case ScalingKind::gap_ff: return "gap_ff";
        case ScalingKind::ff_vs_general: return "ff_vs_general";
    }
    return "?";
}

SweepConfig parse_sweep_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config: top level must be an object");
    require_known_keys(j,
                       {"model", "lambda_grid", "grid", "eps", "seeds", "mode", "out_csv",
                        "out_svg", "n_runs", "deterministic"},
                       "config");

    SweepConfig cfg;
    if (!j.contains("model")) throw ConfigError("config: missing 'model'");
    const auto& jm = j.at("model");
    require_known_keys(jm, {"family", "n_qubits", "lambda", "driving", "h", "h_i"},
                       "config.model");
    cfg.model.family = model_family_from_string(jm.at("family").get<std::string>());
    cfg.model.n_qubits = jm.at("n_qubits").get<int>();
    if (jm.contains("lambda")) cfg.model.lambda = jm.at("lambda").get<double>();
    if (jm.contains("driving")) {
        cfg.model.driving = parse_terms(jm.at("driving"), cfg.model.n_qubits, "config.model.driving");
    }
    if (jm.contains("h")) {
        cfg.model.explicit_h = parse_terms(jm.at("h"), cfg.model.n_qubits, "config.model.h");
    }
    if (jm.contains("h_i")) {
        cfg.model.explicit_h_i = parse_terms(jm.at("h_i"), cfg.model.n_qubits, "config.model.h_i");
    }

    if (j.contains("lambda_grid") && j.contains("grid")) {
        throw ConfigError("config: give either 'lambda_grid' or 'grid', not both");
    }
    if (j.contains("lambda_grid")) {
        cfg.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    } else if (j.contains("grid")) {
        const auto& g = j.at("grid");
        require_known_keys(g, {"from", "to", "step"}, "config.grid");
        const double from = g.at("from").get<double>();
        const double to = g.at("to").get<double>();
        const double step = g.at("step").get<double>();
        if (step <= 0.0 || to < from) throw ConfigError("config.grid: need step > 0, to >= from");
        for (double x = from; x <= to + 1e-12; x += step) cfg.lambda_grid.push_back(x);
    } else {
        cfg.lambda_grid = {cfg.model.lambda};
    }
    if (cfg.lambda_grid.empty()) throw ConfigError("config: empty lambda grid");

    if (j.contains("eps")) cfg.eps = j.at("eps").get<double>();
    if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    if (cfg.seeds.empty()) throw ConfigError("config: empty seed list");
    if (j.contains("mode")) cfg.mode = sweep_mode_from_string(j.at("mode").get<std::string>());
    if (j.contains("out_csv")) cfg.out_csv = j.at("out_csv").get<std::string>();
    if (j.contains("out_svg")) cfg.out_svg = j.at("out_svg").get<std::string>();
    if (j.contains("n_runs")) cfg.n_runs = j.at("n_runs").get<int>();
    if (j.contains("deterministic")) cfg.deterministic = j.at("deterministic").get<bool>();
    return cfg;
}

std::string format_csv_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
    std::vector<SweepRow> rows;
    const bool want_exact = cfg.mode != SweepMode::quantum;
    const bool want_quantum = cfg.mode != SweepMode::exact_only;

    for (double lambda : cfg.lambda_grid) {
        ModelSpec point = cfg.model;
        point.lambda = lambda;

        double exact = 0.0;
        bool have_exact = false;
        std::string status = "ok";
        std::optional<ChiFPipeline> pipe;
        try {
            if (cfg.mode == SweepMode::ff) {
                FFModel ff = build_ff_model(point.n_qubits, "chain");
                PauliSum driving = point.driving.terms.empty()
                                       ? build_model(point).second
                                       : point.driving;
                if (want_exact) {
                    exact = chi_f_exact_sum(ff.h_f, pauli_to_dense(driving));
                    have_exact = true;
                }
                EstimateOptions opt;
                opt.n_runs = cfg.n_runs;
                pipe.emplace(ff, driving, cfg.eps, opt);
            } else {
                if (want_exact) {
                    auto [hp, hip] = build_model(point);
                    exact = chi_f_exact_sum(pauli_to_dense(hp), pauli_to_dense(hip));
                    have_exact = true;
                }
                if (want_quantum) {
                    EstimateOptions opt;
                    opt.n_runs = cfg.n_runs;
                    opt.with_oracles = false;
                    pipe.emplace(point, cfg.eps, opt);
                }
            }
        } catch (const Error& e) {
            status = std::string("error: ") + e.what();
        }

        for (std::uint64_t seed : cfg.seeds) {
            SweepRow row;
            row.lambda = lambda;
            row.seed = seed;
            row.status = status;
            row.chi_f_exact = have_exact ? exact : std::nan("");
            row.has_exact = have_exact;
            row.chi_f_hat = std::nan("");
            if (status == "ok" && want_quantum && pipe) {
                EstimationReport rep = pipe->run(seed);
                row.chi_f_hat = rep.chi_f_hat;
                row.has_hat = true;
                for (const auto& [tag, q] : rep.queries) row.queries_total += q;
            }
            row.abs_err = (row.has_exact && row.has_hat)
                              ? std::abs(row.chi_f_hat - row.chi_f_exact)
                              : std::nan("");
            rows.push_back(std::move(row));
            if (cfg.mode == SweepMode::exact_only) break;  // seeds play no role
        }
    }

    if (!cfg.out_csv.empty()) write_sweep_csv(cfg.out_csv, rows, cfg.deterministic);
    if (!cfg.out_svg.empty()) {
        std::vector<double> xs;
        std::vector<double> exact_line;
        std::vector<double> hat_line;
        std::map<double, std::pair<double, int>> hat_acc;
        for (const SweepRow& r : rows) {
            if (r.has_hat) {
                auto& acc = hat_acc[r.lambda];
                acc.first += r.chi_f_hat;
                acc.second += 1;
            }
        }
        for (const SweepRow& r : rows) {
            if (!xs.empty() && xs.back() == r.lambda) continue;
            xs.push_back(r.lambda);
            exact_line.push_back(r.has_exact ? r.chi_f_exact : std::nan(""));
            const auto it = hat_acc.find(r.lambda);
            hat_line.push_back(it != hat_acc.end() ? it->second.first / it->second.second
                                                   : std::nan(""));
        }
        std::vector<std::vector<double>> series;
        std::vector<std::string> labels;
        if (want_exact) {
            series.push_back(exact_line);
            labels.push_back("chi_f_exact");
        }
        if (want_quantum) {
            series.push_back(hat_line);
            labels.push_back("chi_f_hat");
        }
        write_svg_lines(cfg.out_svg, xs, series, labels, "chi_F vs lambda");
    }
    return rows;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw ValidationError("log_log_slope: need at least two matched points");
    }
    const std::size_t n = x.size();
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) throw DomainError("log_log_slope: nonpositive data");
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-15) throw DomainError("log_log_slope: degenerate abscissae");
    return (n * sxy - sx * sy) / denom;
}

ScalingResult run_scaling_study(ScalingKind kind, const SweepConfig& cfg) {
    ScalingResult res;
    auto push = [&](double control, double value, const std::string& series) {
        res.points.push_back({control, value, series});
    };
    const double eps = 1e-3;
    switch (kind) {
        case ScalingKind::heisenberg: {
            for (double e : {0.1, 0.05, 0.025, 0.0125}) {
                EstimateOptions opt;
                opt.with_oracles = false;
                ChiFPipeline pipe(cfg.model, e, opt);
                push(1.0 / e, static_cast<double>(pipe.k_grid() - 1), "grover_queries");
            }
            break;
        }
        case ScalingKind::gap_general: {
            for (double gap : {0.5, 0.25, 0.125, 0.0625}) {
                push(1.0 / gap, inverse_poly(gap, eps).degree, "inverse_degree");
            }
            break;
        }
        case ScalingKind::gap_ff: {
            for (double gap : {0.5, 0.25, 0.125, 0.0625}) {
                push(1.0 / gap, ff_inverse_poly(2, gap, eps).poly.degree, "ff_degree");
            }
            break;
        }
        case ScalingKind::ff_vs_general: {
            for (int r : {2, 4, 8, 16}) {
                push(r, ff_inverse_poly(r, 1.0, eps).poly.degree, "ff_degree");
                push(r, inverse_poly(1.0 / r, eps).degree, "general_degree");
            }
            break;
        }
    }

    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_series;
    for (const ScalingPoint& p : res.points) {
        by_series[p.series].first.push_back(p.control);
        by_series[p.series].second.push_back(p.value);
    }
    for (const auto& [name, data] : by_series) {
        if (data.first.size() < 3) throw ValidationError("scaling study: fewer than 3 points");
        res.slopes.emplace_back(name, log_log_slope(data.first, data.second));
    }
    if (!cfg.out_csv.empty()) write_scaling_csv(cfg.out_csv, res, cfg.deterministic);
    return res;
}

PeakResult detect_peak(const std::vector<SweepRow>& rows) {
    // Collapse to one (lambda, chi) series, exact values preferred.
    std::map<double, std::pair<double, int>> acc;
    for (const SweepRow& r : rows) {
        if (r.status != "ok") continue;
        const double v = r.has_exact ? r.chi_f_exact : r.chi_f_hat;
        if (!std::isfinite(v)) continue;
        auto& a = acc[r.lambda];
        a.first += v;
        a.second += 1;
        if (r.has_exact) a.second = -1;  // sentinel: exact value, no averaging
        if (a.second == -1) a.first = v;
    }
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& [lam, a] : acc) {
        xs.push_back(lam);
        ys.push_back(a.second == -1 ? a.first : a.first / a.second);
    }
    if (xs.size() < 5) throw ValidationError("detect_peak: need at least 5 grid points");
    const std::size_t imax =
        static_cast<std::size_t>(std::max_element(ys.begin(), ys.end()) - ys.begin());
    PeakResult out;
    if (imax == 0 || imax + 1 == xs.size()) {
        out.lambda_c = xs[imax];
        out.boundary = true;
        return out;
    }
    const double x1 = xs[imax - 1], x2 = xs[imax], x3 = xs[imax + 1];
    const double y1 = ys[imax - 1], y2 = ys[imax], y3 = ys[imax + 1];
    const double denom = (x1 - x2) * (x1 - x3) * (x2 - x3);
    const double a = (x3 * (y2 - y1) + x2 * (y1 - y3) + x1 * (y3 - y2)) / denom;
    const double b = (x3 * x3 * (y1 - y2) + x2 * x2 * (y3 - y1) + x1 * x1 * (y2 - y3)) / denom;
    out.curvature = 2.0 * a;
    out.lambda_c = std::abs(a) > 0.0 ? -b / (2.0 * a) : x2;
    return out;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     bool deterministic) {
    std::ofstream out = open_out(path);
    write_header_comment(out, deterministic);
    out << "lambda,chi_f_exact,chi_f_hat,abs_err,queries_total,seed,status\n";
    for (const SweepRow& r : rows) {
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        out << format_csv_value(r.lambda) << ',' << format_csv_value(r.chi_f_exact) << ','
            << format_csv_value(r.chi_f_hat) << ',' << format_csv_value(r.abs_err) << ','
            << r.queries_total << ',' << r.seed << ',' << status << '\n';
    }
}

void write_scaling_csv(const std::string& path, const ScalingResult& result,
                       bool deterministic) {
    std::ofstream out = open_out(path);
    write_header_comment(out, deterministic);
    out << "control,value,series\n";
    for (const ScalingPoint& p : result.points) {
        out << format_csv_value(p.control) << ',' << format_csv_value(p.value) << ','
            << p.series << '\n';
    }
    for (const auto& [name, slope] : result.slopes) {
        out << "# slope " << name << ' ' << format_csv_value(slope) << '\n';
    }
}

void write_svg_lines(const std::string& path, const std::vector<double>& xs,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, const std::string& title) {
    if (series.size() != labels.size()) throw ShapeError("write_svg_lines: label count mismatch");
    const int width = 640, height = 480, margin = 60;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (const auto& s : series) {
        for (double y : s) {
            if (!std::isfinite(y)) continue;
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    auto px = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (width - 2 * margin); };
    auto py = [&](double y) {
        return height - margin - (y - ymin) / (ymax - ymin) * (height - 2 * margin);
    };
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

    std::ofstream out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "  <rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n"
        << "  <text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << title << "</text>\n"
        << "  <line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\""
        << width - margin << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin
        << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"" << margin << "\" y=\"" << height - margin + 20
        << "\" font-size=\"12\">" << format_csv_value(xmin) << "</text>\n"
        << "  <text x=\"" << width - margin << "\" y=\"" << height - margin + 20
        << "\" text-anchor=\"end\" font-size=\"12\">" << format_csv_value(xmax) << "</text>\n"
        << "  <text x=\"" << margin - 6 << "\" y=\"" << height - margin
        << "\" text-anchor=\"end\" font-size=\"12\">" << format_csv_value(ymin) << "</text>\n"
        << "  <text x=\"" << margin - 6 << "\" y=\"" << margin
        << "\" text-anchor=\"end\" font-size=\"12\">" << format_csv_value(ymax) << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        std::ostringstream pts;
        for (std::size_t i = 0; i < xs.size() && i < series[s].size(); ++i) {
            if (!std::isfinite(series[s][i])) continue;
            pts << px(xs[i]) << ',' << py(series[s][i]) << ' ';
        }
        out << "  <polyline fill=\"none\" stroke=\"" << colors[s % 4]
            << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
        out << "  <text x=\"" << width - margin - 4 << "\" y=\"" << margin + 16 * (s + 1)
            << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << colors[s % 4] << "\">"
            << labels[s] << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace fidsim
