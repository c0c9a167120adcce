// fidsim command-line driver: sweeps, scaling studies, single estimates,
// polynomial checks, and encoding verification.
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fidsim/experiments.hpp"

namespace {

namespace fs = std::filesystem;
using namespace fidsim;

std::string default_out_dir() {
    if (const char* env = std::getenv("FIDSIM_OUT_DIR")) return env;
    return ".";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string resolve_out(const std::string& dir, const std::string& name) {
    fs::create_directories(dir);
    return (fs::path(dir) / name).string();
}

struct CommonFlags {
    std::string config;
    std::string out_dir = default_out_dir();
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool deterministic = false;
    std::string mode;
    double eps = 0.0;
    bool eps_set = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "JSON config file");
    cmd->add_option("--out", f.out_dir, "output directory (default: $FIDSIM_OUT_DIR or .)");
    cmd->add_option("--seed", f.seed, "seed override")->each([&](const std::string&) {
        f.seed_set = true;
    });
    cmd->add_flag("--deterministic", f.deterministic, "suppress timestamp header lines");
    cmd->add_option("--mode", f.mode, "mode override (exact_only|quantum|both|ff)");
    cmd->add_option("--eps", f.eps, "target accuracy override")->each([&](const std::string&) {
        f.eps_set = true;
    });
}

SweepConfig load_config(const CommonFlags& f) {
    SweepConfig cfg;
    if (!f.config.empty()) {
        cfg = parse_sweep_config(read_file(f.config));
    } else {
        cfg.model.family = ModelFamily::tfim;
        cfg.model.n_qubits = 2;
        cfg.model.lambda = 0.5;
    }
    if (f.seed_set) cfg.seeds = {f.seed};
    if (f.deterministic) cfg.deterministic = true;
    if (!f.mode.empty()) cfg.mode = sweep_mode_from_string(f.mode);
    if (f.eps_set) cfg.eps = f.eps;
    return cfg;
}

int cmd_sweep(const CommonFlags& f) {
    SweepConfig cfg = load_config(f);
    if (cfg.out_csv.empty()) cfg.out_csv = "sweep.csv";
    cfg.out_csv = resolve_out(f.out_dir, cfg.out_csv);
    if (!cfg.out_svg.empty()) cfg.out_svg = resolve_out(f.out_dir, cfg.out_svg);
    std::vector<SweepRow> rows = run_sweep(cfg);
    std::printf("wrote %zu rows to %s\n", rows.size(), cfg.out_csv.c_str());
    if (rows.size() >= 5) {
        try {
            PeakResult peak = detect_peak(rows);
            if (peak.boundary) {
                std::printf("peak: at grid boundary (lambda = %.6g), vertex not usable\n",
                            peak.lambda_c);
            } else {
                std::printf("peak: lambda_c = %.6g (curvature %.6g)\n", peak.lambda_c,
                            peak.curvature);
            }
        } catch (const ValidationError&) {
            // not enough clean points for a peak; the CSV still stands
        }
    }
    return 0;
}

int cmd_scaling(const std::string& kind_str, const CommonFlags& f) {
    SweepConfig cfg = load_config(f);
    ScalingKind kind = scaling_kind_from_string(kind_str);
    cfg.out_csv = resolve_out(f.out_dir, "scaling_" + kind_str + ".csv");
    ScalingResult res = run_scaling_study(kind, cfg);
    for (const auto& [name, slope] : res.slopes) {
        std::printf("%s: slope %.4f\n", name.c_str(), slope);
    }
    std::printf("wrote %s\n", cfg.out_csv.c_str());
    return 0;
}

int cmd_estimate(const CommonFlags& f, int n_runs, bool write_json) {
    SweepConfig cfg = load_config(f);
    const double eps = f.eps_set ? f.eps : cfg.eps;
    const std::uint64_t seed = f.seed_set ? f.seed : cfg.seeds.front();
    EstimateOptions opt;
    opt.n_runs = n_runs;

    EstimationReport rep;
    if (cfg.mode == SweepMode::ff) {
        FFModel ff = build_ff_model(cfg.model.n_qubits, "chain");
        PauliSum driving = cfg.model.driving.terms.empty() ? build_model(cfg.model).second
                                                           : cfg.model.driving;
        rep = estimate_chi_f_ff(ff, driving, eps, seed, opt);
    } else if (cfg.mode == SweepMode::exact_only) {
        auto [hp, hip] = build_model(cfg.model);
        const double chi = chi_f_exact_sum(pauli_to_dense(hp), pauli_to_dense(hip));
        std::printf("{\n  \"chi_f_exact\": %.17g\n}\n", chi);
        return 0;
    } else {
        rep = estimate_chi_f(cfg.model, eps, seed, opt);
    }
    const std::string json = rep.to_json();
    std::printf("%s\n", json.c_str());
    if (write_json) {
        std::ofstream out(resolve_out(f.out_dir, "estimate.json"), std::ios::binary);
        out << json << '\n';
    }
    return 0;
}

int cmd_poly_check(double delta, double eps_default, bool ff, int r, double gap,
                   const CommonFlags& f) {
    const double eps = f.eps_set ? f.eps : eps_default;
    ChebyshevPolynomial poly;
    double sup = 0.0;
    if (ff) {
        FFInversePoly fit = ff_inverse_poly(r, gap, eps);
        poly = fit.poly;
        ApproxTarget t;
        t.kind = ApproxTarget::Kind::ff_inverse;
        t.r = r;
        t.gap = gap;
        t.prefactor = 1.0 / fit.k_poly;
        sup = sup_error(poly, t, 10000);
        std::printf("ff inverse: r=%d gap=%.6g degree=%d k_norm=%.6g\n", r, gap, poly.degree,
                    fit.k_norm);
        std::printf("sup_error=%.6g (tolerance %.6g), max|p|=%.6g, p(1)=%.3g\n", sup,
                    eps / fit.k_norm, max_abs_on_interval(poly), eval_scalar(poly, 1.0));
    } else {
        poly = inverse_poly(delta, eps);
        ApproxTarget t;
        t.kind = ApproxTarget::Kind::scaled_inverse;
        t.delta = delta;
        sup = sup_error(poly, t, 10000);
        std::printf("scaled inverse: delta=%.6g degree=%d parity=%s\n", delta, poly.degree,
                    to_string(poly.parity).c_str());
        std::printf("sup_error=%.6g (tolerance %.6g), max|p|=%.6g, p(0)=%.3g\n", sup, eps,
                    max_abs_on_interval(poly), eval_scalar(poly, 0.0));
    }
    std::ofstream out(resolve_out(f.out_dir, "poly.json"), std::ios::binary);
    out << poly.to_json() << '\n';
    return 0;
}

int cmd_verify_encodings(const CommonFlags& f) {
    int failures = 0;
    auto check = [&](const std::string& name, double discrepancy, double allowed) {
        const bool ok = discrepancy <= allowed + 1e-9;
        std::printf("%-40s %-4s discrepancy=%.3g allowed=%.3g\n", name.c_str(),
                    ok ? "ok" : "FAIL", discrepancy, allowed);
        if (!ok) ++failures;
    };

    ModelSpec ms = load_config(f).model;
    auto [hp, hip] = build_model(ms);
    const Matrix h = pauli_to_dense(hp);
    const Matrix h_i = pauli_to_dense(hip);
    GroundData gd = ground_data(h);
    const Matrix a =
        h - gd.spectral.e0 * Matrix::Identity(h.rows(), h.cols());
    const double alpha_h = operator_norm(a);
    const double alpha_i = operator_norm(h_i);

    BlockEncoding u_h = encode_matrix(a, alpha_h, "U_H");
    check("U_H (shifted Hamiltonian)", verify(u_h, a), u_h.eps);
    BlockEncoding u_i = encode_matrix(h_i, alpha_i, "U_I");
    check("U_I (driving term)", verify(u_i, h_i), u_i.eps);
    BlockEncoding prod = product(u_h, u_i);
    check("product U_H * U_I", verify(prod, a * h_i), prod.eps);

    const double eps = 1e-3;
    BlockEncoding pinv = pseudoinverse_encoding(u_h, gd.spectral.gap, eps);
    check("pseudoinverse of (H - E0)",
          verify(pinv, pseudoinverse(a, 0.5 * gd.spectral.gap)), pinv.eps);
    BlockEncoding g = build_g_encoding(u_h, u_i, gd.spectral.gap, eps);
    check("G = (H - E0)^+ H_I",
          verify(g, pseudoinverse(a, 0.5 * gd.spectral.gap) * h_i), g.eps);

    FFModel ff = build_ff_model(2, "chain");
    FFSelectPrepare sp = ff_select_prepare(ff);
    Matrix n_mat = sp.be.alpha * sp.tall_block();
    check("FF SELECT/PREPARE isometry", operator_norm(n_mat.adjoint() * n_mat - ff.h_f), 0.0);
    BlockEncoding shifted = ff_shifted_encoding(sp);
    check("FF shifted encoding",
          verify(shifted, Matrix::Identity(4, 4) - (2.0 / sp.r_padded) * ff.h_f), shifted.eps);
    BlockEncoding ffpinv = ff_pseudoinverse_encoding(shifted, sp.r_padded, 1.0, eps);
    check("FF pseudoinverse", verify(ffpinv, pseudoinverse(ff.h_f, 0.5)), ffpinv.eps);

    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fidelity-susceptibility simulator"};
    app.require_subcommand(1);

    CommonFlags sweep_flags, scaling_flags, est_flags, poly_flags, verify_flags;
    std::string scaling_kind = "heisenberg";
    int est_runs = 1;
    bool est_write = false;
    double poly_delta = 0.25, poly_eps = 1e-3, poly_gap = 1.0;
    int poly_r = 2;
    bool poly_ff = false;

    CLI::App* sweep = app.add_subcommand("sweep", "chi_F over a lambda grid");
    add_common(sweep, sweep_flags);

    CLI::App* scaling = app.add_subcommand("scaling", "query/degree scaling studies");
    add_common(scaling, scaling_flags);
    scaling->add_option("--kind", scaling_kind,
                        "heisenberg|gap_general|gap_ff|ff_vs_general");

    CLI::App* estimate = app.add_subcommand("estimate", "single pipeline estimation");
    add_common(estimate, est_flags);
    estimate->add_option("--runs", est_runs, "median-amplification width (odd)");
    estimate->add_flag("--write", est_write, "also write estimate.json to the output dir");

    CLI::App* poly = app.add_subcommand("poly-check", "build and audit an inverse polynomial");
    add_common(poly, poly_flags);
    poly->add_option("--delta", poly_delta, "exclusion parameter (general inverse)");
    poly->add_option("--poly-eps", poly_eps, "target sup error");
    poly->add_flag("--ff", poly_ff, "edge-accelerated (frustration-free) variant");
    poly->add_option("--r", poly_r, "ff: number of projectors");
    poly->add_option("--gap", poly_gap, "ff: spectral gap");

    CLI::App* verify_cmd = app.add_subcommand("verify-encodings",
                                              "verify the encoding corpus against dense targets");
    add_common(verify_cmd, verify_flags);

    try {
        app.parse(argc, argv);
        if (sweep->parsed()) return cmd_sweep(sweep_flags);
        if (scaling->parsed()) return cmd_scaling(scaling_kind, scaling_flags);
        if (estimate->parsed()) return cmd_estimate(est_flags, est_runs, est_write);
        if (poly->parsed()) {
            return cmd_poly_check(poly_delta, poly_eps, poly_ff, poly_r, poly_gap, poly_flags);
        }
        if (verify_cmd->parsed()) return cmd_verify_encodings(verify_flags);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const AssumptionViolation& e) {
        std::cerr << "assumption violation: " << e.what() << "\n";
        return 3;
    } catch (const ResourceCapError& e) {
        std::cerr << "resource cap: " << e.what() << "\n";
        return 4;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
