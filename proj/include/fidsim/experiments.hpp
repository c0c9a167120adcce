#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fidsim/susceptibility_estimator.hpp"

namespace fidsim {

enum class SweepMode { exact_only, quantum, both, ff };

SweepMode sweep_mode_from_string(const std::string& s);
std::string to_string(SweepMode m);

struct SweepConfig {
    ModelSpec model;
    std::vector<double> lambda_grid;
    double eps = 0.05;
    std::vector<std::uint64_t> seeds = {0};
    SweepMode mode = SweepMode::exact_only;
    std::string out_csv;   // empty: no file
    std::string out_svg;   // empty: no plot
    int n_runs = 1;        // median amplification width for quantum rows
    bool deterministic = false;  // suppress the timestamp comment line
};

struct SweepRow {
    double lambda = 0.0;
    double chi_f_exact = 0.0;
    double chi_f_hat = 0.0;
    double abs_err = 0.0;
    long long queries_total = 0;
    std::uint64_t seed = 0;
    bool has_exact = false;
    bool has_hat = false;
    std::string status = "ok";  // "ok" or the error marker
};

/// Parses the documented config key set; unknown keys are errors.
SweepConfig parse_sweep_config(const std::string& json_text);

/// One row per (lambda, seed); failed points carry an error marker and the
/// sweep continues. Writes CSV/SVG when paths are set.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

enum class ScalingKind { heisenberg, gap_general, gap_ff, ff_vs_general };
ScalingKind scaling_kind_from_string(const std::string& s);
std::string to_string(ScalingKind k);

struct ScalingPoint {
    double control = 0.0;  // 1/eps, 1/gap, or r
    double value = 0.0;    // queries or degree
    std::string series;
};

struct ScalingResult {
    std::vector<ScalingPoint> points;
    // series name -> fitted log-log slope
    std::vector<std::pair<std::string, double>> slopes;
};

/// heisenberg: Grover queries vs 1/eps on cfg.model. gap_general /
/// gap_ff: minimal inverse degree vs 1/gap. ff_vs_general: both degree
/// series vs r on the FF chain family. Writes CSV with a slope footer when
/// cfg.out_csv is set.
ScalingResult run_scaling_study(ScalingKind kind, const SweepConfig& cfg);

struct PeakResult {
    double lambda_c = 0.0;
    double curvature = 0.0;
    bool boundary = false;  // maximum sits on the grid edge; vertex not usable
};

/// Parabola through the three points around the grid maximum of chi_F.
PeakResult detect_peak(const std::vector<SweepRow>& rows);

/// Least-squares slope of log(y) vs log(x).
double log_log_slope(const std::vector<double>& x, const std::vector<double>& y);

// --- artifact writers (deterministic byte output) ---

std::string format_csv_value(double v);  // 17 significant digits
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows,
                     bool deterministic);
void write_scaling_csv(const std::string& path, const ScalingResult& result,
                       bool deterministic);
/// Static polyline plot; one series per distinct label.
void write_svg_lines(const std::string& path, const std::vector<double>& xs,
                     const std::vector<std::vector<double>>& series,
                     const std::vector<std::string>& labels, const std::string& title);

}  // namespace fidsim
