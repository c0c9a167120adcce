#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "fidsim/amplitude_estimation.hpp"
#include "fidsim/hamiltonian_models.hpp"
#include "fidsim/qsvt_engine.hpp"

namespace fidsim {

/// One pipeline estimation outcome with its full audit trail.
struct EstimationReport {
    double chi_f_hat = 0.0;
    double eps_target = 0.0;
    double alpha_q = 0.0;
    double p_hat = 0.0;
    std::map<std::string, long long> queries;  // per primitive tag, incl. U_Psi
    PolyBackend backend = PolyBackend::spectral;
    bool ff_mode = false;
    std::uint64_t seed = 0;
    std::map<std::string, double> oracle_values;  // eq3, eq5, eq2_fd when available

    // error-budget and scaling audit
    double eps1 = 0.0;          // operator-error budget of the G encoding
    double eps2 = 0.0;          // amplitude-estimation budget
    long long k_grid = 0;       // phase-grid size K
    long long grover_queries = 0;
    int inversion_degree = 0;
    int n_medians = 1;

    std::string to_json() const;
};

/// Tuning knobs shared by the estimation entry points.
struct EstimateOptions {
    int n_runs = 1;             // odd; >1 enables median amplification
    PolyBackend backend = PolyBackend::spectral;
    double e0_shift = 0.0;      // deliberate ground-energy error, sensitivity studies
    long long max_k = 1LL << 28;
    bool with_oracles = true;   // skip the exact cross-checks when false
};

/// (alpha_Q, m1+m2+1, eps)-encoding of G = (H-E0)^+ H_I with
/// alpha_Q = 4 alpha_I / (3 gap); the inversion is run at error eps/alpha_I.
BlockEncoding build_g_encoding(const BlockEncoding& u_h, const BlockEncoding& u_i, double gap,
                               double eps);

/// Reusable pipeline: the encodings, success probability, and K are built
/// once; run(seed) only redraws the phase-estimation readout.
class ChiFPipeline {
public:
    /// General pipeline on a model family point.
    ChiFPipeline(const ModelSpec& spec, double eps, const EstimateOptions& opt = {});
    /// General pipeline on an explicit (H, H_I) pair.
    ChiFPipeline(const Matrix& h, const Matrix& h_i, double eps,
                 const EstimateOptions& opt = {});
    /// Frustration-free pipeline (spectral-amplification inversion).
    ChiFPipeline(const FFModel& model, const PauliSum& driving, double eps,
                 const EstimateOptions& opt = {});

    EstimationReport run(std::uint64_t seed) const;

    double alpha_q() const { return alpha_q_; }
    double success_probability() const { return p_; }
    long long k_grid() const { return k_; }
    int inversion_degree() const { return degree_; }
    const BlockEncoding& g_encoding() const { return g_; }
    /// The AE unitary (G composed with state preparation) and its flag.
    const Matrix& ae_unitary() const { return u_total_; }
    const Matrix& ae_flag() const { return flag_; }

private:
    void finish_build(const Matrix& h, const Matrix& h_i, double eps);

    EstimateOptions opt_;
    BlockEncoding g_;
    Matrix u_total_;
    Matrix flag_;
    double alpha_q_ = 0.0;
    double p_ = 0.0;
    double eps_target_ = 0.0;
    double eps1_ = 0.0;
    double eps2_ = 0.0;
    long long k_ = 0;
    int degree_ = 0;
    bool ff_mode_ = false;
    std::map<std::string, double> oracles_;
};

EstimationReport estimate_chi_f(const ModelSpec& spec, double eps, std::uint64_t seed,
                                const EstimateOptions& opt = {});
EstimationReport estimate_chi_f_ff(const FFModel& model, const PauliSum& driving, double eps,
                                   std::uint64_t seed, const EstimateOptions& opt = {});

/// Eq.-3-style Lehmann sum: sum_{j != 0} |<j|H_I|0>|^2 / (E_j - E_0)^2.
double chi_f_exact_sum(const Matrix& h, const Matrix& h_i);

/// Resolvent norm ||(H-E0)^+ H_I |Psi_0>||^2; equals the sum form to 1e-10.
double chi_f_exact_resolvent(const Matrix& h, const Matrix& h_i);

/// Central-difference fidelity form -2 ln F(lambda-h, lambda+h) / (2h)^2.
double chi_f_finite_difference(const ModelSpec& spec, double h);

/// Static susceptibility 2 sum_{j != 0} |<j|O|0>|^2 / (E_j - E_0).
double static_susceptibility_exact(const Matrix& h, const Matrix& o);

/// Quantum-pipeline static susceptibility chi = 2 ||R^{1/2} O |Psi_0>||^2 via
/// the square-root-pseudoinverse polynomial transform.
EstimationReport static_susceptibility_estimate(const ModelSpec& spec, const PauliSum& o,
                                                double eps, std::uint64_t seed,
                                                const EstimateOptions& opt = {});

/// Quantum Fisher information 4 chi_F with the family's own driving.
double qfi_exact(const ModelSpec& spec);
double qfi_estimate(const ModelSpec& spec, double eps, std::uint64_t seed,
                    const EstimateOptions& opt = {});

}  // namespace fidsim
