#pragma once

#include <cstdint>
#include <vector>

#include "fidsim/operator_core.hpp"

namespace fidsim {

/// One amplitude-estimation readout.
struct AmplitudeEstimate {
    double p_hat = 0.0;
    long long k_queries = 0;  // phase-grid size K
    double bound = 0.0;       // 2 pi sqrt(p_hat (1 - p_hat)) / K + pi^2 / K^2
    int n_medians = 1;
    std::uint64_t seed = 0;
};

double brassard_bound(double p, long long k);

/// Grover operator Q = u S0 u^dag S_flag with S0 the reflection about the
/// all-zeros state and S_flag = I - 2 flag_projector.
Matrix grover_operator(const Matrix& u, const Matrix& flag_projector);

/// Success probability ||flag_projector * u |0...0>||^2.
double success_probability(const Matrix& u, const Matrix& flag_projector);

/// Exact K-point phase-estimation outcome distribution for success
/// probability p: P(y) = (D_K(y/K - f) + D_K(y/K + f)) / 2 with f = theta/pi,
/// theta = asin(sqrt(p)), D_K the squared Dirichlet kernel.
std::vector<double> qpe_distribution(double p, long long k);

/// Draws one outcome from the exact readout distribution and maps it back via
/// p_hat = sin^2(pi y / K). K must be a power of two >= 2. Charges 2(K-1)+1
/// conceptual applications of u per run (Grover powers plus preparation).
AmplitudeEstimate amplitude_estimate(const Matrix& u, const Matrix& flag_projector, long long k,
                                     std::uint64_t seed);

/// Same readout from a precomputed success probability (no matrices needed);
/// the pipeline uses this after extracting p once.
AmplitudeEstimate amplitude_estimate_p(double p, long long k, std::uint64_t seed);

/// Median of n_runs independent estimates with split sub-seeds; failure
/// probability decays as exp(-c n_runs) for the usual Chernoff constant.
AmplitudeEstimate median_amplify(const Matrix& u, const Matrix& flag_projector, long long k,
                                 int n_runs, std::uint64_t seed);
AmplitudeEstimate median_amplify_p(double p, long long k, int n_runs, std::uint64_t seed);

/// splitmix64 stream: the i-th sub-seed of a master seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace fidsim
