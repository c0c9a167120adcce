#include "fidsim/susceptibility_estimator.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

namespace fidsim {

namespace {

constexpr double kGroundTol = 1e-9;

// Smallest power-of-two phase grid whose worst-case (p = 1/2) readout bound
// fits the budget.
long long choose_k(double eps2, long long max_k) {
    for (long long k = 2; k <= max_k; k *= 2) {
        if (brassard_bound(0.5, k) <= eps2) return k;
    }
    std::ostringstream os;
    os << "amplitude-estimation grid beyond the configured cap " << max_k
       << " (budget eps2 = " << eps2 << ")";
    throw ResourceCapError(os.str());
}

Matrix shifted_hamiltonian(const Matrix& h, const GroundData& gd, double e0_shift) {
    return h - (gd.spectral.e0 + e0_shift) * Matrix::Identity(h.rows(), h.cols());
}

double safe_norm(const Matrix& a) { return std::max(operator_norm(a), 1e-12); }

}  // namespace

std::string EstimationReport::to_json() const {
    nlohmann::json j;
    j["chi_f_hat"] = chi_f_hat;
    j["eps_target"] = eps_target;
    j["alpha_q"] = alpha_q;
    j["p_hat"] = p_hat;
    j["queries"] = queries;
    j["backend"] = to_string(backend);
    j["ff_mode"] = ff_mode;
    j["seed"] = seed;
    j["oracle_values"] = oracle_values;
    j["eps1"] = eps1;
    j["eps2"] = eps2;
    j["k_grid"] = k_grid;
    j["grover_queries"] = grover_queries;
    j["inversion_degree"] = inversion_degree;
    j["n_medians"] = n_medians;
    return j.dump(2);
}

BlockEncoding build_g_encoding(const BlockEncoding& u_h, const BlockEncoding& u_i, double gap,
                               double eps) {
    if (u_h.n != u_i.n) throw ShapeError("build_g_encoding: system dimension mismatch");
    if (eps <= 0.0) throw DomainError("build_g_encoding: eps must be positive");
    BlockEncoding pinv = pseudoinverse_encoding(u_h, gap, eps / u_i.alpha);
    return product(pinv, u_i);
}

ChiFPipeline::ChiFPipeline(const ModelSpec& spec, double eps, const EstimateOptions& opt)
    : opt_(opt) {
    auto [hp, hip] = build_model(spec);
    const Matrix h = pauli_to_dense(hp);
    const Matrix h_i = pauli_to_dense(hip);
    finish_build(h, h_i, eps);
    // The fidelity form only matches the Lehmann sum when the driving is the
    // family's own parameter derivative.
    if (opt_.with_oracles && spec.driving.terms.empty() &&
        (spec.family == ModelFamily::tfim || spec.family == ModelFamily::xxz)) {
        oracles_["eq2_fd"] = chi_f_finite_difference(spec, 1e-3);
    }
}

ChiFPipeline::ChiFPipeline(const Matrix& h, const Matrix& h_i, double eps,
                           const EstimateOptions& opt)
    : opt_(opt) {
    finish_build(h, h_i, eps);
}

void ChiFPipeline::finish_build(const Matrix& h, const Matrix& h_i, double eps) {
    if (eps <= 0.0 || eps > 0.5) throw DomainError("estimate: eps outside (0, 1/2]");
    if (h.rows() != h_i.rows()) throw ShapeError("estimate: H and H_I dimension mismatch");
    eps_target_ = eps;

    GroundData gd = ground_data(h);
    const double gap = gd.spectral.gap;
    const Matrix a = shifted_hamiltonian(h, gd, opt_.e0_shift);
    const double alpha_h = safe_norm(a);
    const double alpha_i = safe_norm(h_i);
    BlockEncoding u_h = encode_matrix(a, alpha_h, "U_H");
    BlockEncoding u_i = encode_matrix(h_i, alpha_i, "U_I");

    alpha_q_ = 4.0 * alpha_i / (3.0 * gap);
    eps1_ = eps / (4.0 * alpha_q_);
    BlockEncoding pinv = pseudoinverse_encoding(u_h, gap, eps1_ / alpha_i, opt_.backend);
    g_ = product(pinv, u_i);
    degree_ = static_cast<int>(g_.cost.at("U_H"));

    const Matrix u_psi = state_prep_unitary(gd.ground_state);
    u_total_ = g_.unitary * embed_front_identity(u_psi, g_.ancilla_dim());
    flag_ = Matrix::Zero(g_.total_dim(), g_.total_dim());
    flag_.topLeftCorner(g_.system_dim(), g_.system_dim()) =
        Matrix::Identity(g_.system_dim(), g_.system_dim());
    p_ = fidsim::success_probability(u_total_, flag_);

    eps2_ = eps / (2.0 * alpha_q_ * alpha_q_);
    k_ = choose_k(eps2_, opt_.max_k);

    if (opt_.with_oracles) {
        oracles_["eq3"] = chi_f_exact_sum(h, h_i);
        oracles_["eq5"] = chi_f_exact_resolvent(h, h_i);
    }
}

ChiFPipeline::ChiFPipeline(const FFModel& model, const PauliSum& driving, double eps,
                           const EstimateOptions& opt)
    : opt_(opt) {
    if (eps <= 0.0 || eps > 0.5) throw DomainError("estimate: eps outside (0, 1/2]");
    eps_target_ = eps;
    ff_mode_ = true;

    GroundData gd = ground_data(model.h_f);
    if (std::abs(gd.spectral.e0) > kGroundTol) {
        throw ValidationError("ff estimate: ground energy is not zero");
    }
    const double gap = gd.spectral.gap;
    const Matrix h_i = pauli_to_dense(driving);
    if (h_i.rows() != model.h_f.rows()) throw ShapeError("ff estimate: driving dim mismatch");
    const double alpha_i = safe_norm(h_i);
    BlockEncoding u_i = encode_matrix(h_i, alpha_i, "U_I");

    FFSelectPrepare sp = ff_select_prepare(model);
    BlockEncoding shifted = ff_shifted_encoding(sp);

    // eps_pinv and the recorded K determine each other only through a log, so
    // a few fixed-point rounds close the eps/2-per-stage budget.
    double eps_pinv = eps * gap / (8.0 * alpha_i * alpha_i);
    for (int it = 0; it < 3; ++it) {
        eps_pinv = eps / (4.0 * ff_k_norm(gap, eps_pinv) * alpha_i * alpha_i);
    }
    eps_pinv = std::min(0.5, eps_pinv);
    BlockEncoding pinv = ff_pseudoinverse_encoding(shifted, sp.r_padded, gap, eps_pinv);
    alpha_q_ = pinv.alpha * alpha_i;
    eps1_ = alpha_i * eps_pinv;
    g_ = product(pinv, u_i);
    degree_ = static_cast<int>(g_.cost.at("U_F") / 2);

    const Matrix u_psi = state_prep_unitary(gd.ground_state);
    u_total_ = g_.unitary * embed_front_identity(u_psi, g_.ancilla_dim());
    flag_ = Matrix::Zero(g_.total_dim(), g_.total_dim());
    flag_.topLeftCorner(g_.system_dim(), g_.system_dim()) =
        Matrix::Identity(g_.system_dim(), g_.system_dim());
    p_ = fidsim::success_probability(u_total_, flag_);

    eps2_ = eps / (2.0 * alpha_q_ * alpha_q_);
    k_ = choose_k(eps2_, opt_.max_k);

    if (opt_.with_oracles) {
        oracles_["eq3"] = chi_f_exact_sum(model.h_f, h_i);
        oracles_["eq5"] = chi_f_exact_resolvent(model.h_f, h_i);
    }
}

EstimationReport ChiFPipeline::run(std::uint64_t seed) const {
    AmplitudeEstimate est = opt_.n_runs > 1 ? median_amplify_p(p_, k_, opt_.n_runs, seed)
                                            : amplitude_estimate_p(p_, k_, seed);
    const long long apps = static_cast<long long>(opt_.n_runs) * (2 * (k_ - 1) + 1);
    g_.charge(apps);

    EstimationReport rep;
    rep.chi_f_hat = alpha_q_ * alpha_q_ * est.p_hat;
    rep.eps_target = eps_target_;
    rep.alpha_q = alpha_q_;
    rep.p_hat = est.p_hat;
    for (const auto& [tag, per_app] : g_.cost) rep.queries[tag] = per_app * apps;
    rep.queries["U_Psi"] = apps;
    rep.backend = opt_.backend;
    rep.ff_mode = ff_mode_;
    rep.seed = seed;
    rep.oracle_values = oracles_;
    rep.eps1 = eps1_;
    rep.eps2 = eps2_;
    rep.k_grid = k_;
    rep.grover_queries = static_cast<long long>(opt_.n_runs) * (k_ - 1);
    rep.inversion_degree = degree_;
    rep.n_medians = opt_.n_runs;
    return rep;
}

EstimationReport estimate_chi_f(const ModelSpec& spec, double eps, std::uint64_t seed,
                                const EstimateOptions& opt) {
    return ChiFPipeline(spec, eps, opt).run(seed);
}

EstimationReport estimate_chi_f_ff(const FFModel& model, const PauliSum& driving, double eps,
                                   std::uint64_t seed, const EstimateOptions& opt) {
    return ChiFPipeline(model, driving, eps, opt).run(seed);
}

double chi_f_exact_sum(const Matrix& h, const Matrix& h_i) {
    GroundData gd = ground_data(h);
    const SpectralData& sd = gd.spectral;
    const Vector amps = sd.eigenvectors.adjoint() * (h_i * gd.ground_state);
    double sum = 0.0;
    for (Eigen::Index j = 1; j < amps.size(); ++j) {
        const double de = sd.eigenvalues[j] - sd.e0;
        sum += std::norm(amps[j]) / (de * de);
    }
    return sum;
}

double chi_f_exact_resolvent(const Matrix& h, const Matrix& h_i) {
    GroundData gd = ground_data(h);
    const Matrix a = shifted_hamiltonian(h, gd, 0.0);
    const Matrix pinv = pseudoinverse(a, 0.5 * gd.spectral.gap);
    return (pinv * (h_i * gd.ground_state)).squaredNorm();
}

double chi_f_finite_difference(const ModelSpec& spec, double h) {
    if (h <= 0.0) throw DomainError("chi_f_finite_difference: h must be positive");
    ModelSpec minus = spec;
    minus.lambda = spec.lambda - h;
    ModelSpec plus = spec;
    plus.lambda = spec.lambda + h;
    auto ground = [](const ModelSpec& s) {
        auto [hp, hip] = build_model(s);
        (void)hip;
        return ground_data(pauli_to_dense(hp)).ground_state;
    };
    const Vector a = ground(minus);
    const Vector b = ground(plus);
    const double fidelity = std::abs(Complex(a.adjoint() * b));
    return -2.0 * std::log(fidelity) / (4.0 * h * h);
}

double static_susceptibility_exact(const Matrix& h, const Matrix& o) {
    GroundData gd = ground_data(h);
    const SpectralData& sd = gd.spectral;
    const Vector amps = sd.eigenvectors.adjoint() * (o * gd.ground_state);
    double sum = 0.0;
    for (Eigen::Index j = 1; j < amps.size(); ++j) {
        sum += 2.0 * std::norm(amps[j]) / (sd.eigenvalues[j] - sd.e0);
    }
    return sum;
}

EstimationReport static_susceptibility_estimate(const ModelSpec& spec, const PauliSum& o,
                                                double eps, std::uint64_t seed,
                                                const EstimateOptions& opt) {
    if (eps <= 0.0 || eps > 0.5) throw DomainError("estimate: eps outside (0, 1/2]");
    auto [hp, hip] = build_model(spec);
    (void)hip;
    const Matrix h = pauli_to_dense(hp);
    const Matrix o_dense = pauli_to_dense(o);
    if (o_dense.rows() != h.rows()) throw ShapeError("static estimate: operator dim mismatch");

    GroundData gd = ground_data(h);
    const double gap = gd.spectral.gap;
    const Matrix a = shifted_hamiltonian(h, gd, opt.e0_shift);
    const double alpha_h = safe_norm(a);
    const double alpha_o = safe_norm(o_dense);
    BlockEncoding u_h = encode_matrix(a, alpha_h, "U_H");
    BlockEncoding u_o = encode_matrix(o_dense, alpha_o, "U_I");

    const double delta = gap / alpha_h;
    // R^{1/2} normalization: the fitted polynomial is scale * sqrt(3 gap / (4 x)).
    const double alpha_r_guess = 1.02 / std::sqrt(0.75 * gap);
    const double alpha_s_guess = alpha_r_guess * alpha_o;
    const double fit_eps =
        std::min(0.5, eps * std::sqrt(0.75 * gap) / (8.0 * alpha_s_guess * alpha_o));
    SqrtInversePoly fit = sqrt_inverse_poly(delta, fit_eps);
    BlockEncoding r_half = apply_poly(u_h, fit.poly, opt.backend);
    r_half.alpha = 1.0 / (fit.scale * std::sqrt(0.75 * gap));
    r_half.eps = fit_eps / std::sqrt(0.75 * gap);
    BlockEncoding s_enc = product(r_half, u_o);
    const double alpha_s = s_enc.alpha;

    const Matrix u_psi = state_prep_unitary(gd.ground_state);
    const Matrix u_total = s_enc.unitary * embed_front_identity(u_psi, s_enc.ancilla_dim());
    Matrix flag = Matrix::Zero(s_enc.total_dim(), s_enc.total_dim());
    flag.topLeftCorner(s_enc.system_dim(), s_enc.system_dim()) =
        Matrix::Identity(s_enc.system_dim(), s_enc.system_dim());
    const double p = success_probability(u_total, flag);

    const double eps2 = eps / (4.0 * alpha_s * alpha_s);
    const long long k = choose_k(eps2, opt.max_k);
    AmplitudeEstimate est = opt.n_runs > 1 ? median_amplify_p(p, k, opt.n_runs, seed)
                                           : amplitude_estimate_p(p, k, seed);
    const long long apps = static_cast<long long>(opt.n_runs) * (2 * (k - 1) + 1);
    s_enc.charge(apps);

    EstimationReport rep;
    rep.alpha_q = std::sqrt(2.0) * alpha_s;  // chi = alpha_q^2 p_hat stays exact
    rep.chi_f_hat = rep.alpha_q * rep.alpha_q * est.p_hat;
    rep.eps_target = eps;
    rep.p_hat = est.p_hat;
    for (const auto& [tag, per_app] : s_enc.cost) rep.queries[tag] = per_app * apps;
    rep.queries["U_Psi"] = apps;
    rep.backend = opt.backend;
    rep.seed = seed;
    if (opt.with_oracles) rep.oracle_values["lehmann"] = static_susceptibility_exact(h, o_dense);
    rep.eps1 = r_half.eps;
    rep.eps2 = eps2;
    rep.k_grid = k;
    rep.grover_queries = static_cast<long long>(opt.n_runs) * (k - 1);
    rep.inversion_degree = fit.poly.degree;
    rep.n_medians = opt.n_runs;
    return rep;
}

double qfi_exact(const ModelSpec& spec) {
    auto [hp, hip] = build_model(spec);
    return 4.0 * chi_f_exact_sum(pauli_to_dense(hp), pauli_to_dense(hip));
}

double qfi_estimate(const ModelSpec& spec, double eps, std::uint64_t seed,
                    const EstimateOptions& opt) {
    return 4.0 * estimate_chi_f(spec, eps, seed, opt).chi_f_hat;
}

}  // namespace fidsim
