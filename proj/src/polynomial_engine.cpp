#include "fidsim/polynomial_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <unsupported/Eigen/FFT>
#include <json.hpp>

namespace fidsim {

namespace {

constexpr int kMaxFitGrid = 1 << 20;    // interpolation nodes before giving up
constexpr double kBoundSlack = 1e-9;    // allowed |p| overshoot above 1
constexpr int kBoundGrid = 10000;

// DCT-II of x via a same-length complex FFT (Makhoul reordering):
// X_k = sum_n x_n cos(pi k (2n+1) / (2N)).
std::vector<double> dct2(const std::vector<double>& x) {
    const int n = static_cast<int>(x.size());
    std::vector<double> v(n);
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) v[i] = x[2 * i];
    for (int i = 0; 2 * i + 1 < n; ++i) v[n - 1 - i] = x[2 * i + 1];

    Eigen::FFT<double> fft;
    std::vector<std::complex<double>> spectrum;
    fft.fwd(spectrum, v);

    std::vector<double> out(n);
    for (int k = 0; k < n; ++k) {
        const double phase = -M_PI * k / (2.0 * n);
        out[k] = (std::cos(phase) * spectrum[k].real() - std::sin(phase) * spectrum[k].imag());
    }
    return out;
}

// Chebyshev coefficients of the degree-(nodes-1) interpolant of f at
// first-kind nodes cos(pi (j + 1/2) / nodes).
std::vector<double> cheb_interp(const std::function<double(double)>& f, int nodes) {
    std::vector<double> samples(nodes);
    for (int j = 0; j < nodes; ++j) {
        samples[j] = f(std::cos(M_PI * (j + 0.5) / nodes));
    }
    std::vector<double> c = dct2(samples);
    for (double& v : c) v *= 2.0 / nodes;
    c[0] *= 0.5;
    return c;
}

// Vectorized sum_k c_k T_k(x_i) via the three-term recurrence.
Eigen::ArrayXd grid_eval(const std::vector<double>& c, const Eigen::ArrayXd& xs) {
    Eigen::ArrayXd acc = Eigen::ArrayXd::Constant(xs.size(), c.empty() ? 0.0 : c[0]);
    if (c.size() < 2) return acc;
    Eigen::ArrayXd t_prev = Eigen::ArrayXd::Ones(xs.size());
    Eigen::ArrayXd t_cur = xs;
    acc += c[1] * t_cur;
    const Eigen::ArrayXd two_x = 2.0 * xs;
    for (std::size_t k = 2; k < c.size(); ++k) {
        Eigen::ArrayXd t_next = two_x * t_cur - t_prev;
        acc += c[k] * t_next;
        t_prev.swap(t_cur);
        t_cur.swap(t_next);
    }
    return acc;
}

Eigen::ArrayXd uniform_grid(double lo, double hi, int points) {
    return Eigen::ArrayXd::LinSpaced(points, lo, hi);
}

double max_abs_of_coeffs(const std::vector<double>& c, int grid_points) {
    const Eigen::ArrayXd xs = uniform_grid(-1.0, 1.0, grid_points);
    return grid_eval(c, xs).abs().maxCoeff();
}

// Smooth bump vanishing identically outside (-1, 1); g(0) = 0.2.
double bump(double y) {
    const double y2 = y * y;
    if (y2 >= 1.0) return 0.0;
    return 0.2 * std::exp(1.0 - 1.0 / (1.0 - y2));
}

// Odd smoothing of 1/y: equals 1/y exactly for |y| >= 1, bounded near 0.
double smoothed_reciprocal(double y) { return y / (y * y + bump(y)); }

struct FitOutcome {
    std::vector<double> coeffs;  // truncated + post-processed
    int degree = 0;
};

// Doubling-then-bisection minimal-degree search. `post` mutates truncated
// coefficients (parity zeroing, endpoint pinning) before they are judged by
// `error_of` (sup error over the target domain) and the boundedness grid.
FitOutcome minimal_degree_fit(const std::function<double(double)>& target, double tol,
                              const std::function<void(std::vector<double>&)>& post,
                              const std::function<double(const std::vector<double>&)>& error_of,
                              const char* what) {
    std::vector<double> base;
    int nodes = 128;
    for (;; nodes *= 2) {
        if (nodes > kMaxFitGrid) {
            std::ostringstream os;
            os << what << ": no converged interpolant within " << kMaxFitGrid << " nodes";
            throw ResourceCapError(os.str());
        }
        base = cheb_interp(target, nodes);
        // Converged when the tail of the expansion is negligible at this tol.
        double tail = 0.0;
        for (int k = nodes - nodes / 8; k < nodes; ++k) tail = std::max(tail, std::abs(base[k]));
        if (tail > 1e-3 * tol) continue;
        std::vector<double> full = base;
        post(full);
        if (error_of(full) <= tol && max_abs_of_coeffs(full, kBoundGrid) <= 1.0 + kBoundSlack) {
            break;
        }
    }

    auto feasible = [&](int d) {
        std::vector<double> c(base.begin(), base.begin() + d + 1);
        post(c);
        if (error_of(c) > tol) return false;
        return max_abs_of_coeffs(c, kBoundGrid) <= 1.0 + kBoundSlack;
    };

    int hi = nodes - 1;
    int lo = 0;  // degree 0 is never feasible for these targets
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (feasible(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }

    FitOutcome out;
    out.coeffs.assign(base.begin(), base.begin() + hi + 1);
    post(out.coeffs);
    out.degree = hi;
    return out;
}

double ff_edge_width(double r, double gap) { return 2.0 * gap / r; }

// Analytic (entire) smoothing of 1/t: sigma(t) = t / (t^2 + 0.2 exp(-a t^2)).
// Larger a pushes the rolloff closer to t = 0 at the price of degree.
double gaussian_reciprocal(double t, double a) {
    return t / (t * t + 0.2 * std::exp(-a * t * t));
}

double gaussian_reciprocal_max(double a) {
    double best = 0.0;
    for (int i = 1; i <= 4000; ++i) {
        best = std::max(best, gaussian_reciprocal(i * 2.0 / 4000.0, a));
    }
    return best;
}

double target_value(const ApproxTarget& t, double x) {
    switch (t.kind) {
        case ApproxTarget::Kind::scaled_inverse:
            return 0.75 * t.delta / x;
        case ApproxTarget::Kind::ff_inverse:
            return t.prefactor / (1.0 - x);
        case ApproxTarget::Kind::sqrt_inverse:
            return t.prefactor * std::sqrt(0.75 * t.delta / x);
    }
    throw DomainError("sup_error: unknown target kind");
}

}  // namespace

std::string to_string(Parity p) {
    switch (p) {
        case Parity::odd: return "odd";
        case Parity::even: return "even";
        case Parity::none: return "none";
    }
    return "?";
}

std::string ChebyshevPolynomial::to_json() const {
    nlohmann::json j;
    j["coeffs"] = coeffs;
    j["degree"] = degree;
    j["parity"] = fidsim::to_string(parity);
    j["domain_note"] = domain_note;
    return j.dump(2);
}

ChebyshevPolynomial ChebyshevPolynomial::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("polynomial JSON: ") + e.what());
    }
    ChebyshevPolynomial p;
    try {
        p.coeffs = j.at("coeffs").get<std::vector<double>>();
        p.degree = j.at("degree").get<int>();
        const std::string par = j.at("parity").get<std::string>();
        if (par == "odd") {
            p.parity = Parity::odd;
        } else if (par == "even") {
            p.parity = Parity::even;
        } else if (par == "none") {
            p.parity = Parity::none;
        } else {
            throw ConfigError("polynomial JSON: unknown parity '" + par + "'");
        }
        p.domain_note = j.value("domain_note", std::string{});
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("polynomial JSON: ") + e.what());
    }
    if (p.degree + 1 != static_cast<int>(p.coeffs.size())) {
        throw ConfigError("polynomial JSON: degree does not match coefficient count");
    }
    return p;
}

double eval_scalar(const ChebyshevPolynomial& p, double x) {
    if (std::abs(x) > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "eval_scalar: x = " << x << " outside [-1, 1]";
        throw DomainError(os.str());
    }
    // Clenshaw recurrence, backward through the coefficients.
    double b1 = 0.0;
    double b2 = 0.0;
    for (int k = static_cast<int>(p.coeffs.size()) - 1; k >= 1; --k) {
        const double b0 = p.coeffs[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    const double c0 = p.coeffs.empty() ? 0.0 : p.coeffs[0];
    return c0 + x * b1 - b2;
}

Matrix eval_matrix(const ChebyshevPolynomial& p, const Matrix& A) {
    require_dense_operator(A, "eval_matrix");
    SpectralData sd = hermitian_eig(A);
    const double lo = sd.eigenvalues.minCoeff();
    const double hi = sd.eigenvalues.maxCoeff();
    if (lo < -1.0 - 1e-10 || hi > 1.0 + 1e-10) {
        std::ostringstream os;
        os << "eval_matrix: spectrum [" << lo << ", " << hi
           << "] outside [-1, 1]; divide by the normalization alpha first";
        throw NormalizationError(os.str());
    }
    RealVector vals(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < vals.size(); ++i) {
        vals[i] = eval_scalar(p, std::clamp(sd.eigenvalues[i], -1.0, 1.0));
    }
    return sd.eigenvectors * vals.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix eval_matrix_clenshaw(const ChebyshevPolynomial& p, const Matrix& A) {
    require_dense_operator(A, "eval_matrix_clenshaw");
    const Eigen::Index d = A.rows();
    Matrix b1 = Matrix::Zero(d, d);
    Matrix b2 = Matrix::Zero(d, d);
    for (int k = static_cast<int>(p.coeffs.size()) - 1; k >= 1; --k) {
        Matrix b0 = p.coeffs[k] * Matrix::Identity(d, d) + 2.0 * (A * b1) - b2;
        b2.swap(b1);
        b1.swap(b0);
    }
    const double c0 = p.coeffs.empty() ? 0.0 : p.coeffs[0];
    return c0 * Matrix::Identity(d, d) + A * b1 - b2;
}

double sup_error(const ChebyshevPolynomial& p, const ApproxTarget& target, int grid_points) {
    if (grid_points < 1000) throw DomainError("sup_error: grid_points must be >= 1000");
    double lo;
    double hi;
    switch (target.kind) {
        case ApproxTarget::Kind::scaled_inverse:
        case ApproxTarget::Kind::sqrt_inverse:
            if (target.delta <= 0.0 || target.delta > 1.0) {
                throw DomainError("sup_error: delta outside (0, 1]");
            }
            lo = target.delta;
            hi = 1.0;
            break;
        case ApproxTarget::Kind::ff_inverse:
            if (target.r < 1.0 || target.gap <= 0.0 || target.gap > target.r) {
                throw DomainError("sup_error: need 0 < gap <= r");
            }
            lo = -1.0;
            hi = 1.0 - ff_edge_width(target.r, target.gap);
            break;
        default:
            throw DomainError("sup_error: unknown target kind");
    }
    const Eigen::ArrayXd xs = uniform_grid(lo, hi, grid_points);
    const Eigen::ArrayXd vals = grid_eval(p.coeffs, xs);
    double worst = 0.0;
    for (Eigen::Index i = 0; i < xs.size(); ++i) {
        worst = std::max(worst, std::abs(vals[i] - target_value(target, xs[i])));
        if (target.kind == ApproxTarget::Kind::scaled_inverse) {
            // Mirror side: the scaled-inverse bound is over delta <= |x| <= 1.
            const double mirrored = eval_scalar(p, -xs[i]);
            worst = std::max(worst, std::abs(mirrored + target_value(target, xs[i])));
        }
    }
    return worst;
}

double max_abs_on_interval(const ChebyshevPolynomial& p, int grid_points) {
    return max_abs_of_coeffs(p.coeffs, grid_points);
}

ChebyshevPolynomial inverse_poly(double delta, double eps) {
    if (delta <= 0.0 || delta > 1.0) throw DomainError("inverse_poly: delta outside (0, 1]");
    if (eps <= 0.0 || eps > 0.5) throw DomainError("inverse_poly: eps outside (0, 1/2]");

    // Smoothed target: exact 3 delta / (4 x) for |x| >= delta, a bounded odd
    // rolloff inside |x| < delta. Sup error on the domain is pure truncation.
    auto target = [delta](double x) { return 0.75 * smoothed_reciprocal(x / delta); };
    auto zero_even = [](std::vector<double>& c) {
        for (std::size_t k = 0; k < c.size(); k += 2) c[k] = 0.0;
    };
    ApproxTarget at;
    at.kind = ApproxTarget::Kind::scaled_inverse;
    at.delta = delta;
    auto error_of = [&](const std::vector<double>& c) {
        ChebyshevPolynomial tmp{c, static_cast<int>(c.size()) - 1, Parity::odd, ""};
        return sup_error(tmp, at, kBoundGrid);
    };

    FitOutcome fit = minimal_degree_fit(target, eps, zero_even, error_of, "inverse_poly");

    ChebyshevPolynomial p;
    p.coeffs = std::move(fit.coeffs);
    p.degree = fit.degree;
    p.parity = Parity::odd;
    std::ostringstream note;
    note << "delta=" << delta << " eps=" << eps;
    p.domain_note = note.str();
    return p;
}

double ff_k_norm(double gap, double eps) {
    if (gap <= 0.0 || eps <= 0.0) throw DomainError("ff_k_norm: need positive gap and eps");
    const double a = std::log(0.2 / (eps * gap)) + 2.0;
    return 1.02 * gaussian_reciprocal_max(a) / gap;
}

FFInversePoly ff_inverse_poly(int r, double gap, double eps) {
    if (r < 1) throw DomainError("ff_inverse_poly: r must be >= 1");
    if (gap <= 0.0 || gap > r) throw DomainError("ff_inverse_poly: need 0 < gap <= r");
    if (eps <= 0.0 || eps > 0.5) throw DomainError("ff_inverse_poly: eps outside (0, 1/2]");

    const double w = ff_edge_width(r, gap);
    // Entire-function rolloff keeps the truncation degree at O(sqrt(1/w));
    // a controls how early sigma(t) stops tracking 1/t.
    const double a = std::log(0.2 / (eps * gap)) + 2.0;
    const double smax = gaussian_reciprocal_max(a);
    const double k_poly = 1.02 * smax / w;  // |target| <= 1/1.02 on [-1, 1]
    const double k_norm = 2.0 * k_poly / r; // Theta(1/gap)

    auto target = [w, a, k_poly](double x) {
        return gaussian_reciprocal((1.0 - x) / w, a) / (k_poly * w);
    };
    // Pin q(1) = 0 exactly so the encoded pseudoinverse annihilates the
    // ground state (block eigenvalue 1) identically.
    auto pin_endpoint = [](std::vector<double>& c) {
        double at_one = 0.0;
        for (double v : c) at_one += v;  // T_k(1) = 1
        if (!c.empty()) c[0] -= at_one;
    };
    ApproxTarget at;
    at.kind = ApproxTarget::Kind::ff_inverse;
    at.r = r;
    at.gap = gap;
    at.prefactor = 1.0 / k_poly;
    auto error_of = [&](const std::vector<double>& c) {
        ChebyshevPolynomial tmp{c, static_cast<int>(c.size()) - 1, Parity::none, ""};
        return sup_error(tmp, at, kBoundGrid);
    };

    const double tol = eps / k_norm;
    FitOutcome fit = minimal_degree_fit(target, tol, pin_endpoint, error_of, "ff_inverse_poly");

    FFInversePoly out;
    out.poly.coeffs = std::move(fit.coeffs);
    out.poly.degree = fit.degree;
    out.poly.parity = Parity::none;
    std::ostringstream note;
    note << "edge=" << w << " r=" << r << " gap=" << gap << " eps=" << eps;
    out.poly.domain_note = note.str();
    out.k_poly = k_poly;
    out.k_norm = k_norm;
    out.edge_width = w;
    return out;
}

SqrtInversePoly sqrt_inverse_poly(double delta, double eps) {
    if (delta <= 0.0 || delta > 1.0) throw DomainError("sqrt_inverse_poly: delta outside (0, 1]");
    if (eps <= 0.0 || eps > 0.5) throw DomainError("sqrt_inverse_poly: eps outside (0, 1/2]");

    // Even smooth extension of sqrt(3 delta / (4 x)) that vanishes at x = 0:
    // y^2 (y^2 + bump)^(-5/4) equals y^(-1/2) for |y| >= 1 and dies
    // quadratically at the origin, so the transform annihilates the ground
    // state. Rescaled if the rolloff region peaks above 1.
    auto raw = [delta](double x) {
        const double y = x / delta;
        const double y2 = y * y;
        return std::sqrt(0.75) * y2 * std::pow(y2 + bump(y), -1.25);
    };
    double peak = 0.0;
    for (int i = 0; i <= 4000; ++i) peak = std::max(peak, raw(delta * (-1.0 + i * 2.0 / 4000.0)));
    const double scale = 1.0 / (1.02 * std::max(1.0, peak));

    auto target = [raw, scale](double x) { return scale * raw(x); };
    // Pin p(0) = 0 exactly (T_k(0) alternates 1, 0, -1, 0, ...).
    auto pin_origin = [](std::vector<double>& c) {
        double at_zero = 0.0;
        int sign = 1;
        for (std::size_t k = 0; k < c.size(); k += 2) {
            at_zero += sign * c[k];
            sign = -sign;
        }
        if (!c.empty()) c[0] -= at_zero;
    };
    ApproxTarget at;
    at.kind = ApproxTarget::Kind::sqrt_inverse;
    at.delta = delta;
    at.prefactor = scale;
    auto error_of = [&](const std::vector<double>& c) {
        ChebyshevPolynomial tmp{c, static_cast<int>(c.size()) - 1, Parity::none, ""};
        return sup_error(tmp, at, kBoundGrid);
    };

    FitOutcome fit =
        minimal_degree_fit(target, scale * eps, pin_origin, error_of, "sqrt_inverse_poly");

    SqrtInversePoly out;
    out.poly.coeffs = std::move(fit.coeffs);
    out.poly.degree = fit.degree;
    out.poly.parity = Parity::none;
    std::ostringstream note;
    note << "delta=" << delta << " eps=" << eps << " scale=" << scale;
    out.poly.domain_note = note.str();
    out.scale = scale;
    return out;
}

}  // namespace fidsim
