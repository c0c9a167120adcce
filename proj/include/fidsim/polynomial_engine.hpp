#pragma once

#include <string>
#include <vector>

#include "fidsim/operator_core.hpp"

namespace fidsim {

enum class Parity { odd, even, none };

std::string to_string(Parity p);

/// A polynomial in the Chebyshev basis: p(x) = sum_k coeffs[k] T_k(x).
struct ChebyshevPolynomial {
    std::vector<double> coeffs;
    int degree = 0;
    Parity parity = Parity::none;
    std::string domain_note;  // exclusion parameter / edge gap used at fit time

    std::string to_json() const;
    static ChebyshevPolynomial from_json(const std::string& text);
};

/// Target descriptor for sup_error.
struct ApproxTarget {
    enum class Kind { scaled_inverse, ff_inverse, sqrt_inverse } kind;
    double delta = 0.0;   // scaled_inverse / sqrt_inverse exclusion parameter
    double r = 0.0;       // ff_inverse: padded term count
    double gap = 0.0;     // ff_inverse: spectral gap lower bound
    double prefactor = 1.0;  // ff_inverse: 1/K_poly; sqrt_inverse: target scale
};

/// Clenshaw evaluation; |x| > 1 is a domain error.
double eval_scalar(const ChebyshevPolynomial& p, double x);

/// p applied to a Hermitian A with spectrum in [-1, 1], via eigendecomposition.
Matrix eval_matrix(const ChebyshevPolynomial& p, const Matrix& A);

/// Matrix Clenshaw recurrence (test cross-check for eval_matrix).
Matrix eval_matrix_clenshaw(const ChebyshevPolynomial& p, const Matrix& A);

/// Max |p(x) - target(x)| over the target's validity domain on a uniform grid.
double sup_error(const ChebyshevPolynomial& p, const ApproxTarget& target, int grid_points);

/// Max |p(x)| over [-1, 1] on a uniform grid.
double max_abs_on_interval(const ChebyshevPolynomial& p, int grid_points = 10000);

/// Odd polynomial approximating f(x) = (3/4) delta / x on delta <= |x| <= 1
/// with sup error <= eps and |p| <= 1 on [-1, 1]. The minimal degree is found
/// by truncating a converged Chebyshev interpolant of a smoothed target and
/// bisecting against the sup_error oracle.
ChebyshevPolynomial inverse_poly(double delta, double eps);

/// Edge-accelerated inverse for frustration-free spectra. Approximates
/// (1/k_poly) * 1/(1-x) on [-1, 1 - 2 gap / r] with q(1) = 0 exactly and
/// |q| <= 1 on [-1, 1]. k_norm = 2 k_poly / r is the normalization of the
/// resulting H_F^+ encoding (Theta(1/gap)); the asserted tolerance is
/// eps / k_norm.
struct FFInversePoly {
    ChebyshevPolynomial poly;
    double k_poly = 0.0;  // prefactor of the fitted 1/(1-x) target
    double k_norm = 0.0;  // pseudoinverse normalization, Theta(1/gap)
    double edge_width = 0.0;  // 2 gap / r
};
FFInversePoly ff_inverse_poly(int r, double gap, double eps);

/// The k_norm the above would record for these parameters, without fitting
/// (r-independent); used to close the pipeline's error-budget fixed point.
double ff_k_norm(double gap, double eps);

/// Even-extended approximant to sqrt((3/4) delta / x) on [delta, 1], bounded
/// by 1; used by the static-susceptibility pipeline. `scale` is the factor
/// the caller must fold into the encoding normalization (1 unless the target
/// had to be rescaled to stay bounded).
struct SqrtInversePoly {
    ChebyshevPolynomial poly;
    double scale = 1.0;
};
SqrtInversePoly sqrt_inverse_poly(double delta, double eps);

}  // namespace fidsim
