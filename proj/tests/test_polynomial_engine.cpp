#include <doctest.h>

#include <cmath>
#include <random>

#include "fidsim/operator_core.hpp"
#include "fidsim/polynomial_engine.hpp"

using namespace fidsim;

TEST_CASE("eval_scalar: low-order Chebyshev identities") {
    ChebyshevPolynomial t1{{0.0, 1.0}, 1, Parity::odd, ""};
    CHECK(eval_scalar(t1, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    ChebyshevPolynomial t2{{0.0, 0.0, 1.0}, 2, Parity::even, ""};
    CHECK(eval_scalar(t2, -1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_scalar(t2, 0.0) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(eval_scalar(t2, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    // T_2(x) = 2x^2 - 1 at a generic point
    CHECK(eval_scalar(t2, 0.3) == doctest::Approx(2 * 0.09 - 1).epsilon(1e-14));
}

TEST_CASE("eval_scalar agrees with the trigonometric definition") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> ux(-1.0, 1.0);
    ChebyshevPolynomial p;
    p.degree = 20;
    p.coeffs.resize(21);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    for (auto& c : p.coeffs) c = uc(rng);
    for (int i = 0; i < 100; ++i) {
        double x = ux(rng);
        double ref = 0.0;
        for (int k = 0; k <= 20; ++k) ref += p.coeffs[k] * std::cos(k * std::acos(x));
        CHECK(eval_scalar(p, x) == doctest::Approx(ref).epsilon(1e-10));
    }
}

TEST_CASE("eval_scalar rejects |x| > 1") {
    ChebyshevPolynomial t1{{0.0, 1.0}, 1, Parity::odd, ""};
    CHECK_THROWS_AS(eval_scalar(t1, 1.5), DomainError);
}

TEST_CASE("eval_matrix: diagonal action and Clenshaw cross-check") {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    ChebyshevPolynomial t1{{0.0, 1.0}, 1, Parity::odd, ""};
    CHECK(operator_norm(eval_matrix(t1, z) - z) < 1e-13);

    ChebyshevPolynomial p{{0.25, -0.5, 0.125, 0.3}, 3, Parity::none, ""};
    double at_plus = eval_scalar(p, 1.0);
    double at_minus = eval_scalar(p, -1.0);
    Matrix pz = eval_matrix(p, z);
    CHECK(pz(0, 0).real() == doctest::Approx(at_plus).epsilon(1e-12));
    CHECK(pz(1, 1).real() == doctest::Approx(at_minus).epsilon(1e-12));

    // random Hermitian contraction: spectral vs Clenshaw, and commutation
    std::mt19937 rng(23);
    std::normal_distribution<double> g;
    Matrix a(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) a(i, j) = Complex(g(rng), g(rng));
    a = ((a + a.adjoint()) / 2.0).eval();
    a /= (operator_norm(a) * 1.01);
    Matrix m1 = eval_matrix(p, a);
    Matrix m2 = eval_matrix_clenshaw(p, a);
    CHECK(operator_norm(m1 - m2) < 1e-9);
    CHECK(operator_norm(m1 * a - a * m1) < 1e-9);
}

TEST_CASE("sup_error: zero polynomial against the scaled inverse") {
    ChebyshevPolynomial zero{{0.0}, 0, Parity::none, ""};
    ApproxTarget t{ApproxTarget::Kind::scaled_inverse, 0.5, 0, 0, 1.0};
    // target (3/4) delta / x peaks at x = delta with value 3/4
    CHECK(sup_error(zero, t, 10000) == doctest::Approx(0.75).epsilon(1e-3));
    // grid refinement changes the answer by < 10%
    double coarse = sup_error(zero, t, 2000);
    double fine = sup_error(zero, t, 20000);
    CHECK(std::abs(coarse - fine) < 0.1 * fine);
}

TEST_CASE("inverse_poly: accuracy, parity, boundedness at delta = 1/4") {
    const double delta = 0.25, eps = 1e-3;
    ChebyshevPolynomial p = inverse_poly(delta, eps);
    CHECK(p.parity == Parity::odd);
    // even-indexed coefficients vanish identically
    for (std::size_t k = 0; k < p.coeffs.size(); k += 2) CHECK(p.coeffs[k] == 0.0);
    // pointwise accuracy on the validity domain
    for (int i = 0; i <= 400; ++i) {
        double x = delta + (1.0 - delta) * i / 400.0;
        CHECK(std::abs(eval_scalar(p, x) - 0.75 * delta / x) < 1.1 * eps);
        CHECK(std::abs(eval_scalar(p, -x) + 0.75 * delta / x) < 1.1 * eps);
    }
    ApproxTarget t{ApproxTarget::Kind::scaled_inverse, delta, 0, 0, 1.0};
    CHECK(sup_error(p, t, 10000) <= eps + 1e-12);
    CHECK(max_abs_on_interval(p) <= 1.0 + 1e-9);
    // odd parity as a function, including the transition region
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        double x = ux(rng);
        CHECK(eval_scalar(p, -x) == doctest::Approx(-eval_scalar(p, x)).epsilon(1e-12));
    }
}

TEST_CASE("inverse_poly degree grows with accuracy and with 1/delta") {
    int d_coarse = inverse_poly(0.25, 1e-2).degree;
    int d_fine = inverse_poly(0.25, 1e-3).degree;
    CHECK(d_fine >= d_coarse);
    // halving eps is an additive degree increase, not multiplicative
    int d_finer = inverse_poly(0.25, 5e-4).degree;
    CHECK(double(d_finer) <= 1.35 * double(d_fine));

    int d_small_delta = inverse_poly(0.125, 1e-3).degree;
    CHECK(double(d_small_delta) > 1.5 * double(d_fine));  // ~linear in 1/delta
}

TEST_CASE("inverse_poly applied to a matrix matches the pseudoinverse") {
    // diag(0, 1, 2, 4) has gap 1 and norm 4
    Matrix h = Matrix::Zero(4, 4);
    h(1, 1) = 1.0;
    h(2, 2) = 2.0;
    h(3, 3) = 4.0;
    const double alpha = 4.0, delta = 1.0 / alpha, eps = 1e-4;
    ChebyshevPolynomial p = inverse_poly(delta, eps);
    Matrix approx = eval_matrix(p, (h / alpha).eval());
    Matrix target = 0.75 * delta * alpha * pseudoinverse(h, 0.5);
    CHECK(operator_norm(approx - target) < eps + 1e-10);
    CHECK(std::abs(approx(0, 0)) < eps);  // annihilates the kernel direction
}

TEST_CASE("inverse_poly validates arguments") {
    CHECK_THROWS_AS(inverse_poly(0.0, 1e-3), DomainError);
    CHECK_THROWS_AS(inverse_poly(1.5, 1e-3), DomainError);
    CHECK_THROWS_AS(inverse_poly(0.25, 0.0), DomainError);
}

TEST_CASE("ff_inverse_poly: r = 2 catalog spectrum inverts within eps") {
    const int r = 2;
    const double gap = 1.0, eps = 1e-3;
    FFInversePoly fit = ff_inverse_poly(r, gap, eps);
    CHECK(fit.k_norm == doctest::Approx(2.0 * fit.k_poly / r).epsilon(1e-12));
    CHECK(max_abs_on_interval(fit.poly) <= 1.0 + 1e-9);
    // q(1) = 0 exactly: the shifted ground state is annihilated
    double sum = 0.0;
    for (double c : fit.poly.coeffs) sum += c;
    CHECK(std::abs(sum) < 1e-12);
    // K_norm * q(1 - 2E/r) must reproduce 1/E on the spectrum {0, 1, 2}
    auto pinv_at = [&](double e) { return fit.k_norm * eval_scalar(fit.poly, 1.0 - 2.0 * e / r); };
    CHECK(std::abs(pinv_at(0.0)) < 1e-12);
    CHECK(std::abs(pinv_at(1.0) - 1.0) < eps + 1e-12);
    CHECK(std::abs(pinv_at(2.0) - 0.5) < eps + 1e-12);
}

TEST_CASE("ff_inverse_poly: k_norm is r-independent and matches ff_k_norm") {
    const double gap = 0.5, eps = 1e-3;
    FFInversePoly f2 = ff_inverse_poly(2, gap, eps);
    FFInversePoly f8 = ff_inverse_poly(8, gap, eps);
    CHECK(f2.k_norm == doctest::Approx(f8.k_norm).epsilon(1e-12));
    CHECK(ff_k_norm(gap, eps) == doctest::Approx(f2.k_norm).epsilon(1e-12));
    // degree grows sublinearly in r (the square-root speedup)
    FFInversePoly f16 = ff_inverse_poly(16, gap, eps);
    CHECK(double(f16.poly.degree) < 0.75 * (16.0 / 2.0) * double(f2.poly.degree));
}

TEST_CASE("sqrt_inverse_poly: bounded even-extended square-root inverse") {
    const double delta = 0.25, eps = 1e-3;
    SqrtInversePoly sq = sqrt_inverse_poly(delta, eps);
    CHECK(max_abs_on_interval(sq.poly) <= 1.0 + 1e-9);
    CHECK(std::abs(eval_scalar(sq.poly, 0.0)) < 1e-12);  // vanishes on the kernel
    for (int i = 0; i <= 200; ++i) {
        double x = delta + (1.0 - delta) * i / 200.0;
        double target = sq.scale * std::sqrt(0.75 * delta / x);
        CHECK(std::abs(eval_scalar(sq.poly, x) - target) < 1.1 * eps + 1e-10);
    }
}

TEST_CASE("ChebyshevPolynomial JSON round-trip") {
    ChebyshevPolynomial p = inverse_poly(0.5, 1e-2);
    std::string text = p.to_json();
    ChebyshevPolynomial q = ChebyshevPolynomial::from_json(text);
    CHECK(q.degree == p.degree);
    CHECK(q.parity == p.parity);
    REQUIRE(q.coeffs.size() == p.coeffs.size());
    for (std::size_t k = 0; k < p.coeffs.size(); ++k) CHECK(q.coeffs[k] == p.coeffs[k]);
    CHECK(q.domain_note == p.domain_note);
}
