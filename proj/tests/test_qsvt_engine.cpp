#include <doctest.h>

#include <random>

#include "fidsim/qsvt_engine.hpp"

using namespace fidsim;

namespace {

Matrix pauli_z() {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

Matrix diag_real(std::initializer_list<double> vals) {
    Matrix m = Matrix::Zero(Eigen::Index(vals.size()), Eigen::Index(vals.size()));
    Eigen::Index i = 0;
    for (double v : vals) m(i, i) = v, ++i;
    return m;
}

}  // namespace

TEST_CASE("apply_poly: T_1 reproduces the normalized block") {
    Matrix a = diag_real({0.0, 1.0, 2.0, 4.0});
    BlockEncoding be = encode_matrix(a, 4.0, "U_A");
    ChebyshevPolynomial t1{{0.0, 1.0}, 1, Parity::odd, ""};
    for (PolyBackend backend : {PolyBackend::spectral, PolyBackend::cheb_lcu}) {
        BlockEncoding out = apply_poly(be, t1, backend);
        CHECK(out.alpha == doctest::Approx(1.0));
        CHECK(out.m == be.m + 1);
        CHECK(operator_norm(out.block() - a / 4.0) < 1e-8);
    }
}

TEST_CASE("apply_poly: T_2 of an involution is the identity") {
    BlockEncoding be = encode_matrix(pauli_z(), 1.0, "U_Z");
    ChebyshevPolynomial t2{{0.0, 0.0, 1.0}, 2, Parity::even, ""};
    BlockEncoding out = apply_poly(be, t2, PolyBackend::cheb_lcu);
    CHECK(operator_norm(out.block() - Matrix::Identity(2, 2)) < 1e-8);
}

TEST_CASE("apply_poly: backends agree on a degree-15 polynomial") {
    std::mt19937 rng(9);
    std::normal_distribution<double> g;
    Matrix a(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) a(i, j) = Complex(g(rng), g(rng));
    a = ((a + a.adjoint()) / 2.0).eval();
    double alpha = operator_norm(a) * 1.1;
    BlockEncoding be = encode_matrix(a, alpha, "U_A");

    ChebyshevPolynomial p;
    p.degree = 15;
    p.coeffs.resize(16);
    std::uniform_real_distribution<double> uc(-1.0, 1.0);
    for (auto& c : p.coeffs) c = uc(rng);
    double scale = 0.0;
    for (double x = -1.0; x <= 1.0; x += 1e-3) scale = std::max(scale, std::abs(eval_scalar(p, x)));
    for (auto& c : p.coeffs) c /= 1.01 * scale;  // keep |p| <= 1

    BlockEncoding s = apply_poly(be, p, PolyBackend::spectral);
    BlockEncoding l = apply_poly(be, p, PolyBackend::cheb_lcu);
    CHECK(operator_norm(s.block() - l.block()) < 1e-8);
    CHECK(operator_norm(s.block() - eval_matrix(p, (a / alpha).eval())) < 1e-8);
}

TEST_CASE("apply_poly rejects unbounded polynomials") {
    BlockEncoding be = encode_matrix(pauli_z(), 1.0, "U_Z");
    ChebyshevPolynomial big{{1.5}, 0, Parity::even, ""};
    CHECK_THROWS_AS(apply_poly(be, big, PolyBackend::spectral), NormalizationError);
}

TEST_CASE("apply_poly query accounting: spectral charges degree, lcu charges walk powers") {
    Matrix a = diag_real({0.0, 1.0});
    {
        BlockEncoding be = encode_matrix(a, 1.0, "U_A");
        ChebyshevPolynomial p{{0.0, 0.25, 0.0, 0.25}, 3, Parity::odd, ""};
        BlockEncoding out = apply_poly(be, p, PolyBackend::spectral);
        CHECK(be.queries() == 3);  // degree
        CHECK(out.cost.at("U_A") == 3);
    }
    {
        BlockEncoding be = encode_matrix(a, 1.0, "U_A");
        ChebyshevPolynomial p{{0.0, 0.25, 0.0, 0.25}, 3, Parity::odd, ""};
        BlockEncoding out = apply_poly(be, p, PolyBackend::cheb_lcu);
        CHECK(be.queries() == 1 + 3);  // sum of k over nonzero coefficients
        CHECK(out.cost.at("U_A") == 4);
    }
}

TEST_CASE("walk_operator: flagged block of W^k is T_k(A/alpha)") {
    Matrix a = diag_real({0.3, -0.5, 0.7, 0.1});
    BlockEncoding be = encode_matrix(a, 1.0, "U_A");
    WalkOperator w = walk_operator(be);
    Eigen::Index d = 4;
    Matrix wk = Matrix::Identity(w.w.rows(), w.w.cols());
    for (int k = 0; k <= 4; ++k) {
        ChebyshevPolynomial tk;
        tk.degree = k;
        tk.coeffs.assign(k + 1, 0.0);
        tk.coeffs[k] = 1.0;
        CHECK(operator_norm(wk.topLeftCorner(d, d) - eval_matrix(tk, a)) < 1e-9);
        wk = (wk * w.w).eval();
    }
}

TEST_CASE("pseudoinverse_encoding: diag(0, 2, 4, 4)") {
    Matrix h = diag_real({0.0, 2.0, 4.0, 4.0});
    double alpha = 4.0;
    BlockEncoding u_h = encode_matrix(h, alpha, "U_H");
    const double gap = 2.0, eps = 1e-4;
    BlockEncoding pinv = pseudoinverse_encoding(u_h, gap, eps);
    CHECK(pinv.alpha == doctest::Approx(4.0 / (3.0 * gap)).epsilon(1e-14));
    Matrix target = diag_real({0.0, 0.5, 0.25, 0.25});
    CHECK(verify(pinv, target) <= eps + 1e-9);
    // queries charged to u_h equal the inversion degree
    CHECK(u_h.queries() == pinv.cost.at("U_H"));
    CHECK(pinv.cost.at("U_H") > 0);
}

TEST_CASE("pseudoinverse_encoding on shifted TFIM annihilates the ground state") {
    ModelSpec spec;
    spec.family = ModelFamily::tfim;
    spec.n_qubits = 4;
    spec.lambda = 0.8;
    auto [h, hi] = build_model(spec);
    Matrix hd = pauli_to_dense(h);
    GroundData gd = ground_data(hd);
    Matrix shifted = hd - gd.spectral.e0 * Matrix::Identity(hd.rows(), hd.cols());
    double alpha = operator_norm(shifted);
    BlockEncoding u_h = encode_matrix(shifted, alpha, "U_H");
    const double eps = 1e-3;
    BlockEncoding pinv = pseudoinverse_encoding(u_h, gd.spectral.gap, eps);
    CHECK(verify(pinv, pseudoinverse(shifted, 0.5 * gd.spectral.gap)) <= eps + 1e-9);
    Vector residual = pinv.alpha * pinv.block() * gd.ground_state;
    CHECK(residual.norm() <= eps);
}

TEST_CASE("pseudoinverse_encoding backends agree") {
    Matrix h = diag_real({0.0, 1.0});
    BlockEncoding u1 = encode_matrix(h, 1.0, "U_H");
    BlockEncoding u2 = encode_matrix(h, 1.0, "U_H");
    BlockEncoding a = pseudoinverse_encoding(u1, 1.0, 1e-3, PolyBackend::spectral);
    BlockEncoding b = pseudoinverse_encoding(u2, 1.0, 1e-3, PolyBackend::cheb_lcu);
    CHECK(operator_norm(a.block() - b.block()) < 1e-8);
}

TEST_CASE("ff_pseudoinverse_encoding: catalog pair model") {
    FFModel m = build_ff_model(2, "chain");  // r = 2, spectrum {0, 1, 1, 2}
    FFSelectPrepare sp = ff_select_prepare(m);
    BlockEncoding shifted = ff_shifted_encoding(sp);
    const double eps = 1e-3;
    BlockEncoding pinv = ff_pseudoinverse_encoding(shifted, sp.r_padded, 1.0, eps);
    Matrix target = pseudoinverse(m.h_f, 0.5);
    CHECK(verify(pinv, target) <= eps + 1e-9);
    GroundData gd = ground_data(m.h_f);
    CHECK((pinv.alpha * pinv.block() * gd.ground_state).norm() <= eps);
    // degree queries are charged through the two-select cost of the shifted walk
    CHECK(pinv.cost.at("U_F") > 0);
    CHECK(pinv.cost.at("U_F") % 2 == 0);
}

TEST_CASE("ff_pseudoinverse_encoding: single projector recovers Pi") {
    FFModel m = build_ff_model(1, "single");
    FFSelectPrepare sp = ff_select_prepare(m);
    BlockEncoding shifted = ff_shifted_encoding(sp);
    BlockEncoding pinv = ff_pseudoinverse_encoding(shifted, sp.r_padded, 1.0, 1e-4);
    // H_F = Pi so H_F^+ = Pi as well
    CHECK(verify(pinv, m.projectors[0]) <= 1e-4 + 1e-9);
}

TEST_CASE("ff inversion beats the generic inversion on a wide chain") {
    FFModel m = build_ff_model(6, "chain");  // r = 6 -> padded 8, gap 1, norm 6
    FFSelectPrepare sp = ff_select_prepare(m);
    BlockEncoding shifted = ff_shifted_encoding(sp);
    const double eps = 1e-2;
    BlockEncoding ff_pinv = ff_pseudoinverse_encoding(shifted, sp.r_padded, 1.0, eps);
    long long ff_degree = ff_pinv.cost.at("U_F") / 2;

    double alpha = operator_norm(m.h_f);
    BlockEncoding u_h = encode_matrix(m.h_f, alpha, "U_H");
    BlockEncoding gen_pinv = pseudoinverse_encoding(u_h, 1.0, eps);
    long long gen_degree = gen_pinv.cost.at("U_H");
    CHECK(ff_degree < gen_degree);
}
