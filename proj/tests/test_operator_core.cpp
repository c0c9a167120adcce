#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "fidsim/operator_core.hpp"

using namespace fidsim;

namespace {

Matrix pauli_x() {
    Matrix x(2, 2);
    x << 0, 1, 1, 0;
    return x;
}

Matrix pauli_z() {
    Matrix z(2, 2);
    z << 1, 0, 0, -1;
    return z;
}

Matrix random_hermitian(Eigen::Index d, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Matrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
    return (a + a.adjoint()).eval() / 2.0;
}

}  // namespace

TEST_CASE("is_power_of_two") {
    CHECK(is_power_of_two(1));
    CHECK(is_power_of_two(2));
    CHECK(is_power_of_two(64));
    CHECK_FALSE(is_power_of_two(0));
    CHECK_FALSE(is_power_of_two(3));
    CHECK_FALSE(is_power_of_two(12));
}

TEST_CASE("require_dense_operator rejects bad shapes") {
    Matrix rect = Matrix::Zero(2, 3);
    CHECK_THROWS_AS(require_dense_operator(rect, "rect"), ShapeError);
    Matrix odd = Matrix::Zero(3, 3);
    CHECK_THROWS_AS(require_dense_operator(odd, "odd"), ShapeError);
    Matrix nan = Matrix::Zero(2, 2);
    nan(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(require_dense_operator(nan, "nan"), ValidationError);
    Matrix ok = Matrix::Identity(4, 4);
    CHECK_NOTHROW(require_dense_operator(ok, "ok"));
}

TEST_CASE("operator_norm on known matrices") {
    CHECK(operator_norm(pauli_z()) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(operator_norm(3.0 * Matrix::Identity(4, 4)) == doctest::Approx(3.0).epsilon(1e-12));
    Matrix a = random_hermitian(8, 7);
    SpectralData sd = hermitian_eig(a);
    double max_abs_eig =
        std::max(std::abs(sd.eigenvalues(0)), std::abs(sd.eigenvalues(sd.eigenvalues.size() - 1)));
    CHECK(operator_norm(a) == doctest::Approx(max_abs_eig).epsilon(1e-10));
}

TEST_CASE("hermitian_eig: diag(0,2)") {
    Matrix a = Matrix::Zero(2, 2);
    a(1, 1) = 2.0;
    SpectralData sd = hermitian_eig(a);
    CHECK(sd.eigenvalues(0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(sd.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(sd.e0 == doctest::Approx(0.0));
    CHECK(sd.gap == doctest::Approx(2.0));
    CHECK_FALSE(sd.degenerate);
}

TEST_CASE("hermitian_eig: Pauli X eigenpairs") {
    SpectralData sd = hermitian_eig(pauli_x());
    CHECK(sd.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(sd.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
    // columns are (|0> -/+ |1>)/sqrt(2) up to phase
    const double s = 1.0 / std::sqrt(2.0);
    for (int c = 0; c < 2; ++c) {
        CHECK(std::abs(sd.eigenvectors(0, c)) == doctest::Approx(s).epsilon(1e-12));
        CHECK(std::abs(sd.eigenvectors(1, c)) == doctest::Approx(s).epsilon(1e-12));
    }
    // eigenvector of -1 has opposite-sign components
    Complex ratio = sd.eigenvectors(1, 0) / sd.eigenvectors(0, 0);
    CHECK(ratio.real() == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 1) = 1.0;  // strictly upper triangular: not Hermitian
    CHECK_THROWS_AS(hermitian_eig(a), ValidationError);
}

TEST_CASE("hermitian_eig reconstruction and degeneracy flag") {
    Matrix a = random_hermitian(16, 3);
    SpectralData sd = hermitian_eig(a);
    Matrix rebuilt =
        sd.eigenvectors * sd.eigenvalues.cast<Complex>().asDiagonal() * sd.eigenvectors.adjoint();
    CHECK(operator_norm(a - rebuilt) < 1e-10 * 16 * operator_norm(a) + 1e-12);
    CHECK((sd.eigenvectors.adjoint() * sd.eigenvectors - Matrix::Identity(16, 16)).norm() < 1e-10);

    SpectralData deg = hermitian_eig(Matrix::Identity(4, 4));
    CHECK(deg.degenerate);
}

TEST_CASE("pseudoinverse: diagonal oracle") {
    Matrix a = Matrix::Zero(4, 4);
    a(1, 1) = 2.0;
    a(2, 2) = 4.0;
    a(3, 3) = 4.0;
    Matrix p = pseudoinverse(a, 1e-8);
    CHECK(std::abs(p(0, 0)) < 1e-14);
    CHECK(p(1, 1).real() == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(p(2, 2).real() == doctest::Approx(0.25).epsilon(1e-13));
    CHECK(pseudoinverse(Matrix::Identity(8, 8), 1e-8).isApprox(Matrix::Identity(8, 8), 1e-12));
}

TEST_CASE("pseudoinverse: Penrose conditions on random PSD") {
    for (unsigned seed : {11u, 12u}) {
        Matrix b = random_hermitian(8, seed);
        Matrix a = b * b.adjoint();  // PSD
        Matrix p = pseudoinverse(a, 1e-10);
        CHECK(operator_norm(a * p * a - a) < 1e-8 * operator_norm(a));
        CHECK(operator_norm(p * a * p - p) < 1e-8 * operator_norm(p));
        CHECK(operator_norm(a * p - (a * p).adjoint()) < 1e-9);
        CHECK(operator_norm(p * a - (p * a).adjoint()) < 1e-9);
    }
}

TEST_CASE("pseudoinverse rejects genuinely negative spectrum") {
    CHECK_THROWS_AS(pseudoinverse(-Matrix::Identity(2, 2), 1e-8), ValidationError);
}

TEST_CASE("hermitian_sqrt squares back") {
    Matrix b = random_hermitian(8, 21);
    Matrix a = b * b.adjoint();
    Matrix s = hermitian_sqrt(a);
    CHECK(operator_norm(s * s - a) < 1e-9 * (1.0 + operator_norm(a)));
    CHECK(operator_norm(s - s.adjoint()) < 1e-10);
}

TEST_CASE("unitary_dilation: M = 0 gives the swap form [[0,I],[I,0]]") {
    Matrix u = unitary_dilation(Matrix::Zero(2, 2));
    Matrix expected = Matrix::Zero(4, 4);
    expected.topRightCorner(2, 2) = Matrix::Identity(2, 2);
    expected.bottomLeftCorner(2, 2) = Matrix::Identity(2, 2);
    CHECK(operator_norm(u - expected) < 1e-12);
}

TEST_CASE("unitary_dilation: M = I gives [[I,0],[0,-I]]") {
    Matrix u = unitary_dilation(Matrix::Identity(2, 2));
    Matrix expected = Matrix::Identity(4, 4);
    expected(2, 2) = -1.0;
    expected(3, 3) = -1.0;
    CHECK(operator_norm(u - expected) < 1e-7);
}

TEST_CASE("unitary_dilation: generic contraction") {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 0.6;
    m(1, 1) = 0.8;
    Matrix u = unitary_dilation(m);
    CHECK(operator_norm(u * u.adjoint() - Matrix::Identity(4, 4)) < 1e-10);
    CHECK(operator_norm(u.topLeftCorner(2, 2) - m) < 1e-12);
}

TEST_CASE("unitary_dilation rejects expansions") {
    CHECK_THROWS_AS(unitary_dilation(2.0 * Matrix::Identity(2, 2)), NormalizationError);
}

TEST_CASE("state_prep_unitary") {
    Vector e0 = Vector::Zero(4);
    e0(0) = 1.0;
    CHECK(operator_norm(state_prep_unitary(e0) - Matrix::Identity(4, 4)) < 1e-12);

    Vector plus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    Matrix u = state_prep_unitary(plus);
    CHECK((u.col(0) - plus).norm() < 1e-12);
    CHECK(operator_norm(u * u.adjoint() - Matrix::Identity(2, 2)) < 1e-12);

    std::mt19937 rng(5);
    std::normal_distribution<double> g;
    Vector v(16);
    for (int i = 0; i < 16; ++i) v(i) = Complex(g(rng), g(rng));
    v.normalize();
    Matrix uv = state_prep_unitary(v);
    CHECK(operator_norm(uv * uv.adjoint() - Matrix::Identity(16, 16)) < 1e-10);
    // first column equals v up to a global phase
    Complex phase = uv.col(0).dot(v);
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-10);

    Vector bad = 2.0 * plus;
    CHECK_THROWS_AS(state_prep_unitary(bad), NormalizationError);
    CHECK_THROWS_AS(require_normalized(bad), NormalizationError);
    CHECK_NOTHROW(require_normalized(plus));
}
