#pragma once

#include <Eigen/Dense>
#include <complex>

#include "fidsim/errors.hpp"

namespace fidsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Eigendecomposition of a Hermitian operator, eigenvalues ascending.
struct SpectralData {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // unitary, columns match eigenvalues
    double e0 = 0.0;         // ground energy, eigenvalues[0]
    double gap = 0.0;        // eigenvalues[1] - eigenvalues[0]
    bool degenerate = false; // ground level degenerate within tolerance
};

constexpr double kHermitianTol = 1e-10;
constexpr double kDegeneracyRelTol = 1e-10;

/// True if dim is a power of two (dim >= 1).
bool is_power_of_two(Eigen::Index dim);

/// Throws ValidationError unless A is square with power-of-two dimension and finite entries.
void require_dense_operator(const Matrix& A, const char* what);

/// Largest singular value, i.e. the operator (spectral) norm.
double operator_norm(const Matrix& A);

/// Hermitian eigendecomposition. Rejects non-Hermitian input with a
/// symmetry-violation diagnostic; sets the degeneracy flag when the two
/// lowest eigenvalues are closer than kDegeneracyRelTol * ||A||.
SpectralData hermitian_eig(const Matrix& A);

/// Moore-Penrose pseudoinverse of a Hermitian PSD matrix: eigenvalues above
/// tol are reciprocated, the rest are zeroed, in A's own eigenbasis.
/// Eigenvalues below -tol raise a PSD-violation error; tiny negatives in
/// [-1e-10*||A||, 0] are clamped to zero first.
Matrix pseudoinverse(const Matrix& A, double tol);

/// Hermitian PSD principal square root via eigendecomposition.
Matrix hermitian_sqrt(const Matrix& A);

/// Unitary dilation of a contraction M (||M|| <= 1):
///   U = [[M, sqrt(I - M M^dag)], [sqrt(I - M^dag M), -M^dag]].
/// The top-left block of U equals M. ||M|| > 1 + 1e-12 is rejected with a
/// normalization error telling the caller to divide by alpha first.
Matrix unitary_dilation(const Matrix& M);

/// Unitary whose first column is v (after fixing the global phase of v so
/// its largest-magnitude amplitude is real positive). v must be normalized.
Matrix state_prep_unitary(const Vector& v);

/// Throws NormalizationError unless v has unit L2 norm within tol.
void require_normalized(const Vector& v, double tol = 1e-10);

}  // namespace fidsim
