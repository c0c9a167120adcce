#include "fidsim/operator_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <sstream>

namespace fidsim {

bool is_power_of_two(Eigen::Index dim) {
    return dim >= 1 && (dim & (dim - 1)) == 0;
}

void require_dense_operator(const Matrix& A, const char* what) {
    if (A.rows() != A.cols()) {
        std::ostringstream os;
        os << what << ": matrix must be square, got " << A.rows() << "x" << A.cols();
        throw ShapeError(os.str());
    }
    if (!is_power_of_two(A.rows())) {
        std::ostringstream os;
        os << what << ": dimension " << A.rows() << " is not a power of two";
        throw ShapeError(os.str());
    }
    if (!A.allFinite()) {
        throw ValidationError(std::string(what) + ": matrix has non-finite entries");
    }
}

double operator_norm(const Matrix& A) {
    if (!A.allFinite()) throw ValidationError("operator_norm: non-finite entries");
    if (A.size() == 0) return 0.0;
    // For Hermitian input the largest |eigenvalue| is cheaper and just as exact.
    if (A.rows() == A.cols() &&
        (A - A.adjoint()).cwiseAbs().maxCoeff() < 1e-13 * std::max(1.0, A.cwiseAbs().maxCoeff())) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().maxCoeff();
    }
    Eigen::BDCSVD<Matrix> svd(A);
    return svd.singularValues()(0);
}

SpectralData hermitian_eig(const Matrix& A) {
    require_dense_operator(A, "hermitian_eig");
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double herm_residual = (A - A.adjoint()).cwiseAbs().maxCoeff();
    if (herm_residual > kHermitianTol * scale) {
        std::ostringstream os;
        os << "hermitian_eig: symmetry violation, max|A - A^dag| = " << herm_residual
           << " exceeds " << kHermitianTol * scale;
        throw ValidationError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(A);
    if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");

    SpectralData sd;
    sd.eigenvalues = es.eigenvalues();
    sd.eigenvectors = es.eigenvectors();
    sd.e0 = sd.eigenvalues(0);
    sd.gap = sd.eigenvalues.size() > 1 ? sd.eigenvalues(1) - sd.eigenvalues(0) : 0.0;
    const double norm_a = sd.eigenvalues.cwiseAbs().maxCoeff();
    sd.degenerate = sd.eigenvalues.size() > 1 && sd.gap < kDegeneracyRelTol * std::max(1.0, norm_a);
    return sd;
}

Matrix pseudoinverse(const Matrix& A, double tol) {
    SpectralData sd = hermitian_eig(A);
    const double norm_a = sd.eigenvalues.cwiseAbs().maxCoeff();
    const double clamp = 1e-10 * std::max(1.0, norm_a);
    RealVector inv(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        double lam = sd.eigenvalues(i);
        if (lam < -tol && lam < -clamp) {
            std::ostringstream os;
            os << "pseudoinverse: PSD violation, eigenvalue " << lam << " below -tol = " << -tol;
            throw ValidationError(os.str());
        }
        inv(i) = lam > tol ? 1.0 / lam : 0.0;
    }
    return sd.eigenvectors * inv.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix hermitian_sqrt(const Matrix& A) {
    SpectralData sd = hermitian_eig(A);
    RealVector r(sd.eigenvalues.size());
    for (Eigen::Index i = 0; i < sd.eigenvalues.size(); ++i) {
        r(i) = std::sqrt(std::max(0.0, sd.eigenvalues(i)));
    }
    return sd.eigenvectors * r.asDiagonal() * sd.eigenvectors.adjoint();
}

Matrix unitary_dilation(const Matrix& M) {
    require_dense_operator(M, "unitary_dilation");
    const double norm = operator_norm(M);
    if (norm > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "unitary_dilation: ||M|| = " << norm
           << " exceeds 1; divide by the normalization alpha before dilating";
        throw NormalizationError(os.str());
    }
    const Eigen::Index d = M.rows();
    const Matrix id = Matrix::Identity(d, d);
    // Clip tiny norm overshoot so I - M M^dag stays PSD.
    const Matrix Mc = norm > 1.0 ? Matrix(M / norm) : M;
    const Matrix top = hermitian_sqrt(id - Mc * Mc.adjoint());
    const Matrix bot = hermitian_sqrt(id - Mc.adjoint() * Mc);
    Matrix U(2 * d, 2 * d);
    U.topLeftCorner(d, d) = Mc;
    U.topRightCorner(d, d) = top;
    U.bottomLeftCorner(d, d) = bot;
    U.bottomRightCorner(d, d) = -Mc.adjoint();
    return U;
}

void require_normalized(const Vector& v, double tol) {
    const double n = v.norm();
    if (std::abs(n - 1.0) > tol) {
        std::ostringstream os;
        os << "state vector not normalized: ||v|| = " << n;
        throw NormalizationError(os.str());
    }
}

Matrix state_prep_unitary(const Vector& v) {
    if (!is_power_of_two(v.size())) throw ShapeError("state_prep_unitary: dim not a power of two");
    require_normalized(v);

    // Fix global phase: largest-magnitude amplitude real positive.
    Eigen::Index k = 0;
    v.cwiseAbs().maxCoeff(&k);
    Vector w = v * std::conj(v(k) / std::abs(v(k)));

    const Eigen::Index d = v.size();
    if ((w - Vector::Unit(d, 0)).norm() < 1e-14) return Matrix::Identity(d, d);

    Eigen::HouseholderQR<Matrix> qr(w);
    Matrix U = qr.householderQ();
    // QR pins the first column only up to phase; rotate it onto w exactly.
    const Complex c = U.col(0).adjoint() * w;
    U.col(0) *= c / std::abs(c);
    return U;
}

}  // namespace fidsim
