#include "fidsim/qsvt_engine.hpp"

#include <cmath>
#include <sstream>

namespace fidsim {

namespace {

constexpr double kHermBlockTol = 1e-8;
// Cap on (LCU terms) x (walk dimension): the dimension the explicit
// PREPARE/SELECT unitary would act on if materialized.
constexpr Eigen::Index kLcuDimCap = Eigen::Index(1) << 22;

// Wraps a system-dim matrix P (||P|| <= 1) as a (1, m_out, 0)-block encoding:
// a single-qubit dilation of P placed in the top-left corner of an identity
// on the full ancilla space.
BlockEncoding redilate(const Matrix& P, int m_out, int n) {
    const Eigen::Index dim_s = P.rows();
    const Eigen::Index total = (Eigen::Index(1) << m_out) * dim_s;
    // Squash the <= 1e-9 boundedness slack so the dilation stays exact.
    Matrix contraction = P;
    const double nm = operator_norm(P);
    if (nm > 1.0) contraction /= nm;
    Matrix U = Matrix::Identity(total, total);
    U.topLeftCorner(2 * dim_s, 2 * dim_s) = unitary_dilation(contraction);
    BlockEncoding out;
    out.unitary = std::move(U);
    out.alpha = 1.0;
    out.m = m_out;
    out.n = n;
    out.eps = 0.0;
    return out;
}

Matrix hermitian_part(const Matrix& B) { return 0.5 * (B + B.adjoint()); }

}  // namespace

PolyBackend poly_backend_from_string(const std::string& s) {
    if (s == "spectral") return PolyBackend::spectral;
    if (s == "cheb_lcu") return PolyBackend::cheb_lcu;
    throw ConfigError("unknown polynomial backend '" + s + "'");
}

std::string to_string(PolyBackend b) {
    return b == PolyBackend::spectral ? "spectral" : "cheb_lcu";
}

WalkOperator walk_operator(const BlockEncoding& be) {
    const Matrix block = be.block();
    if ((block - block.adjoint()).cwiseAbs().maxCoeff() > kHermBlockTol) {
        throw ValidationError("walk_operator: encoded block is not Hermitian");
    }
    const Eigen::Index total = be.total_dim();
    Matrix v;
    int m = be.m;
    if ((be.unitary - be.unitary.adjoint()).cwiseAbs().maxCoeff() <= 1e-12) {
        v = be.unitary;
    } else {
        // One-qubit Hermitianization: (H (x) I)(|0><1| (x) U + |1><0| (x) U^dag)(H (x) I).
        // Hermitian, unitary, and its |0>-flagged block is (U + U^dag)/2, whose
        // system block equals the (Hermitian) encoded block.
        Matrix s = Matrix::Zero(2 * total, 2 * total);
        s.topRightCorner(total, total) = be.unitary;
        s.bottomLeftCorner(total, total) = be.unitary.adjoint();
        Matrix h2 = Matrix::Zero(2 * total, 2 * total);
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        h2.topLeftCorner(total, total) = inv_sqrt2 * Matrix::Identity(total, total);
        h2.topRightCorner(total, total) = inv_sqrt2 * Matrix::Identity(total, total);
        h2.bottomLeftCorner(total, total) = inv_sqrt2 * Matrix::Identity(total, total);
        h2.bottomRightCorner(total, total) = -inv_sqrt2 * Matrix::Identity(total, total);
        v = h2 * s * h2;
        m = be.m + 1;
    }
    const Eigen::Index dim_s = be.system_dim();
    // Reflection about |0^m> (x) I.
    Matrix refl = -Matrix::Identity(v.rows(), v.cols());
    refl.topLeftCorner(dim_s, dim_s) = Matrix::Identity(dim_s, dim_s);

    WalkOperator out;
    out.w = refl * v;
    out.m = m;
    out.n = be.n;
    return out;
}

BlockEncoding apply_poly(const BlockEncoding& be, const ChebyshevPolynomial& p,
                         PolyBackend backend) {
    const double peak = max_abs_on_interval(p);
    if (peak > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "apply_poly: polynomial unbounded (max |p| = " << peak << " on [-1, 1])";
        throw NormalizationError(os.str());
    }
    const Matrix block = be.block();
    if ((block - block.adjoint()).cwiseAbs().maxCoeff() > kHermBlockTol) {
        throw ValidationError("apply_poly: encoded block is not Hermitian");
    }

    Matrix transformed;
    long long charges = 0;
    if (backend == PolyBackend::spectral) {
        transformed = eval_matrix(p, hermitian_part(block));
        charges = p.degree;
    } else {
        WalkOperator walk = walk_operator(be);
        const Eigen::Index d = walk.w.rows();
        const Eigen::Index lcu_terms = static_cast<Eigen::Index>(p.coeffs.size());
        if (lcu_terms * d > kLcuDimCap) {
            std::ostringstream os;
            os << "apply_poly: cheb_lcu with " << lcu_terms << " terms on dimension " << d
               << " exceeds the configured cap";
            throw ResourceCapError(os.str());
        }
        const Eigen::Index dim_s = be.system_dim();
        // sum_k c_k (flagged block of W^k) = p(A/alpha); the |c_k| weights are
        // what a PREPARE register would carry, signs what SELECT would apply.
        Matrix wk = Matrix::Identity(d, d);
        transformed = Matrix::Zero(dim_s, dim_s);
        if (!p.coeffs.empty()) transformed += p.coeffs[0] * Matrix::Identity(dim_s, dim_s);
        for (std::size_t k = 1; k < p.coeffs.size(); ++k) {
            wk = walk.w * wk;
            if (p.coeffs[k] == 0.0) continue;
            transformed += p.coeffs[k] * wk.topLeftCorner(dim_s, dim_s);
            charges += static_cast<long long>(k);
        }
    }

    BlockEncoding out = redilate(transformed, be.m + 1, be.n);
    out.tag = be.tag;
    for (const auto& [k, v] : be.cost) out.cost[k] = v * charges;
    be.charge(charges);
    return out;
}

BlockEncoding pseudoinverse_encoding(const BlockEncoding& u_h, double gap, double eps,
                                     PolyBackend backend) {
    if (gap <= 0.0) throw DomainError("pseudoinverse_encoding: gap must be positive");
    if (eps <= 0.0) throw DomainError("pseudoinverse_encoding: eps must be positive");
    const double delta = gap / u_h.alpha;
    if (delta > 1.0) {
        throw DomainError("pseudoinverse_encoding: gap exceeds the encoding normalization");
    }
    const double alpha_prime = 4.0 / (3.0 * gap);
    const double poly_eps = std::min(0.5, eps / alpha_prime);
    ChebyshevPolynomial p = inverse_poly(delta, poly_eps);
    BlockEncoding out = apply_poly(u_h, p, backend);
    out.alpha = alpha_prime;
    out.eps = eps;
    return out;
}

BlockEncoding ff_pseudoinverse_encoding(const BlockEncoding& u_f, int r, double gap, double eps) {
    if (gap <= 0.0) throw DomainError("ff_pseudoinverse_encoding: gap must be positive");
    if (eps <= 0.0) throw DomainError("ff_pseudoinverse_encoding: eps must be positive");
    if (std::abs(u_f.alpha - 1.0) > 1e-12) {
        throw ValidationError("ff_pseudoinverse_encoding: expected a unit-normalized "
                              "shifted encoding");
    }
    FFInversePoly fit = ff_inverse_poly(r, gap, std::min(0.5, eps));
    BlockEncoding out = apply_poly(u_f, fit.poly, PolyBackend::spectral);
    out.alpha = fit.k_norm;
    out.eps = eps;
    return out;
}

}  // namespace fidsim
