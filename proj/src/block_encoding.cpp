#include "fidsim/block_encoding.hpp"

#include <cmath>
#include <sstream>

namespace fidsim {

Vector BlockEncoding::apply(const Vector& state) const {
    if (state.size() != total_dim()) throw ShapeError("BlockEncoding::apply: state dim mismatch");
    counter->fetch_add(1);
    return unitary * state;
}

BlockEncoding encode_matrix(const Matrix& A, double alpha, const std::string& tag) {
    require_dense_operator(A, "encode_matrix");
    const double norm = operator_norm(A);
    if (alpha < norm - 1e-12) {
        std::ostringstream os;
        os << "encode_matrix: alpha = " << alpha << " below ||A|| = " << norm;
        throw NormalizationError(os.str());
    }
    if (alpha <= 0) throw NormalizationError("encode_matrix: alpha must be positive");

    BlockEncoding be;
    be.unitary = unitary_dilation(A / alpha);
    be.alpha = alpha;
    be.m = 1;
    be.n = static_cast<int>(std::lround(std::log2(double(A.rows()))));
    be.eps = 0.0;
    be.tag = tag;
    if (!tag.empty()) be.cost[tag] = 1;
    return be;
}

Matrix embed_front_identity(const Matrix& U, Eigen::Index front_dim) {
    const Eigen::Index d = U.rows();
    Matrix R = Matrix::Zero(front_dim * d, front_dim * d);
    for (Eigen::Index k = 0; k < front_dim; ++k) R.block(k * d, k * d, d, d) = U;
    return R;
}

Matrix embed_middle_identity(const Matrix& U, Eigen::Index dim_a, Eigen::Index dim_b,
                             Eigen::Index dim_s) {
    if (U.rows() != dim_a * dim_s) throw ShapeError("embed_middle_identity: dim mismatch");
    const Eigen::Index total = dim_a * dim_b * dim_s;
    Matrix R = Matrix::Zero(total, total);
    for (Eigen::Index a = 0; a < dim_a; ++a) {
        for (Eigen::Index ap = 0; ap < dim_a; ++ap) {
            const auto tile = U.block(a * dim_s, ap * dim_s, dim_s, dim_s);
            for (Eigen::Index b = 0; b < dim_b; ++b) {
                R.block((a * dim_b + b) * dim_s, (ap * dim_b + b) * dim_s, dim_s, dim_s) = tile;
            }
        }
    }
    return R;
}

BlockEncoding product(const BlockEncoding& u_a, const BlockEncoding& u_b) {
    if (u_a.n != u_b.n) {
        std::ostringstream os;
        os << "product: system dimension mismatch (" << u_a.n << " vs " << u_b.n << " qubits)";
        throw ShapeError(os.str());
    }
    const Eigen::Index dim_a = u_a.ancilla_dim();
    const Eigen::Index dim_b = u_b.ancilla_dim();
    const Eigen::Index dim_s = u_a.system_dim();

    // Layout [anc_A, anc_B, sys]: apply U_B on (anc_B, sys), then U_A on (anc_A, sys).
    Matrix ub_ext = embed_front_identity(u_b.unitary, dim_a);
    Matrix ua_ext = embed_middle_identity(u_a.unitary, dim_a, dim_b, dim_s);

    BlockEncoding out;
    out.unitary = ua_ext * ub_ext;
    out.alpha = u_a.alpha * u_b.alpha;
    out.m = u_a.m + u_b.m;
    out.n = u_a.n;
    out.eps = u_a.alpha * u_b.eps + u_b.alpha * u_a.eps;  // Lemma-style worst case
    out.tag = u_a.tag + "*" + u_b.tag;
    out.cost = u_a.cost;
    for (const auto& [k, v] : u_b.cost) out.cost[k] += v;
    u_a.charge(1);
    u_b.charge(1);
    return out;
}

double verify(const BlockEncoding& be, const Matrix& target) {
    if (target.rows() != be.system_dim()) throw ShapeError("verify: target dim mismatch");
    return operator_norm(target - be.encoded());
}

Matrix FFSelectPrepare::tall_block() const {
    const Eigen::Index dim_b = Eigen::Index(1) << b_qubits;
    const Eigen::Index dim_s = be.system_dim();
    // Layout [b, dil, sys]: pick dil = 0 rows, input |0_b 0_dil> (x) sys.
    Matrix N(dim_b * dim_s, dim_s);
    for (Eigen::Index j = 0; j < dim_b; ++j) {
        N.block(j * dim_s, 0, dim_s, dim_s) =
            be.unitary.block(j * 2 * dim_s, 0, dim_s, dim_s);
    }
    return N;
}

FFSelectPrepare ff_select_prepare(const FFModel& model) {
    const Eigen::Index dim_s = model.h_f.rows();
    int b = 0;
    while ((1 << b) < model.r) ++b;
    const Eigen::Index r_pad = Eigen::Index(1) << b;

    // Per-projector unitaries: shared single-qubit dilation of Pi_j
    // (sqrt(I - Pi^2) = I - Pi for a projector). Padded slots get Pi = 0.
    const Eigen::Index dim_u = 2 * dim_s;  // (dil, sys)
    Matrix select = Matrix::Zero(r_pad * dim_u, r_pad * dim_u);
    for (Eigen::Index j = 0; j < r_pad; ++j) {
        Matrix pi = j < model.r ? model.projectors[j] : Matrix::Zero(dim_s, dim_s);
        select.block(j * dim_u, j * dim_u, dim_u, dim_u) = unitary_dilation(pi);
    }

    // PREPARE: first column uniform over the padded range.
    Vector uniform = Vector::Constant(r_pad, Complex(1.0 / std::sqrt(double(r_pad)), 0.0));
    Matrix prep = state_prep_unitary(uniform);

    FFSelectPrepare out;
    out.r_padded = static_cast<int>(r_pad);
    out.b_qubits = b;
    out.be.unitary = select * embed_middle_identity(prep, r_pad, dim_u, 1) /* kron(prep, I) */;
    out.be.alpha = std::sqrt(double(r_pad));
    out.be.m = b + 1;
    out.be.n = model.n_qubits;
    out.be.eps = 0.0;
    out.be.tag = "U_F";
    out.be.cost["U_F"] = 1;
    return out;
}

BlockEncoding ff_shifted_encoding(const FFSelectPrepare& u_sa) {
    const Eigen::Index dim_s = u_sa.be.system_dim();
    const Eigen::Index dim_b = Eigen::Index(1) << u_sa.b_qubits;
    const Eigen::Index total = dim_b * 2 * dim_s;

    // REF on the dilation qubit only: I - 2|0><0|_dil.
    Matrix ref = Matrix::Identity(total, total);
    for (Eigen::Index j = 0; j < dim_b; ++j) {
        ref.block(j * 2 * dim_s, j * 2 * dim_s, dim_s, dim_s) = -Matrix::Identity(dim_s, dim_s);
    }

    BlockEncoding out;
    out.unitary = u_sa.be.unitary.adjoint() * ref * u_sa.be.unitary;
    out.alpha = 1.0;
    out.m = u_sa.b_qubits + 1;
    out.n = u_sa.be.n;
    out.eps = 0.0;
    out.tag = "U_F";
    out.cost["U_F"] = 2;  // one query to U_SA and one to its inverse per application
    out.counter = u_sa.be.counter;
    return out;
}

}  // namespace fidsim
