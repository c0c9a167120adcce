#pragma once

#include "fidsim/block_encoding.hpp"
#include "fidsim/polynomial_engine.hpp"

namespace fidsim {

enum class PolyBackend { spectral, cheb_lcu };

PolyBackend poly_backend_from_string(const std::string& s);
std::string to_string(PolyBackend b);

/// (1, m+1, 0)-block encoding of p(A/alpha) for a Hermitian encoded block.
///
/// spectral: functional calculus on the extracted block, re-dilated; charges
/// degree queries to be's counter. cheb_lcu: qubitization walk operator
/// W = (2 Pi_0 - I) V with V a Hermitianized form of be.unitary; T_k(A/alpha)
/// is the flagged block of W^k and the c_k-weighted combination is taken as
/// an LCU would; charges sum_k k over nonzero c_k. Both backends agree on the
/// extracted block to 1e-8.
BlockEncoding apply_poly(const BlockEncoding& be, const ChebyshevPolynomial& p,
                         PolyBackend backend);

/// (4/(3 gap), m+1, eps)-block encoding of the Moore-Penrose pseudoinverse of
/// the encoded PSD matrix (ground eigenvalue 0, others >= gap). Queries to
/// u_h equal the inverse_poly degree.
BlockEncoding pseudoinverse_encoding(const BlockEncoding& u_h, double gap, double eps,
                                     PolyBackend backend = PolyBackend::spectral);

/// (K, b+2, eps)-block encoding of H_F^+ from a ff_shifted_encoding output
/// (block = I - 2 H_F / r, alpha = 1). K = k_norm of the edge-accelerated
/// polynomial, Theta(1/gap); queries to u_f equal the ff_inverse_poly degree.
BlockEncoding ff_pseudoinverse_encoding(const BlockEncoding& u_f, int r, double gap, double eps);

/// Qubitization walk operator for a block encoding with Hermitian block:
/// W = (2|0^m'><0^m'| (x) I - I) * V where V is be.unitary if Hermitian, else
/// the one-extra-qubit Hermitianization. <0^m'| W^k |0^m'> = T_k(A/alpha).
/// Returned with the ancilla count m' of V.
struct WalkOperator {
    Matrix w;
    int m = 0;  // ancilla qubits of the (possibly augmented) encoding
    int n = 0;
};
WalkOperator walk_operator(const BlockEncoding& be);

}  // namespace fidsim
