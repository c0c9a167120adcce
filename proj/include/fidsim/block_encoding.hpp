#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>

#include "fidsim/hamiltonian_models.hpp"
#include "fidsim/operator_core.hpp"

namespace fidsim {

/// An (alpha, m, eps)-block encoding: a unitary over m ancilla qubits plus n
/// system qubits whose top-left (all-ancilla-zero) block times alpha
/// approximates the target within eps in operator norm.
///
/// Each encoding carries an identity tag (U_H, U_I, U_F, U_Psi, ...) and an
/// atomic query counter so theorem-level complexity claims can be measured.
/// `cost` records how many queries to each tagged primitive one application
/// of this encoding (or its inverse) spends.
struct BlockEncoding {
    Matrix unitary;
    double alpha = 1.0;
    int m = 0;       // ancilla qubits
    int n = 0;       // system qubits
    double eps = 0.0;
    std::string tag;
    std::map<std::string, long long> cost;  // queries per single application
    std::shared_ptr<std::atomic<long long>> counter =
        std::make_shared<std::atomic<long long>>(0);

    Eigen::Index system_dim() const { return Eigen::Index(1) << n; }
    Eigen::Index ancilla_dim() const { return Eigen::Index(1) << m; }
    Eigen::Index total_dim() const { return Eigen::Index(1) << (m + n); }

    /// Top-left system-sized block (<0^m| (x) I) U (|0^m> (x) I).
    Matrix block() const { return unitary.topLeftCorner(system_dim(), system_dim()); }

    /// alpha * block(): the encoded matrix.
    Matrix encoded() const { return alpha * block(); }

    /// Apply the unitary to a state, counting one query.
    Vector apply(const Vector& state) const;

    /// Record n_uses applications without materializing them (batch charge).
    void charge(long long n_uses) const { counter->fetch_add(n_uses); }

    long long queries() const { return counter->load(); }
};

/// Direct dilation (alpha, 1, 0)-block encoding of A; requires alpha >= ||A||.
BlockEncoding encode_matrix(const Matrix& A, double alpha, const std::string& tag = "");

/// Product lemma: (alpha_A alpha_B, a+b, alpha_A eps_2 + alpha_B eps_1)-block
/// encoding of AB. Ancilla layout of the result is [anc_A, anc_B, sys].
BlockEncoding product(const BlockEncoding& u_a, const BlockEncoding& u_b);

/// Operator-norm discrepancy ||target - alpha * block||; a passing
/// verification is discrepancy <= be.eps + 1e-9.
double verify(const BlockEncoding& be, const Matrix& target);

/// SELECT/PREPARE encoding of H_SA = sum_j |j><j| (x) Pi_j for an FF model.
/// r is padded to the next power of two with zero projectors; normalization
/// sqrt(r_padded). Register layout: [b, dil, sys] with b = log2(r_padded)
/// PREPARE qubits and one shared dilation qubit.
struct FFSelectPrepare {
    BlockEncoding be;      // unitary = SELECT * (PREPARE (x) I); alpha = sqrt(r_padded)
    int r_padded = 0;
    int b_qubits = 0;      // PREPARE register size
    /// Isometry (<0_dil| (x) I) U (|0_b 0_dil> (x) I): maps sys -> (b (x) sys),
    /// equals sum_j |j> (x) Pi_j / sqrt(r_padded).
    Matrix tall_block() const;
};
FFSelectPrepare ff_select_prepare(const FFModel& model);

/// U_SA^dag (REF_dil (x) I) U_SA: a (1, b+1, 0)-block encoding of
/// I - 2 H_F / r_padded. Block eigenvalues are 1 - 2 E_j / r_padded; the
/// ground state sits at exactly 1.
BlockEncoding ff_shifted_encoding(const FFSelectPrepare& u_sa);

// --- register plumbing helpers (shared with qsvt_engine) ---

/// kron(I_front, U).
Matrix embed_front_identity(const Matrix& U, Eigen::Index front_dim);

/// Embeds U acting on registers (A, S) into (A, B, S) with identity on B.
Matrix embed_middle_identity(const Matrix& U, Eigen::Index dim_a, Eigen::Index dim_b,
                             Eigen::Index dim_s);

}  // namespace fidsim
