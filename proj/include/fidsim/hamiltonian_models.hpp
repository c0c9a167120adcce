#pragma once

#include <string>
#include <vector>

#include "fidsim/operator_core.hpp"

namespace fidsim {

/// A Hamiltonian as a real-weighted sum of Pauli words. Hermitian by construction.
struct PauliSum {
    int n_qubits = 0;
    std::vector<std::pair<double, std::string>> terms;  // (coefficient, word over IXYZ)

    PauliSum() = default;
    PauliSum(int n, std::vector<std::pair<double, std::string>> t);

    PauliSum& add(double coeff, const std::string& word);
    PauliSum operator+(const PauliSum& other) const;
};

enum class ModelFamily { tfim, xxz, ff_projector_chain, explicit_pair };

ModelFamily model_family_from_string(const std::string& s);
std::string to_string(ModelFamily f);

/// A point in a parameterized Hamiltonian family H(lambda) with its driving term.
struct ModelSpec {
    ModelFamily family = ModelFamily::tfim;
    int n_qubits = 0;
    double lambda = 0.0;
    // Optional driving override; empty terms means "family default".
    PauliSum driving;
    // For explicit_pair: the pair (H, H_I) given directly.
    PauliSum explicit_h;
    PauliSum explicit_h_i;
};

/// A frustration-free Hamiltonian H_F = sum of r projectors with a common kernel.
struct FFModel {
    int n_qubits = 0;
    int r = 0;
    std::vector<Matrix> projectors;
    Matrix h_f;  // sum of the projectors; ground energy 0
};

/// Dense matrix of a Pauli sum (n_qubits <= 10).
Matrix pauli_to_dense(const PauliSum& p);

/// Instantiates (H, H_I) for a model spec.
/// tfim: H = -sum Z_i Z_{i+1} - lambda * sum X_i (open chain), H_I = -sum X_i.
/// xxz:  H = sum (X X + Y Y + lambda Z Z) on bonds, H_I = sum Z Z.
/// ff_projector_chain: H = sum_i |1><1|_i as a Pauli sum, H_I = sum X_i (or override).
std::pair<PauliSum, PauliSum> build_model(const ModelSpec& spec);

/// Ground-state data: E0, |Psi0>, gap. Raises AssumptionViolation when the
/// ground level is degenerate.
struct GroundData {
    SpectralData spectral;
    Vector ground_state;
};
GroundData ground_data(const Matrix& H);

/// Catalog FF models. "chain" is Pi_i = |1><1|_i for i < n (r = n, unique
/// ground |0...0>, gap 1). "pair" is the two-qubit chain. "single" is n = 1.
FFModel build_ff_model(int n_qubits, const std::string& variant);

/// FF model from explicit projectors; verifies Pi^2 = Pi, Hermiticity, and a
/// nonempty common kernel (ground energy 0).
FFModel make_ff_model(int n_qubits, std::vector<Matrix> projectors);

}  // namespace fidsim
