#include "fidsim/hamiltonian_models.hpp"

#include <cmath>
#include <sstream>

namespace fidsim {

namespace {

const Eigen::Matrix2cd& pauli_matrix(char c) {
    static const Eigen::Matrix2cd I = Eigen::Matrix2cd::Identity();
    static const Eigen::Matrix2cd X = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
    static const Eigen::Matrix2cd Y =
        (Eigen::Matrix2cd() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
    static const Eigen::Matrix2cd Z = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
    switch (c) {
        case 'I': return I;
        case 'X': return X;
        case 'Y': return Y;
        case 'Z': return Z;
        default: throw ValidationError(std::string("unknown Pauli letter '") + c + "'");
    }
}

std::string single_site_word(int n, int site, char op) {
    std::string w(n, 'I');
    w[site] = op;
    return w;
}

std::string bond_word(int n, int site, char op) {
    std::string w(n, 'I');
    w[site] = op;
    w[site + 1] = op;
    return w;
}

}  // namespace

PauliSum::PauliSum(int n, std::vector<std::pair<double, std::string>> t)
    : n_qubits(n), terms(std::move(t)) {
    for (const auto& [c, w] : terms) {
        if (static_cast<int>(w.size()) != n_qubits) {
            throw ValidationError("PauliSum: word '" + w + "' has wrong length");
        }
        if (!std::isfinite(c)) throw ValidationError("PauliSum: non-finite coefficient");
    }
}

PauliSum& PauliSum::add(double coeff, const std::string& word) {
    if (static_cast<int>(word.size()) != n_qubits) {
        throw ValidationError("PauliSum: word '" + word + "' has wrong length");
    }
    if (!std::isfinite(coeff)) throw ValidationError("PauliSum: non-finite coefficient");
    terms.emplace_back(coeff, word);
    return *this;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
    if (n_qubits != other.n_qubits) throw ShapeError("PauliSum: qubit count mismatch");
    PauliSum out = *this;
    out.terms.insert(out.terms.end(), other.terms.begin(), other.terms.end());
    return out;
}

ModelFamily model_family_from_string(const std::string& s) {
    if (s == "tfim") return ModelFamily::tfim;
    if (s == "xxz") return ModelFamily::xxz;
    if (s == "ff_projector_chain") return ModelFamily::ff_projector_chain;
    if (s == "explicit") return ModelFamily::explicit_pair;
    throw ConfigError("unknown model family '" + s + "'");
}

std::string to_string(ModelFamily f) {
    switch (f) {
        case ModelFamily::tfim: return "tfim";
        case ModelFamily::xxz: return "xxz";
        case ModelFamily::ff_projector_chain: return "ff_projector_chain";
        case ModelFamily::explicit_pair: return "explicit";
    }
    return "?";
}

Matrix pauli_to_dense(const PauliSum& p) {
    if (p.n_qubits < 1 || p.n_qubits > 10) {
        std::ostringstream os;
        os << "pauli_to_dense: n_qubits = " << p.n_qubits << " outside [1, 10]";
        throw ShapeError(os.str());
    }
    const Eigen::Index dim = Eigen::Index(1) << p.n_qubits;
    Matrix H = Matrix::Zero(dim, dim);
    for (const auto& [coeff, word] : p.terms) {
        // word[0] acts on the most significant qubit.
        Matrix term = Matrix::Identity(1, 1);
        for (char c : word) {
            const Eigen::Matrix2cd& op = pauli_matrix(c);
            Matrix next(term.rows() * 2, term.cols() * 2);
            for (Eigen::Index i = 0; i < term.rows(); ++i)
                for (Eigen::Index j = 0; j < term.cols(); ++j)
                    next.block(i * 2, j * 2, 2, 2) = term(i, j) * op;
            term.swap(next);
        }
        H += coeff * term;
    }
    return H;
}

std::pair<PauliSum, PauliSum> build_model(const ModelSpec& spec) {
    const int n = spec.n_qubits;
    if (spec.family != ModelFamily::explicit_pair && (n < 1 || n > 10)) {
        throw ConfigError("model: n_qubits outside [1, 10]");
    }
    switch (spec.family) {
        case ModelFamily::tfim: {
            if (n < 2) throw ConfigError("tfim: need at least 2 qubits");
            PauliSum h(n, {});
            PauliSum hi(n, {});
            for (int i = 0; i + 1 < n; ++i) h.add(-1.0, bond_word(n, i, 'Z'));
            for (int i = 0; i < n; ++i) {
                h.add(-spec.lambda, single_site_word(n, i, 'X'));
                hi.add(-1.0, single_site_word(n, i, 'X'));
            }
            if (!spec.driving.terms.empty()) hi = spec.driving;
            return {h, hi};
        }
        case ModelFamily::xxz: {
            if (n < 2) throw ConfigError("xxz: need at least 2 qubits");
            PauliSum h(n, {});
            PauliSum hi(n, {});
            for (int i = 0; i + 1 < n; ++i) {
                h.add(1.0, bond_word(n, i, 'X'));
                h.add(1.0, bond_word(n, i, 'Y'));
                h.add(spec.lambda, bond_word(n, i, 'Z'));
                hi.add(1.0, bond_word(n, i, 'Z'));
            }
            if (!spec.driving.terms.empty()) hi = spec.driving;
            return {h, hi};
        }
        case ModelFamily::ff_projector_chain: {
            // |1><1|_i = (I - Z_i)/2
            PauliSum h(n, {});
            for (int i = 0; i < n; ++i) {
                h.add(0.5, std::string(n, 'I'));
                h.add(-0.5, single_site_word(n, i, 'Z'));
            }
            PauliSum hi(n, {});
            if (!spec.driving.terms.empty()) {
                hi = spec.driving;
            } else {
                for (int i = 0; i < n; ++i) hi.add(1.0, single_site_word(n, i, 'X'));
            }
            return {h, hi};
        }
        case ModelFamily::explicit_pair: {
            if (spec.explicit_h.terms.empty()) throw ConfigError("explicit model: H missing");
            if (spec.explicit_h_i.terms.empty()) throw ConfigError("explicit model: H_I missing");
            return {spec.explicit_h, spec.explicit_h_i};
        }
    }
    throw ConfigError("unsupported model family");
}

GroundData ground_data(const Matrix& H) {
    SpectralData sd = hermitian_eig(H);
    if (sd.degenerate) {
        std::ostringstream os;
        os << "ground_data: degenerate ground state (E0 = " << sd.e0 << ", gap = " << sd.gap
           << "); the algorithm assumes a nondegenerate ground state";
        throw AssumptionViolation(os.str());
    }
    GroundData gd;
    gd.ground_state = sd.eigenvectors.col(0);
    gd.spectral = std::move(sd);
    return gd;
}

FFModel make_ff_model(int n_qubits, std::vector<Matrix> projectors) {
    if (projectors.empty()) throw ValidationError("ff model: no projectors");
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Matrix h_f = Matrix::Zero(dim, dim);
    for (const Matrix& p : projectors) {
        require_dense_operator(p, "ff projector");
        if (p.rows() != dim) throw ShapeError("ff projector: dimension mismatch");
        if ((p - p.adjoint()).cwiseAbs().maxCoeff() > 1e-10) {
            throw ValidationError("ff projector: not Hermitian");
        }
        if ((p * p - p).cwiseAbs().maxCoeff() > 1e-10) {
            throw ValidationError("ff projector: Pi^2 != Pi");
        }
        h_f += p;
    }
    SpectralData sd = hermitian_eig(h_f);
    if (sd.e0 > 1e-9) {
        std::ostringstream os;
        os << "ff model: projectors have empty common kernel (ground energy " << sd.e0 << ")";
        throw ValidationError(os.str());
    }
    FFModel m;
    m.n_qubits = n_qubits;
    m.r = static_cast<int>(projectors.size());
    m.projectors = std::move(projectors);
    m.h_f = std::move(h_f);
    return m;
}

FFModel build_ff_model(int n_qubits, const std::string& variant) {
    if (n_qubits < 1 || n_qubits > 10) throw ConfigError("ff model: n_qubits outside [1, 10]");
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    auto one_projector = [&](int site) {
        PauliSum p(n_qubits, {});
        p.add(0.5, std::string(n_qubits, 'I'));
        std::string w(n_qubits, 'I');
        w[site] = 'Z';
        p.add(-0.5, w);
        return pauli_to_dense(p);
    };
    if (variant == "chain" || (variant == "pair" && n_qubits == 2) ||
        (variant == "single" && n_qubits == 1)) {
        std::vector<Matrix> ps;
        for (int i = 0; i < n_qubits; ++i) ps.push_back(one_projector(i));
        return make_ff_model(n_qubits, std::move(ps));
    }
    if (variant == "conflict") {
        // |0><0| and |1><1| on one qubit sum to I: empty kernel, error path fixture.
        if (n_qubits != 1) throw ConfigError("ff model 'conflict' is a 1-qubit fixture");
        Matrix p0 = Matrix::Zero(dim, dim);
        p0(0, 0) = 1.0;
        Matrix p1 = Matrix::Zero(dim, dim);
        p1(1, 1) = 1.0;
        return make_ff_model(1, {p0, p1});
    }
    throw ConfigError("unknown ff model variant '" + variant + "'");
}

}  // namespace fidsim
