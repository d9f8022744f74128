#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dqsim/dense.hpp"

namespace dqsim {

// Multi-qubit Pauli string, one axis per qubit (0=I, 1=X, 2=Y, 3=Z).
struct PauliString {
    std::vector<std::uint8_t> axes;

    PauliString() = default;
    explicit PauliString(std::size_t n) : axes(n, 0) {}

    static PauliString parse(const std::string& letters) {
        PauliString p;
        p.axes.reserve(letters.size());
        for (char c : letters) {
            switch (c) {
                case 'I': case 'i': p.axes.push_back(0); break;
                case 'X': case 'x': p.axes.push_back(1); break;
                case 'Y': case 'y': p.axes.push_back(2); break;
                case 'Z': case 'z': p.axes.push_back(3); break;
                default: throw config_error(std::string("invalid Pauli letter '") + c + "'");
            }
        }
        return p;
    }

    std::size_t size() const { return axes.size(); }
    bool identity() const {
        return std::all_of(axes.begin(), axes.end(), [](auto a) { return a == 0; });
    }

    std::vector<int> support() const {
        std::vector<int> s;
        for (std::size_t q = 0; q < axes.size(); ++q)
            if (axes[q] != 0) s.push_back(static_cast<int>(q));
        return s;
    }

    std::string str() const {
        static const char* letters = "IXYZ";
        std::string out;
        for (auto a : axes) out += letters[a];
        return out;
    }

    auto operator<=>(const PauliString&) const = default;
};

// Canonical weighted sum of Pauli strings: terms sorted, merged, no zeros.
struct OperatorSum {
    int qubit_count = 0;
    std::vector<std::pair<double, PauliString>> terms;

    OperatorSum() = default;
    explicit OperatorSum(int n) : qubit_count(n) {}

    void add(double coeff, PauliString p) {
        if (static_cast<int>(p.size()) != qubit_count)
            throw config_error("term length does not match qubit count");
        terms.emplace_back(coeff, std::move(p));
    }

    void canonicalize() {
        std::map<PauliString, double> merged;
        for (auto& [c, p] : terms) merged[p] += c;
        terms.clear();
        for (auto& [p, c] : merged)
            if (c != 0.0) terms.emplace_back(c, p);
    }

    std::size_t term_count() const { return terms.size(); }
};

// Parses the term-per-line format `<coeff> <axis letters>`. Blank lines are
// skipped; the result is canonical (merged, zero terms dropped).
inline OperatorSum parse_pauli_sum(const std::string& text) {
    OperatorSum h;
    int width = -1;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        double coeff;
        std::string letters;
        if (!(ls >> coeff >> letters))
            throw config_error("parse error at line " + std::to_string(lineno));
        std::string trailing;
        if (ls >> trailing)
            throw config_error("parse error at line " + std::to_string(lineno) +
                               ": unexpected trailing input");
        PauliString p = PauliString::parse(letters);
        if (width < 0) {
            width = static_cast<int>(p.size());
            h.qubit_count = width;
        } else if (static_cast<int>(p.size()) != width) {
            throw config_error("inconsistent string length at line " + std::to_string(lineno));
        }
        h.add(coeff, std::move(p));
    }
    if (width < 0) throw config_error("empty Hamiltonian listing");
    h.canonicalize();
    return h;
}

inline double one_norm(const OperatorSum& h) {
    double s = 0;
    for (auto& [c, p] : h.terms) s += std::abs(c);
    return s;
}

inline Matrix dense_matrix(const OperatorSum& h, int dense_cap = kDenseCapDefault) {
    if (h.qubit_count > dense_cap)
        throw capability_error("dense_matrix: " + std::to_string(h.qubit_count) +
                               " qubits exceeds dense cap " + std::to_string(dense_cap));
    const auto dim = static_cast<Eigen::Index>(dim_of(h.qubit_count));
    Matrix m = Matrix::Zero(dim, dim);
    for (auto& [c, p] : h.terms) {
        // Qubit q is bit q of the index, so qubit 0 is the rightmost kron factor.
        Matrix t = Matrix::Identity(1, 1);
        for (int q = h.qubit_count - 1; q >= 0; --q) t = kron(t, pauli_matrix(p.axes[q]));
        m += c * t;
    }
    return m;
}

inline double spectral_norm(const OperatorSum& h, int dense_cap = kDenseCapDefault) {
    if (h.terms.empty()) return 0.0;
    Matrix m = dense_matrix(h, dense_cap);
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Qubit-to-node assignment. Nodes are indexed 0..gamma-1.
struct QubitPartition {
    std::vector<int> node_of;
    int gamma = 0;

    static QubitPartition from_groups(const std::vector<std::vector<int>>& groups, int qubits) {
        QubitPartition part;
        part.gamma = static_cast<int>(groups.size());
        part.node_of.assign(qubits, -1);
        for (int g = 0; g < part.gamma; ++g) {
            if (groups[g].empty()) throw config_error("partition has an empty node");
            for (int q : groups[g]) {
                if (q < 0 || q >= qubits) throw config_error("partition qubit out of range");
                if (part.node_of[q] != -1) throw config_error("qubit assigned to two nodes");
                part.node_of[q] = g;
            }
        }
        for (int q = 0; q < qubits; ++q)
            if (part.node_of[q] == -1)
                throw config_error("qubit " + std::to_string(q) + " not covered by partition");
        return part;
    }
};

// One cross-node interaction term: a single weighted Pauli string, so the
// normalized term is unitary and its norm is |coeff|.
struct InteractionTerm {
    double coeff = 0;
    PauliString pauli;
    std::vector<int> support_nodes;
};

struct ClusteredHamiltonian {
    int qubit_count = 0;
    QubitPartition partition;
    std::vector<OperatorSum> locals;           // one per node, support within the node
    std::vector<InteractionTerm> interactions; // support spans >= 2 nodes

    int gamma() const { return partition.gamma; }
    int edge_count() const { return static_cast<int>(interactions.size()); }

    OperatorSum flatten() const {
        OperatorSum h(qubit_count);
        for (auto& l : locals)
            for (auto& [c, p] : l.terms) h.add(c, p);
        for (auto& e : interactions) h.add(e.coeff, e.pauli);
        h.canonicalize();
        return h;
    }

    OperatorSum local_sum() const {
        OperatorSum h(qubit_count);
        for (auto& l : locals)
            for (auto& [c, p] : l.terms) h.add(c, p);
        h.canonicalize();
        return h;
    }
};

inline ClusteredHamiltonian cluster(const OperatorSum& h, const QubitPartition& part) {
    if (static_cast<int>(part.node_of.size()) != h.qubit_count)
        throw config_error("partition does not cover the Hamiltonian's qubits");
    ClusteredHamiltonian ch;
    ch.qubit_count = h.qubit_count;
    ch.partition = part;
    ch.locals.assign(part.gamma, OperatorSum(h.qubit_count));
    for (auto& [c, p] : h.terms) {
        std::set<int> nodes;
        for (int q : p.support()) nodes.insert(part.node_of[q]);
        if (nodes.size() <= 1) {
            int g = nodes.empty() ? 0 : *nodes.begin();
            ch.locals[g].add(c, p);
        } else {
            ch.interactions.push_back({c, p, {nodes.begin(), nodes.end()}});
        }
    }
    for (auto& l : ch.locals) l.canonicalize();
    return ch;
}

struct NestedCommutatorNorm {
    double value = 0;
    bool upper_bound = false;  // true when the enumeration cap forced a triangle bound
};

// alpha_comm,p: sum over (p+1)-tuples of summand indices {0..|E|} of the
// nested commutator norm, with index 0 standing for the whole local part.
// Exact enumeration for p <= 2 within the caps; beyond them the result is
// the 2||A||*||B|| triangle bound, flagged as an upper bound.
inline NestedCommutatorNorm nested_commutator_norm(const ClusteredHamiltonian& ch, int p,
                                                   std::uint64_t enumeration_cap = 4096,
                                                   int dense_cap = kDenseCapDefault) {
    if (p < 1) throw config_error("nested_commutator_norm: order must be >= 1");
    const int m = ch.edge_count() + 1;
    std::uint64_t tuples = 1;
    for (int i = 0; i < p + 1; ++i) tuples *= static_cast<std::uint64_t>(m);

    std::vector<double> norms(m);
    std::vector<Matrix> mats;
    const bool dense_ok = p <= 2 && ch.qubit_count <= dense_cap && tuples <= enumeration_cap;

    auto summand = [&](int e) {
        OperatorSum s(ch.qubit_count);
        if (e == 0) {
            s = ch.local_sum();
        } else {
            s.add(ch.interactions[e - 1].coeff, ch.interactions[e - 1].pauli);
        }
        return s;
    };

    if (!dense_ok) {
        // Triangle bound: ||[A,B]|| <= 2||A||*||B||, nested accordingly.
        for (int e = 0; e < m; ++e) norms[e] = spectral_norm(summand(e), dense_cap);
        double total = 0;
        std::vector<int> idx(p + 1, 0);
        for (std::uint64_t it = 0; it < tuples; ++it) {
            double bound = norms[idx[p]];
            for (int level = p - 1; level >= 0; --level) bound = 2.0 * norms[idx[level]] * bound;
            total += bound;
            for (int d = 0; d <= p && ++idx[d] == m; ++d) idx[d] = 0;
        }
        return {total, true};
    }

    mats.reserve(m);
    for (int e = 0; e < m; ++e) mats.push_back(dense_matrix(summand(e), dense_cap));

    double total = 0;
    std::vector<int> idx(p + 1, 0);
    for (std::uint64_t it = 0; it < tuples; ++it) {
        Matrix inner = mats[idx[p - 1]] * mats[idx[p]] - mats[idx[p]] * mats[idx[p - 1]];
        for (int level = p - 2; level >= 0; --level)
            inner = mats[idx[level]] * inner - inner * mats[idx[level]];
        total += matrix_norm(inner);
        for (int d = 0; d <= p && ++idx[d] == m; ++d) idx[d] = 0;
    }
    return {total, false};
}

// Induced 1-norm of a k-local sum: max over a fixed qubit of the summed
// norms of the terms touching it.
inline double induced_one_norm(const OperatorSum& h, int k) {
    std::vector<double> per_qubit(h.qubit_count, 0.0);
    for (auto& [c, p] : h.terms) {
        auto sup = p.support();
        if (static_cast<int>(sup.size()) > k)
            throw config_error("induced_one_norm: term exceeds declared locality");
        for (int q : sup) per_qubit[q] += std::abs(c);
    }
    double best = 0;
    for (double v : per_qubit) best = std::max(best, v);
    return best;
}

}  // namespace dqsim
