#pragma once

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "dqsim/pauli.hpp"

namespace dqsim {

inline constexpr int kControlOwner = -1;

struct Register {
    std::string name;
    int width = 0;
    int owner = kControlOwner;  // node index, or kControlOwner for the control node
};

// Ordered named registers over a global little-endian qubit index space:
// qubit q is bit q of the amplitude index.
struct RegisterLayout {
    std::vector<Register> registers;
    int total_qubits = 0;

    int add(const std::string& name, int width, int owner = kControlOwner) {
        if (width < 1) throw config_error("register '" + name + "' must have width >= 1");
        for (auto& r : registers)
            if (r.name == name) throw config_error("duplicate register name '" + name + "'");
        if (total_qubits + width > qubit_cap())
            throw capability_error("layout exceeds the qubit cap of " +
                                   std::to_string(qubit_cap()));
        int offset = total_qubits;
        registers.push_back({name, width, owner});
        total_qubits += width;
        return offset;
    }

    const Register& find(const std::string& name) const {
        for (auto& r : registers)
            if (r.name == name) return r;
        throw config_error("no register named '" + name + "'");
    }

    int offset(const std::string& name) const {
        int off = 0;
        for (auto& r : registers) {
            if (r.name == name) return off;
            off += r.width;
        }
        throw config_error("no register named '" + name + "'");
    }
};

struct StateVector {
    RegisterLayout layout;
    std::vector<cd> amps;

    std::uint64_t dim() const { return amps.size(); }

    double norm() const {
        double s = 0;
        for (auto& a : amps) s += std::norm(a);
        return std::sqrt(s);
    }

    // -- single- and two-qubit primitives ------------------------------------

    void apply_single(int q, const Matrix& u) {
        check_qubit(q);
        const std::uint64_t bit = std::uint64_t{1} << q;
        const cd u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
        for (std::uint64_t i = 0; i < dim(); ++i) {
            if (i & bit) continue;
            cd a0 = amps[i], a1 = amps[i | bit];
            amps[i] = u00 * a0 + u01 * a1;
            amps[i | bit] = u10 * a0 + u11 * a1;
        }
    }

    void apply_h(int q) {
        static const Matrix h = (Matrix(2, 2) << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0),
                                 1 / std::sqrt(2.0), -1 / std::sqrt(2.0))
                                    .finished();
        apply_single(q, h);
    }

    void apply_x(int q) {
        check_qubit(q);
        const std::uint64_t bit = std::uint64_t{1} << q;
        for (std::uint64_t i = 0; i < dim(); ++i)
            if (!(i & bit)) std::swap(amps[i], amps[i | bit]);
    }

    // diag(1, e^{i phi}) on qubit q
    void apply_phase(int q, double phi) {
        check_qubit(q);
        const std::uint64_t bit = std::uint64_t{1} << q;
        const cd w = std::exp(cd(0, phi));
        for (std::uint64_t i = 0; i < dim(); ++i)
            if (i & bit) amps[i] *= w;
    }

    void apply_cnot(int control, int target) { apply_mcx({control}, target); }

    void apply_mcx(const std::vector<int>& controls, int target) {
        check_qubit(target);
        std::uint64_t cmask = 0;
        for (int c : controls) {
            check_qubit(c);
            cmask |= std::uint64_t{1} << c;
        }
        const std::uint64_t tbit = std::uint64_t{1} << target;
        if (cmask & tbit) throw config_error("target qubit is also a control");
        for (std::uint64_t i = 0; i < dim(); ++i)
            if ((i & cmask) == cmask && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
    }

    // Multiplies amplitudes by `factor` wherever `mask` bits of the index equal
    // `value`. Covers multi-controlled phases and projto-phase reflections.
    void apply_phase_on_mask(std::uint64_t mask, std::uint64_t value, cd factor) {
        for (std::uint64_t i = 0; i < dim(); ++i)
            if ((i & mask) == value) amps[i] *= factor;
    }

    // Dense unitary on an ordered list of target qubits (target[0] = least
    // significant bit of the local index).
    void apply_dense(const std::vector<int>& targets, const Matrix& u) {
        const int k = static_cast<int>(targets.size());
        const auto sub = static_cast<Eigen::Index>(dim_of(k));
        if (u.rows() != sub || u.cols() != sub)
            throw config_error("dense matrix does not match target count");
        std::uint64_t tmask = 0;
        for (int q : targets) {
            check_qubit(q);
            tmask |= std::uint64_t{1} << q;
        }
        std::vector<std::uint64_t> scatter(sub);
        for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(sub); ++s) {
            std::uint64_t addr = 0;
            for (int b = 0; b < k; ++b)
                if (s & (std::uint64_t{1} << b)) addr |= std::uint64_t{1} << targets[b];
            scatter[s] = addr;
        }
        Vector local(sub);
        for (std::uint64_t base = 0; base < dim(); ++base) {
            if (base & tmask) continue;
            for (Eigen::Index s = 0; s < sub; ++s) local(s) = amps[base | scatter[s]];
            local = u * local;
            for (Eigen::Index s = 0; s < sub; ++s) amps[base | scatter[s]] = local(s);
        }
    }

    // exp(-i * angle * coeff * P) exactly, using P^2 = I.
    void apply_pauli_exponential(double coeff, const PauliString& p, double angle) {
        if (p.size() != static_cast<std::size_t>(layout.total_qubits))
            throw config_error("Pauli string length does not match layout");
        const double theta = angle * coeff;
        const cd c = std::cos(theta), ms = cd(0, -std::sin(theta));
        std::uint64_t flip = 0;
        std::uint64_t zmask = 0, ymask = 0;
        for (std::size_t q = 0; q < p.size(); ++q) {
            if (p.axes[q] == 1 || p.axes[q] == 2) flip |= std::uint64_t{1} << q;
            if (p.axes[q] == 2) ymask |= std::uint64_t{1} << q;
            if (p.axes[q] == 3) zmask |= std::uint64_t{1} << q;
        }
        // P|i> = phase(i) |i ^ flip>, with phase from Z and Y factors:
        // i^{#Y} * (-1)^{#Y qubits set in i} * (-1)^{Z parity of i}.
        static const cd ipow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
        const int ycnt = std::popcount(ymask) & 3;
        auto pauli_phase = [&](std::uint64_t i) -> cd {
            cd ph = ipow[ycnt];
            if (std::popcount(i & ymask) & 1) ph = -ph;
            if (std::popcount(i & zmask) & 1) ph = -ph;
            return ph;
        };
        if (flip == 0) {
            for (std::uint64_t i = 0; i < dim(); ++i) amps[i] *= (c + ms * pauli_phase(i));
            return;
        }
        for (std::uint64_t i = 0; i < dim(); ++i) {
            std::uint64_t j = i ^ flip;
            if (j < i) continue;
            cd ai = amps[i], aj = amps[j];
            // <j|P|i> = pauli_phase(i), <i|P|j> = pauli_phase(j)
            amps[i] = c * ai + ms * pauli_phase(j) * aj;
            amps[j] = c * aj + ms * pauli_phase(i) * ai;
        }
    }

    // Applies sign * P as a basis permutation with phases (select-style action).
    void apply_pauli_string(double sign, const PauliString& p) {
        apply_controlled_pauli(0, 0, sign, p);
    }

    // Applies sign * P on amplitudes whose index matches `value` under `mask`.
    void apply_controlled_pauli(std::uint64_t mask, std::uint64_t value, double sign,
                                const PauliString& p) {
        std::uint64_t flip = 0, zmask = 0, ymask = 0;
        for (std::size_t q = 0; q < p.size(); ++q) {
            if (p.axes[q] == 1 || p.axes[q] == 2) flip |= std::uint64_t{1} << q;
            if (p.axes[q] == 2) ymask |= std::uint64_t{1} << q;
            if (p.axes[q] == 3) zmask |= std::uint64_t{1} << q;
        }
        if (flip & mask) throw config_error("controlled Pauli overlaps its control mask");
        static const cd ipow[4] = {cd(1, 0), cd(0, 1), cd(-1, 0), cd(0, -1)};
        const int ycnt = std::popcount(ymask) & 3;
        auto phase_of = [&](std::uint64_t i) -> cd {
            cd ph = ipow[ycnt] * sign;
            if (std::popcount(i & ymask) & 1) ph = -ph;
            if (std::popcount(i & zmask) & 1) ph = -ph;
            return ph;
        };
        for (std::uint64_t i = 0; i < dim(); ++i) {
            if ((i & mask) != value) continue;
            std::uint64_t j = i ^ flip;
            if (j < i) continue;
            if (i == j) {
                amps[i] *= phase_of(i);
            } else {
                cd ai = amps[i], aj = amps[j];
                amps[j] = phase_of(i) * ai;
                amps[i] = phase_of(j) * aj;
            }
        }
    }

    // -- register helpers -----------------------------------------------------

    std::uint64_t register_mask(const std::string& name) const {
        const auto& r = layout.find(name);
        return (dim_of(r.width) - 1) << layout.offset(name);
    }

    std::uint64_t register_value_bits(const std::string& name, std::uint64_t value) const {
        const auto& r = layout.find(name);
        if (value >= dim_of(r.width))
            throw config_error("value out of range for register '" + name + "'");
        return value << layout.offset(name);
    }

    // Born probability of reading `value` on the register, collapsing the state.
    double post_select(const std::string& name, std::uint64_t value) {
        const std::uint64_t mask = register_mask(name);
        const std::uint64_t bits = register_value_bits(name, value);
        double p = 0;
        for (std::uint64_t i = 0; i < dim(); ++i)
            if ((i & mask) == bits) p += std::norm(amps[i]);
        if (p < 1e-14) throw numerical_error("post-selection impossible: probability " +
                                             std::to_string(p));
        const double inv = 1.0 / std::sqrt(p);
        for (std::uint64_t i = 0; i < dim(); ++i)
            amps[i] = ((i & mask) == bits) ? amps[i] * inv : cd(0, 0);
        return p;
    }

    double probability_of(const std::string& name, std::uint64_t value) const {
        const std::uint64_t mask = register_mask(name);
        const std::uint64_t bits = register_value_bits(name, value);
        double p = 0;
        for (std::uint64_t i = 0; i < dim(); ++i)
            if ((i & mask) == bits) p += std::norm(amps[i]);
        return p;
    }

   private:
    void check_qubit(int q) const {
        if (q < 0 || q >= layout.total_qubits)
            throw config_error("qubit index " + std::to_string(q) + " out of range");
    }
};

inline StateVector allocate(const RegisterLayout& layout) {
    if (layout.total_qubits < 1) throw config_error("layout has no qubits");
    if (layout.total_qubits > qubit_cap())
        throw capability_error("layout exceeds the qubit cap of " + std::to_string(qubit_cap()));
    StateVector sv;
    sv.layout = layout;
    sv.amps.assign(dim_of(layout.total_qubits), cd(0, 0));
    sv.amps[0] = 1.0;
    return sv;
}

// Gate-level description used by circuit lists (lb_lab, tests).
struct UnitarySpec {
    enum class Kind { H, X, CNOT, MCX, Phase, PauliRotation, Dense };
    Kind kind = Kind::H;
    std::vector<int> targets;       // for MCX: controls..., target last
    double angle = 0;               // Phase / PauliRotation parameter
    double coeff = 1;               // PauliRotation weight
    PauliString pauli;              // PauliRotation string (layout-wide)
    Matrix matrix;                  // Dense payload

    static UnitarySpec dense(std::vector<int> targets, Matrix m) {
        if (!is_unitary(m)) throw config_error("explicit matrix is not unitary");
        UnitarySpec u;
        u.kind = Kind::Dense;
        u.targets = std::move(targets);
        u.matrix = std::move(m);
        return u;
    }
};

inline void apply_unitary(StateVector& sv, const UnitarySpec& u) {
    switch (u.kind) {
        case UnitarySpec::Kind::H: sv.apply_h(u.targets.at(0)); break;
        case UnitarySpec::Kind::X: sv.apply_x(u.targets.at(0)); break;
        case UnitarySpec::Kind::CNOT: sv.apply_cnot(u.targets.at(0), u.targets.at(1)); break;
        case UnitarySpec::Kind::MCX: {
            std::vector<int> ctrls(u.targets.begin(), u.targets.end() - 1);
            sv.apply_mcx(ctrls, u.targets.back());
            break;
        }
        case UnitarySpec::Kind::Phase: sv.apply_phase(u.targets.at(0), u.angle); break;
        case UnitarySpec::Kind::PauliRotation:
            sv.apply_pauli_exponential(u.coeff, u.pauli, u.angle);
            break;
        case UnitarySpec::Kind::Dense: sv.apply_dense(u.targets, u.matrix); break;
    }
}

// Exact evolution oracle: dense e^{-iHt} via eigendecomposition.
inline Matrix exact_evolution(const OperatorSum& h, double t, int dense_cap = kDenseCapDefault) {
    return hermitian_evolution(dense_matrix(h, dense_cap), t);
}

// -- binary state dump --------------------------------------------------------
// 16-byte header: magic "DQSV", u32 version, u32 total_qubits, 4 reserved bytes;
// then little-endian interleaved (re, im) doubles.

inline void dump_state(const StateVector& sv, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    const char magic[4] = {'D', 'Q', 'S', 'V'};
    std::uint32_t version = 1, qubits = static_cast<std::uint32_t>(sv.layout.total_qubits);
    std::uint32_t reserved = 0;
    out.write(magic, 4);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&qubits), 4);
    out.write(reinterpret_cast<const char*>(&reserved), 4);
    for (const cd& a : sv.amps) {
        double re = a.real(), im = a.imag();
        out.write(reinterpret_cast<const char*>(&re), 8);
        out.write(reinterpret_cast<const char*>(&im), 8);
    }
}

inline std::vector<cd> load_state_amplitudes(const std::string& path, int* qubits_out = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path + "'");
    char magic[4];
    std::uint32_t version = 0, qubits = 0, reserved = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&qubits), 4);
    in.read(reinterpret_cast<char*>(&reserved), 4);
    if (!in || std::memcmp(magic, "DQSV", 4) != 0 || version != 1)
        throw config_error("'" + path + "' is not a DQSV state dump");
    std::vector<cd> amps(dim_of(static_cast<int>(qubits)));
    for (auto& a : amps) {
        double re = 0, im = 0;
        in.read(reinterpret_cast<char*>(&re), 8);
        in.read(reinterpret_cast<char*>(&im), 8);
        a = cd(re, im);
    }
    if (!in) throw config_error("truncated state dump '" + path + "'");
    if (qubits_out) *qubits_out = static_cast<int>(qubits);
    return amps;
}

}  // namespace dqsim
