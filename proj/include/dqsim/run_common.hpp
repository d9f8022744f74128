#pragma once

#include <optional>
#include <random>
#include <string>

#include "dqsim/network.hpp"

namespace dqsim {

// Outcome of one protocol run: output state, measured error against the
// exact-evolution oracle, the communication ledger, and the closed-form
// cost prediction it is compared against.
struct RunResult {
    StateVector state;
    double error = 0;                  // operator distance when dense cap allows, else state distance
    bool error_is_operator_norm = false;
    CommLedger ledger;
    double predicted_cost = 0;
    std::string predicted_formula;
    long steps_or_queries = 0;
    double extra = 0;                  // protocol-specific scalar (e.g. success probability)
};

// Deterministic pseudo-random product input state over the system register.
inline void seed_product_state(StateVector& sv, const std::string& system_reg,
                               std::uint64_t seed) {
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    const auto& reg = sv.layout.find(system_reg);
    int off = sv.layout.offset(system_reg);
    for (int q = 0; q < reg.width; ++q) {
        double theta = dist(rng) * kPi;
        double phi = dist(rng) * 2 * kPi;
        Matrix u(2, 2);
        u << std::cos(theta / 2), -std::sin(theta / 2),
            std::exp(cd(0, phi)) * std::sin(theta / 2),
            std::exp(cd(0, phi)) * std::cos(theta / 2);
        sv.apply_single(off + q, u);
    }
}

// || |psi> - e^{i arg} |phi> || minimized over the global phase.
inline double state_distance_up_to_phase(const std::vector<cd>& a, const std::vector<cd>& b) {
    cd overlap = 0;
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(b[i]) * a[i];
    double mag = std::abs(overlap);
    cd align = (mag > 1e-300) ? overlap / mag : cd(1, 0);
    double d2 = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += std::norm(a[i] - align * b[i]);
    return std::sqrt(d2);
}

inline double fidelity(const std::vector<cd>& a, const std::vector<cd>& b) {
    cd overlap = 0;
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(b[i]) * a[i];
    return std::norm(overlap);
}

}  // namespace dqsim
