#pragma once

#include <algorithm>
#include <map>
#include <queue>
#include <string>
#include <vector>

#include "dqsim/statevector.hpp"

namespace dqsim {

// Node 0 is the control node (when present); QPUs are 1..gamma.
struct NetworkTopology {
    enum class Kind { star, chain, custom };
    Kind kind = Kind::star;
    int gamma = 0;
    bool has_control = true;
    std::vector<std::pair<int, int>> channels;  // undirected, normalized a < b

    static NetworkTopology star(int gamma) {
        NetworkTopology t;
        t.kind = Kind::star;
        t.gamma = gamma;
        t.has_control = true;
        for (int g = 1; g <= gamma; ++g) t.channels.emplace_back(0, g);
        return t;
    }

    // QPUs 1..gamma in a line, no control node; node 1 acts as the source.
    static NetworkTopology chain(int gamma) {
        NetworkTopology t;
        t.kind = Kind::chain;
        t.gamma = gamma;
        t.has_control = false;
        for (int g = 1; g < gamma; ++g) t.channels.emplace_back(g, g + 1);
        return t;
    }

    static NetworkTopology custom(int gamma, std::vector<std::pair<int, int>> edges,
                                  bool has_control) {
        NetworkTopology t;
        t.kind = Kind::custom;
        t.gamma = gamma;
        t.has_control = has_control;
        for (auto [a, b] : edges) t.channels.emplace_back(std::min(a, b), std::max(a, b));
        t.require_connected();
        return t;
    }

    bool has_channel(int a, int b) const {
        if (a > b) std::swap(a, b);
        return std::find(channels.begin(), channels.end(), std::make_pair(a, b)) !=
               channels.end();
    }

    std::vector<int> all_nodes() const {
        std::vector<int> nodes;
        if (has_control) nodes.push_back(0);
        for (int g = 1; g <= gamma; ++g) nodes.push_back(g);
        return nodes;
    }

    void require_connected() const {
        auto nodes = all_nodes();
        if (nodes.empty()) throw config_error("topology has no nodes");
        std::map<int, bool> seen;
        std::queue<int> q;
        q.push(nodes.front());
        seen[nodes.front()] = true;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            for (auto [a, b] : channels) {
                int v = (a == u) ? b : (b == u ? a : -1);
                if (v >= 0 && !seen[v]) {
                    seen[v] = true;
                    q.push(v);
                }
            }
        }
        for (int n : nodes)
            if (!seen[n]) throw config_error("topology is not connected");
    }
};

struct CommCounters {
    long qubits = 0;
    long cbits = 0;
};

// Exact teleportation bookkeeping: every logical qubit moved costs one qubit
// of quantum communication and two classical bits. Pre-shared entanglement
// is not itself charged.
struct CommLedger {
    std::map<std::pair<int, int>, CommCounters> per_channel;
    std::map<std::string, CommCounters> per_phase;
    long rounds = 0;
    std::string phase = "default";

    void begin_phase(const std::string& name) {
        phase = name;
        ++rounds;
    }

    void charge(std::pair<int, int> channel, long qubits) {
        if (qubits < 0) throw config_error("negative teleport count");
        if (qubits == 0) return;
        if (channel.first > channel.second) std::swap(channel.first, channel.second);
        auto& c = per_channel[channel];
        c.qubits += qubits;
        c.cbits += 2 * qubits;
        auto& p = per_phase[phase];
        p.qubits += qubits;
        p.cbits += 2 * qubits;
    }

    CommCounters totals() const {
        CommCounters t;
        for (auto& [ch, c] : per_channel) {
            t.qubits += c.qubits;
            t.cbits += c.cbits;
        }
        return t;
    }
};

inline void teleport(CommLedger& ledger, const NetworkTopology& net, int a, int b,
                     long qubit_count) {
    if (!net.has_channel(a, b))
        throw config_error("no channel between node " + std::to_string(a) + " and node " +
                           std::to_string(b));
    ledger.charge({a, b}, qubit_count);
}

// Ordered channel traversals that carry a repetition copy to every QPU.
struct DistributionPlan {
    int source = 0;
    int width = 0;
    std::vector<std::pair<int, int>> route;  // (from, to) in traversal order
};

// BFS spanning tree rooted at the source; every tree edge is traversed once
// per distribution, so a star sourced at control charges gamma * w and a
// chain sourced at an endpoint charges (gamma - 1) * w.
inline DistributionPlan plan_distribution(const NetworkTopology& net, int source, int width) {
    net.require_connected();
    DistributionPlan plan;
    plan.source = source;
    plan.width = width;
    std::map<int, bool> seen;
    seen[source] = true;
    std::queue<int> q;
    q.push(source);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (auto [a, b] : net.channels) {
            int v = (a == u) ? b : (b == u ? a : -1);
            if (v < 0 || seen[v]) continue;
            seen[v] = true;
            plan.route.emplace_back(u, v);
            q.push(v);
        }
    }
    for (int g = 1; g <= net.gamma; ++g)
        if (!seen[g]) throw config_error("distribution cannot reach node " + std::to_string(g));
    return plan;
}

// Weighted basis values distributed as a repetition code: the global ancilla
// state becomes sum_j beta_j |j>^{x gamma} with one w-qubit copy per node.
struct RepetitionWeights {
    std::vector<std::pair<std::uint64_t, cd>> entries;  // (value, amplitude)
    int width = 0;

    void validate() const {
        double n2 = 0;
        for (auto& [v, a] : entries) {
            if (v >= dim_of(width)) throw config_error("repetition value exceeds width");
            n2 += std::norm(a);
        }
        if (std::abs(n2 - 1.0) > 1e-10) throw config_error("repetition weights not normalized");
    }

    Vector prep_column() const {
        Vector col = Vector::Zero(static_cast<Eigen::Index>(dim_of(width)));
        for (auto& [v, a] : entries) col(static_cast<Eigen::Index>(v)) = a;
        return col;
    }
};

namespace detail {

inline std::vector<int> register_qubits(const StateVector& sv, const std::string& name) {
    const auto& r = sv.layout.find(name);
    std::vector<int> qs(r.width);
    int off = sv.layout.offset(name);
    for (int i = 0; i < r.width; ++i) qs[i] = off + i;
    return qs;
}

}  // namespace detail

// Prepares the repetition state on the named copy registers (one per QPU, in
// node order) and charges the ledger per the plan. The circuit is a local
// state prep on the first copy followed by CNOT fan-outs; movement itself is
// only bookkeeping because registers are logical.
inline void distribute_repetition_state(StateVector& sv,
                                        const std::vector<std::string>& copy_regs,
                                        const RepetitionWeights& weights,
                                        const NetworkTopology& net, CommLedger& ledger,
                                        int source = -1) {
    weights.validate();
    if (copy_regs.size() != static_cast<std::size_t>(net.gamma))
        throw config_error("expected one copy register per node");
    if (source < 0) source = net.has_control ? 0 : 1;
    DistributionPlan plan = plan_distribution(net, source, weights.width);

    auto first = detail::register_qubits(sv, copy_regs.front());
    sv.apply_dense(first, prep_unitary(weights.prep_column()));
    for (std::size_t g = 1; g < copy_regs.size(); ++g) {
        auto prev = detail::register_qubits(sv, copy_regs[g - 1]);
        auto next = detail::register_qubits(sv, copy_regs[g]);
        for (int b = 0; b < weights.width; ++b) sv.apply_cnot(prev[b], next[b]);
    }
    for (auto [a, b] : plan.route) teleport(ledger, net, a, b, weights.width);
}

// Return leg, the exact inverse of distribute: the copies travel back and the
// fan-out and prep are undone at the source. Charges mirror the outbound leg.
inline void collect_repetition_state(StateVector& sv, const std::vector<std::string>& copy_regs,
                                     const RepetitionWeights& weights,
                                     const NetworkTopology& net, CommLedger& ledger,
                                     int source = -1) {
    if (source < 0) source = net.has_control ? 0 : 1;
    DistributionPlan plan = plan_distribution(net, source, weights.width);
    for (std::size_t g = copy_regs.size(); g-- > 1;) {
        auto prev = detail::register_qubits(sv, copy_regs[g - 1]);
        auto next = detail::register_qubits(sv, copy_regs[g]);
        for (int b = weights.width; b-- > 0;) sv.apply_cnot(prev[b], next[b]);
    }
    auto first = detail::register_qubits(sv, copy_regs.front());
    sv.apply_dense(first, prep_unitary(weights.prep_column()).adjoint());
    for (auto it = plan.route.rbegin(); it != plan.route.rend(); ++it)
        teleport(ledger, net, it->first, it->second, weights.width);
}

struct CommReport {
    CommCounters total;
    std::vector<std::pair<std::string, CommCounters>> phases;
    std::vector<std::pair<std::pair<int, int>, CommCounters>> channels;
    long rounds = 0;
};

inline CommReport ledger_report(const CommLedger& ledger) {
    CommReport rep;
    rep.total = ledger.totals();
    rep.rounds = ledger.rounds;
    for (auto& [name, c] : ledger.per_phase) rep.phases.emplace_back(name, c);
    for (auto& [ch, c] : ledger.per_channel) rep.channels.emplace_back(ch, c);
    return rep;
}

}  // namespace dqsim
