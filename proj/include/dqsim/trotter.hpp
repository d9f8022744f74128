#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "dqsim/run_common.hpp"

namespace dqsim {

// Product-formula schedule: ordered stages, each sweeping the summands
// {H_0, H_1..H_|E|} once with a scalar coefficient and a direction.
struct TrotterSchedule {
    struct Stage {
        double coeff = 1;     // fraction of the segment time, |coeff| <= 1
        bool reversed = false;
    };
    int order = 1;
    std::vector<Stage> stages;

    int stage_count() const { return static_cast<int>(stages.size()); }

    // Summand visit order for stage y over indices {0..m-1}.
    std::vector<int> permutation(int y, int summands) const {
        std::vector<int> perm(summands);
        std::iota(perm.begin(), perm.end(), 0);
        if (stages.at(y).reversed) std::reverse(perm.begin(), perm.end());
        return perm;
    }
};

// Suzuki construction: p=1 is a single forward sweep, p=2 the symmetric
// splitting, higher even orders the 5-block recursion with
// u_p = 1/(4 - 4^{1/(p-1)}). Stage count is 2 * 5^{p/2-1} for even p.
inline TrotterSchedule suzuki_schedule(int p) {
    if (p == 1) return {1, {{1.0, false}}};
    if (p < 1 || p % 2 != 0 || p > 4)
        throw config_error("suzuki_schedule: order must be 1, 2, or 4");

    std::function<std::vector<TrotterSchedule::Stage>(int, double)> build =
        [&](int order, double scale) -> std::vector<TrotterSchedule::Stage> {
        if (order == 2) return {{scale / 2, false}, {scale / 2, true}};
        double u = 1.0 / (4.0 - std::pow(4.0, 1.0 / (order - 1)));
        std::vector<TrotterSchedule::Stage> out;
        for (int block = 0; block < 5; ++block) {
            double s = (block == 2) ? (1 - 4 * u) * scale : u * scale;
            auto part = build(order - 2, s);
            out.insert(out.end(), part.begin(), part.end());
        }
        return out;
    };
    TrotterSchedule sched;
    sched.order = p;
    sched.stages = build(p, 1.0);
    for (auto& st : sched.stages)
        if (std::abs(st.coeff) > 1.0) throw numerical_error("stage coefficient exceeds 1");
    return sched;
}

namespace detail {

// Dense matrices of the clustered summands: index 0 is the whole local part.
inline std::vector<Matrix> summand_matrices(const ClusteredHamiltonian& ch, int dense_cap) {
    std::vector<Matrix> mats;
    mats.push_back(dense_matrix(ch.local_sum(), dense_cap));
    for (auto& e : ch.interactions) {
        OperatorSum s(ch.qubit_count);
        s.add(e.coeff, e.pauli);
        mats.push_back(dense_matrix(s, dense_cap));
    }
    return mats;
}

}  // namespace detail

// Dense realization of the full r-step schedule (oracle and error metering).
inline Matrix dpf_operator(const ClusteredHamiltonian& ch, double t, int p, int r,
                           int dense_cap = kDenseCapDefault) {
    if (r < 1) throw config_error("step count must be >= 1");
    TrotterSchedule sched = suzuki_schedule(p);
    auto mats = detail::summand_matrices(ch, dense_cap);
    const int m = static_cast<int>(mats.size());
    const auto dim = static_cast<Eigen::Index>(dim_of(ch.qubit_count));
    Matrix segment = Matrix::Identity(dim, dim);
    for (int y = 0; y < sched.stage_count(); ++y) {
        for (int e : sched.permutation(y, m)) {
            // Product applies right-to-left; earlier factors act first.
            segment = hermitian_evolution(mats[e], sched.stages[y].coeff * t / r) * segment;
        }
    }
    Matrix u = Matrix::Identity(dim, dim);
    for (int k = 0; k < r; ++k) u = segment * u;
    return u;
}

enum class StepMode { formula, empirical };

// Trotter steps needed for accuracy eps: the commutator-scaling formula with
// unit constant, or the smallest empirically sufficient r from the oracle.
inline long required_steps(const ClusteredHamiltonian& ch, int p, double t, double eps,
                           StepMode mode = StepMode::formula,
                           int dense_cap = kDenseCapDefault) {
    if (eps <= 0 || t <= 0) throw config_error("required_steps needs t > 0 and eps > 0");
    if (mode == StepMode::formula) {
        auto alpha = nested_commutator_norm(ch, p);
        double r = std::pow(alpha.value, 1.0 / p) * std::pow(t, 1.0 + 1.0 / p) /
                   std::pow(eps, 1.0 / p);
        return std::max<long>(1, static_cast<long>(std::ceil(r - 1e-12)));
    }
    Matrix exact = exact_evolution(ch.flatten(), t, dense_cap);
    auto err_at = [&](long r) {
        return operator_distance(dpf_operator(ch, t, p, static_cast<int>(r), dense_cap), exact);
    };
    long hi = 1;
    while (err_at(hi) > eps) {
        hi *= 2;
        if (hi > (1L << 22)) throw numerical_error("empirical step search did not converge");
    }
    long lo = hi / 2 + (hi == 1 ? 0 : 1);
    if (hi == 1) return 1;
    while (lo < hi) {
        long mid = lo + (hi - lo) / 2;
        if (err_at(mid) <= eps)
            hi = mid;
        else
            lo = mid + 1;
    }
    return hi;
}

// Exponential of one cross-node interaction term. The amplitude update is the
// exact Pauli rotation; the ledger charge follows the ancilla-ladder routing
// rule: the shuttle ancilla visits each support node out-and-back, in both
// the compute and the uncompute ladder, so 4 teleports per support node.
inline void interaction_exponential(StateVector& sv, const InteractionTerm& term, double angle,
                                    const NetworkTopology& net, CommLedger& ledger) {
    if (term.support_nodes.size() < 2)
        throw config_error("interaction term is confined to one node");
    if (!net.has_control)
        throw config_error("interaction exponential requires a control-assisted network");
    sv.apply_pauli_exponential(term.coeff, term.pauli, angle);
    for (int node : term.support_nodes) {
        // node indices in partitions are 0-based; topology QPUs are 1..gamma
        teleport(ledger, net, 0, node + 1, 2);  // compute ladder: out and back
        teleport(ledger, net, 0, node + 1, 2);  // uncompute ladder
    }
}

inline double predicted_cost_dpf(const ClusteredHamiltonian& ch, int p, double t, double eps,
                                 std::string* formula = nullptr) {
    if (formula)
        *formula = "|E| * Gamma * alpha_comm^(1/p) * t^(1+1/p) / eps^(1/p)  (unit constant)";
    if (ch.edge_count() == 0) return 0.0;
    auto alpha = nested_commutator_norm(ch, p);
    return ch.edge_count() * ch.gamma() * std::pow(alpha.value, 1.0 / p) *
           std::pow(t, 1.0 + 1.0 / p) / std::pow(eps, 1.0 / p);
}

struct DpfOptions {
    int p = 1;
    double t = 1.0;
    long r = 0;          // 0 means derive from eps via the formula mode
    double eps = 1e-3;
    std::uint64_t seed = 1;
    int dense_cap = kDenseCapDefault;
};

// Executes the distributed product formula on a statevector. Local summand
// exponentials are exact per-node dense evolutions with zero charge; each
// interaction exponential is charged by the ladder rule.
inline RunResult run_dpf(const OperatorSum& h, const QubitPartition& part,
                         const DpfOptions& opt, const NetworkTopology* net_in = nullptr) {
    ClusteredHamiltonian ch = cluster(h, part);
    NetworkTopology net = net_in ? *net_in : NetworkTopology::star(part.gamma);
    TrotterSchedule sched = suzuki_schedule(opt.p);
    long r = opt.r > 0 ? opt.r : required_steps(ch, opt.p, opt.t, opt.eps, StepMode::formula);

    RegisterLayout layout;
    layout.add("sys", h.qubit_count);
    StateVector sv = allocate(layout);
    seed_product_state(sv, "sys", opt.seed);

    // Per-node qubit lists and the local evolutions per stage coefficient.
    std::vector<std::vector<int>> node_qubits(part.gamma);
    for (int q = 0; q < h.qubit_count; ++q) node_qubits[part.node_of[q]].push_back(q);
    std::vector<OperatorSum> node_ops(part.gamma, OperatorSum(0));
    for (int g = 0; g < part.gamma; ++g) {
        OperatorSum reduced(static_cast<int>(node_qubits[g].size()));
        for (auto& [c, p_] : ch.locals[g].terms) {
            PauliString local(node_qubits[g].size());
            for (std::size_t i = 0; i < node_qubits[g].size(); ++i)
                local.axes[i] = p_.axes[node_qubits[g][i]];
            reduced.add(c, local);
        }
        reduced.canonicalize();
        node_ops[g] = std::move(reduced);
    }
    std::map<double, std::vector<Matrix>> local_cache;  // angle -> per-node unitaries
    auto local_evolutions = [&](double angle) -> const std::vector<Matrix>& {
        auto it = local_cache.find(angle);
        if (it != local_cache.end()) return it->second;
        std::vector<Matrix> us;
        for (int g = 0; g < part.gamma; ++g)
            us.push_back(exact_evolution(node_ops[g], angle, opt.dense_cap));
        return local_cache.emplace(angle, std::move(us)).first->second;
    };

    RunResult res;
    res.ledger.begin_phase("d-pf");
    const int m = ch.edge_count() + 1;
    for (long seg = 0; seg < r; ++seg) {
        for (int y = 0; y < sched.stage_count(); ++y) {
            double angle = sched.stages[y].coeff * opt.t / r;
            for (int e : sched.permutation(y, m)) {
                if (e == 0) {
                    const auto& us = local_evolutions(angle);
                    for (int g = 0; g < part.gamma; ++g)
                        sv.apply_dense(node_qubits[g], us[g]);
                } else {
                    interaction_exponential(sv, ch.interactions[e - 1], angle, net, res.ledger);
                }
            }
        }
    }

    res.steps_or_queries = r;
    res.predicted_cost = predicted_cost_dpf(ch, opt.p, opt.t, opt.eps, &res.predicted_formula);
    if (h.qubit_count <= opt.dense_cap) {
        Matrix exact = exact_evolution(h, opt.t, opt.dense_cap);
        Matrix impl = dpf_operator(ch, opt.t, opt.p, static_cast<int>(r), opt.dense_cap);
        res.error = operator_distance(impl, exact);
        res.error_is_operator_norm = true;
    } else {
        res.error = std::numeric_limits<double>::quiet_NaN();
    }
    res.state = std::move(sv);
    return res;
}

}  // namespace dqsim
