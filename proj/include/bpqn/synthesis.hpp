#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "bpqn/circuit.hpp"
#include "bpqn/combinatorics.hpp"
#include "bpqn/errors.hpp"
#include "bpqn/matrix.hpp"

namespace bpqn {

// The family <p, q, S0, S> of target sums y_Q = sum of x_{S0 u P} over all
// p-subsets P of S \ Q, one sum per q-subset Q of S. <p, q, {}, [1..n]> is
// exactly the matrix-vector product of the disjointness matrix with the
// variable vector.
struct SumFamilySpec {
    int p = 0;
    int q = 0;
    Subset prefix;  // S0, disjoint from the ground set
    Subset ground;  // S

    std::string to_string() const {
        return "<p=" + std::to_string(p) + " q=" + std::to_string(q) + " S0=" + prefix.to_string() +
               " S=" + ground.to_string() + ">";
    }
};

// Audit trail of the recursive construction: one node per family built, with
// the gates added directly by each correction step. Gates inside child
// families are attributed to the child's own node, so base gates plus step
// gates sum to the circuit's total gate count.
struct TraceNode {
    enum class Role { root, sub, part1, part2, part3 };

    SumFamilySpec spec;
    std::string kind;  // alias-input | sum-tree | permutation | prefix-suffix | recursive
    Role role = Role::root;
    std::size_t gates_substitution = 0;     // feeding rewritten sums into the sub-circuit's inputs
    std::size_t gates_part1_additions = 0;  // corrections for outputs avoiding both extremes
    std::size_t gates_part2_additions = 0;  // corrections for outputs holding exactly one extreme
    std::size_t gates_part3_additions = 0;  // corrections for outputs holding both extremes
    std::size_t gates_total = 0;
    std::vector<TraceNode> children;

    std::size_t family_gates(Role r) const {
        std::size_t sum = 0;
        for (const TraceNode& child : children)
            if (child.role == r) sum += child.gates_total;
        return sum;
    }
};

struct SynthesisTrace {
    TraceNode root;
    std::string report() const;
};

struct SynthesisResult {
    Circuit circuit;
    SynthesisTrace trace;
};

namespace detail {

using VarMap = std::unordered_map<std::uint64_t, NodeRef>;

// Decomposes the substitution sum fed into input x_{S0 u {e1} u s_part}:
// with E ascending and positions counted from 1, k is the unique value such
// that positions 2..k all lie in s_part and position k+1 does not (k = 1
// when position 2 is absent). The sum ranges over the k-subsets T of
// {E[0..k-1], E[m-1]}, each term being T u (s_part minus positions 2..k).
// Returned in lexicographic order of T; the first term is the input's own
// variable, and exactly k terms contain the largest element.
inline std::vector<Subset> step11_terms(const std::vector<int>& E, const Subset& s_part, int p) {
    const int m = static_cast<int>(E.size());
    int k = 1;
    while (k < m - 1 && s_part.contains(E[static_cast<std::size_t>(k)])) ++k;
    ensure(k <= p, "substitution run length exceeds p");
    Subset run;  // positions 2..k
    std::vector<int> t_base;
    for (int i = 0; i < k; ++i) t_base.push_back(E[static_cast<std::size_t>(i)]);
    for (int i = 1; i < k; ++i) run = run.with(E[static_cast<std::size_t>(i)]);
    t_base.push_back(E[static_cast<std::size_t>(m - 1)]);
    const Subset s_prime = s_part.minus(run);
    std::vector<Subset> terms;
    terms.reserve(static_cast<std::size_t>(k) + 1);
    for (const Subset& t : enumerate_k_subsets(t_base, k)) terms.push_back(t.unite(s_prime));
    ensure(terms.front() == s_part.with(E[0]), "first substitution term is not the input itself");
    return terms;
}

inline NodeRef lookup_var(const VarMap& vars, const Subset& prefix, const Subset& p_part) {
    auto it = vars.find(prefix.unite(p_part).mask());
    ensure(it != vars.end(), "unbound variable x" + prefix.unite(p_part).to_string());
    return it->second;
}

// Builds the family <p, q, S0, E> into the host circuit; `vars` binds every
// variable label this family may mention to a host node. Returns the output
// nodes indexed by the lexicographic rank of Q among q-subsets of E.
inline std::vector<NodeRef> build_family(Circuit& host, int p, int q, const Subset& prefix,
                                         const std::vector<int>& E, const VarMap& vars,
                                         TraceNode& trace) {
    const int m = static_cast<int>(E.size());
    ensure(m >= p + q && p >= 0 && q >= 0, "family parameters out of range");
    trace.spec = SumFamilySpec{p, q, prefix, Subset::of(E)};
    const std::size_t gates_at_entry = host.gate_count();

    std::vector<NodeRef> out;

    if (p == 0) {
        // One variable; every output aliases it.
        trace.kind = "alias-input";
        NodeRef node = lookup_var(vars, prefix, Subset{});
        out.assign(static_cast<std::size_t>(binomial_u64(m, q)), node);
    } else if (q == 0) {
        // One output: the sum of all variables, as a balanced tree.
        trace.kind = "sum-tree";
        std::vector<NodeRef> terms;
        for (const Subset& P : enumerate_k_subsets(E, p)) terms.push_back(lookup_var(vars, prefix, P));
        out.push_back(tree_sum(host, terms));
    } else if (m == p + q) {
        // Each output aliases its unique disjoint complement.
        trace.kind = "permutation";
        const Subset all = Subset::of(E);
        for (const Subset& Q : enumerate_k_subsets(E, q)) out.push_back(lookup_var(vars, prefix, all.minus(Q)));
    } else if (p == 1 && q == 1) {
        // Prefix/suffix construction with 3m - 6 gates: every output drops one
        // variable, so y_i = (x_1 + ... + x_{i-1}) + (x_{i+1} + ... + x_m).
        trace.kind = "prefix-suffix";
        auto var_at = [&](int i) { return lookup_var(vars, prefix, Subset{}.with(E[static_cast<std::size_t>(i)])); };
        std::vector<NodeRef> pref(static_cast<std::size_t>(m)), suff(static_cast<std::size_t>(m));
        pref[0] = var_at(0);
        for (int i = 1; i <= m - 2; ++i)
            pref[static_cast<std::size_t>(i)] = host.add_gate(pref[static_cast<std::size_t>(i - 1)], var_at(i));
        suff[static_cast<std::size_t>(m - 1)] = var_at(m - 1);
        for (int i = m - 2; i >= 1; --i)
            suff[static_cast<std::size_t>(i)] = host.add_gate(var_at(i), suff[static_cast<std::size_t>(i + 1)]);
        out.resize(static_cast<std::size_t>(m));
        out[0] = suff[1];
        out[static_cast<std::size_t>(m - 1)] = pref[static_cast<std::size_t>(m - 2)];
        for (int i = 1; i <= m - 2; ++i)
            out[static_cast<std::size_t>(i)] =
                host.add_gate(pref[static_cast<std::size_t>(i - 1)], suff[static_cast<std::size_t>(i + 1)]);
    } else {
        trace.kind = "recursive";
        const int e1 = E[0];
        const int en = E[static_cast<std::size_t>(m - 1)];
        const std::vector<int> E_sub(E.begin(), E.end() - 1);    // all but the largest
        const std::vector<int> E_inner(E.begin() + 1, E.end() - 1);

        // Feed every sub-circuit input whose variable contains e1 with its
        // substitution sum. Each variable containing en occurs exactly once
        // across these sums, so they cost exactly C(m-1, p-1) gates.
        VarMap vars_sub = vars;
        std::unordered_set<std::uint64_t> seen_en;
        {
            const std::size_t before = host.gate_count();
            for (const Subset& s_part : enumerate_k_subsets(E_inner, p - 1)) {
                std::vector<NodeRef> term_nodes;
                for (const Subset& term : step11_terms(E, s_part, p)) {
                    term_nodes.push_back(lookup_var(vars, prefix, term));
                    if (term.contains(en))
                        ensure(seen_en.insert(term.mask()).second,
                               "variable x" + prefix.unite(term).to_string() + " substituted twice");
                }
                vars_sub[prefix.unite(s_part.with(e1)).mask()] = chain_sum(host, term_nodes);
            }
            ensure(seen_en.size() == binomial_u64(m - 1, p - 1),
                   "substitution does not cover every variable containing the largest element");
            trace.gates_substitution = host.gate_count() - before;
            ensure(trace.gates_substitution == binomial_u64(m - 1, p - 1),
                   "substitution gate count != C(m-1, p-1)");
        }

        std::vector<NodeRef> sub_out;
        {
            TraceNode child;
            child.role = TraceNode::Role::sub;
            sub_out = build_family(host, p, q, prefix, E_sub, vars_sub, child);
            trace.children.push_back(std::move(child));
        }

        out.assign(static_cast<std::size_t>(binomial_u64(m, q)), NodeRef{});
        std::vector<char> filled(out.size(), 0);
        auto emit = [&](const Subset& Q, NodeRef node) {
            const std::size_t r = rank_subset(E, Q);
            ensure(!filled[r], "output assembled twice for y" + Q.to_string());
            filled[r] = 1;
            out[r] = node;
        };

        // Part 1: outputs avoiding both e1 and en. An output needs a
        // correction iff the run of leading absent positions is shorter
        // than p; the correcting sum lives in the family indexed by that
        // run length, at the output's index with its minimum removed.
        std::vector<std::vector<NodeRef>> corr1;
        std::vector<std::vector<int>> corr1_ground;
        for (int mk = 1; mk <= p - 1; ++mk) {
            Subset s0 = prefix.with(en);
            for (int i = 0; i < mk; ++i) s0 = s0.with(E[static_cast<std::size_t>(i)]);
            std::vector<int> ground(E.begin() + mk + 1, E.end() - 1);
            TraceNode child;
            child.role = TraceNode::Role::part1;
            corr1.push_back(build_family(host, p - mk - 1, q - 1, s0, ground, vars, child));
            corr1_ground.push_back(std::move(ground));
            trace.children.push_back(std::move(child));
        }
        {
            const std::size_t before = host.gate_count();
            for (const Subset& Q : enumerate_k_subsets(E_inner, q)) {
                const std::size_t sub_rank = rank_subset(E_sub, Q);
                int mk = 0;
                while (!Q.contains(E[static_cast<std::size_t>(mk)])) ++mk;
                if (mk >= p) {
                    emit(Q, sub_out[sub_rank]);
                } else {
                    const Subset q_rest = Q.without(E[static_cast<std::size_t>(mk)]);
                    const std::size_t corr_rank = rank_subset(corr1_ground[static_cast<std::size_t>(mk - 1)], q_rest);
                    emit(Q, host.add_gate(sub_out[sub_rank], corr1[static_cast<std::size_t>(mk - 1)][corr_rank]));
                }
            }
            trace.gates_part1_additions = host.gate_count() - before;
            ensure(BigInt(trace.gates_part1_additions) == binomial(m - 2, q) - binomial(m - p - 1, q),
                   "part-1 corrections != C(m-2,q) - C(m-p-1,q)");
        }

        // Part 2: outputs holding exactly one of e1, en. Each untouched
        // sub-output containing e1 spawns both one-extreme outputs by adding
        // the matching sums over variables containing e1 (resp. en).
        std::vector<NodeRef> corr2a, corr2b;
        for (int side = 0; side < 2; ++side) {
            TraceNode child;
            child.role = TraceNode::Role::part2;
            (side == 0 ? corr2a : corr2b) = build_family(host, p - 1, q - 1,
                                                         prefix.with(side == 0 ? e1 : en), E_inner,
                                                         vars, child);
            trace.children.push_back(std::move(child));
        }
        {
            const std::size_t before = host.gate_count();
            std::size_t idx = 0;
            for (const Subset& q_rest : enumerate_k_subsets(E_inner, q - 1)) {
                const NodeRef src = sub_out[rank_subset(E_sub, q_rest.with(e1))];
                emit(q_rest.with(en), host.add_gate(src, corr2a[idx]));
                emit(q_rest.with(e1), host.add_gate(src, corr2b[idx]));
                ++idx;
            }
            trace.gates_part2_additions = host.gate_count() - before;
            ensure(trace.gates_part2_additions == 2 * binomial_u64(m - 2, q - 1),
                   "part-2 corrections != 2 C(m-2,q-1)");
        }

        // Part 3: outputs holding both e1 and en. With k the smallest absent
        // position, the output arises from the sub-output that swaps en for
        // position k, plus the sum over variables containing position k; Q
        // maps to (k, Q restricted past position k) bijectively, so every
        // correction family output is consumed exactly once.
        std::vector<std::vector<NodeRef>> corr3;
        std::vector<std::vector<int>> corr3_ground;
        std::vector<std::vector<char>> corr3_used;
        for (int k = 2; k <= q; ++k) {
            std::vector<int> ground(E.begin() + k, E.end() - 1);
            TraceNode child;
            child.role = TraceNode::Role::part3;
            corr3.push_back(build_family(host, p - 1, q - k, prefix.with(E[static_cast<std::size_t>(k - 1)]),
                                         ground, vars, child));
            corr3_used.emplace_back(corr3.back().size(), 0);
            corr3_ground.push_back(std::move(ground));
            trace.children.push_back(std::move(child));
        }
        if (q >= 2) {
            const std::size_t before = host.gate_count();
            for (const Subset& core : enumerate_k_subsets(E_inner, q - 2)) {
                const Subset Q = core.with(e1).with(en);
                int k = 2;
                while (Q.contains(E[static_cast<std::size_t>(k - 1)])) ++k;
                ensure(k <= q, "smallest absent position exceeds q");
                const Subset U = Q.without(en).with(E[static_cast<std::size_t>(k - 1)]);
                Subset rest = Q.without(e1).without(en);
                for (int i = 1; i < k - 1; ++i) rest = rest.without(E[static_cast<std::size_t>(i)]);
                const std::size_t corr_rank = rank_subset(corr3_ground[static_cast<std::size_t>(k - 2)], rest);
                auto& used = corr3_used[static_cast<std::size_t>(k - 2)];
                ensure(!used[corr_rank], "part-3 correction consumed twice");
                used[corr_rank] = 1;
                emit(Q, host.add_gate(sub_out[rank_subset(E_sub, U)],
                                      corr3[static_cast<std::size_t>(k - 2)][corr_rank]));
            }
            trace.gates_part3_additions = host.gate_count() - before;
            ensure(trace.gates_part3_additions == binomial_u64(m - 2, q - 2),
                   "part-3 corrections != C(m-2,q-2)");
            for (const auto& used : corr3_used)
                for (char u : used) ensure(u == 1, "part-3 correction left unconsumed");
        }

        for (char f : filled) ensure(f == 1, "output left unassembled");
    }

    trace.gates_total = host.gate_count() - gates_at_entry;
    return out;
}

}  // namespace detail

// The substitution sum for input x_{{1} u S} of the one-element-smaller
// circuit, in the ground set [1..n]: requires |S| = p - 1 and S within
// [2..n-1]. The k = p case (S = [2..p]) uses the full sum over k-subsets;
// restricting to k <= p-1 would leave the variables x_{[1..p] \ {j} u {n}}
// unintroduced and break the exactly-once coverage, which build_family
// asserts at construction time.
inline std::vector<Subset> step11_substitution(const Subset& S, int p, int n) {
    detail::require(p >= 1, "step11_substitution requires p >= 1");
    detail::require(n >= 3, "step11_substitution requires n >= 3");
    detail::require(S.size() == p - 1, "step11_substitution requires |S| = p - 1");
    detail::require(S.subset_of(Subset::range(2, n - 1)), "step11_substitution requires S within [2..n-1]");
    return detail::step11_terms(GroundSet(n).elements(), S, p);
}

// Exact gate count of the recursive construction, mirroring its dissection:
// base families cost 0 (single-variable and permutation cases), C(n,p) - 1
// (single-output sum), and 3n - 6 (the p = q = 1 prefix/suffix circuit);
// a recursive level adds the substitution sums, three batches of correction
// families, and one correction gate per rewritten output.
inline BigInt recurrence_cost(int p, int q, int n) {
    detail::require(p >= 0 && q >= 0, "recurrence_cost requires p, q >= 0");
    detail::require(n >= p + q, "recurrence_cost requires n >= p + q");
    std::unordered_map<std::uint64_t, BigInt> memo;
    auto key = [](int pp, int qq, int nn) {
        return (static_cast<std::uint64_t>(pp) << 42) | (static_cast<std::uint64_t>(qq) << 21) |
               static_cast<std::uint64_t>(nn);
    };
    auto rec = [&](auto&& self, int pp, int qq, int nn) -> BigInt {
        if (pp == 0) return 0;
        if (qq == 0) return binomial(nn, pp) - 1;
        if (nn == pp + qq) return 0;
        if (pp == 1 && qq == 1) return 3 * nn - 6;
        auto it = memo.find(key(pp, qq, nn));
        if (it != memo.end()) return it->second;
        BigInt total = self(self, pp, qq, nn - 1);
        total += binomial(nn - 1, pp - 1);
        total += binomial(nn - 2, qq) - binomial(nn - pp - 1, qq);
        for (int k = 2; k <= pp; ++k) total += self(self, pp - k, qq - 1, nn - k - 1);
        total += 2 * self(self, pp - 1, qq - 1, nn - 2);
        total += 2 * binomial(nn - 2, qq - 1);
        for (int k = 2; k <= qq; ++k) total += self(self, pp - 1, qq - k, nn - k - 1);
        total += binomial(nn - 2, qq - 2);
        memo.emplace(key(pp, qq, nn), total);
        return total;
    };
    return rec(rec, p, q, n);
}

// Builds the family as a standalone circuit: inputs x_{S0 u P} in the
// lexicographic order of P, outputs y_Q in the lexicographic order of Q.
// The gate count matches synth(p, q, |ground|).
inline SynthesisResult synth_family(const SumFamilySpec& spec) {
    detail::require(spec.p >= 0 && spec.q >= 0, "synth requires p, q >= 0");
    detail::require(spec.prefix.disjoint_from(spec.ground), "family prefix must be disjoint from its ground set");
    if (spec.ground.size() < spec.p + spec.q)
        throw not_representable("n < p+q: zero matrix not representable without an identity element");

    const std::vector<int> elems = spec.ground.elements();
    SynthesisResult result;
    detail::VarMap vars;
    for (const Subset& P : enumerate_k_subsets(elems, spec.p)) {
        NodeRef ref = result.circuit.add_input(spec.prefix.unite(P));
        vars.emplace(spec.prefix.unite(P).mask(), ref);
    }
    result.trace.root.role = TraceNode::Role::root;
    std::vector<NodeRef> outs =
        detail::build_family(result.circuit, spec.p, spec.q, spec.prefix, elems, vars, result.trace.root);
    std::size_t idx = 0;
    for (const Subset& Q : enumerate_k_subsets(elems, spec.q)) result.circuit.add_output(Q, outs[idx++]);
    return result;
}

// The circuit for the disjointness matrix on [1..n]: C(n,p) inputs, C(n,q)
// outputs, and exactly recurrence_cost(p, q, n) gates.
inline SynthesisResult synth(int p, int q, int n) {
    detail::require(p >= 0 && q >= 0, "synth requires p, q >= 0");
    GroundSet ground(n);
    if (n < p + q)
        throw not_representable("n < p+q: zero matrix not representable without an identity element");
    return synth_family(SumFamilySpec{p, q, Subset{}, ground.full()});
}

// Baseline: an independent left-to-right chain per row, no sharing. Costs
// sum over rows of (weight - 1); a zero row is not representable.
inline Circuit naive_synth(const LabeledBooleanMatrix& m) {
    Circuit c;
    std::vector<NodeRef> inputs;
    inputs.reserve(m.cols());
    for (const Subset& label : m.col_labels) inputs.push_back(c.add_input(label));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        std::vector<NodeRef> terms;
        for (std::size_t col = 0; col < m.cols(); ++col)
            if (m.at(r, col)) terms.push_back(inputs[col]);
        if (terms.empty())
            throw not_representable("row y" + m.row_labels[r].to_string() +
                                    " is all zeros and has no chain");
        c.add_output(m.row_labels[r], detail::chain_sum(c, terms));
    }
    return c;
}

inline void trace_report_node(const TraceNode& node, int depth, std::string& out) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    const char* role_name = "";
    switch (node.role) {
        case TraceNode::Role::root: role_name = "family"; break;
        case TraceNode::Role::sub: role_name = "sub family"; break;
        case TraceNode::Role::part1: role_name = "part1 family"; break;
        case TraceNode::Role::part2: role_name = "part2 family"; break;
        case TraceNode::Role::part3: role_name = "part3 family"; break;
    }
    out += indent + role_name + " " + node.spec.to_string() + " [" + node.kind +
           "] gates=" + std::to_string(node.gates_total) + "\n";
    if (node.kind != "recursive") return;
    auto children_with = [&](TraceNode::Role r) {
        for (const TraceNode& child : node.children)
            if (child.role == r) trace_report_node(child, depth + 1, out);
    };
    out += indent + "  step substitute-inputs gates=" + std::to_string(node.gates_substitution) + "\n";
    children_with(TraceNode::Role::sub);
    children_with(TraceNode::Role::part1);
    out += indent + "  step part1-additions gates=" + std::to_string(node.gates_part1_additions) + "\n";
    children_with(TraceNode::Role::part2);
    out += indent + "  step part2-additions gates=" + std::to_string(node.gates_part2_additions) + "\n";
    children_with(TraceNode::Role::part3);
    out += indent + "  step part3-additions gates=" + std::to_string(node.gates_part3_additions) + "\n";
}

inline std::string SynthesisTrace::report() const {
    std::string out;
    trace_report_node(root, 0, out);
    return out;
}

}  // namespace bpqn
