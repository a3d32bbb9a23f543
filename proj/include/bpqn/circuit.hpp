#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bpqn/combinatorics.hpp"
#include "bpqn/errors.hpp"

namespace bpqn {

// Reference to a circuit node: an input variable or an earlier gate.
struct NodeRef {
    enum class Kind : std::uint8_t { input, gate };

    static NodeRef input(std::size_t i) { return {Kind::input, static_cast<std::uint32_t>(i)}; }
    static NodeRef gate(std::size_t j) { return {Kind::gate, static_cast<std::uint32_t>(j)}; }

    bool is_input() const { return kind == Kind::input; }
    bool is_gate() const { return kind == Kind::gate; }

    std::string to_string(const std::vector<Subset>& input_labels) const {
        if (is_input()) return "x" + input_labels[index].to_string();
        return "t" + std::to_string(index);
    }

    friend bool operator==(const NodeRef&, const NodeRef&) = default;

    Kind kind{Kind::input};
    std::uint32_t index{0};
};

struct Gate {
    NodeRef left;
    NodeRef right;
};

struct OutputAssignment {
    Subset label;
    NodeRef node;
};

// A straight-line program of binary additions. Inputs are labeled by
// p-subsets in the column order of the target matrix, outputs by q-subsets
// in its row order. Gate operands refer only to inputs or strictly earlier
// gates, so the program is acyclic by construction. The complexity measure
// is the gate count; outputs may alias interior gates and fan-out is
// unrestricted. Append-only while being built, immutable afterwards.
class Circuit {
public:
    NodeRef add_input(const Subset& label) {
        input_labels_.push_back(label);
        return NodeRef::input(input_labels_.size() - 1);
    }

    NodeRef add_gate(NodeRef left, NodeRef right) {
        check_ref(left, gates_.size());
        check_ref(right, gates_.size());
        gates_.push_back(Gate{left, right});
        return NodeRef::gate(gates_.size() - 1);
    }

    void add_output(const Subset& label, NodeRef node) {
        check_ref(node, gates_.size());
        outputs_.push_back(OutputAssignment{label, node});
    }

    std::size_t input_count() const { return input_labels_.size(); }
    std::size_t gate_count() const { return gates_.size(); }
    std::size_t output_count() const { return outputs_.size(); }

    const std::vector<Subset>& input_labels() const { return input_labels_; }
    const std::vector<Gate>& gates() const { return gates_; }
    const std::vector<OutputAssignment>& outputs() const { return outputs_; }

private:
    void check_ref(NodeRef r, std::size_t gate_limit) const {
        if (r.is_input())
            detail::require(r.index < input_labels_.size(), "node reference to unknown input");
        else
            detail::require(r.index < gate_limit, "node reference to a not-yet-defined gate");
    }

    std::vector<Subset> input_labels_;
    std::vector<Gate> gates_;
    std::vector<OutputAssignment> outputs_;
};

// Folds the gate list over any commutative semigroup; no identity element is
// ever needed because every node combines at least one input. Works for any
// value type with a combine(a, b) operation.
template <typename T, typename Combine>
std::vector<T> evaluate(const Circuit& c, const std::vector<T>& values, Combine combine) {
    detail::require(values.size() == c.input_count(),
                    "evaluate: expected " + std::to_string(c.input_count()) + " values, got " +
                        std::to_string(values.size()));
    std::vector<T> gate_values;
    gate_values.reserve(c.gate_count());
    auto value_of = [&](NodeRef r) -> const T& {
        return r.is_input() ? values[r.index] : gate_values[r.index];
    };
    for (const Gate& g : c.gates()) gate_values.push_back(combine(value_of(g.left), value_of(g.right)));
    std::vector<T> out;
    out.reserve(c.output_count());
    for (const OutputAssignment& o : c.outputs()) out.push_back(value_of(o.node));
    return out;
}

// Multiplicity of each input variable in the linear form a node computes.
// Absent keys mean multiplicity 0. Verification demands exact 0/1 entries;
// the representation deliberately admits larger multiplicities so that a
// defective circuit (x + x) is detectable rather than unrepresentable.
struct CoefficientVector {
    std::map<std::uint32_t, BigInt> multiplicities;

    friend bool operator==(const CoefficientVector&, const CoefficientVector&) = default;

    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (const auto& [idx, mult] : multiplicities) {
            if (!first) out += ", ";
            out += std::to_string(idx) + ":" + mult.str();
            first = false;
        }
        return out + "}";
    }
};

struct CoefficientAnalysis {
    std::vector<CoefficientVector> inputs;   // unit vectors
    std::vector<CoefficientVector> gates;    // pointwise sums of operand vectors
    std::vector<CoefficientVector> outputs;  // one per output assignment

    const CoefficientVector& for_node(NodeRef r) const {
        return r.is_input() ? inputs[r.index] : gates[r.index];
    }
};

inline CoefficientAnalysis coefficient_vectors(const Circuit& c) {
    CoefficientAnalysis a;
    a.inputs.resize(c.input_count());
    for (std::size_t i = 0; i < c.input_count(); ++i)
        a.inputs[i].multiplicities[static_cast<std::uint32_t>(i)] = 1;
    a.gates.reserve(c.gate_count());
    for (const Gate& g : c.gates()) {
        CoefficientVector v = a.for_node(g.left);
        for (const auto& [idx, mult] : a.for_node(g.right).multiplicities) v.multiplicities[idx] += mult;
        a.gates.push_back(std::move(v));
    }
    a.outputs.reserve(c.output_count());
    for (const OutputAssignment& o : c.outputs()) a.outputs.push_back(a.for_node(o.node));
    return a;
}

namespace detail {

// Left-deep chain of binary adders over the given terms, in term order.
inline NodeRef chain_sum(Circuit& c, const std::vector<NodeRef>& terms) {
    require(!terms.empty(), "chain_sum over zero terms");
    NodeRef acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) acc = c.add_gate(acc, terms[i]);
    return acc;
}

// Balanced summation tree; same gate count as a chain, smaller depth.
inline NodeRef tree_sum(Circuit& c, const std::vector<NodeRef>& terms, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return terms[lo];
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    NodeRef left = tree_sum(c, terms, lo, mid);
    NodeRef right = tree_sum(c, terms, mid, hi);
    return c.add_gate(left, right);
}

inline NodeRef tree_sum(Circuit& c, const std::vector<NodeRef>& terms) {
    require(!terms.empty(), "tree_sum over zero terms");
    return tree_sum(c, terms, 0, terms.size());
}

}  // namespace detail

// Reverses every edge of the DAG: the result computes the transposed
// coefficient matrix, with old output labels as inputs and old input labels
// as outputs, and has exactly gates + outputs - inputs gates. Each original
// node's fan-out set becomes a fan-in set, realized as a left-deep chain in
// node-creation order. Requires a reduced circuit: every input feeds a gate
// or an output, every gate reaches some output, and no output aliases an
// input node directly.
inline Circuit transpose_circuit(const Circuit& c) {
    const std::size_t inputs = c.input_count();
    const std::size_t gates = c.gate_count();

    for (const OutputAssignment& o : c.outputs())
        if (o.node.is_input())
            throw contract_violation("transpose_circuit: output y" + o.label.to_string() +
                                     " aliases input " + o.node.to_string(c.input_labels()) +
                                     "; circuit is not reduced");

    // Consumers of each node, bucketed by kind, in creation order.
    std::vector<std::vector<std::size_t>> input_out_edges(inputs), gate_out_edges(gates);
    std::vector<std::vector<std::size_t>> input_out_assignments(inputs), gate_out_assignments(gates);
    for (std::size_t j = 0; j < gates; ++j) {
        for (NodeRef r : {c.gates()[j].left, c.gates()[j].right}) {
            if (r.is_input())
                input_out_edges[r.index].push_back(j);
            else
                gate_out_edges[r.index].push_back(j);
        }
    }
    for (std::size_t k = 0; k < c.output_count(); ++k) {
        NodeRef r = c.outputs()[k].node;
        if (r.is_input())
            input_out_assignments[r.index].push_back(k);
        else
            gate_out_assignments[r.index].push_back(k);
    }

    // Reachability: a gate must reach some output node.
    std::vector<char> live(gates, 0);
    for (std::size_t j = gates; j-- > 0;) {
        if (!gate_out_assignments[j].empty()) live[j] = 1;
        for (std::size_t consumer : gate_out_edges[j])
            if (live[consumer]) live[j] = 1;
    }
    for (std::size_t j = 0; j < gates; ++j)
        if (!live[j])
            throw contract_violation("transpose_circuit: gate t" + std::to_string(j) +
                                     " does not reach any output; circuit is not reduced");
    for (std::size_t i = 0; i < inputs; ++i)
        if (input_out_edges[i].empty() && input_out_assignments[i].empty())
            throw contract_violation("transpose_circuit: input x" + c.input_labels()[i].to_string() +
                                     " feeds nothing; circuit is not reduced");

    Circuit t;
    for (const OutputAssignment& o : c.outputs()) t.add_input(o.label);

    // rev(v) = sum over v's consumers of their reversed nodes; sweep gates in
    // reverse so every consumer's reversal exists first. Fan-in terms are
    // ordered by creation index in the new circuit: seed inputs first, then
    // reversed consumer gates (built from the back, hence descending index).
    std::vector<NodeRef> rev_gate(gates);
    auto reverse_node = [&](const std::vector<std::size_t>& assignments,
                            const std::vector<std::size_t>& edges) {
        std::vector<NodeRef> terms;
        for (std::size_t k : assignments) terms.push_back(NodeRef::input(k));
        // One edge entry per operand slot, so a doubled operand contributes twice.
        for (auto it = edges.rbegin(); it != edges.rend(); ++it) terms.push_back(rev_gate[*it]);
        return detail::chain_sum(t, terms);
    };
    for (std::size_t j = gates; j-- > 0;)
        rev_gate[j] = reverse_node(gate_out_assignments[j], gate_out_edges[j]);
    for (std::size_t i = 0; i < inputs; ++i)
        t.add_output(c.input_labels()[i], reverse_node(input_out_assignments[i], input_out_edges[i]));

    detail::ensure(t.gate_count() == gates + c.output_count() - inputs,
                   "transposed gate count != gates + outputs - inputs");
    return t;
}

}  // namespace bpqn
