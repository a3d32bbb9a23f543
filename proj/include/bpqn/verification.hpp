#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bpqn/circuit.hpp"
#include "bpqn/errors.hpp"
#include "bpqn/matrix.hpp"

namespace bpqn {

struct VerificationMismatch {
    Subset output_label;
    CoefficientVector expected;
    CoefficientVector actual;
};

struct VerificationReport {
    bool passed = false;
    std::vector<VerificationMismatch> mismatches;
    std::size_t checked_outputs = 0;
};

namespace detail {

inline void require_labels_match(const Circuit& c, const LabeledBooleanMatrix& m) {
    if (c.input_labels() != m.col_labels)
        throw structural_error("circuit inputs do not match matrix columns (count " +
                               std::to_string(c.input_count()) + " vs " + std::to_string(m.cols()) + ")");
    if (c.output_count() != m.rows())
        throw structural_error("circuit outputs do not match matrix rows (count " +
                               std::to_string(c.output_count()) + " vs " + std::to_string(m.rows()) + ")");
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (!(c.outputs()[r].label == m.row_labels[r]))
            throw structural_error("output " + std::to_string(r) + " is labeled y" +
                                   c.outputs()[r].label.to_string() + ", matrix row is y" +
                                   m.row_labels[r].to_string());
}

}  // namespace detail

// The semantic gate: every output's coefficient vector must equal the 0/1
// row of the matrix exactly. A multiplicity of 2 or a stray variable fails
// here even though idempotent semigroups would mask it.
inline VerificationReport verify_circuit(const Circuit& c, const LabeledBooleanMatrix& m) {
    detail::require_labels_match(c, m);
    const CoefficientAnalysis analysis = coefficient_vectors(c);
    VerificationReport report;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        CoefficientVector expected;
        for (std::size_t col = 0; col < m.cols(); ++col)
            if (m.at(r, col)) expected.multiplicities[static_cast<std::uint32_t>(col)] = 1;
        if (!(analysis.outputs[r] == expected))
            report.mismatches.push_back({m.row_labels[r], expected, analysis.outputs[r]});
        ++report.checked_outputs;
    }
    report.passed = report.mismatches.empty() && report.checked_outputs == m.rows();
    return report;
}

// Randomized agreement between the circuit and direct row folding of the
// matrix under integer addition, integer max, and set union. Max and union
// are idempotent and therefore weaker than verify_circuit; this exercises
// the generic evaluator rather than replacing coefficient verification.
inline bool random_semigroup_check(const Circuit& c, const LabeledBooleanMatrix& m, int trials,
                                   std::uint64_t seed) {
    detail::require_labels_match(c, m);
    for (std::size_t r = 0; r < m.rows(); ++r)
        if (m.row_weight(r) == 0)
            throw not_representable("row y" + m.row_labels[r].to_string() + " is all zeros");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> draw(1, (std::uint32_t{1} << 31) - 1);

    using SortedSet = std::vector<std::uint32_t>;
    auto set_union = [](const SortedSet& a, const SortedSet& b) {
        SortedSet u;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
        return u;
    };

    for (int t = 0; t < trials; ++t) {
        std::vector<std::uint64_t> values(c.input_count());
        for (auto& v : values) v = draw(rng);

        std::vector<SortedSet> sets(c.input_count());
        for (std::size_t i = 0; i < values.size(); ++i) sets[i] = {static_cast<std::uint32_t>(values[i])};

        const auto sums = evaluate(c, values, [](std::uint64_t a, std::uint64_t b) { return a + b; });
        const auto maxima = evaluate(c, values, [](std::uint64_t a, std::uint64_t b) { return std::max(a, b); });
        const auto unions = evaluate(c, sets, set_union);

        for (std::size_t r = 0; r < m.rows(); ++r) {
            std::uint64_t sum = 0, maximum = 0;
            SortedSet un;
            bool first = true;
            for (std::size_t col = 0; col < m.cols(); ++col) {
                if (!m.at(r, col)) continue;
                if (first) {
                    sum = values[col];
                    maximum = values[col];
                    un = sets[col];
                    first = false;
                } else {
                    sum += values[col];
                    maximum = std::max(maximum, values[col]);
                    un = set_union(un, sets[col]);
                }
            }
            if (sums[r] != sum || maxima[r] != maximum || unions[r] != un) return false;
        }
    }
    return true;
}

namespace detail {

// Coefficients packed one byte per input; with at most 4 inputs and 6 gates
// no coordinate exceeds 2^6, so byte lanes never carry into each other.
using PackedVec = std::uint32_t;

inline bool search_cover(std::vector<PackedVec>& nodes, const std::vector<PackedVec>& targets,
                         std::size_t inputs, std::size_t prev_a, std::size_t prev_b,
                         std::size_t remaining) {
    std::size_t missing = 0;
    for (PackedVec t : targets)
        if (std::find(nodes.begin(), nodes.end(), t) == nodes.end()) ++missing;
    if (missing == 0) return true;
    if (missing > remaining) return false;
    const bool prev_was_gate = nodes.size() > inputs;
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        for (std::size_t b = a; b < nodes.size(); ++b) {
            // Canonical order: an operand pair independent of the previous
            // gate must be lexicographically >= the previous gate's pair.
            if (prev_was_gate && b != nodes.size() - 1 &&
                (a < prev_a || (a == prev_a && b < prev_b)))
                continue;
            const PackedVec v = nodes[a] + nodes[b];
            if (std::find(nodes.begin(), nodes.end(), v) != nodes.end()) continue;
            nodes.push_back(v);
            if (search_cover(nodes, targets, inputs, a, b, remaining - 1)) {
                nodes.pop_back();
                return true;
            }
            nodes.pop_back();
        }
    }
    return false;
}

}  // namespace detail

// Minimum g <= budget such that some g-gate SLP over the matrix's inputs
// has, among its nodes, the coefficient vector of every row exactly; absent
// when no such g exists within the budget. Depth-first enumeration over
// operand pairs with canonical pruning (nondecreasing pairs, duplicate-node
// elimination). Hard caps keep the space around 10^7: budget <= 6 and at
// most 4 inputs.
inline std::optional<std::size_t> exhaustive_min_gates(const LabeledBooleanMatrix& m, std::size_t budget) {
    detail::require(budget <= 6, "exhaustive search budget capped at 6, got " + std::to_string(budget));
    detail::require(m.cols() <= 4,
                    "exhaustive search capped at 4 inputs, got " + std::to_string(m.cols()));
    std::vector<detail::PackedVec> targets;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        detail::PackedVec v = 0;
        for (std::size_t col = 0; col < m.cols(); ++col)
            if (m.at(r, col)) v |= detail::PackedVec{1} << (8 * col);
        if (std::find(targets.begin(), targets.end(), v) == targets.end()) targets.push_back(v);
    }
    std::vector<detail::PackedVec> nodes;
    for (std::size_t i = 0; i < m.cols(); ++i) nodes.push_back(detail::PackedVec{1} << (8 * i));
    for (std::size_t g = 0; g <= budget; ++g)
        if (detail::search_cover(nodes, targets, m.cols(), 0, 0, g)) return g;
    return std::nullopt;
}

}  // namespace bpqn
