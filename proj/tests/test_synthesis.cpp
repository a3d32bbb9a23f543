#include <catch2/catch_amalgamated.hpp>

#include <functional>

#include "bpqn/synthesis.hpp"
#include "bpqn/verification.hpp"

using namespace bpqn;

namespace {

// Total of the trace entries that add gates directly: base-case bodies plus
// the per-level substitution and correction steps.
std::size_t direct_gate_entries(const TraceNode& node) {
    std::size_t sum = node.kind == "recursive"
                          ? node.gates_substitution + node.gates_part1_additions +
                                node.gates_part2_additions + node.gates_part3_additions
                          : node.gates_total;
    for (const TraceNode& child : node.children) sum += direct_gate_entries(child);
    return sum;
}

void for_each_node(const TraceNode& node, const std::function<void(const TraceNode&)>& fn) {
    fn(node);
    for (const TraceNode& child : node.children) for_each_node(child, fn);
}

}  // namespace

TEST_CASE("step11_substitution") {
    CHECK(step11_substitution(Subset::of({3}), 2, 5) ==
          std::vector<Subset>{Subset::of({1, 3}), Subset::of({3, 5})});
    CHECK(step11_substitution(Subset::of({2}), 2, 5) ==
          std::vector<Subset>{Subset::of({1, 2}), Subset::of({1, 5}), Subset::of({2, 5})});
    CHECK(step11_substitution(Subset::of({2, 4}), 3, 7) ==
          std::vector<Subset>{Subset::of({1, 2, 4}), Subset::of({1, 4, 7}), Subset::of({2, 4, 7})});
    SECTION("the full-run case uses the sum over all k-subsets") {
        // S = [2..p]: every variable containing n and missing one of [1..p]
        // appears here and nowhere else.
        const auto terms = step11_substitution(Subset::of({2}), 2, 4);
        CHECK(terms == std::vector<Subset>{Subset::of({1, 2}), Subset::of({1, 4}), Subset::of({2, 4})});
    }
    SECTION("contract violations") {
        CHECK_THROWS_AS(step11_substitution(Subset::of({3}), 3, 5), contract_violation);   // |S| != p-1
        CHECK_THROWS_AS(step11_substitution(Subset::of({4}), 2, 4), contract_violation);   // S not in [2..n-1]
        CHECK_THROWS_AS(step11_substitution(Subset::of({1}), 2, 5), contract_violation);
    }
}

TEST_CASE("synth base cases and spot values") {
    SECTION("(1,1,5): 9 gates") {
        const auto r = synth(1, 1, 5);
        CHECK(r.circuit.gate_count() == 9);
        CHECK(verify_circuit(r.circuit, build_matrix(1, 1, 5)).passed);
        CHECK(r.trace.root.kind == "prefix-suffix");
    }
    SECTION("(2,1,3): permutation, zero gates") {
        const auto r = synth(2, 1, 3);
        CHECK(r.circuit.gate_count() == 0);
        REQUIRE(r.circuit.output_count() == 3);
        // y{1} aliases x{2,3}
        CHECK(r.circuit.outputs()[0].label == Subset::of({1}));
        REQUIRE(r.circuit.outputs()[0].node.is_input());
        CHECK(r.circuit.input_labels()[r.circuit.outputs()[0].node.index] == Subset::of({2, 3}));
        CHECK(verify_circuit(r.circuit, build_matrix(2, 1, 3)).passed);
    }
    SECTION("(2,1,5): 19 gates") {
        const auto r = synth(2, 1, 5);
        CHECK(r.circuit.gate_count() == 19);
        CHECK(verify_circuit(r.circuit, build_matrix(2, 1, 5)).passed);
    }
    SECTION("(2,0,5): balanced tree over all inputs, C(5,2) - 1 gates") {
        const auto r = synth(2, 0, 5);
        CHECK(r.circuit.gate_count() == 9);
        CHECK(r.circuit.output_count() == 1);
        CHECK(verify_circuit(r.circuit, build_matrix(2, 0, 5)).passed);
    }
    SECTION("(0,2,4): every output aliases the single input") {
        const auto r = synth(0, 2, 4);
        CHECK(r.circuit.gate_count() == 0);
        CHECK(r.circuit.input_count() == 1);
        CHECK(r.circuit.output_count() == 6);
        CHECK(verify_circuit(r.circuit, build_matrix(0, 2, 4)).passed);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(synth(1, 2, 2), not_representable);
        CHECK_THROWS_AS(synth(-1, 1, 3), contract_violation);
        CHECK_THROWS_AS(synth(1, 1, 65), contract_violation);
    }
}

TEST_CASE("synth_family") {
    SECTION("<0,0,{1,5},{3,4}>: one input, one aliased output") {
        const auto r = synth_family({0, 0, Subset::of({1, 5}), Subset::of({3, 4})});
        CHECK(r.circuit.gate_count() == 0);
        REQUIRE(r.circuit.input_count() == 1);
        CHECK(r.circuit.input_labels()[0] == Subset::of({1, 5}));
        REQUIRE(r.circuit.output_count() == 1);
        CHECK(r.circuit.outputs()[0].label == Subset{});
        CHECK(r.circuit.outputs()[0].node == NodeRef::input(0));
    }
    SECTION("<1,0,{1},{2,3,4}>: x{1,2} + x{1,3} + x{1,4} in 2 gates") {
        const auto r = synth_family({1, 0, Subset::of({1}), Subset::of({2, 3, 4})});
        CHECK(r.circuit.gate_count() == 2);
        REQUIRE(r.circuit.input_count() == 3);
        CHECK(r.circuit.input_labels() ==
              std::vector<Subset>{Subset::of({1, 2}), Subset::of({1, 3}), Subset::of({1, 4})});
        const auto a = coefficient_vectors(r.circuit);
        CoefficientVector expect;
        expect.multiplicities = {{0, 1}, {1, 1}, {2, 1}};
        CHECK(a.outputs[0] == expect);
    }
    SECTION("<1,1,{},{4,6,9}>: a relabeled 3-element circuit") {
        const auto r = synth_family({1, 1, Subset{}, Subset::of({4, 6, 9})});
        CHECK(r.circuit.gate_count() == 3);
        REQUIRE(r.circuit.output_count() == 3);
        CHECK(r.circuit.outputs()[0].label == Subset::of({4}));
        // y{4} = x{6} + x{9}
        const auto a = coefficient_vectors(r.circuit);
        CoefficientVector expect;
        expect.multiplicities = {{1, 1}, {2, 1}};
        CHECK(a.outputs[0] == expect);
    }
    SECTION("prefix overlapping the ground set is a contract violation") {
        CHECK_THROWS_AS(synth_family({1, 1, Subset::of({3}), Subset::of({3, 4, 5})}), contract_violation);
    }
    SECTION("gate count matches the canonical instance") {
        const auto relabeled = synth_family({2, 1, Subset::of({11}), Subset::of({2, 5, 7, 8, 10})});
        CHECK(relabeled.circuit.gate_count() == synth(2, 1, 5).circuit.gate_count());
    }
}

TEST_CASE("naive_synth") {
    CHECK(naive_synth(build_matrix(1, 1, 4)).gate_count() == 8);
    CHECK(naive_synth(build_matrix(2, 1, 4)).gate_count() == 8);
    CHECK(naive_synth(build_matrix(0, 3, 5)).gate_count() == 0);
    CHECK_THROWS_AS(naive_synth(build_matrix(1, 2, 2)), not_representable);
    SECTION("verifies against its own matrix") {
        const auto m = build_matrix(2, 2, 6);
        CHECK(verify_circuit(naive_synth(m), m).passed);
    }
}

TEST_CASE("recurrence_cost") {
    CHECK(recurrence_cost(1, 1, 7) == 15);
    CHECK(recurrence_cost(2, 1, 4) == 8);
    CHECK(recurrence_cost(2, 1, 5) == 19);
    CHECK(recurrence_cost(0, 3, 9) == 0);
    CHECK(recurrence_cost(3, 0, 9) == binomial(9, 3) - 1);
    CHECK(recurrence_cost(2, 2, 4) == 0);
    CHECK_THROWS_AS(recurrence_cost(1, 2, 2), contract_violation);
    CHECK_THROWS_AS(recurrence_cost(-1, 0, 3), contract_violation);
}

TEST_CASE("gate count equals the predicted cost across the grid") {
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q)
            for (int n = p + q; n <= 9; ++n)
                CHECK(BigInt(synth(p, q, n).circuit.gate_count()) == recurrence_cost(p, q, n));
}

TEST_CASE("synthesis is coefficient-exact across a subgrid") {
    for (int p = 0; p <= 2; ++p)
        for (int q = 0; q <= 2; ++q)
            for (int n = p + q; n <= 8; ++n) {
                const auto r = synth(p, q, n);
                CHECK(verify_circuit(r.circuit, build_matrix(p, q, n)).passed);
            }
}

TEST_CASE("trace accounting") {
    const auto r = synth(3, 2, 8);
    SECTION("totals add up to the circuit") {
        CHECK(r.trace.root.gates_total == r.circuit.gate_count());
        CHECK(direct_gate_entries(r.trace.root) == r.circuit.gate_count());
    }
    SECTION("every recursive level satisfies the step identities") {
        for_each_node(r.trace.root, [](const TraceNode& node) {
            if (node.kind != "recursive") return;
            const int p = node.spec.p, q = node.spec.q, m = node.spec.ground.size();
            CHECK(BigInt(node.gates_substitution) == binomial(m - 1, p - 1));
            CHECK(BigInt(node.gates_part1_additions) == binomial(m - 2, q) - binomial(m - p - 1, q));
            CHECK(BigInt(node.gates_part2_additions) == 2 * binomial(m - 2, q - 1));
            CHECK(BigInt(node.gates_part3_additions) == binomial(m - 2, q - 2));
        });
    }
    SECTION("family steps match the cost recurrence term by term") {
        const TraceNode& root = r.trace.root;
        REQUIRE(root.kind == "recursive");
        const int p = root.spec.p, q = root.spec.q, n = root.spec.ground.size();
        BigInt part1 = 0, part3 = 0;
        for (int k = 2; k <= p; ++k) part1 += recurrence_cost(p - k, q - 1, n - k - 1);
        for (int k = 2; k <= q; ++k) part3 += recurrence_cost(p - 1, q - k, n - k - 1);
        CHECK(BigInt(root.family_gates(TraceNode::Role::sub)) == recurrence_cost(p, q, n - 1));
        CHECK(BigInt(root.family_gates(TraceNode::Role::part1)) == part1);
        CHECK(BigInt(root.family_gates(TraceNode::Role::part2)) == 2 * recurrence_cost(p - 1, q - 1, n - 2));
        CHECK(BigInt(root.family_gates(TraceNode::Role::part3)) == part3);
    }
    SECTION("report renders one line per family and step") {
        const std::string report = r.trace.report();
        CHECK(report.find("family <p=3 q=2 S0={} S={1,2,3,4,5,6,7,8}> [recursive]") != std::string::npos);
        CHECK(report.find("step substitute-inputs") != std::string::npos);
        CHECK(report.find("step part3-additions") != std::string::npos);
    }
}
