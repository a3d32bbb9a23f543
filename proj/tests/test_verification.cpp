#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "bpqn/synthesis.hpp"
#include "bpqn/verification.hpp"

using namespace bpqn;

namespace {

// Splices one gate out of a circuit: references to it are rewired to its
// left operand, later gates shift down. Keeps the program well-formed while
// removing the right-operand contribution somewhere downstream.
Circuit splice_out_gate(const Circuit& c, std::size_t victim) {
    Circuit out;
    for (const Subset& label : c.input_labels()) out.add_input(label);
    auto remap = [&](NodeRef r) {
        if (r.is_input()) return r;
        std::size_t j = r.index;
        while (j == victim) {
            const NodeRef left = c.gates()[j].left;
            if (left.is_input()) return left;
            j = left.index;
        }
        return NodeRef::gate(j > victim ? j - 1 : j);
    };
    for (std::size_t j = 0; j < c.gate_count(); ++j) {
        if (j == victim) continue;
        out.add_gate(remap(c.gates()[j].left), remap(c.gates()[j].right));
    }
    for (const OutputAssignment& o : c.outputs()) out.add_output(o.label, remap(o.node));
    return out;
}

}  // namespace

TEST_CASE("verify_circuit") {
    SECTION("synthesized circuit passes") {
        const auto r = synth(2, 1, 5);
        const auto report = verify_circuit(r.circuit, build_matrix(2, 1, 5));
        CHECK(report.passed);
        CHECK(report.checked_outputs == 5);
        CHECK(report.mismatches.empty());
    }
    SECTION("naive baseline passes for every matrix in the grid") {
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q)
                for (int n = p + q; n <= 10; ++n) {
                    const auto m = build_matrix(p, q, n);
                    CHECK(verify_circuit(naive_synth(m), m).passed);
                }
    }
    SECTION("a doubled summand is reported with multiplicity 2") {
        Circuit c;
        NodeRef x1 = c.add_input(Subset::of({1}));
        c.add_input(Subset::of({2}));
        c.add_output(Subset::of({1}), c.add_gate(NodeRef::input(1), NodeRef::input(1)));
        c.add_output(Subset::of({2}), c.add_gate(x1, x1));
        const auto m = build_matrix(1, 1, 2);
        const auto report = verify_circuit(c, m);
        CHECK(!report.passed);
        REQUIRE(report.mismatches.size() == 2);
        CHECK(report.mismatches[1].output_label == Subset::of({2}));
        CHECK(report.mismatches[1].actual.multiplicities.at(0) == 2);
        CHECK(report.mismatches[1].expected.multiplicities.at(0) == 1);
    }
    SECTION("label disagreement is a structural error, not a failure") {
        const auto r = synth(1, 1, 4);
        CHECK_THROWS_AS(verify_circuit(r.circuit, build_matrix(1, 1, 5)), structural_error);
        CHECK_THROWS_AS(verify_circuit(r.circuit, build_matrix(2, 1, 4)), structural_error);
    }
}

TEST_CASE("random_semigroup_check") {
    SECTION("agrees for a correct circuit") {
        CHECK(random_semigroup_check(synth(1, 1, 4).circuit, build_matrix(1, 1, 4), 20, 42));
    }
    SECTION("idempotent operations mask duplicated summands") {
        // y{1} = x{2} + x{2}, y{2} = x{1} + x{1}: exact verification fails,
        // max agrees on every valuation, integer addition does not.
        Circuit c;
        NodeRef x1 = c.add_input(Subset::of({1}));
        NodeRef x2 = c.add_input(Subset::of({2}));
        c.add_output(Subset::of({1}), c.add_gate(x2, x2));
        c.add_output(Subset::of({2}), c.add_gate(x1, x1));
        const auto m = build_matrix(1, 1, 2);
        CHECK(!verify_circuit(c, m).passed);

        std::mt19937_64 rng(17);
        std::uniform_int_distribution<std::uint64_t> draw(1, 1u << 30);
        for (int t = 0; t < 20; ++t) {
            std::vector<std::uint64_t> vals = {draw(rng), draw(rng)};
            const auto maxes =
                evaluate(c, vals, [](std::uint64_t a, std::uint64_t b) { return std::max(a, b); });
            CHECK(maxes == std::vector<std::uint64_t>{vals[1], vals[0]});
            const auto sums = evaluate(c, vals, [](std::uint64_t a, std::uint64_t b) { return a + b; });
            CHECK(sums != std::vector<std::uint64_t>{vals[1], vals[0]});
        }
        // The combined check is strict because of the integer-addition lane.
        CHECK(!random_semigroup_check(c, m, 20, 42));
    }
    SECTION("a missing summand is caught by random valuations") {
        const auto good = synth(2, 1, 4).circuit;
        const auto m = build_matrix(2, 1, 4);
        bool any_passed = false;
        for (std::size_t victim = 0; victim < good.gate_count(); ++victim)
            any_passed |= random_semigroup_check(splice_out_gate(good, victim), m, 20, 42);
        CHECK(!any_passed);
    }
}

TEST_CASE("exhaustive_min_gates") {
    SECTION("the 3-element circuit needs exactly 3 gates") {
        CHECK(exhaustive_min_gates(build_matrix(1, 1, 3), 3) == 3);
    }
    SECTION("no 5-gate circuit computes the 4-element matrix") {
        CHECK(!exhaustive_min_gates(build_matrix(1, 1, 4), 5).has_value());
        CHECK(synth(1, 1, 4).circuit.gate_count() == 6);
        CHECK(exhaustive_min_gates(build_matrix(1, 1, 4), 6) == 6);
    }
    SECTION("the all-ones row needs C(4,1) - 1 gates") {
        CHECK(exhaustive_min_gates(build_matrix(1, 0, 4), 3) == 3);
    }
    SECTION("rows already at the inputs cost nothing") {
        CHECK(exhaustive_min_gates(build_matrix(0, 2, 4), 2) == 0);
    }
    SECTION("caps are enforced") {
        CHECK_THROWS_AS(exhaustive_min_gates(build_matrix(1, 1, 3), 7), contract_violation);
        CHECK_THROWS_AS(exhaustive_min_gates(build_matrix(1, 0, 5), 3), contract_violation);
    }
}

TEST_CASE("single-gate deletions never survive verification") {
    std::mt19937_64 rng(4242);
    for (int p = 0; p <= 3; ++p)
        for (int q = 0; q <= 3; ++q)
            for (int n = p + q; n <= 10; ++n) {
                const Circuit c = synth(p, q, n).circuit;
                if (c.gate_count() == 0) continue;
                const auto m = build_matrix(p, q, n);
                std::uniform_int_distribution<std::size_t> pick(0, c.gate_count() - 1);
                for (int trial = 0; trial < 5; ++trial) {
                    const Circuit mutant = splice_out_gate(c, pick(rng));
                    CHECK(!verify_circuit(mutant, m).passed);
                }
            }
}
