#include <catch2/catch_amalgamated.hpp>

#include "bpqn/bounds.hpp"

using namespace bpqn;

TEST_CASE("quadratic number arithmetic") {
    const QuadraticNumber alpha = QuadraticNumber::halves(3, 1);
    SECTION("alpha solves its quadratic") {
        CHECK(alpha * alpha == alpha.scaled(3) - QuadraticNumber(1));
    }
    SECTION("exact ordering against integers") {
        const QuadraticNumber v = QuadraticNumber::halves(20, 10);  // 10 + 5*sqrt(5)
        CHECK(v > QuadraticNumber(21));
        CHECK(v < QuadraticNumber(22));
        CHECK(QuadraticNumber(21).compare(v) < 0);
    }
    SECTION("sign with mixed components") {
        CHECK((QuadraticNumber::halves(-11, 5)).sign() > 0);   // 5*sqrt(5) > 11
        CHECK((QuadraticNumber::halves(-12, 5)).sign() < 0);   // 5*sqrt(5) < 12
        CHECK((QuadraticNumber::halves(12, -5)).sign() > 0);
        CHECK((QuadraticNumber::halves(11, -5)).sign() < 0);
        CHECK(QuadraticNumber(0).sign() == 0);
        CHECK(QuadraticNumber(-3).sign() < 0);
    }
    SECTION("halved pair is normalized back on request") {
        CHECK(QuadraticNumber(1).as_halves() == std::pair<BigInt, BigInt>(2, 0));
        CHECK(QuadraticNumber::halves(3, 1).as_halves() == std::pair<BigInt, BigInt>(3, 1));
    }
    SECTION("decimal rendering") {
        CHECK(QuadraticNumber::halves(20, 10).decimal() == "21.180340");
        CHECK(QuadraticNumber(9).decimal() == "9.000000");
    }
}

TEST_CASE("alpha powers") {
    CHECK(alpha_power(0) == QuadraticNumber(1));
    CHECK(alpha_power(1) == QuadraticNumber::halves(3, 1));
    CHECK(alpha_power(2) == QuadraticNumber::halves(7, 3));
    SECTION("power law alpha^a * alpha^b = alpha^{a+b}") {
        for (int a = 0; a <= 6; ++a)
            for (int b = 0; b <= 6; ++b) CHECK(alpha_power(a) * alpha_power(b) == alpha_power(a + b));
    }
    CHECK_THROWS_AS(alpha_power(-1), contract_violation);
}

TEST_CASE("theorem-1 upper bound values") {
    CHECK(upper_bound_theorem1(0, 0, 4) == QuadraticNumber(1));
    SECTION("(1,1,5) is 10 + 5*sqrt(5)") {
        const QuadraticNumber ub = upper_bound_theorem1(1, 1, 5);
        CHECK(ub == QuadraticNumber::halves(20, 10));
        CHECK(ub.decimal() == "21.180340");
        CHECK(QuadraticNumber(9) <= ub);
    }
    SECTION("(2,1,5) is (55 + 25*sqrt(5))/2") {
        const QuadraticNumber ub = upper_bound_theorem1(2, 1, 5);
        CHECK(ub == QuadraticNumber::halves(55, 25));
        CHECK(ub.decimal() == "55.450850");
        CHECK(QuadraticNumber(19) <= ub);
    }
}

TEST_CASE("theorem-2 lower bound") {
    CHECK(lower_bound_theorem2(1, 2, 4) == 2);
    CHECK(lower_bound_theorem2(2, 3, 6) == 12);
    CHECK(lower_bound_theorem2(2, 2, 5) == 0);
    SECTION("outside its validity range the bound is 0") {
        CHECK(lower_bound_theorem2(2, 1, 9) == 0);  // p > q
        CHECK(lower_bound_theorem2(0, 3, 9) == 0);  // p < 1
        CHECK(lower_bound_theorem2(1, 1, 2) == 0);  // n = p + q
    }
    SECTION("monotone in n at fixed p = q") {
        for (int p = 1; p <= 3; ++p) {
            BigInt prev = -1;
            for (int t = 0; t <= 10; ++t) {
                const BigInt v = lower_bound_theorem2(p, p, 2 * p + 2 + t);
                CHECK(v >= prev);
                prev = v;
            }
        }
    }
    SECTION("superlinear territory at (13,13,36)") {
        CHECK(lower_bound_theorem2(13, 13, 36) > binomial(36, 13));
    }
}

TEST_CASE("remark lower bound") {
    // C(n,p) + sum_{k<=p} (p+q-2k+1) C(n,k) - 2^{p+q+1}, clamped.
    CHECK(lower_bound_remark(1, 1, 5) == 5);    // 5 + (3 + 5) - 8
    CHECK(lower_bound_remark(1, 2, 6) == 6);    // 6 + (4 + 12) - 16
    CHECK(lower_bound_remark(1, 1, 20) == 35);  // 20 + (3 + 20) - 8
    CHECK(lower_bound_remark(1, 1, 4) == 3);    // 4 + (3 + 4) - 8
    CHECK(lower_bound_remark(1, 3, 5) == 0);    // 5 + (5 + 15) - 32 clamps at 0
    CHECK(lower_bound_remark(2, 1, 9) == 0);    // outside validity
}

TEST_CASE("gate-elimination DP lower bound") {
    CHECK(lower_bound_lemma2_dp(1, 1, 4) == 6);
    CHECK(lower_bound_lemma2_dp(1, 2, 5) == 10);
    CHECK(lower_bound_lemma2_dp(0, 3, 7) == 0);
    SECTION("transposition closure propagates across the diagonal") {
        // LB(2,1,5) = LB(1,2,5) + C(5,2) - C(5,1) = 10 + 5
        CHECK(lower_bound_lemma2_dp(2, 1, 5) == 15);
    }
    SECTION("weak base downgrades the two-parameter floor") {
        CHECK(lower_bound_lemma2_dp(1, 1, 5) == 9);
        CHECK(lower_bound_lemma2_dp(1, 1, 5, true) == 7);
    }
    SECTION("dominates the closed-form theorem-2 bound on the grid") {
        for (int p = 0; p <= 3; ++p)
            for (int q = 0; q <= 3; ++q)
                for (int n = p + q; n <= 10; ++n)
                    CHECK(lower_bound_theorem2(p, q, n) <= lower_bound_lemma2_dp(p, q, n));
    }
}

TEST_CASE("bounds_report") {
    SECTION("(1,1,5)") {
        const BoundsReport r = bounds_report(1, 1, 5);
        CHECK(r.gates_synth == 9);
        CHECK(r.gates_predicted == 9);
        CHECK(r.upper_theorem1 == QuadraticNumber::halves(20, 10));
        CHECK(r.lower_theorem2 == 2);
        CHECK(r.lower_lemma2_dp == 9);
        CHECK(r.rank == 5);
        CHECK(r.gates_naive == 15);  // 5 rows of weight 4
    }
    SECTION("(2,1,3): permutation case") {
        const BoundsReport r = bounds_report(2, 1, 3);
        CHECK(r.gates_synth == 0);
        CHECK(r.lower_theorem2 == 0);
        CHECK(r.lower_remark == 0);
        CHECK(r.lower_lemma2_dp == 0);
    }
    SECTION("(2,2,6): internally consistent") {
        const BoundsReport r = bounds_report(2, 2, 6);
        CHECK(r.lower_lemma2_dp <= BigInt(r.gates_synth));
        CHECK(QuadraticNumber(BigInt(r.gates_synth)) <= r.upper_theorem1);
        CHECK(BigInt(r.gates_synth) == r.gates_predicted);
    }
    CHECK_THROWS_AS(bounds_report(1, 2, 2), contract_violation);
}
