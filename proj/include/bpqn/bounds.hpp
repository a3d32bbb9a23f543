#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "bpqn/combinatorics.hpp"
#include "bpqn/errors.hpp"
#include "bpqn/matrix.hpp"
#include "bpqn/synthesis.hpp"

namespace bpqn {

// Exact number of the form (a + b*sqrt(5)) / 2^e with integer a, b and a
// normalized exponent (e = 0, or a and b not both even). Closed under
// addition, multiplication and integer scaling; sign and comparisons are
// exact, via isolating sqrt(5) and squaring. No floating point is involved
// anywhere in comparisons.
class QuadraticNumber {
public:
    QuadraticNumber() = default;
    QuadraticNumber(const BigInt& integer) : a_(integer) {}
    QuadraticNumber(long long integer) : a_(integer) {}

    // (a + b*sqrt(5)) / 2
    static QuadraticNumber halves(BigInt a, BigInt b) {
        QuadraticNumber x;
        x.a_ = std::move(a);
        x.b_ = std::move(b);
        x.e_ = 1;
        x.normalize();
        return x;
    }

    const BigInt& numerator_a() const { return a_; }
    const BigInt& numerator_b() const { return b_; }
    int exponent() const { return e_; }

    // The (a, b) pair over the fixed denominator 2: value = (a + b*sqrt(5))/2.
    std::pair<BigInt, BigInt> as_halves() const {
        detail::ensure(e_ <= 1, "quadratic number has no exact representation over denominator 2");
        if (e_ == 1) return {a_, b_};
        return {a_ * 2, b_ * 2};
    }

    QuadraticNumber operator+(const QuadraticNumber& o) const {
        QuadraticNumber x;
        const int e = std::max(e_, o.e_);
        x.a_ = (a_ << (e - e_)) + (o.a_ << (e - o.e_));
        x.b_ = (b_ << (e - e_)) + (o.b_ << (e - o.e_));
        x.e_ = e;
        x.normalize();
        return x;
    }

    QuadraticNumber operator-() const {
        QuadraticNumber x = *this;
        x.a_ = -x.a_;
        x.b_ = -x.b_;
        return x;
    }

    QuadraticNumber operator-(const QuadraticNumber& o) const { return *this + (-o); }

    QuadraticNumber operator*(const QuadraticNumber& o) const {
        QuadraticNumber x;
        x.a_ = a_ * o.a_ + 5 * b_ * o.b_;
        x.b_ = a_ * o.b_ + b_ * o.a_;
        x.e_ = e_ + o.e_;
        x.normalize();
        return x;
    }

    QuadraticNumber scaled(const BigInt& c) const {
        QuadraticNumber x = *this;
        x.a_ *= c;
        x.b_ *= c;
        x.normalize();
        return x;
    }

    // Sign of a + b*sqrt(5); exact since sqrt(5) is irrational.
    int sign() const {
        const int sa = a_.sign(), sb = b_.sign();
        if (sa >= 0 && sb >= 0) return (sa == 0 && sb == 0) ? 0 : 1;
        if (sa <= 0 && sb <= 0) return -1;
        const BigInt lhs = a_ * a_, rhs = 5 * b_ * b_;
        detail::ensure(lhs != rhs, "a^2 = 5 b^2 with nonzero integers");
        if (sa > 0) return lhs > rhs ? 1 : -1;  // a > 0 > b
        return rhs > lhs ? 1 : -1;              // b > 0 > a
    }

    int compare(const QuadraticNumber& o) const { return (*this - o).sign(); }
    bool operator==(const QuadraticNumber& o) const { return compare(o) == 0; }
    bool operator<(const QuadraticNumber& o) const { return compare(o) < 0; }
    bool operator<=(const QuadraticNumber& o) const { return compare(o) <= 0; }
    bool operator>(const QuadraticNumber& o) const { return compare(o) > 0; }
    bool operator>=(const QuadraticNumber& o) const { return compare(o) >= 0; }

    double to_double() const {
        const double num = a_.convert_to<double>() + b_.convert_to<double>() * 2.2360679774997896964;
        return num / static_cast<double>(std::uint64_t{1} << e_);
    }

    // Fixed 6-decimal rendering, for display only; comparisons stay exact.
    std::string decimal() const {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f", to_double());
        return buf;
    }

    std::string to_string() const {
        return "(" + a_.str() + " + " + b_.str() + "*sqrt(5))/2^" + std::to_string(e_);
    }

private:
    void normalize() {
        while (e_ > 0 && (a_ & 1) == 0 && (b_ & 1) == 0) {
            a_ >>= 1;
            b_ >>= 1;
            --e_;
        }
    }

    BigInt a_ = 0;
    BigInt b_ = 0;
    int e_ = 0;
};

// alpha^p for alpha = (3 + sqrt(5))/2, via the integer recurrence from
// alpha^2 = 3 alpha - 1: alpha^p = u_p alpha + v_p with (u, v) stepping
// (u, v) -> (3u + v, -u).
inline QuadraticNumber alpha_power(int p) {
    detail::require(p >= 0, "alpha_power requires p >= 0");
    BigInt u = 0, v = 1;
    for (int i = 0; i < p; ++i) {
        const BigInt nu = 3 * u + v;
        v = -u;
        u = nu;
    }
    return QuadraticNumber::halves(3 * u + 2 * v, u);
}

// (alpha^p - 1) C(n,q) + alpha^q C(n,p), exactly.
inline QuadraticNumber upper_bound_theorem1(int p, int q, int n) {
    detail::require(p >= 0 && q >= 0, "upper_bound_theorem1 requires p, q >= 0");
    detail::require(n >= std::max(p, q), "upper_bound_theorem1 requires n >= max(p, q)");
    const QuadraticNumber one(1);
    return (alpha_power(p) - one).scaled(binomial(n, q)) + alpha_power(q).scaled(binomial(n, p));
}

// (q - p + 1) * sum_{k=0}^{p} C(n,k) - 2^{p+q}, clamped at 0 and valid only
// for 1 <= p <= q and n > p + q; outside that range the bound is vacuous and
// 0 is returned so tables stay total.
inline BigInt lower_bound_theorem2(int p, int q, int n) {
    if (!(1 <= p && p <= q && n > p + q)) return 0;
    BigInt sum = 0;
    for (int k = 0; k <= p; ++k) sum += binomial(n, k);
    BigInt value = (q - p + 1) * sum - (BigInt(1) << (p + q));
    return value > 0 ? value : BigInt(0);
}

// C(n,p) + sum_{k=0}^{p} (p + q - 2k + 1) C(n,k) - 2^{p+q+1}, clamped, with
// the same validity range as lower_bound_theorem2.
inline BigInt lower_bound_remark(int p, int q, int n) {
    if (!(1 <= p && p <= q && n > p + q)) return 0;
    BigInt value = binomial(n, p);
    for (int k = 0; k <= p; ++k) value += (p + q - 2 * k + 1) * binomial(n, k);
    value -= BigInt(1) << (p + q + 1);
    return value > 0 ? value : BigInt(0);
}

// Best lower bound derivable by dynamic programming from the exact bases
// (0 for single-variable and at-most-permutation sizes, C(n,p) - 1 for the
// single-sum row, 3n - 6 for the p = q = 1 circuit), the gate-elimination
// recurrence LB(p,q,n) >= LB(p,q-1,n-1) + LB(p-1,q,n-1) + C(n-1,min(p,q)),
// and the transposition shift LB(p,q,n) >= LB(q,p,n) + C(n,p) - C(n,q),
// iterated to a fixpoint level by level. `weak_base` downgrades the
// p = q = 1 base to n - 3.
inline BigInt lower_bound_lemma2_dp(int p, int q, int n, bool weak_base = false) {
    detail::require(p >= 0 && q >= 0, "lower_bound_lemma2_dp requires p, q >= 0");
    detail::require(n >= std::max(p, q), "lower_bound_lemma2_dp requires n >= max(p, q)");
    const int pq_max = std::max(p, q);
    const std::size_t stride = static_cast<std::size_t>(pq_max) + 1;
    std::vector<BigInt> table(stride * stride * static_cast<std::size_t>(n + 1));
    auto cell = [&](int pp, int qq, int nn) -> BigInt& {
        return table[(static_cast<std::size_t>(nn) * stride + static_cast<std::size_t>(pp)) * stride +
                     static_cast<std::size_t>(qq)];
    };
    auto base = [&](int pp, int qq, int nn) -> BigInt {
        if (pp == 0) return 0;
        if (qq == 0) {
            BigInt v = binomial(nn, pp) - 1;
            return v > 0 ? v : BigInt(0);
        }
        if (nn <= pp + qq) return 0;
        if (pp == 1 && qq == 1) return weak_base ? BigInt(nn - 3) : BigInt(3 * nn - 6);
        return 0;
    };
    for (int nn = 0; nn <= n; ++nn) {
        for (int pp = 0; pp <= pq_max; ++pp)
            for (int qq = 0; qq <= pq_max; ++qq) {
                BigInt v = base(pp, qq, nn);
                if (pp >= 1 && qq >= 1 && nn > pp + qq) {
                    BigInt rec = cell(pp, qq - 1, nn - 1) + cell(pp - 1, qq, nn - 1) +
                                 binomial(nn - 1, std::min(pp, qq));
                    if (rec > v) v = rec;
                }
                cell(pp, qq, nn) = v;
            }
        // Transposition closure within the level; a cycle through (q,p) and
        // back shifts by zero, so this stabilizes.
        bool changed = true;
        while (changed) {
            changed = false;
            for (int pp = 0; pp <= pq_max; ++pp)
                for (int qq = 0; qq <= pq_max; ++qq) {
                    if (nn < pp + qq) continue;
                    BigInt cand = cell(qq, pp, nn) + binomial(nn, pp) - binomial(nn, qq);
                    if (cand > cell(pp, qq, nn)) {
                        cell(pp, qq, nn) = cand;
                        changed = true;
                    }
                }
        }
    }
    return cell(p, q, n);
}

// All bound values and the synthesized/predicted gate counts for one
// (p, q, n) triple. The sandwich lower_lemma2_dp <= gates_synth <=
// upper_theorem1 and the identity gates_synth = gates_predicted are
// rechecked on construction.
struct BoundsReport {
    int p = 0, q = 0, n = 0;
    QuadraticNumber upper_theorem1;
    std::uint64_t gates_synth = 0;
    BigInt gates_predicted;
    std::uint64_t gates_naive = 0;
    BigInt lower_theorem2;
    BigInt lower_remark;
    BigInt lower_lemma2_dp;
    std::size_t rank = 0;
};

inline BoundsReport bounds_report(int p, int q, int n, bool weak_base = false,
                                  std::uint32_t prime = 1000003) {
    detail::require(p >= 0 && q >= 0 && n >= p + q, "bounds_report requires n >= p + q");
    BoundsReport r;
    r.p = p;
    r.q = q;
    r.n = n;
    const SynthesisResult synthesized = synth(p, q, n);
    const LabeledBooleanMatrix m = build_matrix(p, q, n);
    r.gates_synth = synthesized.circuit.gate_count();
    r.gates_predicted = recurrence_cost(p, q, n);
    r.gates_naive = naive_synth(m).gate_count();
    r.upper_theorem1 = upper_bound_theorem1(p, q, n);
    r.lower_theorem2 = lower_bound_theorem2(p, q, n);
    r.lower_remark = lower_bound_remark(p, q, n);
    r.lower_lemma2_dp = lower_bound_lemma2_dp(p, q, n, weak_base);
    r.rank = rank_mod_prime(m, prime);
    if (BigInt(r.gates_synth) != r.gates_predicted)
        throw bound_invariant_violation("synthesized gate count " + std::to_string(r.gates_synth) +
                                        " != predicted " + r.gates_predicted.str());
    if (r.lower_lemma2_dp > BigInt(r.gates_synth))
        throw bound_invariant_violation("lower_lemma2_dp " + r.lower_lemma2_dp.str() +
                                        " exceeds gate count " + std::to_string(r.gates_synth));
    if (QuadraticNumber(BigInt(r.gates_synth)) > r.upper_theorem1)
        throw bound_invariant_violation("gate count " + std::to_string(r.gates_synth) +
                                        " exceeds the upper bound " + r.upper_theorem1.to_string());
    return r;
}

}  // namespace bpqn
