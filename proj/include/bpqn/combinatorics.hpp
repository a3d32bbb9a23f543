#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bpqn/errors.hpp"

namespace bpqn {

using BigInt = boost::multiprecision::cpp_int;

// A finite set of integers from [1..64], stored as a bit mask (element e is
// bit e-1). Canonical text form: ascending, comma-separated, brace-delimited,
// no whitespace, e.g. {1,3,7}.
class Subset {
public:
    constexpr Subset() = default;

    static Subset from_mask(std::uint64_t bits) { return Subset(bits); }

    static Subset of(std::initializer_list<int> elems) {
        Subset s;
        for (int e : elems) s = s.with(e);
        return s;
    }

    static Subset of(const std::vector<int>& elems) {
        Subset s;
        for (int e : elems) s = s.with(e);
        return s;
    }

    // {lo..hi}; empty when lo > hi.
    static Subset range(int lo, int hi) {
        Subset s;
        for (int e = lo; e <= hi; ++e) s = s.with(e);
        return s;
    }

    bool contains(int e) const { return e >= 1 && e <= 64 && (bits_ >> (e - 1)) & 1u; }

    Subset with(int e) const {
        detail::require(e >= 1 && e <= 64, "subset element out of [1..64]: " + std::to_string(e));
        return Subset(bits_ | (std::uint64_t{1} << (e - 1)));
    }

    Subset without(int e) const {
        detail::require(e >= 1 && e <= 64, "subset element out of [1..64]: " + std::to_string(e));
        return Subset(bits_ & ~(std::uint64_t{1} << (e - 1)));
    }

    Subset unite(const Subset& o) const { return Subset(bits_ | o.bits_); }
    Subset intersect(const Subset& o) const { return Subset(bits_ & o.bits_); }
    Subset minus(const Subset& o) const { return Subset(bits_ & ~o.bits_); }

    bool disjoint_from(const Subset& o) const { return (bits_ & o.bits_) == 0; }
    bool subset_of(const Subset& o) const { return (bits_ & ~o.bits_) == 0; }

    int size() const { return std::popcount(bits_); }
    bool empty() const { return bits_ == 0; }

    int min_element() const {
        detail::require(bits_ != 0, "min_element of empty subset");
        return std::countr_zero(bits_) + 1;
    }

    int max_element() const {
        detail::require(bits_ != 0, "max_element of empty subset");
        return 64 - std::countl_zero(bits_);
    }

    std::vector<int> elements() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(size()));
        for (std::uint64_t m = bits_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
        return out;
    }

    std::string to_string() const {
        std::string out = "{";
        bool first = true;
        for (std::uint64_t m = bits_; m != 0; m &= m - 1) {
            if (!first) out += ',';
            out += std::to_string(std::countr_zero(m) + 1);
            first = false;
        }
        out += '}';
        return out;
    }

    // Strict inverse of to_string(); rejects whitespace, descending order,
    // duplicates, leading zeros.
    static Subset parse(std::string_view text) {
        if (text.size() < 2 || text.front() != '{' || text.back() != '}')
            throw contract_violation("subset literal must be brace-delimited: " + std::string(text));
        std::string_view body = text.substr(1, text.size() - 2);
        Subset s;
        if (body.empty()) return s;
        int prev = 0;
        std::size_t i = 0;
        while (i < body.size()) {
            std::size_t j = i;
            while (j < body.size() && body[j] >= '0' && body[j] <= '9') ++j;
            if (j == i) throw contract_violation("bad subset element in " + std::string(text));
            if (body[i] == '0') throw contract_violation("leading zero in subset element: " + std::string(text));
            int value = 0;
            for (std::size_t t = i; t < j; ++t) {
                value = value * 10 + (body[t] - '0');
                if (value > 64) throw contract_violation("subset element out of [1..64]: " + std::string(text));
            }
            if (value <= prev)
                throw contract_violation("subset elements must be strictly ascending: " + std::string(text));
            s = s.with(value);
            prev = value;
            if (j == body.size()) break;
            if (body[j] != ',') throw contract_violation("expected ',' in subset literal: " + std::string(text));
            i = j + 1;
            if (i == body.size()) throw contract_violation("trailing ',' in subset literal: " + std::string(text));
        }
        return s;
    }

    std::uint64_t mask() const { return bits_; }

    friend bool operator==(const Subset&, const Subset&) = default;

private:
    constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}
    std::uint64_t bits_ = 0;
};

// Lexicographic order on ascending element lists ({1,4} before {2,3}).
inline bool lex_less(const Subset& a, const Subset& b) {
    std::uint64_t x = a.mask(), y = b.mask();
    while (x != 0 && y != 0) {
        int ea = std::countr_zero(x), eb = std::countr_zero(y);
        if (ea != eb) return ea < eb;
        x &= x - 1;
        y &= y - 1;
    }
    return x == 0 && y != 0;
}

// The ground set [1..n]. Circuits and matrices over it use subsets of [1..n]
// exclusively. n = 0 (empty ground set) is permitted.
struct GroundSet {
    explicit GroundSet(int n_) : n(n_) {
        detail::require(n_ >= 0 && n_ <= 64, "ground set size out of [0..64]: " + std::to_string(n_));
    }
    Subset full() const { return Subset::range(1, n); }
    std::vector<int> elements() const {
        std::vector<int> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = i + 1;
        return out;
    }
    int n;
};

namespace detail {

// C(n,k) for n <= 64 fits in 64 bits (max C(64,32) < 2^61).
inline std::uint64_t binomial_u64(int n, int k) {
    static const auto table = [] {
        std::array<std::array<std::uint64_t, 65>, 65> t{};
        for (int i = 0; i <= 64; ++i) {
            t[static_cast<std::size_t>(i)][0] = 1;
            for (int j = 1; j <= i; ++j)
                t[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                    (j <= i - 1 ? t[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)] : 0);
        }
        return t;
    }();
    if (k < 0 || k > n) return 0;
    return table[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
}

}  // namespace detail

// C(n,k); zero when k < 0 or k > n, so that recurrence terms like C(n-2,q-2)
// vanish at q = 1. Negative n is a contract violation.
inline BigInt binomial(int n, int k) {
    detail::require(n >= 0, "binomial requires n >= 0, got n = " + std::to_string(n));
    if (k < 0 || k > n) return 0;
    if (n <= 64) return BigInt(detail::binomial_u64(n, k));
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

// All k-subsets of `ground` (strictly ascending elements from [1..64]) in
// lexicographic order of their ascending element lists. k > |ground| yields
// the empty list; k = 0 yields the single empty subset.
inline std::vector<Subset> enumerate_k_subsets(const std::vector<int>& ground, int k) {
    detail::require(k >= 0, "k-subset enumeration requires k >= 0");
    const int m = static_cast<int>(ground.size());
    for (int i = 0; i < m; ++i) {
        detail::require(ground[static_cast<std::size_t>(i)] >= 1 && ground[static_cast<std::size_t>(i)] <= 64,
                        "ground element out of [1..64]");
        detail::require(i == 0 || ground[static_cast<std::size_t>(i - 1)] < ground[static_cast<std::size_t>(i)],
                        "ground must be strictly ascending");
    }
    std::vector<Subset> out;
    if (k > m) return out;
    out.reserve(static_cast<std::size_t>(detail::binomial_u64(m, k)));
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
        Subset s;
        for (int i = 0; i < k; ++i) s = s.with(ground[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])]);
        out.push_back(s);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

// Position of s in enumerate_k_subsets(ground, |s|).
inline std::size_t rank_subset(const std::vector<int>& ground, const Subset& s) {
    const int m = static_cast<int>(ground.size());
    const int k = s.size();
    std::vector<int> pos;
    pos.reserve(static_cast<std::size_t>(k));
    {
        Subset seen;
        for (int i = 0; i < m; ++i) {
            int e = ground[static_cast<std::size_t>(i)];
            if (s.contains(e)) {
                pos.push_back(i);
                seen = seen.with(e);
            }
        }
        detail::require(seen == s, "rank_subset: subset has elements outside the ground list");
    }
    std::uint64_t r = 0;
    int prev = -1;
    for (int t = 0; t < k; ++t) {
        for (int j = prev + 1; j < pos[static_cast<std::size_t>(t)]; ++j)
            r += detail::binomial_u64(m - 1 - j, k - 1 - t);
        prev = pos[static_cast<std::size_t>(t)];
    }
    return static_cast<std::size_t>(r);
}

// Inverse of rank_subset at fixed k; 0 <= r < C(|ground|, k) required.
inline Subset unrank_subset(const std::vector<int>& ground, int k, std::size_t r) {
    const int m = static_cast<int>(ground.size());
    detail::require(k >= 0, "unrank_subset requires k >= 0");
    detail::require(r < detail::binomial_u64(m, k), "unrank_subset: rank out of range");
    Subset s;
    std::uint64_t rr = r;
    int j = 0;
    for (int t = 0; t < k; ++t) {
        while (true) {
            std::uint64_t c = detail::binomial_u64(m - 1 - j, k - 1 - t);
            if (rr < c) break;
            rr -= c;
            ++j;
        }
        s = s.with(ground[static_cast<std::size_t>(j)]);
        ++j;
    }
    return s;
}

}  // namespace bpqn
