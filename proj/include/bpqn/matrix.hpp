#pragma once

#include <cstdint>
#include <vector>

#include "bpqn/combinatorics.hpp"
#include "bpqn/errors.hpp"

namespace bpqn {

// Dense 0/1 matrix with subset-labeled rows and columns, row-major entries.
struct LabeledBooleanMatrix {
    std::vector<Subset> row_labels;
    std::vector<Subset> col_labels;
    std::vector<std::uint8_t> entries;

    std::size_t rows() const { return row_labels.size(); }
    std::size_t cols() const { return col_labels.size(); }
    std::uint8_t at(std::size_t r, std::size_t c) const { return entries[r * cols() + c]; }
    std::uint8_t& at(std::size_t r, std::size_t c) { return entries[r * cols() + c]; }

    std::size_t row_weight(std::size_t r) const {
        std::size_t w = 0;
        for (std::size_t c = 0; c < cols(); ++c) w += at(r, c);
        return w;
    }
};

// The disjointness matrix on ground set [1..n]: rows indexed by q-subsets,
// columns by p-subsets, both in lexicographic order; entry (Q,P) is 1 iff
// Q and P are disjoint. All-zero when n < p + q.
inline LabeledBooleanMatrix build_matrix(int p, int q, int n) {
    detail::require(p >= 0 && q >= 0, "build_matrix requires p, q >= 0");
    detail::require(n >= std::max(p, q), "build_matrix requires n >= max(p, q)");
    GroundSet ground(n);
    LabeledBooleanMatrix m;
    m.row_labels = enumerate_k_subsets(ground.elements(), q);
    m.col_labels = enumerate_k_subsets(ground.elements(), p);
    m.entries.assign(m.rows() * m.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c)
            m.at(r, c) = m.row_labels[r].disjoint_from(m.col_labels[c]) ? 1 : 0;
    return m;
}

inline LabeledBooleanMatrix transpose_matrix(const LabeledBooleanMatrix& m) {
    LabeledBooleanMatrix t;
    t.row_labels = m.col_labels;
    t.col_labels = m.row_labels;
    t.entries.assign(t.rows() * t.cols(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) t.at(c, r) = m.at(r, c);
    return t;
}

namespace detail {

inline bool is_prime_u32(std::uint32_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
        if (v % d == 0) return false;
    return true;
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    std::uint64_t acc = 1 % mod;
    base %= mod;
    while (exp != 0) {
        if (exp & 1) acc = acc * base % mod;
        base = base * base % mod;
        exp >>= 1;
    }
    return acc;
}

}  // namespace detail

// Rank of m over GF(prime) by Gaussian elimination. A full-rank verdict here
// certifies full rational rank, since rank can only drop under reduction
// mod p. The default certification prime at call sites is 1,000,003.
inline std::size_t rank_mod_prime(const LabeledBooleanMatrix& m, std::uint32_t prime) {
    detail::require(prime > 2 && detail::is_prime_u32(prime),
                    "rank_mod_prime requires a prime modulus > 2, got " + std::to_string(prime));
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::uint64_t> a(m.entries.begin(), m.entries.end());
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && a[pivot * cols + col] == 0) ++pivot;
        if (pivot == rows) continue;
        if (pivot != rank)
            for (std::size_t c = col; c < cols; ++c) std::swap(a[pivot * cols + c], a[rank * cols + c]);
        const std::uint64_t inv = detail::pow_mod(a[rank * cols + col], prime - 2, prime);
        for (std::size_t c = col; c < cols; ++c) a[rank * cols + c] = a[rank * cols + c] * inv % prime;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            const std::uint64_t f = a[r * cols + col];
            if (f == 0) continue;
            for (std::size_t c = col; c < cols; ++c)
                a[r * cols + c] = (a[r * cols + c] + (prime - f) * a[rank * cols + c]) % prime;
        }
        ++rank;
    }
    return rank;
}

}  // namespace bpqn
