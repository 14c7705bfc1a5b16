#pragma once

// Brute-force ground truth for small instances. Nothing here calls into the
// entropy engine; k-gram multisets and determinants are recomputed directly.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "alphabet.hpp"
#include "quiver.hpp"

namespace dbent::oracle {

using big_int = boost::multiprecision::cpp_int;

inline constexpr double default_enumeration_limit = 1e7;
inline constexpr std::size_t default_circuit_edge_limit = 14;

/// Lexicographically least rotation.
inline std::vector<symbol_index> least_rotation(std::span<const symbol_index> w) {
    const std::size_t n = w.size();
    std::size_t best = 0;
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto a = w[(r + j) % n], b = w[(best + j) % n];
            if (a != b) {
                if (a < b) best = r;
                break;
            }
        }
    }
    std::vector<symbol_index> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = w[(best + j) % n];
    return out;
}

inline bool is_least_rotation(std::span<const symbol_index> w) {
    const std::size_t n = w.size();
    for (std::size_t r = 1; r < n; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            const auto a = w[(r + j) % n], b = w[j];
            if (a != b) {
                if (a < b) return false;
                break;
            }
        }
    }
    return true;
}

/// Sorted multiset of cyclic (k+1)-grams, which determines the order-k quiver.
inline std::vector<std::vector<symbol_index>> cyclic_grams(std::span<const symbol_index> w, std::size_t k) {
    std::vector<std::vector<symbol_index>> grams(w.size(), std::vector<symbol_index>(k + 1));
    for (std::size_t j = 0; j < w.size(); ++j)
        for (std::size_t i = 0; i <= k; ++i) grams[j][i] = w[(j + i) % w.size()];
    std::sort(grams.begin(), grams.end());
    return grams;
}

struct ClassEnumeration {
    std::vector<symbol_index> representative;  ///< least rotation of the input
    std::size_t k = 0;
    std::vector<std::vector<symbol_index>> members;  ///< least rotations, ascending
    std::size_t count = 0;
};

/// All cyclic words sharing the order-k quiver of `w`. Candidates are the
/// distinct permutations of w's symbols (the quiver fixes symbol counts).
inline ClassEnumeration enumerate_class(const CyclicWord& w, std::size_t k,
                                        double limit = default_enumeration_limit) {
    if (k < 1 || k >= w.length()) throw std::invalid_argument("order k must satisfy 1 <= k < length");
    std::vector<symbol_index> perm(w.indices().begin(), w.indices().end());
    std::sort(perm.begin(), perm.end());

    // Multinomial ell! / prod(c_i!) as a guard.
    double lg = std::lgamma(static_cast<double>(perm.size()) + 1.0);
    for (std::size_t i = 0; i < perm.size();) {
        std::size_t j = i;
        while (j < perm.size() && perm[j] == perm[i]) ++j;
        lg -= std::lgamma(static_cast<double>(j - i) + 1.0);
        i = j;
    }
    if (lg > std::log(limit)) throw std::length_error("class enumeration exceeds the size guard");

    ClassEnumeration out;
    out.representative = least_rotation(w.indices());
    out.k = k;
    const auto target = cyclic_grams(w.indices(), k);
    do {
        if (is_least_rotation(perm) && cyclic_grams(perm, k) == target) out.members.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.count = out.members.size();
    return out;
}

/// Euler circuits through a fixed starting edge, parallel edges labeled.
inline std::uint64_t count_euler_circuits(const Quiver& q, std::size_t edge_limit = default_circuit_edge_limit) {
    std::vector<vertex_id> verts;
    for (const auto& e : q.edges()) {
        verts.push_back(e.from);
        verts.push_back(e.to);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (verts.empty()) throw std::invalid_argument("empty quiver");
    const std::size_t m = verts.size();
    auto local = [&](vertex_id v) {
        return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    std::vector<std::vector<std::uint64_t>> cnt(m, std::vector<std::uint64_t>(m, 0));
    std::vector<std::uint64_t> out(m, 0), in(m, 0);
    std::uint64_t total = 0;
    for (const auto& e : q.edges()) {
        cnt[local(e.from)][local(e.to)] += e.count;
        out[local(e.from)] += e.count;
        in[local(e.to)] += e.count;
        total += e.count;
    }
    if (out != in) throw std::domain_error("quiver is not Eulerian");
    if (total > edge_limit) throw std::length_error("too many edges for backtracking");

    const std::size_t start = 0;
    std::size_t first = 0;
    while (cnt[start][first] == 0) ++first;
    --cnt[start][first];

    auto walk = [&](auto&& self, std::size_t v, std::uint64_t remaining) -> std::uint64_t {
        if (remaining == 0) return v == start ? 1 : 0;
        std::uint64_t sum = 0;
        for (std::size_t u = 0; u < m; ++u) {
            const std::uint64_t c = cnt[v][u];
            if (c == 0) continue;
            --cnt[v][u];
            sum += c * self(self, u, remaining - 1);
            ++cnt[v][u];
        }
        return sum;
    };
    return walk(walk, first, total - 1);
}

/// Number of n-ary necklaces of length ell, (1/ell) sum_{d | ell} phi(d) n^(ell/d).
inline std::uint64_t burnside_necklaces(std::uint64_t n, std::uint64_t ell) {
    if (ell == 0) throw std::invalid_argument("length must be positive");
    big_int sum = 0;
    for (std::uint64_t d = 1; d <= ell; ++d) {
        if (ell % d) continue;
        std::uint64_t phi = 0;
        for (std::uint64_t i = 1; i <= d; ++i) phi += std::gcd(i, d) == 1;
        sum += big_int(phi) * boost::multiprecision::pow(big_int(n), static_cast<unsigned>(ell / d));
    }
    big_int result = sum / ell;
    if (result > std::numeric_limits<std::uint64_t>::max()) throw std::overflow_error("necklace count exceeds 64 bits");
    return result.convert_to<std::uint64_t>();
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline big_int exact_determinant(std::vector<std::vector<big_int>> a) {
    const std::size_t n = a.size();
    if (n == 0) return 1;
    big_int prev = 1;
    int sign = 1;
    for (std::size_t c = 0; c + 1 < n; ++c) {
        if (a[c][c] == 0) {
            std::size_t r = c + 1;
            while (r < n && a[r][c] == 0) ++r;
            if (r == n) return 0;
            std::swap(a[c], a[r]);
            sign = -sign;
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) a[i][j] = (a[i][j] * a[c][c] - a[i][c] * a[c][j]) / prev;
            a[i][c] = 0;
        }
        prev = a[c][c];
    }
    return sign * a[n - 1][n - 1];
}

/// Exact spanning-tree count of the nonzero-degree part, via the minor that
/// deletes the smallest retained vertex.
inline big_int exact_spanning_trees(const Quiver& q) {
    std::vector<vertex_id> verts;
    for (const auto& e : q.edges()) {
        verts.push_back(e.from);
        verts.push_back(e.to);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    if (verts.size() <= 1) return 1;
    const std::size_t m = verts.size();
    auto local = [&](vertex_id v) {
        return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    std::vector<std::vector<big_int>> lap(m, std::vector<big_int>(m, 0));
    for (const auto& e : q.edges()) {
        const auto i = local(e.from), j = local(e.to);
        lap[i][i] += e.count;
        lap[i][j] -= e.count;
    }
    std::vector<std::vector<big_int>> minor(m - 1, std::vector<big_int>(m - 1));
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 1; j < m; ++j) minor[i - 1][j - 1] = lap[i][j];
    return exact_determinant(std::move(minor));
}

}  // namespace dbent::oracle
