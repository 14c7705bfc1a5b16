#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace dbent {

/// Prime factorization as (prime, exponent) pairs, by trial division.
inline std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("cannot factor 0");
    std::vector<std::pair<std::uint64_t, unsigned>> f;
    for (std::uint64_t p = 2; p <= x / p; ++p) {
        if (x % p) continue;
        unsigned e = 0;
        while (x % p == 0) {
            x /= p;
            ++e;
        }
        f.emplace_back(p, e);
    }
    if (x > 1) f.emplace_back(x, 1);
    return f;
}

/// Divisors of x in ascending order.
inline std::vector<std::uint64_t> divisors(std::uint64_t x) {
    if (x == 0) throw std::invalid_argument("divisors of 0 are undefined");
    std::vector<std::uint64_t> d{1};
    for (auto [p, e] : factorize(x)) {
        const std::size_t base = d.size();
        std::uint64_t pk = 1;
        for (unsigned i = 0; i < e; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) d.push_back(d[j] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

/// Euler's totient.
inline std::uint64_t totient(std::uint64_t d) {
    if (d == 0) throw std::invalid_argument("totient of 0 is undefined");
    std::uint64_t phi = d;
    for (auto [p, e] : factorize(d)) phi = phi / p * (p - 1);
    return phi;
}

/// gcd over the nonzero values; 0 when all are zero.
inline std::uint64_t gcd_of(std::span<const std::uint64_t> values) {
    std::uint64_t g = 0;
    for (auto v : values) g = std::gcd(g, v);
    return g;
}

/// log(exp(a) + exp(b)), factoring out the larger term.
inline double log_add(double a, double b) {
    if (a == -std::numeric_limits<double>::infinity()) return b;
    if (b == -std::numeric_limits<double>::infinity()) return a;
    const double hi = std::max(a, b), lo = std::min(a, b);
    return hi + std::log1p(std::exp(lo - hi));
}

/// Stable log-sum-exp; -inf for an empty range.
inline double log_sum_exp(std::span<const double> terms) {
    if (terms.empty()) return -std::numeric_limits<double>::infinity();
    const double hi = *std::max_element(terms.begin(), terms.end());
    if (!std::isfinite(hi)) return hi;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - hi);
    return hi + std::log(s);
}

/// Cumulative table of log(m!) for m = 0..max.
class LogFactorialTable {
public:
    explicit LogFactorialTable(std::uint64_t max) : table_(static_cast<std::size_t>(max) + 1, 0.0) {
        for (std::size_t m = 2; m < table_.size(); ++m)
            table_[m] = table_[m - 1] + std::log(static_cast<double>(m));
    }

    double operator()(std::uint64_t m) const { return table_.at(static_cast<std::size_t>(m)); }
    std::uint64_t max() const noexcept { return table_.size() - 1; }

private:
    std::vector<double> table_;
};

/// log C(n, r) via lgamma.
inline double log_binomial(std::uint64_t n, std::uint64_t r) {
    if (r > n) throw std::invalid_argument("binomial with r > n");
    auto lg = [](std::uint64_t x) { return std::lgamma(static_cast<double>(x) + 1.0); };
    return lg(n) - lg(r) - lg(n - r);
}

}  // namespace dbent
