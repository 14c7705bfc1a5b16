#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "alphabet.hpp"
#include "determinant.hpp"
#include "number_theory.hpp"
#include "quiver.hpp"

namespace dbent {

/// Artifact-wide comparison tolerances.
struct Tolerances {
    double compare = 1e-9;       ///< absolute/relative slack for real comparisons
    double integer_snap = 1e-6;  ///< relative distance at which exp(H) is reported as an integer
};
inline constexpr Tolerances default_tolerances{};

struct EntropyOptions {
    std::size_t dense_dimension_limit = default_dense_dimension_limit;
    QuiverOptions quiver{};
};

struct ComponentEntropy {
    std::uint32_t component = 0;
    double nats = 0.0;
};

/// Natural-log magnitude of a class size W, with its per-component breakdown.
struct EntropyValue {
    double nats = 0.0;
    std::vector<ComponentEntropy> components;
    double base = std::numbers::e;  ///< base used by `scaled()`

    /// Entropy divided by log(base).
    double scaled() const { return nats / std::log(base); }
    double in_base(double b) const { return nats / std::log(b); }
};

struct DivisorTerm {
    std::uint64_t d = 1;
    std::uint64_t phi = 1;
    double log_term = 0.0;
};

/// Counting breakdown of an Eulerian quiver. Spanning-tree and circuit counts
/// are those of A itself (the d = 1 term).
struct CountReport {
    double log_spanning_trees = 0.0;
    double log_euler_circuits = 0.0;
    double log_W = 0.0;
    std::vector<DivisorTerm> divisor_terms;
};

/// exp(log_value) as an integer when it is within `rel_tol` of one and below 2^53.
inline std::optional<std::uint64_t> snap_to_integer(double log_value, double rel_tol = default_tolerances.integer_snap) {
    if (!std::isfinite(log_value) || log_value >= 53.0 * std::numbers::ln2) return std::nullopt;
    const double w = std::exp(log_value);
    const double r = std::round(w);
    if (r < 1.0 || std::abs(w - r) > rel_tol * r) return std::nullopt;
    return static_cast<std::uint64_t>(r);
}

namespace detail {

/// One strongly connected component on local vertex ids 0..size-1.
struct LocalGraph {
    std::size_t size = 0;
    std::vector<Edge> edges;
};

inline std::vector<multiplicity> out_degrees(const LocalGraph& g) {
    std::vector<multiplicity> deg(g.size, 0);
    for (const auto& e : g.edges) deg[e.from] += e.count;
    return deg;
}

/// log t of the quiver with entries divided by d, from the minor deleting vertex 0.
inline double log_spanning_trees_scaled(const LocalGraph& g, std::uint64_t d, std::size_t dense_limit) {
    if (g.size <= 1) return 0.0;
    const std::size_t dim = g.size - 1;
    std::vector<double> diag(g.size, 0.0);
    std::vector<MatrixEntry> entries;
    entries.reserve(g.edges.size() + dim);
    for (const auto& e : g.edges) {
        const double a = static_cast<double>(e.count / d);
        if (e.from == e.to) continue;  // loops cancel in the Laplacian
        diag[e.from] += a;
        if (e.from != 0 && e.to != 0) entries.push_back({e.from - 1, e.to - 1, -a});
    }
    for (std::size_t v = 1; v < g.size; ++v) entries.push_back({v - 1, v - 1, diag[v]});
    const auto det = log_determinant(entries, dim, dense_limit);
    if (det.sign <= 0 || !std::isfinite(det.log_abs))
        throw std::domain_error("Laplacian minor has nonpositive determinant (disconnected or unstable)");
    return det.log_abs;
}

inline CountReport eulerian_report(const LocalGraph& g, std::size_t dense_limit) {
    if (g.edges.empty()) throw std::invalid_argument("empty quiver has no Euler circuits");
    std::vector<std::uint64_t> counts;
    counts.reserve(g.edges.size());
    multiplicity max_count = 0;
    for (const auto& e : g.edges) {
        counts.push_back(e.count);
        max_count = std::max(max_count, e.count);
    }
    const auto deg = out_degrees(g);
    const multiplicity max_deg = *std::max_element(deg.begin(), deg.end());
    const LogFactorialTable logfact(std::max(max_deg, max_count));
    const std::uint64_t g_all = gcd_of(counts);

    CountReport report;
    std::vector<double> terms;
    for (std::uint64_t d : divisors(g_all)) {
        // Signed multiplicities of log(m!) so equal factorials cancel exactly.
        std::map<std::uint64_t, long long> coeff;
        for (auto dv : deg)
            if (dv / d > 1) ++coeff[dv / d - 1];
        for (const auto& e : g.edges)
            if (e.count / d > 1) --coeff[e.count / d];
        double log_fact_ratio = 0.0;
        for (auto [m, c] : coeff)
            if (c != 0) log_fact_ratio += static_cast<double>(c) * logfact(m);
        double log_deg_fact = 0.0;
        for (auto dv : deg)
            if (dv / d > 1) log_deg_fact += logfact(dv / d - 1);

        const double logt = log_spanning_trees_scaled(g, d, dense_limit);
        const std::uint64_t phi = totient(d);
        const double term = std::log(static_cast<double>(phi)) + logt + log_fact_ratio -
                            std::log(static_cast<double>(d));
        if (d == 1) {
            report.log_spanning_trees = logt;
            report.log_euler_circuits = logt + log_deg_fact;
        }
        report.divisor_terms.push_back({d, phi, term});
        terms.push_back(term);
    }
    report.log_W = log_sum_exp(terms);
    return report;
}

/// Vertices with nonzero degree, compacted. Throws unless balanced.
inline void require_balanced(const Quiver& q) {
    for (const auto& [v, io] : q.degrees())
        if (io.first != io.second)
            throw std::domain_error("in-degree differs from out-degree at vertex " + std::to_string(v) +
                                    "; quiver is not componentwise Eulerian");
}

/// Split a balanced quiver into its strongly connected components.
inline std::vector<LocalGraph> split_components(const Quiver& q, const ComponentLabeling& scc) {
    std::vector<LocalGraph> comps(scc.count);
    std::vector<std::size_t> local(scc.vertices.size());
    for (std::size_t i = 0; i < scc.vertices.size(); ++i) local[i] = comps[scc.labels[i] - 1].size++;
    auto pos = [&](vertex_id v) {
        return static_cast<std::size_t>(std::lower_bound(scc.vertices.begin(), scc.vertices.end(), v) -
                                        scc.vertices.begin());
    };
    for (const auto& e : q.edges()) {
        const std::size_t a = pos(e.from), b = pos(e.to);
        if (scc.labels[a] != scc.labels[b])
            throw std::domain_error("edge between components; quiver is not componentwise Eulerian");
        comps[scc.labels[a] - 1].edges.push_back({local[a], local[b], e.count});
    }
    return comps;
}

/// The orientation (g or its transpose) with the lexicographically smaller
/// sorted edge list. Both have the same entropy; fixing one makes results
/// bit-identical under transposition.
inline LocalGraph canonical_orientation(LocalGraph g) {
    auto key = [](const Edge& e) { return std::tuple(e.from, e.to, e.count); };
    auto by_key = [&](const Edge& a, const Edge& b) { return key(a) < key(b); };
    std::vector<Edge> t;
    t.reserve(g.edges.size());
    for (const auto& e : g.edges) t.push_back({e.to, e.from, e.count});
    std::sort(g.edges.begin(), g.edges.end(), by_key);
    std::sort(t.begin(), t.end(), by_key);
    if (std::lexicographical_compare(t.begin(), t.end(), g.edges.begin(), g.edges.end(), by_key)) g.edges = std::move(t);
    return g;
}

inline LocalGraph single_component(const Quiver& q) {
    require_balanced(q);
    if (q.empty()) throw std::invalid_argument("empty quiver");
    const auto scc = strongly_connected_components(q);
    if (scc.count != 1) throw std::domain_error("quiver is not strongly connected");
    return std::move(split_components(q, scc).front());
}

/// Rounding floor below which a component entropy is reported as exactly 0.
inline constexpr double zero_floor = 1e-12;

}  // namespace detail

/// Natural log of the number of spanning trees of a connected Eulerian quiver.
inline double log_spanning_trees(const Quiver& q, const EntropyOptions& opts = {}) {
    return detail::log_spanning_trees_scaled(detail::single_component(q), 1, opts.dense_dimension_limit);
}

/// W(A) via the divisor sum over gcd(A), for a single strongly connected
/// balanced quiver. Zero-degree vertices are ignored.
inline CountReport eulerian_entropy(const Quiver& q, const EntropyOptions& opts = {}) {
    return detail::eulerian_report(detail::single_component(q), opts.dense_dimension_limit);
}

/// Sum of component entropies; single-vertex components and the empty quiver contribute 0.
inline EntropyValue componentwise_entropy(const Quiver& q, const EntropyOptions& opts = {}) {
    detail::require_balanced(q);
    EntropyValue out;
    if (q.empty()) return out;
    const auto scc = strongly_connected_components(q);
    auto comps = detail::split_components(q, scc);
    for (std::size_t c = 0; c < comps.size(); ++c) {
        double h = 0.0;
        if (comps[c].size > 1) {
            h = detail::eulerian_report(detail::canonical_orientation(std::move(comps[c])), opts.dense_dimension_limit)
                    .log_W;
            if (std::abs(h) < detail::zero_floor) h = 0.0;
            h = std::max(h, 0.0);
        }
        out.components.push_back({static_cast<std::uint32_t>(c + 1), h});
        out.nats += h;
    }
    return out;
}

/// Order-k de Bruijn entropy of a cyclic word. `base` defaults to the alphabet size.
inline EntropyValue word_entropy(const CyclicWord& w, std::size_t k, std::optional<double> base = std::nullopt,
                                 const EntropyOptions& opts = {}) {
    auto h = componentwise_entropy(build_quiver(w, k, opts.quiver), opts);
    if (base) {
        if (!(*base > 0.0) || *base == 1.0) throw std::invalid_argument("logarithm base must be positive and not 1");
        h.base = *base;
    } else if (w.alphabet_size() > 1) {
        h.base = static_cast<double>(w.alphabet_size());
    }
    return h;
}

/// Entropy of the boxminus of the two words' order-k quivers.
inline EntropyValue relative_entropy(const CyclicWord& w, const CyclicWord& w2, std::size_t k,
                                     const EntropyOptions& opts = {}) {
    if (w.alphabet_size() != w2.alphabet_size()) throw std::invalid_argument("words use different alphabets");
    auto h = componentwise_entropy(boxminus(build_quiver(w, k, opts.quiver), build_quiver(w2, k, opts.quiver)), opts);
    if (w.alphabet_size() > 1) h.base = static_cast<double>(w.alphabet_size());
    return h;
}

/// log W_1 of a cyclic binary word with x00 copies of 00, x* copies each of
/// 01 and 10, and length ell; computed from the binomial closed form.
inline double binary_W1_closed_form(std::uint64_t x00, std::uint64_t xstar, std::uint64_t ell) {
    if (x00 + 2 * xstar > ell)
        throw std::invalid_argument("x00 + 2 x* exceeds the word length");
    const std::uint64_t x11 = ell - x00 - 2 * xstar;
    if (xstar == 0) {
        if (x00 == 0 || x00 == ell) return 0.0;
        throw std::invalid_argument("x* = 0 requires a constant word (x00 = 0 or x00 = ell)");
    }
    const std::uint64_t deg0 = x00 + xstar, deg1 = xstar + x11;
    const std::uint64_t g = std::gcd(std::gcd(x00, x11), xstar);
    std::vector<double> terms;
    for (std::uint64_t d : divisors(g))
        terms.push_back(std::log(static_cast<double>(totient(d))) + log_binomial(deg0 / d, xstar / d) +
                        log_binomial(deg1 / d, xstar / d));
    const double prefactor = std::log(static_cast<double>(xstar)) - std::log(static_cast<double>(deg0)) -
                             std::log(static_cast<double>(deg1));
    return prefactor + log_sum_exp(terms);
}

enum class KMode { informative, linear_time };

/// floor(log_n ell) in informative mode, floor(log_n(ell) / omega) in
/// linear-time mode; never below 1.
inline std::size_t suggest_k(std::uint64_t ell, std::uint64_t n, KMode mode, double omega = 3.0) {
    if (ell < 2 || n < 2) return 1;
    if (mode == KMode::informative) {
        std::size_t k = 0;
        for (std::uint64_t p = 1; p <= ell / n; p *= n) ++k;
        return std::max<std::size_t>(k, 1);
    }
    if (!(omega > 0.0)) throw std::invalid_argument("omega must be positive");
    const double v = std::log(static_cast<double>(ell)) / std::log(static_cast<double>(n)) / omega;
    return std::max<std::size_t>(static_cast<std::size_t>(std::floor(v + 1e-9)), 1);
}

}  // namespace dbent
