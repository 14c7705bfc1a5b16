#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include "alphabet.hpp"

namespace dbent {

using vertex_id = std::uint64_t;
using multiplicity = std::uint64_t;
using kgram = std::vector<symbol_index>;

/// Radix indexing is used while n^k stays at or below this many vertices.
inline constexpr std::uint64_t default_radix_vertex_limit = std::uint64_t{1} << 20;

enum class VertexScheme {
    radix,       ///< vertex id = sum of k-gram digits times n^(k-1-j)
    discovered,  ///< vertex ids assigned to k-grams in order of first appearance
};

struct Edge {
    vertex_id from = 0;
    vertex_id to = 0;
    multiplicity count = 0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

namespace detail {

inline multiplicity checked_add(multiplicity a, multiplicity b) {
    if (b > std::numeric_limits<multiplicity>::max() - a)
        throw std::overflow_error("edge multiplicity overflow");
    return a + b;
}

/// n^k, or nullopt when it does not fit in 64 bits.
inline std::optional<std::uint64_t> checked_power(std::uint64_t n, std::size_t k) {
    std::uint64_t r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        if (n != 0 && r > std::numeric_limits<std::uint64_t>::max() / n) return std::nullopt;
        r *= n;
    }
    return r;
}

/// Sort by (from, to), merge duplicates, drop zero entries.
inline std::vector<Edge> canonical_edges(std::vector<Edge> edges) {
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.from, a.to) < std::tie(b.from, b.to);
    });
    std::vector<Edge> out;
    out.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.count == 0) continue;
        if (!out.empty() && out.back().from == e.from && out.back().to == e.to)
            out.back().count = checked_add(out.back().count, e.count);
        else
            out.push_back(e);
    }
    return out;
}

}  // namespace detail

/// Nonnegative-integer adjacency matrix of a de Bruijn quiver, stored as a
/// sorted list of positive entries. Immutable once built.
class Quiver {
public:
    Quiver() = default;

    /// Radix-scheme quiver over `vertex_count` = n^k vertices.
    Quiver(std::size_t order, std::size_t alphabet_size, std::vector<Edge> edges)
        : order_(order), alphabet_size_(alphabet_size), scheme_(VertexScheme::radix) {
        auto vc = detail::checked_power(alphabet_size, order);
        if (!vc) throw std::invalid_argument("n^k does not fit in 64 bits; use the discovered scheme");
        vertex_count_ = *vc;
        set_edges(std::move(edges));
    }

    /// Discovered-scheme quiver; `labels[v]` is the k-gram of vertex v.
    Quiver(std::size_t order, std::size_t alphabet_size, std::vector<kgram> labels,
           std::vector<Edge> edges)
        : order_(order),
          alphabet_size_(alphabet_size),
          scheme_(VertexScheme::discovered),
          vertex_count_(labels.size()),
          labels_(std::move(labels)) {
        for (const auto& l : labels_)
            if (l.size() != order_) throw std::invalid_argument("vertex label length differs from order");
        set_edges(std::move(edges));
    }

    /// Square matrix as an order-1 quiver over an alphabet of size rows.size().
    static Quiver from_matrix(const std::vector<std::vector<multiplicity>>& rows) {
        std::vector<Edge> edges;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.size()) throw std::invalid_argument("matrix is not square");
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (rows[i][j]) edges.push_back({i, j, rows[i][j]});
        }
        return Quiver(1, rows.size(), std::move(edges));
    }

    std::size_t order() const noexcept { return order_; }
    std::size_t alphabet_size() const noexcept { return alphabet_size_; }
    VertexScheme scheme() const noexcept { return scheme_; }
    std::uint64_t vertex_count() const noexcept { return vertex_count_; }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const kgram> labels() const noexcept { return labels_; }
    bool empty() const noexcept { return edges_.empty(); }

    multiplicity at(vertex_id from, vertex_id to) const {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair{from, to},
                                   [](const Edge& e, const std::pair<vertex_id, vertex_id>& key) {
                                       return std::pair{e.from, e.to} < key;
                                   });
        return (it != edges_.end() && it->from == from && it->to == to) ? it->count : 0;
    }

    multiplicity entry_sum() const {
        multiplicity s = 0;
        for (const auto& e : edges_) s = detail::checked_add(s, e.count);
        return s;
    }

    /// K-gram spelled by vertex v.
    kgram label(vertex_id v) const {
        if (v >= vertex_count_) throw std::out_of_range("vertex id out of range");
        if (scheme_ == VertexScheme::discovered) return labels_[v];
        kgram g(order_);
        for (std::size_t j = order_; j-- > 0;) {
            g[j] = static_cast<symbol_index>(v % alphabet_size_);
            v /= alphabet_size_;
        }
        return g;
    }

    Quiver transpose() const {
        std::vector<Edge> t;
        t.reserve(edges_.size());
        for (const auto& e : edges_) t.push_back({e.to, e.from, e.count});
        return with_edges(std::move(t));
    }

    /// Same shape and labels, different entries.
    Quiver with_edges(std::vector<Edge> edges) const {
        Quiver q = *this;
        q.set_edges(std::move(edges));
        return q;
    }

    /// Out-degree and in-degree of every vertex with an incident edge.
    std::map<vertex_id, std::pair<multiplicity, multiplicity>> degrees() const {
        std::map<vertex_id, std::pair<multiplicity, multiplicity>> d;
        for (const auto& e : edges_) {
            d[e.from].first = detail::checked_add(d[e.from].first, e.count);
            d[e.to].second = detail::checked_add(d[e.to].second, e.count);
        }
        return d;
    }

    /// In-degree equals out-degree at every vertex (componentwise Eulerian).
    bool is_balanced() const {
        for (const auto& [v, io] : degrees())
            if (io.first != io.second) return false;
        return true;
    }

    std::vector<std::vector<multiplicity>> to_dense() const {
        if (vertex_count_ > 4096) throw std::length_error("quiver too large for a dense view");
        std::vector<std::vector<multiplicity>> m(vertex_count_, std::vector<multiplicity>(vertex_count_, 0));
        for (const auto& e : edges_) m[e.from][e.to] = e.count;
        return m;
    }

    bool same_shape(const Quiver& o) const noexcept {
        return order_ == o.order_ && alphabet_size_ == o.alphabet_size_ && scheme_ == o.scheme_ &&
               (scheme_ == VertexScheme::discovered || vertex_count_ == o.vertex_count_);
    }

    /// Equality of the underlying k-gram multigraphs; discovered-scheme quivers
    /// compare through their labels.
    friend bool operator==(const Quiver& a, const Quiver& b) {
        if (!a.same_shape(b)) return false;
        if (a.scheme_ == VertexScheme::radix) return a.edges_ == b.edges_;
        if (a.edges_.size() != b.edges_.size()) return false;
        auto spelled = [](const Quiver& q) {
            std::vector<std::tuple<kgram, kgram, multiplicity>> s;
            s.reserve(q.edges_.size());
            for (const auto& e : q.edges_) s.emplace_back(q.labels_[e.from], q.labels_[e.to], e.count);
            std::sort(s.begin(), s.end());
            return s;
        };
        return spelled(a) == spelled(b);
    }

private:
    void set_edges(std::vector<Edge> edges) {
        for (const auto& e : edges)
            if (e.from >= vertex_count_ || e.to >= vertex_count_)
                throw std::out_of_range("edge endpoint outside the vertex set");
        edges_ = detail::canonical_edges(std::move(edges));
    }

    std::size_t order_ = 0;
    std::size_t alphabet_size_ = 0;
    VertexScheme scheme_ = VertexScheme::radix;
    std::uint64_t vertex_count_ = 0;
    std::vector<kgram> labels_;
    std::vector<Edge> edges_;
};

namespace detail {

/// Maps k-grams to vertex ids for one quiver shape, growing the label table
/// in the discovered scheme.
class VertexIndexer {
public:
    VertexIndexer(std::size_t order, std::size_t n, VertexScheme scheme, std::vector<kgram> labels = {})
        : k_(order), n_(n), scheme_(scheme), labels_(std::move(labels)) {
        for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
    }

    template <class Access>
    vertex_id id_at(Access&& symbol_at, std::size_t start) {
        if (scheme_ == VertexScheme::radix) {
            vertex_id code = 0;
            for (std::size_t j = 0; j < k_; ++j) code = code * n_ + symbol_at(start + j);
            return code;
        }
        kgram g(k_);
        for (std::size_t j = 0; j < k_; ++j) g[j] = symbol_at(start + j);
        auto [it, inserted] = index_.emplace(std::move(g), labels_.size());
        if (inserted) labels_.push_back(it->first);
        return it->second;
    }

    vertex_id id_of(const kgram& g) {
        return id_at([&](std::size_t j) { return g[j]; }, 0);
    }

    std::vector<kgram> take_labels() { return std::move(labels_); }

private:
    std::size_t k_;
    std::size_t n_;
    VertexScheme scheme_;
    std::vector<kgram> labels_;
    std::map<kgram, vertex_id> index_;
};

inline VertexScheme choose_scheme(std::size_t n, std::size_t k, std::uint64_t radix_limit) {
    auto vc = checked_power(n, k);
    return (vc && *vc <= radix_limit) ? VertexScheme::radix : VertexScheme::discovered;
}

inline Quiver make_quiver(std::size_t k, std::size_t n, VertexScheme scheme, VertexIndexer& ix,
                          std::vector<Edge> edges) {
    if (scheme == VertexScheme::radix) return Quiver(k, n, std::move(edges));
    return Quiver(k, n, ix.take_labels(), std::move(edges));
}

/// Both operands re-expressed over one vertex set. Radix operands must match;
/// discovered operands get the union of their label tables.
inline std::pair<Quiver, Quiver> align(const Quiver& a, const Quiver& b) {
    if (!a.same_shape(b))
        throw std::invalid_argument("quiver shape mismatch (order, alphabet size or vertex scheme)");
    if (a.scheme() == VertexScheme::radix) return {a, b};
    std::vector<kgram> labels(a.labels().begin(), a.labels().end());
    VertexIndexer ix(a.order(), a.alphabet_size(), VertexScheme::discovered, labels);
    std::vector<Edge> be;
    be.reserve(b.edges().size());
    for (const auto& e : b.edges())
        be.push_back({ix.id_of(b.labels()[e.from]), ix.id_of(b.labels()[e.to]), e.count});
    labels = ix.take_labels();
    std::vector<Edge> ae(a.edges().begin(), a.edges().end());
    return {Quiver(a.order(), a.alphabet_size(), labels, std::move(ae)),
            Quiver(a.order(), a.alphabet_size(), labels, std::move(be))};
}

}  // namespace detail

struct QuiverOptions {
    std::uint64_t radix_vertex_limit = default_radix_vertex_limit;
};

/// Order-k de Bruijn quiver of a cyclic word: one edge per cyclic position,
/// wrap-around edges included.
inline Quiver build_quiver(const CyclicWord& w, std::size_t k, const QuiverOptions& opts = {}) {
    const std::size_t len = w.length();
    if (k < 1) throw std::invalid_argument("order k must be at least 1");
    if (k >= len)
        throw std::invalid_argument("order k=" + std::to_string(k) + " must be less than word length " +
                                    std::to_string(len));
    const std::size_t n = w.alphabet_size();
    const auto scheme = detail::choose_scheme(n, k, opts.radix_vertex_limit);
    detail::VertexIndexer ix(k, n, scheme);
    auto sym = [&](std::size_t j) { return w[j]; };

    std::vector<Edge> edges;
    edges.reserve(len);
    vertex_id prev = ix.id_at(sym, 0);
    for (std::size_t j = 0; j < len; ++j) {
        vertex_id next = ix.id_at(sym, j + 1);
        edges.push_back({prev, next, 1});
        prev = next;
    }
    return detail::make_quiver(k, n, scheme, ix, std::move(edges));
}

/// max(A-B, 0) + max(B-A, 0)^T
inline Quiver boxminus(const Quiver& a, const Quiver& b) {
    auto [qa, qb] = detail::align(a, b);
    std::vector<Edge> out;
    auto ea = qa.edges();
    auto eb = qb.edges();
    out.reserve(ea.size() + eb.size());
    std::size_t i = 0, j = 0;
    auto key = [](const Edge& e) { return std::pair{e.from, e.to}; };
    while (i < ea.size() || j < eb.size()) {
        if (j == eb.size() || (i < ea.size() && key(ea[i]) < key(eb[j]))) {
            out.push_back(ea[i++]);
        } else if (i == ea.size() || key(eb[j]) < key(ea[i])) {
            out.push_back({eb[j].to, eb[j].from, eb[j].count});
            ++j;
        } else {
            if (ea[i].count > eb[j].count)
                out.push_back({ea[i].from, ea[i].to, ea[i].count - eb[j].count});
            else if (eb[j].count > ea[i].count)
                out.push_back({eb[j].to, eb[j].from, eb[j].count - ea[i].count});
            ++i;
            ++j;
        }
    }
    return qa.with_edges(std::move(out));
}

/// A boxminus B^T
inline Quiver boxplus(const Quiver& a, const Quiver& b) { return boxminus(a, b.transpose()); }

/// Strongly connected components of the quiver restricted to vertices with
/// nonzero degree.
struct ComponentLabeling {
    std::vector<vertex_id> vertices;    ///< retained vertices, ascending
    std::vector<std::uint32_t> labels;  ///< component id (1-based) of vertices[i]
    std::uint32_t count = 0;

    std::uint32_t component_of(vertex_id v) const {
        auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
        if (it == vertices.end() || *it != v) return 0;
        return labels[static_cast<std::size_t>(it - vertices.begin())];
    }
};

inline ComponentLabeling strongly_connected_components(const Quiver& q) {
    ComponentLabeling out;
    for (const auto& e : q.edges()) {
        out.vertices.push_back(e.from);
        out.vertices.push_back(e.to);
    }
    std::sort(out.vertices.begin(), out.vertices.end());
    out.vertices.erase(std::unique(out.vertices.begin(), out.vertices.end()), out.vertices.end());
    const std::size_t m = out.vertices.size();
    out.labels.assign(m, 0);
    if (m == 0) return out;

    auto local = [&](vertex_id v) {
        return static_cast<std::size_t>(std::lower_bound(out.vertices.begin(), out.vertices.end(), v) -
                                        out.vertices.begin());
    };
    // CSR adjacency over local ids; edges are sorted by source already.
    std::vector<std::size_t> start(m + 1, 0), adj;
    adj.reserve(q.edges().size());
    for (const auto& e : q.edges()) ++start[local(e.from) + 1];
    for (std::size_t i = 0; i < m; ++i) start[i + 1] += start[i];
    for (const auto& e : q.edges()) adj.push_back(local(e.to));

    // Iterative Tarjan.
    constexpr std::size_t unvisited = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(m, unvisited), low(m, 0), comp(m, unvisited);
    std::vector<std::size_t> stack, call;
    std::vector<std::size_t> cursor(m, 0);
    std::vector<bool> on_stack(m, false);
    std::size_t next_index = 0, ncomp = 0;
    for (std::size_t root = 0; root < m; ++root) {
        if (index[root] != unvisited) continue;
        call.push_back(root);
        while (!call.empty()) {
            std::size_t v = call.back();
            if (index[v] == unvisited) {
                index[v] = low[v] = next_index++;
                cursor[v] = start[v];
                stack.push_back(v);
                on_stack[v] = true;
            }
            bool descended = false;
            while (cursor[v] < start[v + 1]) {
                std::size_t w = adj[cursor[v]++];
                if (index[w] == unvisited) {
                    call.push_back(w);
                    descended = true;
                    break;
                }
                if (on_stack[w]) low[v] = std::min(low[v], index[w]);
            }
            if (descended) continue;
            if (low[v] == index[v]) {
                std::size_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            call.pop_back();
            if (!call.empty()) low[call.back()] = std::min(low[call.back()], low[v]);
        }
    }
    // Relabel so components are numbered by their smallest vertex.
    std::vector<std::uint32_t> relabel(ncomp, 0);
    std::uint32_t next = 0;
    for (std::size_t i = 0; i < m; ++i) {
        if (relabel[comp[i]] == 0) relabel[comp[i]] = ++next;
        out.labels[i] = relabel[comp[i]];
    }
    out.count = next;
    return out;
}

/// Quiver of the cyclic concatenation uv from the quivers of u and v: drop
/// each word's k wrap-around edges and add the k edges across each junction.
inline Quiver concat_quiver(const CyclicWord& u, const CyclicWord& v, const Quiver& qu, const Quiver& qv) {
    const std::size_t k = qu.order();
    if (qv.order() != k) throw std::invalid_argument("quiver order mismatch");
    if (u.alphabet_size() != v.alphabet_size() || u.alphabet_size() != qu.alphabet_size())
        throw std::invalid_argument("alphabet mismatch");
    if (k >= u.length() || k >= v.length())
        throw std::invalid_argument("order k must be less than both word lengths");
    auto [au, av] = detail::align(qu, qv);

    const std::size_t lu = u.length(), lv = v.length();
    std::vector<kgram> labels(au.labels().begin(), au.labels().end());
    detail::VertexIndexer ix(k, au.alphabet_size(), au.scheme(), labels);

    std::map<std::pair<vertex_id, vertex_id>, long long> delta;
    auto edge_at = [&](auto&& sym, std::size_t p) {
        return std::pair{ix.id_at(sym, p), ix.id_at(sym, p + 1)};
    };
    auto sym_u = [&](std::size_t j) { return u[j]; };
    auto sym_v = [&](std::size_t j) { return v[j]; };
    auto sym_uv = [&](std::size_t j) {
        j %= (lu + lv);
        return j < lu ? u[j] : v[j - lu];
    };
    for (std::size_t p = lu - k; p < lu; ++p) --delta[edge_at(sym_u, p)];
    for (std::size_t p = lv - k; p < lv; ++p) --delta[edge_at(sym_v, p)];
    for (std::size_t p = lu - k; p < lu; ++p) ++delta[edge_at(sym_uv, p)];
    for (std::size_t p = lu + lv - k; p < lu + lv; ++p) ++delta[edge_at(sym_uv, p)];

    std::map<std::pair<vertex_id, vertex_id>, long long> acc;
    for (const auto& e : au.edges()) acc[{e.from, e.to}] += static_cast<long long>(e.count);
    for (const auto& e : av.edges()) acc[{e.from, e.to}] += static_cast<long long>(e.count);
    for (const auto& [key, d] : delta) acc[key] += d;

    std::vector<Edge> edges;
    edges.reserve(acc.size());
    for (const auto& [key, c] : acc) {
        if (c < 0) throw std::invalid_argument("quivers do not match their words");
        if (c > 0) edges.push_back({key.first, key.second, static_cast<multiplicity>(c)});
    }
    return detail::make_quiver(k, au.alphabet_size(), au.scheme(), ix, std::move(edges));
}

}  // namespace dbent
