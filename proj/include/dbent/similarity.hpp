#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <vector>

#include "alphabet.hpp"
#include "entropy.hpp"
#include "quiver.hpp"

namespace dbent {

/// Symmetric, zero-diagonal matrix of pairwise dissimilarities.
struct DistanceMatrix {
    std::size_t size = 0;
    std::vector<double> values;       ///< row-major, size * size
    std::vector<std::string> labels;  ///< optional, one per row
    std::size_t k = 0;
    bool normalized = false;
    std::vector<char> fallback;  ///< row-major; 1 where normalization fell back to the raw value

    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : size(n), values(n * n, 0.0), fallback(n * n, 0) {}

    double operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }

    void set(std::size_t i, std::size_t j, double d) {
        values[i * size + j] = d;
        values[j * size + i] = d;
    }

    bool used_fallback(std::size_t i, std::size_t j) const { return fallback[i * size + j] != 0; }
};

struct DistanceOptions {
    EntropyOptions entropy{};
    unsigned threads = 0;  ///< 0 = hardware concurrency
};

/// Pairwise relative entropies, optionally divided by the entropy of the
/// concatenated word's quiver. Entries are computed independently, so the
/// result does not depend on the thread schedule.
inline DistanceMatrix distance_matrix(const std::vector<CyclicWord>& words, std::size_t k, bool normalize,
                                      const DistanceOptions& opts = {}) {
    const std::size_t n = words.size();
    for (const auto& w : words)
        if (w.alphabet_size() != words.front().alphabet_size())
            throw std::invalid_argument("all words must share one alphabet");
    std::vector<Quiver> quivers;
    quivers.reserve(n);
    for (const auto& w : words) quivers.push_back(build_quiver(w, k, opts.entropy.quiver));

    DistanceMatrix dm(n);
    dm.k = k;
    dm.normalized = normalize;

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try {
            for (std::size_t p; (p = next.fetch_add(1)) < pairs.size();) {
                const auto [i, j] = pairs[p];
                const double h = componentwise_entropy(boxminus(quivers[i], quivers[j]), opts.entropy).nats;
                double d = h;
                bool fell_back = false;
                if (normalize) {
                    const double hc =
                        componentwise_entropy(concat_quiver(words[i], words[j], quivers[i], quivers[j]), opts.entropy)
                            .nats;
                    if (hc > 0.0)
                        d = h / hc;
                    else if (h > 0.0)
                        fell_back = true;
                    else
                        d = 0.0;
                }
                dm.values[i * n + j] = dm.values[j * n + i] = d;
                dm.fallback[i * n + j] = dm.fallback[j * n + i] = fell_back;
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next.store(pairs.size());
        }
    };
    unsigned t = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
    t = static_cast<unsigned>(std::min<std::size_t>(t, std::max<std::size_t>(pairs.size(), 1)));
    if (t <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned i = 0; i < t; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);
    return dm;
}

/// Unit-cost edit distance, two-row dynamic programme.
template <class Seq>
std::size_t levenshtein(const Seq& a, const Seq& b) {
    const std::size_t n = std::size(a), m = std::size(b);
    std::vector<std::size_t> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = j;
    auto ia = std::begin(a);
    for (std::size_t i = 1; i <= n; ++i, ++ia) {
        cur[0] = i;
        auto ib = std::begin(b);
        for (std::size_t j = 1; j <= m; ++j, ++ib) {
            const std::size_t sub = prev[j - 1] + (*ia == *ib ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

inline std::size_t levenshtein(std::string_view a, std::string_view b) { return levenshtein<std::string_view>(a, b); }

enum class LinkageMethod { single, average, complete };

inline LinkageMethod parse_linkage_method(std::string_view s) {
    if (s == "single") return LinkageMethod::single;
    if (s == "average") return LinkageMethod::average;
    if (s == "complete") return LinkageMethod::complete;
    throw std::invalid_argument("unknown linkage method '" + std::string(s) + "'");
}

/// Leaves are clusters 0..N-1; merge i creates cluster N+i.
struct Merge {
    std::size_t a = 0;
    std::size_t b = 0;
    double height = 0.0;
};

struct LinkageTree {
    std::size_t leaves = 0;
    std::vector<Merge> merges;

    std::size_t root() const { return leaves + merges.size() - 1; }
    bool is_leaf(std::size_t id) const { return id < leaves; }
    double height(std::size_t id) const { return is_leaf(id) ? 0.0 : merges.at(id - leaves).height; }

    /// Leaves under each cluster id (leaves map to themselves), ascending.
    std::vector<std::vector<std::size_t>> members() const {
        std::vector<std::vector<std::size_t>> m(leaves + merges.size());
        for (std::size_t i = 0; i < leaves; ++i) m[i] = {i};
        for (std::size_t i = 0; i < merges.size(); ++i) {
            auto& out = m[leaves + i];
            std::merge(m[merges[i].a].begin(), m[merges[i].a].end(), m[merges[i].b].begin(), m[merges[i].b].end(),
                       std::back_inserter(out));
        }
        return m;
    }
};

/// Agglomerative clustering with Lance-Williams updates. Among equally close
/// pairs the lexicographically smallest (cluster id, cluster id) merges first.
inline LinkageTree linkage(const DistanceMatrix& d, LinkageMethod method) {
    const std::size_t n = d.size;
    if (n < 2) throw std::invalid_argument("linkage needs at least two observations");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!std::isfinite(d(i, j)) || d(i, j) < 0.0)
                throw std::invalid_argument("distances must be finite and nonnegative");

    std::vector<double> dist(d.values);  // slot-indexed
    std::vector<std::size_t> id(n), size(n, 1);
    std::vector<bool> active(n, true);
    for (std::size_t i = 0; i < n; ++i) id[i] = i;

    LinkageTree tree;
    tree.leaves = n;
    for (std::size_t step = 0; step + 1 < n; ++step) {
        std::size_t bi = 0, bj = 0;
        auto best = std::make_tuple(std::numeric_limits<double>::infinity(), n * 2, n * 2);
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                auto cand = std::make_tuple(dist[i * n + j], std::min(id[i], id[j]), std::max(id[i], id[j]));
                if (cand < best) {
                    best = cand;
                    bi = i;
                    bj = j;
                }
            }
        }
        const double h = std::get<0>(best);
        tree.merges.push_back({std::min(id[bi], id[bj]), std::max(id[bi], id[bj]), h});
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            const double di = dist[bi * n + k], dj = dist[bj * n + k];
            double nd = 0.0;
            switch (method) {
                case LinkageMethod::single: nd = std::min(di, dj); break;
                case LinkageMethod::complete: nd = std::max(di, dj); break;
                case LinkageMethod::average:
                    nd = (static_cast<double>(size[bi]) * di + static_cast<double>(size[bj]) * dj) /
                         static_cast<double>(size[bi] + size[bj]);
                    break;
            }
            dist[bi * n + k] = dist[k * n + bi] = nd;
        }
        active[bj] = false;
        size[bi] += size[bj];
        id[bi] = n + step;
    }
    return tree;
}

namespace detail {

inline std::string format_number(double x) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, p);
}

inline bool newick_needs_quotes(std::string_view s) {
    if (s.empty()) return false;
    return s.find_first_of(" \t\r\n()[]':;,") != std::string_view::npos;
}

inline std::string newick_label(std::string_view s) {
    if (!newick_needs_quotes(s)) return std::string(s);
    std::string q = "'";
    for (char c : s) {
        if (c == '\'') q += '\'';
        q += c;
    }
    return q + "'";
}

}  // namespace detail

/// Newick with branch lengths parent height minus child height. Optional
/// `internal_labels[i]` names the cluster created by merge i.
inline std::string newick_export(const LinkageTree& t, const std::vector<std::string>& labels,
                                 const std::vector<std::string>& internal_labels = {}) {
    if (labels.size() != t.leaves) throw std::invalid_argument("label count does not match leaf count");
    if (t.merges.size() + 1 != t.leaves) throw std::invalid_argument("tree must have leaves - 1 merges");
    if (!internal_labels.empty() && internal_labels.size() != t.merges.size())
        throw std::invalid_argument("internal label count does not match merge count");
    std::string out;
    auto emit = [&](auto&& self, std::size_t node) -> void {
        if (t.is_leaf(node)) {
            out += detail::newick_label(labels[node]);
            return;
        }
        const auto& m = t.merges[node - t.leaves];
        out += '(';
        for (std::size_t child : {m.a, m.b}) {
            if (child != m.a) out += ',';
            self(self, child);
            out += ':';
            out += detail::format_number(m.height - t.height(child));
        }
        out += ')';
        if (!internal_labels.empty()) out += detail::newick_label(internal_labels[node - t.leaves]);
    };
    emit(emit, t.root());
    out += ';';
    return out;
}

struct NewickNode {
    std::string label;
    std::optional<double> length;
    std::vector<NewickNode> children;
};

/// Parser for the subset of Newick emitted above (quoted labels, lengths,
/// arbitrary arity).
inline NewickNode parse_newick(std::string_view s) {
    std::size_t pos = 0;
    auto skip_ws = [&] {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    auto fail = [&](const char* what) -> void {
        throw std::invalid_argument(std::string("malformed Newick at offset ") + std::to_string(pos) + ": " + what);
    };
    auto parse_label = [&]() {
        skip_ws();
        std::string label;
        if (pos < s.size() && s[pos] == '\'') {
            ++pos;
            for (;;) {
                if (pos >= s.size()) fail("unterminated quoted label");
                if (s[pos] == '\'') {
                    if (pos + 1 < s.size() && s[pos + 1] == '\'') {
                        label += '\'';
                        pos += 2;
                        continue;
                    }
                    ++pos;
                    break;
                }
                label += s[pos++];
            }
            return label;
        }
        while (pos < s.size() && std::string_view("()[]:;,").find(s[pos]) == std::string_view::npos &&
               !std::isspace(static_cast<unsigned char>(s[pos])))
            label += s[pos++];
        return label;
    };
    auto parse_node = [&](auto&& self) -> NewickNode {
        NewickNode node;
        skip_ws();
        if (pos < s.size() && s[pos] == '(') {
            ++pos;
            for (;;) {
                node.children.push_back(self(self));
                skip_ws();
                if (pos < s.size() && s[pos] == ',') {
                    ++pos;
                    continue;
                }
                if (pos < s.size() && s[pos] == ')') {
                    ++pos;
                    break;
                }
                fail("expected ',' or ')'");
            }
        }
        node.label = parse_label();
        skip_ws();
        if (pos < s.size() && s[pos] == ':') {
            ++pos;
            skip_ws();
            double v = 0.0;
            auto [p, ec] = std::from_chars(s.data() + pos, s.data() + s.size(), v);
            if (ec != std::errc()) fail("bad branch length");
            pos = static_cast<std::size_t>(p - s.data());
            node.length = v;
        }
        return node;
    };
    NewickNode root = parse_node(parse_node);
    skip_ws();
    if (pos >= s.size() || s[pos] != ';') fail("missing terminating ';'");
    return root;
}

struct CladeLabel {
    std::size_t node = 0;  ///< cluster id of the internal node (leaves + merge index)
    std::string label;     ///< empty when no taxon is exclusive to the clade
};

/// Label each internal node with the most general taxon shared by all of its
/// leaves and by no leaf outside it. Lineages are ordered general to specific.
inline std::vector<CladeLabel> annotate_clades(const LinkageTree& t,
                                               const std::vector<std::vector<std::string>>& leaf_taxa) {
    if (leaf_taxa.size() != t.leaves) throw std::invalid_argument("lineage count does not match leaf count");
    const auto members = t.members();
    std::vector<CladeLabel> out;
    out.reserve(t.merges.size());
    for (std::size_t i = 0; i < t.merges.size(); ++i) {
        const std::size_t node = t.leaves + i;
        const auto& inside = members[node];
        std::set<std::string> shared(leaf_taxa[inside.front()].begin(), leaf_taxa[inside.front()].end());
        for (std::size_t leaf : inside) {
            std::set<std::string> here(leaf_taxa[leaf].begin(), leaf_taxa[leaf].end());
            std::set<std::string> keep;
            std::set_intersection(shared.begin(), shared.end(), here.begin(), here.end(),
                                  std::inserter(keep, keep.end()));
            shared = std::move(keep);
        }
        std::vector<bool> is_inside(t.leaves, false);
        for (std::size_t leaf : inside) is_inside[leaf] = true;
        for (std::size_t leaf = 0; leaf < t.leaves; ++leaf)
            if (!is_inside[leaf])
                for (const auto& taxon : leaf_taxa[leaf]) shared.erase(taxon);
        CladeLabel c{node, {}};
        for (const auto& taxon : leaf_taxa[inside.front()])
            if (shared.count(taxon)) {
                c.label = taxon;
                break;
            }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace dbent
