#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "support.hpp"

using namespace dbent;
using testsupport::word;

namespace {

DistanceMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.1, 10.0);
    DistanceMatrix d(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d.set(i, j, u(rng));
    return d;
}

using Clusters = std::set<std::vector<std::size_t>>;

Clusters internal_clusters(const LinkageTree& t, const std::vector<std::size_t>& relabel = {}) {
    Clusters out;
    const auto m = t.members();
    for (std::size_t i = t.leaves; i < m.size(); ++i) {
        auto c = m[i];
        if (!relabel.empty())
            for (auto& x : c) x = relabel[x];
        std::sort(c.begin(), c.end());
        out.insert(c);
    }
    return out;
}

/// Kruskal edge weights in merge order.
std::vector<double> mst_weights(const DistanceMatrix& d) {
    std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < d.size; ++i)
        for (std::size_t j = i + 1; j < d.size; ++j) edges.emplace_back(d(i, j), i, j);
    std::sort(edges.begin(), edges.end());
    std::vector<std::size_t> parent(d.size);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<double> out;
    for (auto [w, i, j] : edges) {
        const auto a = find(i), b = find(j);
        if (a == b) continue;
        parent[a] = b;
        out.push_back(w);
    }
    return out;
}

}  // namespace

TEST(Levenshtein, KnownDistances) {
    EXPECT_EQ(levenshtein("kitten", "sitting"), 3u);
    EXPECT_EQ(levenshtein("", "abc"), 3u);
    EXPECT_EQ(levenshtein("abc", ""), 3u);
    EXPECT_EQ(levenshtein("same", "same"), 0u);
    EXPECT_EQ(levenshtein("ABRACADABRA", "ABARACARBAD"), 5u);
    const std::vector<int> a{1, 2, 3}, b{1, 3};
    EXPECT_EQ(levenshtein(a, b), 1u);
}

TEST(Levenshtein, MatchesFullTable) {
    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 200; ++trial) {
        std::string a(rng() % 12, 'a'), b(rng() % 12, 'a');
        for (auto& c : a) c = static_cast<char>('a' + rng() % 3);
        for (auto& c : b) c = static_cast<char>('a' + rng() % 3);
        std::vector<std::vector<std::size_t>> t(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
        for (std::size_t i = 0; i <= a.size(); ++i) t[i][0] = i;
        for (std::size_t j = 0; j <= b.size(); ++j) t[0][j] = j;
        for (std::size_t i = 1; i <= a.size(); ++i)
            for (std::size_t j = 1; j <= b.size(); ++j)
                t[i][j] = std::min({t[i - 1][j] + 1, t[i][j - 1] + 1, t[i - 1][j - 1] + (a[i - 1] != b[j - 1])});
        EXPECT_EQ(levenshtein(a, b), t[a.size()][b.size()]);
    }
}

TEST(DistanceMatrix, SymmetricZeroDiagonalAndScheduleIndependent) {
    std::mt19937_64 rng(31);
    std::vector<CyclicWord> words;
    for (int i = 0; i < 9; ++i) words.push_back(testsupport::random_word(rng, 60 + rng() % 40, 4));
    for (bool norm : {false, true}) {
        DistanceOptions one, many;
        one.threads = 1;
        many.threads = 4;
        const auto a = distance_matrix(words, 2, norm, one);
        const auto b = distance_matrix(words, 2, norm, many);
        EXPECT_EQ(a.values, b.values);
        for (std::size_t i = 0; i < a.size; ++i) {
            EXPECT_EQ(a(i, i), 0.0);
            for (std::size_t j = 0; j < a.size; ++j) EXPECT_EQ(a(i, j), a(j, i));
        }
        for (std::size_t i = 0; i < a.size; ++i)
            for (std::size_t j = i + 1; j < a.size; ++j)
                EXPECT_EQ(a(i, j), norm ? relative_entropy(words[i], words[j], 2).nats /
                                              word_entropy(concatenate(words[i], words[j]), 2).nats
                                        : relative_entropy(words[i], words[j], 2).nats);
    }
}

TEST(DistanceMatrix, NormalizationWithZeroDenominator) {
    const std::vector<CyclicWord> words{word("AAAA", "AB"), word("AAAAAA", "AB")};
    const auto d = distance_matrix(words, 1, true);
    EXPECT_EQ(d(0, 1), 0.0);
    EXPECT_FALSE(d.used_fallback(0, 1));
}

TEST(DistanceMatrix, ErrorsPropagate) {
    const std::vector<CyclicWord> words{word("ABAB", "AB"), word("AB", "AB")};
    EXPECT_THROW(distance_matrix(words, 2, false), std::invalid_argument);
}

TEST(Linkage, HandComputedSingleAverageComplete) {
    // points on a line at 0, 1, 5, 11
    DistanceMatrix d(4);
    const double x[] = {0, 1, 5, 11};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) d.set(i, j, x[j] - x[i]);
    const auto s = linkage(d, LinkageMethod::single);
    ASSERT_EQ(s.merges.size(), 3u);
    EXPECT_EQ(s.merges[0].a, 0u);
    EXPECT_EQ(s.merges[0].b, 1u);
    EXPECT_EQ(s.merges[0].height, 1.0);
    EXPECT_EQ(s.merges[1].a, 2u);
    EXPECT_EQ(s.merges[1].b, 4u);
    EXPECT_EQ(s.merges[1].height, 4.0);
    EXPECT_EQ(s.merges[2].height, 6.0);
    const auto a = linkage(d, LinkageMethod::average);
    EXPECT_EQ(a.merges[1].height, 4.5);
    EXPECT_DOUBLE_EQ(a.merges[2].height, (11.0 + 10.0 + 6.0) / 3.0);
    const auto c = linkage(d, LinkageMethod::complete);
    EXPECT_EQ(c.merges[1].height, 5.0);
    EXPECT_EQ(c.merges[2].height, 11.0);
}

TEST(Linkage, TiesBreakOnSmallestPair) {
    DistanceMatrix d(4);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) d.set(i, j, 1.0);
    const auto t = linkage(d, LinkageMethod::average);
    EXPECT_EQ(t.merges[0].a, 0u);
    EXPECT_EQ(t.merges[0].b, 1u);
    EXPECT_EQ(t.merges[1].a, 2u);
    EXPECT_EQ(t.merges[1].b, 3u);
}

TEST(Linkage, AverageHeightsAreMeanLeafDistances) {
    std::mt19937_64 rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        const auto d = random_matrix(rng, 3 + rng() % 8);
        const auto t = linkage(d, LinkageMethod::average);
        const auto m = t.members();
        for (const auto& merge : t.merges) {
            double sum = 0.0;
            for (auto i : m[merge.a])
                for (auto j : m[merge.b]) sum += d(i, j);
            EXPECT_NEAR(merge.height, sum / static_cast<double>(m[merge.a].size() * m[merge.b].size()), 1e-12);
        }
    }
}

TEST(Linkage, InvariantUnderPermutation) {
    std::mt19937_64 rng(33);
    for (const auto method : {LinkageMethod::single, LinkageMethod::average, LinkageMethod::complete})
        for (int trial = 0; trial < 100; ++trial) {
            const std::size_t n = 2 + rng() % 9;
            const auto d = random_matrix(rng, n);
            std::vector<std::size_t> perm(n);
            std::iota(perm.begin(), perm.end(), 0);
            std::shuffle(perm.begin(), perm.end(), rng);
            DistanceMatrix p(n);  // p(i, j) = d(perm[i], perm[j])
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) p.set(i, j, d(perm[i], perm[j]));
            const auto td = linkage(d, method), tp = linkage(p, method);
            EXPECT_EQ(internal_clusters(td), internal_clusters(tp, perm));
            for (std::size_t s = 0; s < td.merges.size(); ++s)
                EXPECT_NEAR(td.merges[s].height, tp.merges[s].height, 1e-12);
        }
}

TEST(Linkage, SingleLinkageFollowsMinimumSpanningTree) {
    std::mt19937_64 rng(34);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_matrix(rng, 2 + rng() % 7);
        const auto t = linkage(d, LinkageMethod::single);
        const auto mst = mst_weights(d);
        ASSERT_EQ(mst.size(), t.merges.size());
        for (std::size_t s = 0; s < mst.size(); ++s) EXPECT_EQ(t.merges[s].height, mst[s]);
        DistanceMatrix warped(d.size);
        for (std::size_t i = 0; i < d.size; ++i)
            for (std::size_t j = i + 1; j < d.size; ++j) warped.set(i, j, std::exp(d(i, j)) + 3.0);
        EXPECT_EQ(internal_clusters(linkage(warped, LinkageMethod::single)), internal_clusters(t));
    }
}

TEST(Linkage, RejectsBadInput) {
    EXPECT_THROW(linkage(DistanceMatrix(1), LinkageMethod::single), std::invalid_argument);
    DistanceMatrix d(2);
    d.set(0, 1, -1.0);
    EXPECT_THROW(linkage(d, LinkageMethod::single), std::invalid_argument);
    EXPECT_THROW(parse_linkage_method("ward"), std::invalid_argument);
}

TEST(Newick, ExportAndRoundTrip) {
    DistanceMatrix d(3);
    d.set(0, 1, 1.0);
    d.set(0, 2, 4.0);
    d.set(1, 2, 3.0);
    const auto t = linkage(d, LinkageMethod::average);
    const std::vector<std::string> labels{"Homo sapiens", "Pan", "it's"};
    const auto s = newick_export(t, labels, {"Hominini", "root clade"});
    // children are written in ascending cluster id: leaf 2 before cluster 3
    EXPECT_EQ(s, "('it''s':3.5,('Homo sapiens':1,Pan:1)Hominini:2.5)'root clade';");
    const auto root = parse_newick(s);
    EXPECT_EQ(root.label, "root clade");
    ASSERT_EQ(root.children.size(), 2u);
    EXPECT_EQ(root.children[0].label, "it's");
    EXPECT_EQ(root.children[0].length, 3.5);
    EXPECT_EQ(root.children[1].label, "Hominini");
    EXPECT_EQ(root.children[1].length, 2.5);
    ASSERT_EQ(root.children[1].children.size(), 2u);
    EXPECT_EQ(root.children[1].children[0].label, "Homo sapiens");
}

TEST(Newick, RandomTreesRoundTrip) {
    std::mt19937_64 rng(35);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + rng() % 10;
        const auto t = linkage(random_matrix(rng, n), LinkageMethod::average);
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < n; ++i) labels.push_back(i % 2 ? "leaf " + std::to_string(i) : "l" + std::to_string(i));
        const auto root = parse_newick(newick_export(t, labels));
        // walk the parsed tree back to leaves and heights
        std::map<std::string, double> depth;
        auto walk = [&](auto&& self, const NewickNode& node, double above) -> void {
            const double here = above + node.length.value_or(0.0);
            if (node.children.empty()) depth[node.label] = here;
            for (const auto& c : node.children) self(self, c, here);
        };
        walk(walk, root, 0.0);
        ASSERT_EQ(depth.size(), n);
        for (const auto& l : labels) EXPECT_NEAR(depth.at(l), t.merges.back().height, 1e-9);
    }
}

TEST(Newick, MalformedInput) {
    EXPECT_THROW(parse_newick("(a,b"), std::invalid_argument);
    EXPECT_THROW(parse_newick("(a,b)"), std::invalid_argument);
    EXPECT_THROW(parse_newick("('a,b);"), std::invalid_argument);
}

TEST(Clades, MostGeneralExclusiveTaxon) {
    DistanceMatrix d(4);
    d.set(0, 1, 1.0);
    d.set(2, 3, 1.0);
    d.set(0, 2, 5.0);
    d.set(0, 3, 5.0);
    d.set(1, 2, 5.0);
    d.set(1, 3, 5.0);
    const auto t = linkage(d, LinkageMethod::average);
    const std::vector<std::vector<std::string>> taxa{{"Primates", "Haplorrhini", "Hominidae", "Homo"},
                                                     {"Primates", "Haplorrhini", "Hominidae", "Pan"},
                                                     {"Primates", "Strepsirrhini", "Lemuridae", "Lemur"},
                                                     {"Primates", "Strepsirrhini", "Lemuridae", "Eulemur"}};
    const auto clades = annotate_clades(t, taxa);
    ASSERT_EQ(clades.size(), 3u);
    EXPECT_EQ(clades[0].label, "Haplorrhini");
    EXPECT_EQ(clades[1].label, "Strepsirrhini");
    EXPECT_EQ(clades[2].label, "Primates");
    EXPECT_THROW(annotate_clades(t, {taxa[0]}), std::invalid_argument);
}

TEST(Separation, RelativeEntropyBoundedWhileEditDistanceGrows) {
    const std::size_t m = 2;
    double lo = 1e300, hi = -1e300;
    for (std::size_t ell : {8, 16, 32, 64}) {
        const std::string w = std::string(m * ell, 'A') + std::string(m * ell, 'B');
        std::string w2;
        for (std::size_t r = 0; r < m; ++r) w2 += std::string(ell, 'A') + std::string(ell, 'B');
        const double h = relative_entropy(word(w, "AB"), word(w2, "AB"), 2).nats;
        lo = std::min(lo, h);
        hi = std::max(hi, h);
        EXPECT_EQ(levenshtein(w, w2), 2 * (m / 2) * ell);
    }
    EXPECT_LT(hi - lo, 2.0);
}
