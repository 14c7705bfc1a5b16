#pragma once

// Helpers shared by the test suites. Reference computations here are
// written from scratch and do not call the code under test.

#include <array>
#include <cstdio>
#include <cstdlib>
#include <sys/wait.h>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "dbent/dbent.hpp"

namespace testsupport {

inline dbent::CyclicWord word(const std::string& text, const std::string& alphabet) {
    return dbent::CyclicWord(text, dbent::Alphabet::from_chars(alphabet));
}

inline dbent::CyclicWord random_word(std::mt19937_64& rng, std::size_t length, std::size_t n) {
    std::uniform_int_distribution<dbent::symbol_index> pick(0, static_cast<dbent::symbol_index>(n - 1));
    std::vector<dbent::symbol_index> s(length);
    for (auto& c : s) c = pick(rng);
    return dbent::CyclicWord(std::move(s), n);
}

/// Binary word from the low `length` bits of `bits`, most significant first.
inline dbent::CyclicWord binary_word(std::uint64_t bits, std::size_t length) {
    std::vector<dbent::symbol_index> s(length);
    for (std::size_t i = 0; i < length; ++i) s[i] = (bits >> (length - 1 - i)) & 1u;
    return dbent::CyclicWord(std::move(s), 2);
}

/// Counts of each cyclic (k+1)-gram, keyed by its symbols.
inline std::map<std::vector<dbent::symbol_index>, std::uint64_t> gram_counts(const dbent::CyclicWord& w,
                                                                           std::size_t k) {
    std::map<std::vector<dbent::symbol_index>, std::uint64_t> m;
    for (std::size_t j = 0; j < w.length(); ++j) {
        std::vector<dbent::symbol_index> g(k + 1);
        for (std::size_t i = 0; i <= k; ++i) g[i] = w[(j + i) % w.length()];
        ++m[g];
    }
    return m;
}

/// The quiver's edges spelled out as (k+1)-grams with their counts.
inline std::map<std::vector<dbent::symbol_index>, std::uint64_t> spelled_edges(const dbent::Quiver& q) {
    std::map<std::vector<dbent::symbol_index>, std::uint64_t> m;
    for (const auto& e : q.edges()) {
        auto from = q.label(e.from);
        const auto to = q.label(e.to);
        from.push_back(to.back());
        m[from] += e.count;
    }
    return m;
}

/// Directed multigraph on 0..m-1 built as one random closed walk, so it is
/// connected and balanced.
inline dbent::Quiver random_eulerian(std::mt19937_64& rng, std::size_t vertices, std::size_t edges) {
    std::uniform_int_distribution<std::size_t> pick(0, vertices - 1);
    std::vector<std::size_t> walk(edges);
    for (auto& v : walk) v = pick(rng);
    std::vector<dbent::Edge> out;
    for (std::size_t i = 0; i < edges; ++i) out.push_back({walk[i], walk[(i + 1) % edges], 1});
    return dbent::Quiver(1, vertices, std::move(out));
}

struct CommandResult {
    int status = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Runs a shell command, capturing stdout and stderr separately.
inline CommandResult run(const std::string& command, const std::string& tag) {
    const std::string out_path = "/tmp/dbent_test_" + tag + ".out";
    const std::string err_path = "/tmp/dbent_test_" + tag + ".err";
    const int raw = std::system((command + " >" + out_path + " 2>" + err_path).c_str());
    CommandResult r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

}  // namespace testsupport
