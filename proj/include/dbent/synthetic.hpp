#pragma once

// Seeded random words and point mutations for synthetic corpora.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dbent::synthetic {

inline std::string random_word(std::size_t length, std::string_view symbols, std::mt19937_64& rng) {
    if (symbols.empty()) throw std::invalid_argument("empty symbol set");
    std::uniform_int_distribution<std::size_t> pick(0, symbols.size() - 1);
    std::string w(length, '\0');
    for (auto& c : w) c = symbols[pick(rng)];
    return w;
}

/// Each position is replaced, with probability `rate`, by a different symbol
/// chosen uniformly.
inline std::string point_mutate(std::string_view word, double rate, std::string_view symbols, std::mt19937_64& rng) {
    if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("mutation rate must lie in [0, 1]");
    if (symbols.size() < 2) throw std::invalid_argument("mutation needs at least two symbols");
    std::bernoulli_distribution hit(rate);
    std::uniform_int_distribution<std::size_t> other(1, symbols.size() - 1);
    std::string out(word);
    for (auto& c : out) {
        if (!hit(rng)) continue;
        const auto pos = symbols.find(c);
        if (pos == std::string_view::npos) throw std::invalid_argument("word symbol outside the mutation set");
        c = symbols[(pos + other(rng)) % symbols.size()];
    }
    return out;
}

}  // namespace dbent::synthetic
