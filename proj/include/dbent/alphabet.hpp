#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dbent {

using symbol_index = std::uint32_t;

/// Ordered set of distinct symbols. Symbols are opaque tokens; the common
/// case of single characters is handled by `from_chars`.
class Alphabet {
public:
    Alphabet() = default;

    explicit Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
        if (symbols_.empty())
            throw std::invalid_argument("alphabet must contain at least one symbol");
        index_.reserve(symbols_.size());
        for (std::size_t i = 0; i < symbols_.size(); ++i) {
            if (!index_.emplace(symbols_[i], static_cast<symbol_index>(i)).second)
                throw std::invalid_argument("duplicate symbol '" + symbols_[i] + "' in alphabet");
        }
    }

    static Alphabet from_chars(std::string_view chars) {
        std::vector<std::string> s;
        s.reserve(chars.size());
        for (char c : chars) s.emplace_back(1, c);
        return Alphabet(std::move(s));
    }

    /// Sorted distinct characters of `text`.
    static Alphabet inferred_from(std::string_view text) {
        std::string chars(text);
        std::sort(chars.begin(), chars.end());
        chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
        return from_chars(chars);
    }

    std::size_t size() const noexcept { return symbols_.size(); }
    const std::string& symbol(symbol_index i) const { return symbols_.at(i); }
    const std::vector<std::string>& symbols() const noexcept { return symbols_; }

    bool contains(std::string_view s) const { return index_.find(std::string(s)) != index_.end(); }

    symbol_index index_of(std::string_view s) const {
        auto it = index_.find(std::string(s));
        if (it == index_.end())
            throw std::invalid_argument("symbol '" + std::string(s) + "' is not in the alphabet");
        return it->second;
    }

    /// True when every symbol is a single character, so words render as plain strings.
    bool is_char_alphabet() const noexcept {
        return std::all_of(symbols_.begin(), symbols_.end(),
                           [](const std::string& s) { return s.size() == 1; });
    }

    friend bool operator==(const Alphabet& a, const Alphabet& b) { return a.symbols_ == b.symbols_; }

private:
    std::vector<std::string> symbols_;
    std::unordered_map<std::string, symbol_index> index_;
};

/// A word read cyclically: index access wraps modulo the length.
class CyclicWord {
public:
    CyclicWord(std::vector<symbol_index> indices, std::size_t alphabet_size)
        : indices_(std::move(indices)), n_(alphabet_size) {
        if (indices_.empty()) throw std::invalid_argument("word must be nonempty");
        if (n_ == 0) throw std::invalid_argument("alphabet must be nonempty");
        for (auto i : indices_)
            if (i >= n_) throw std::invalid_argument("symbol index out of alphabet range");
    }

    /// Each character of `text` is one symbol.
    CyclicWord(std::string_view text, const Alphabet& alphabet) : n_(alphabet.size()) {
        if (text.empty()) throw std::invalid_argument("word must be nonempty");
        indices_.reserve(text.size());
        for (char c : text) indices_.push_back(alphabet.index_of(std::string_view(&c, 1)));
    }

    CyclicWord(std::span<const std::string> tokens, const Alphabet& alphabet) : n_(alphabet.size()) {
        if (tokens.empty()) throw std::invalid_argument("word must be nonempty");
        indices_.reserve(tokens.size());
        for (const auto& t : tokens) indices_.push_back(alphabet.index_of(t));
    }

    std::size_t length() const noexcept { return indices_.size(); }
    std::size_t alphabet_size() const noexcept { return n_; }

    /// Zero-based cyclic access.
    symbol_index operator[](std::size_t j) const noexcept { return indices_[j % indices_.size()]; }

    std::span<const symbol_index> indices() const noexcept { return indices_; }

    friend bool operator==(const CyclicWord&, const CyclicWord&) = default;

private:
    std::vector<symbol_index> indices_;
    std::size_t n_ = 0;
};

inline CyclicWord concatenate(const CyclicWord& u, const CyclicWord& v) {
    if (u.alphabet_size() != v.alphabet_size())
        throw std::invalid_argument("cannot concatenate words over different alphabets");
    std::vector<symbol_index> out(u.indices().begin(), u.indices().end());
    out.insert(out.end(), v.indices().begin(), v.indices().end());
    return CyclicWord(std::move(out), u.alphabet_size());
}

inline std::string to_string(const CyclicWord& w, const Alphabet& alphabet) {
    std::string s;
    for (auto i : w.indices()) s += alphabet.symbol(i);
    return s;
}

}  // namespace dbent
