#pragma once

// Nearest-neighbour binary spin chains on a ring, summed through the
// order-1 de Bruijn density of states.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "alphabet.hpp"
#include "entropy.hpp"
#include "number_theory.hpp"

namespace dbent::spin {

/// Prefactor on the sigma-sigma coupling: `unit` uses -J s s' - K s, which
/// reproduces the closed-form energy and the thermodynamic limit exactly;
/// `doubled` uses -2J s s' - K s.
enum class Convention { unit, doubled };

inline Convention parse_convention(std::string_view s) {
    if (s == "unit") return Convention::unit;
    if (s == "doubled") return Convention::doubled;
    throw std::invalid_argument("unknown coupling convention '" + std::string(s) + "'");
}

/// Which cyclic words are summed: every rotation separately (all 2^ell spin
/// configurations) or one representative per necklace.
enum class StateCounting { linear, cyclic };

struct SpinParams {
    double J = 0.0;
    double K = 0.0;
    double beta = 1.0;
    std::uint64_t ell = 2;
    Convention convention = Convention::unit;

    double coupling_prefactor() const { return convention == Convention::unit ? 1.0 : 2.0; }
    double effective_J() const { return coupling_prefactor() * J; }

    void validate() const {
        if (ell < 2) throw std::invalid_argument("chain length must be at least 2");
        if (beta < 0.0) throw std::invalid_argument("inverse temperature must be nonnegative");
    }
};

/// sigma-sigma and sigma terms of the local potential on the 2-gram (a, b).
inline double local_potential(symbol_index a, symbol_index b, const SpinParams& p) {
    const double sa = 2.0 * a - 1.0, sb = 2.0 * b - 1.0;
    return -p.effective_J() * sa * sb - p.K * sa;
}

/// Cyclic sum of the local potential.
inline double word_energy(const CyclicWord& w, const SpinParams& p) {
    if (w.alphabet_size() != 2) throw std::invalid_argument("spin words must be binary");
    double e = 0.0;
    for (std::size_t j = 0; j < w.length(); ++j) e += local_potential(w[j], w[j + 1], p);
    return e;
}

/// 2K x00 + (4J + 2K) x* - (J + K) ell, with J scaled by the convention's prefactor.
inline double closed_form_energy(std::uint64_t x00, std::uint64_t xstar, const SpinParams& p) {
    if (x00 + 2 * xstar > p.ell) throw std::invalid_argument("x00 + 2 x* exceeds the chain length");
    if (xstar == 0 && x00 != 0 && x00 != p.ell) throw std::invalid_argument("x* = 0 requires x00 = 0 or x00 = ell");
    const double J = p.effective_J(), K = p.K;
    const double l = static_cast<double>(p.ell);
    return 2.0 * K * static_cast<double>(x00) + (4.0 * J + 2.0 * K) * static_cast<double>(xstar) - (J + K) * l;
}

/// log of the number of linear words (rotations counted separately) with the
/// given 2-gram counts: ell * c(A) / A!.
inline double log_linear_count(std::uint64_t x00, std::uint64_t xstar, std::uint64_t ell) {
    if (x00 + 2 * xstar > ell) throw std::invalid_argument("x00 + 2 x* exceeds the word length");
    if (xstar == 0) {
        if (x00 == 0 || x00 == ell) return 0.0;
        throw std::invalid_argument("x* = 0 requires x00 = 0 or x00 = ell");
    }
    const std::uint64_t x11 = ell - x00 - 2 * xstar;
    const std::uint64_t deg0 = x00 + xstar, deg1 = xstar + x11;
    return std::log(static_cast<double>(ell)) + std::log(static_cast<double>(xstar)) -
           std::log(static_cast<double>(deg0)) - std::log(static_cast<double>(deg1)) + log_binomial(deg0, xstar) +
           log_binomial(deg1, xstar);
}

struct GridCell {
    std::uint64_t x00 = 0;
    std::uint64_t xstar = 0;
    double log_states = 0.0;  ///< H_1 (cyclic) or log linear count
    double energy = 0.0;
    double log_weight = 0.0;  ///< log_states - beta * energy
};

/// Every realizable (x00, x*) for the chain length, including the two constant words.
inline std::vector<GridCell> energy_grid(const SpinParams& p, StateCounting counting = StateCounting::linear) {
    p.validate();
    std::vector<GridCell> cells;
    auto add = [&](std::uint64_t x00, std::uint64_t xs) {
        GridCell c{x00, xs, 0.0, closed_form_energy(x00, xs, p), 0.0};
        c.log_states = counting == StateCounting::linear ? log_linear_count(x00, xs, p.ell)
                                                         : binary_W1_closed_form(x00, xs, p.ell);
        c.log_weight = c.log_states - p.beta * c.energy;
        cells.push_back(c);
    };
    add(0, 0);
    add(p.ell, 0);
    for (std::uint64_t xs = 1; 2 * xs <= p.ell; ++xs)
        for (std::uint64_t x00 = 0; x00 + 2 * xs <= p.ell; ++x00) add(x00, xs);
    return cells;
}

/// log Z summed over the (x00, x*) density of states.
inline double partition_function(const SpinParams& p, StateCounting counting = StateCounting::linear) {
    const auto cells = energy_grid(p, counting);
    std::vector<double> terms;
    terms.reserve(cells.size());
    for (const auto& c : cells) terms.push_back(c.log_weight);
    return log_sum_exp(terms);
}

/// lim Z^(1/ell) = e^{bJ} cosh bK + sqrt(e^{2bJ} sinh^2 bK + e^{-2bJ}).
inline double thermodynamic_limit(const SpinParams& p) {
    const double bJ = p.beta * p.effective_J(), bK = p.beta * p.K;
    return std::exp(bJ) * std::cosh(bK) +
           std::sqrt(std::exp(2.0 * bJ) * std::sinh(bK) * std::sinh(bK) + std::exp(-2.0 * bJ));
}

/// User-supplied local potential on 2-grams (for example nearest-neighbour
/// hybridization free energies over ACGT).
class PairPotential {
public:
    explicit PairPotential(std::size_t alphabet_size)
        : n_(alphabet_size), table_(alphabet_size * alphabet_size, 0.0) {}

    void set(symbol_index a, symbol_index b, double e) { table_.at(a * n_ + b) = e; }
    double operator()(symbol_index a, symbol_index b) const { return table_.at(a * n_ + b); }
    std::size_t alphabet_size() const noexcept { return n_; }

    double energy(const CyclicWord& w) const {
        if (w.alphabet_size() != n_) throw std::invalid_argument("word alphabet does not match the potential");
        double e = 0.0;
        for (std::size_t j = 0; j < w.length(); ++j) e += (*this)(w[j], w[j + 1]);
        return e;
    }

private:
    std::size_t n_;
    std::vector<double> table_;
};

}  // namespace dbent::spin
