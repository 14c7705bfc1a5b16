#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

namespace dbent {

/// log|det| together with the sign; sign 0 means singular.
struct LogDeterminant {
    double log_abs = 0.0;
    int sign = 1;
};

/// Triplet entry of a sparse square matrix.
struct MatrixEntry {
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

/// Minors at or below this dimension are factored densely.
inline constexpr std::size_t default_dense_dimension_limit = 512;

/// Dense partial-pivot LU on a row-major copy, accumulating sum(log|pivot|).
inline LogDeterminant log_determinant_dense(std::vector<double> a, std::size_t dim) {
    if (a.size() != dim * dim) throw std::invalid_argument("matrix storage does not match dimension");
    LogDeterminant out;
    for (std::size_t c = 0; c < dim; ++c) {
        std::size_t piv = c;
        double best = std::abs(a[c * dim + c]);
        for (std::size_t r = c + 1; r < dim; ++r) {
            const double v = std::abs(a[r * dim + c]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
        if (piv != c) {
            for (std::size_t j = c; j < dim; ++j) std::swap(a[c * dim + j], a[piv * dim + j]);
            out.sign = -out.sign;
        }
        const double p = a[c * dim + c];
        if (p < 0) out.sign = -out.sign;
        out.log_abs += std::log(std::abs(p));
        for (std::size_t r = c + 1; r < dim; ++r) {
            const double f = a[r * dim + c] / p;
            if (f == 0.0) continue;
            double* row = &a[r * dim];
            const double* prow = &a[c * dim];
            for (std::size_t j = c + 1; j < dim; ++j) row[j] -= f * prow[j];
        }
    }
    return out;
}

/// Sparse LU with fill-reducing column ordering.
inline LogDeterminant log_determinant_sparse(std::span<const MatrixEntry> entries, std::size_t dim) {
    if (dim == 0) return {};
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(entries.size());
    for (const auto& e : entries) t.emplace_back(static_cast<int>(e.row), static_cast<int>(e.col), e.value);
    Eigen::SparseMatrix<double> m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(m);
    if (lu.info() != Eigen::Success) return {-std::numeric_limits<double>::infinity(), 0};
    return {lu.logAbsDeterminant(), static_cast<int>(lu.signDeterminant())};
}

/// log|det| of a sparse square matrix; the 0x0 matrix has determinant 1.
inline LogDeterminant log_determinant(std::span<const MatrixEntry> entries, std::size_t dim,
                                      std::size_t dense_limit = default_dense_dimension_limit) {
    if (dim == 0) return {};
    if (dim <= dense_limit) {
        std::vector<double> a(dim * dim, 0.0);
        for (const auto& e : entries) a[e.row * dim + e.col] += e.value;
        return log_determinant_dense(std::move(a), dim);
    }
    return log_determinant_sparse(entries, dim);
}

}  // namespace dbent
