#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>

#include "kgads/parallel.hpp"

namespace kgads {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// A * B with row blocks of A distributed over workers. The block size is fixed so
// the floating-point evaluation order is independent of the thread count.
inline Matrix gemm(const Eigen::Ref<const Matrix>& a, const Eigen::Ref<const Matrix>& b) {
    Matrix c(a.rows(), b.cols());
    constexpr std::size_t block = 64;
    parallel_chunks(static_cast<std::size_t>(a.rows()), block, [&](std::size_t lo, std::size_t hi) {
        const auto rows = static_cast<Eigen::Index>(hi - lo);
        c.middleRows(static_cast<Eigen::Index>(lo), rows).noalias() = a.middleRows(static_cast<Eigen::Index>(lo), rows) * b;
    });
    return c;
}

// Fills m(i, j) = fn(i, j), parallel over row blocks.
inline Matrix tabulate(Eigen::Index rows, Eigen::Index cols, const std::function<double(Eigen::Index, Eigen::Index)>& fn) {
    Matrix m(rows, cols);
    parallel_chunks(static_cast<std::size_t>(rows), 16, [&](std::size_t lo, std::size_t hi) {
        for (auto i = static_cast<Eigen::Index>(lo); i < static_cast<Eigen::Index>(hi); ++i)
            for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = fn(i, j);
    });
    return m;
}

// Pairwise sum of all entries, column-major order.
inline double pairwise_sum(const Matrix& m) {
    return pairwise_sum(std::span<const double>(m.data(), static_cast<std::size_t>(m.size())));
}

}  // namespace kgads
