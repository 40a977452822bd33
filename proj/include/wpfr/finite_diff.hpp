#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wpfr/errors.hpp"

namespace wpfr {

// Fornberg's algorithm: weights of the order-m derivative at x0 on an
// arbitrary node set. Used for the finite-difference oracles.
inline std::vector<double> fd_weights(double x0,
                                      const std::vector<double>& grid,
                                      int m) {
    const std::size_t n = grid.size();
    if (m < 0 || n < static_cast<std::size_t>(m) + 1)
        throw domain_error("fd_weights: need at least m+1 nodes");
    // c[k][j]: weight of node j for the k-th derivative
    std::vector<std::vector<double>> c(
        static_cast<std::size_t>(m) + 1, std::vector<double>(n, 0.0));
    double c1 = 1.0;
    double c4 = grid[0] - x0;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        const int mn = static_cast<int>(std::min<std::size_t>(i, m));
        double c2 = 1.0;
        const double c5 = c4;
        c4 = grid[i] - x0;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = grid[i] - grid[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for (int k = mn; k >= 1; --k)
                c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    return c[static_cast<std::size_t>(m)];
}

// Central finite-difference derivative of given order with a symmetric
// stencil of `points` nodes spaced `h` apart (points >= order+1, odd).
inline double fd_derivative(const std::function<double(double)>& f, double x,
                            int order, double h, int points) {
    if (points % 2 == 0) ++points;
    if (points < order + 1) points = order + 1 + ((order + 1) % 2 == 0 ? 1 : 0);
    std::vector<double> grid(static_cast<std::size_t>(points));
    const int half = points / 2;
    for (int i = 0; i < points; ++i)
        grid[static_cast<std::size_t>(i)] = x + (i - half) * h;
    const std::vector<double> w = fd_weights(x, grid, order);
    double acc = 0.0;
    for (int i = 0; i < points; ++i)
        acc += w[static_cast<std::size_t>(i)] * f(grid[static_cast<std::size_t>(i)]);
    return acc;
}

}  // namespace wpfr
