#ifndef AOIF_TEST_HELPERS_HPP
#define AOIF_TEST_HELPERS_HPP

#include <cmath>
#include <random>

#include "aoif/matrix.hpp"

namespace aoif::testing {

inline Matrix random_matrix(std::mt19937& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = dist(rng);
    return m;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            best = std::max(best, std::abs(a(i, j) - b(i, j)));
    return best;
}

}  // namespace aoif::testing

#endif
