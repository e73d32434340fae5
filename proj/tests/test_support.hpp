#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "permoptics/matrix.hpp"
#include "permoptics/philox.hpp"

namespace permoptics::testing {

inline ComplexMatrix random_matrix(std::size_t dim, RandomStream& rng) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        for (std::size_t j = 0; j < dim; ++j) {
            m(i, j) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        }
    }
    return m;
}

// Laplace-style expansion along the first row, memoized over column subsets.
// Shares no code with the library kernels.
inline Complex expansion_permanent(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    std::vector<Complex> memo(std::size_t{1} << n, Complex(0.0, 0.0));
    std::vector<bool> done(memo.size(), false);
    auto rec = [&](auto&& self, std::size_t row, std::uint32_t used) -> Complex {
        if (row == n) {
            return Complex(1.0, 0.0);
        }
        if (done[used]) {
            return memo[used];
        }
        Complex sum(0.0, 0.0);
        for (std::size_t c = 0; c < n; ++c) {
            if ((used >> c) & 1u) {
                continue;
            }
            sum += a(row, c) * self(self, row + 1, used | (1u << c));
        }
        done[used] = true;
        memo[used] = sum;
        return sum;
    };
    return rec(rec, 0, 0);
}

inline double rel_diff(Complex a, Complex b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace permoptics::testing
