#include "permoptics/permanent.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "permoptics/error.hpp"

namespace permoptics {
namespace {

Complex permanent_naive(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    std::vector<std::size_t> sigma(n);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    Complex total{};
    do {
        Complex term = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            term *= a(i, sigma[i]);
        }
        total += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

// Perm[A] = (-1)^n sum_{S subset of columns} (-1)^|S| prod_i sum_{j in S} a_ij
Complex permanent_ryser(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    std::vector<Complex> row_sums(n);
    Complex total{};
    std::uint64_t gray = 0;
    const std::uint64_t subsets = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        const auto col = static_cast<std::size_t>(std::countr_zero(k));
        const std::uint64_t bit = std::uint64_t{1} << col;
        gray ^= bit;
        if (gray & bit) {
            for (std::size_t i = 0; i < n; ++i) {
                row_sums[i] += a(i, col);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                row_sums[i] -= a(i, col);
            }
        }
        Complex prod = row_sums[0];
        for (std::size_t i = 1; i < n; ++i) {
            prod *= row_sums[i];
        }
        const bool odd = (std::popcount(gray) & 1) != 0;
        total += odd ? -prod : prod;
    }
    return (n % 2 == 1) ? -total : total;
}

// Perm[A] = 2^{1-n} sum_{d, d_0 = +1} (prod_k d_k) prod_j sum_i d_i a_ij
Complex permanent_glynn(const ComplexMatrix& a) {
    const std::size_t n = a.dim();
    std::vector<Complex> col_sums(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i) {
            col_sums[j] += a(i, j);
        }
    }
    auto product = [&] {
        Complex prod = col_sums[0];
        for (std::size_t j = 1; j < n; ++j) {
            prod *= col_sums[j];
        }
        return prod;
    };

    Complex total = product();
    int sign = 1;
    std::uint64_t flipped = 0;  // bit i-1 set means d_i = -1, for i >= 1
    const std::uint64_t steps = std::uint64_t{1} << (n - 1);
    for (std::uint64_t k = 1; k < steps; ++k) {
        const auto bit_index = static_cast<std::size_t>(std::countr_zero(k));
        const std::size_t row = bit_index + 1;
        const std::uint64_t bit = std::uint64_t{1} << bit_index;
        flipped ^= bit;
        const double factor = (flipped & bit) ? -2.0 : 2.0;
        for (std::size_t j = 0; j < n; ++j) {
            col_sums[j] += factor * a(row, j);
        }
        sign = -sign;
        total += sign > 0 ? product() : -product();
    }
    return total / std::ldexp(1.0, static_cast<int>(n - 1));
}

}  // namespace

std::string_view to_string(PermanentMethod method) {
    switch (method) {
    case PermanentMethod::naive:
        return "naive";
    case PermanentMethod::ryser:
        return "ryser";
    case PermanentMethod::glynn:
        return "glynn";
    }
    return "unknown";
}

std::optional<PermanentMethod> parse_permanent_method(std::string_view name) {
    if (name == "naive") {
        return PermanentMethod::naive;
    }
    if (name == "ryser") {
        return PermanentMethod::ryser;
    }
    if (name == "glynn") {
        return PermanentMethod::glynn;
    }
    return std::nullopt;
}

Complex permanent(const ComplexMatrix& a, PermanentMethod method) {
    const std::size_t limit = method == PermanentMethod::naive ? kMaxNaiveDim : kMaxFastDim;
    if (a.dim() > limit) {
        throw GuardError("permanent: dimension " + std::to_string(a.dim()) + " exceeds the " +
                         std::string(to_string(method)) + " limit of " + std::to_string(limit));
    }
    if (!a.all_finite()) {
        throw InputError("permanent: matrix has non-finite entries");
    }
    switch (method) {
    case PermanentMethod::naive:
        return permanent_naive(a);
    case PermanentMethod::ryser:
        return permanent_ryser(a);
    case PermanentMethod::glynn:
        return permanent_glynn(a);
    }
    return {};
}

}  // namespace permoptics
