#include "permoptics/haar.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "permoptics/error.hpp"

namespace permoptics {

UnitaryMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed) {
    RandomStream stream(seed, 0x4861617200000000ull);  // "Haar"
    return haar_random_unitary(dim, stream);
}

UnitaryMatrix haar_random_unitary(std::size_t dim, RandomStream& stream) {
    if (dim < 1) {
        throw InputError("haar_random_unitary: dimension must be at least 1");
    }
    const std::size_t n = dim;
    // Row-major Gaussian matrix with E|z|^2 = 1.
    ComplexMatrix r(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double re = stream.normal();
            const double im = stream.normal();
            r(i, j) = Complex{re, im} / std::numbers::sqrt2;
        }
    }

    // Householder QR: R is built in place, Q accumulated as H_1 H_2 ... H_n.
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> v(n);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double tail = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            tail += std::norm(r(i, k));
        }
        const double alpha_abs = std::sqrt(tail);
        if (alpha_abs == 0.0) {
            continue;
        }
        const Complex x0 = r(k, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0};
        // v = x + e^{i arg x0} |x| e_k avoids cancellation.
        for (std::size_t i = 0; i < n; ++i) {
            v[i] = i < k ? Complex{} : r(i, k);
        }
        v[k] += phase * alpha_abs;
        double vnorm2 = 0.0;
        for (std::size_t i = k; i < n; ++i) {
            vnorm2 += std::norm(v[i]);
        }
        // H = I - 2 v v^dagger / (v^dagger v), applied as R <- H R, Q <- Q H.
        for (std::size_t j = 0; j < n; ++j) {
            Complex dot{};
            for (std::size_t i = k; i < n; ++i) {
                dot += std::conj(v[i]) * r(i, j);
            }
            const Complex f = 2.0 * dot / vnorm2;
            for (std::size_t i = k; i < n; ++i) {
                r(i, j) -= f * v[i];
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            Complex dot{};
            for (std::size_t l = k; l < n; ++l) {
                dot += q(i, l) * v[l];
            }
            const Complex f = 2.0 * dot / vnorm2;
            for (std::size_t l = k; l < n; ++l) {
                q(i, l) -= f * std::conj(v[l]);
            }
        }
    }

    // Q R = (Q L)(L^dagger R) with L = diag(r_kk / |r_kk|) gives the unique
    // factor with a positive diagonal.
    for (std::size_t k = 0; k < n; ++k) {
        const Complex d = r(k, k);
        const Complex phase = std::abs(d) > 0.0 ? d / std::abs(d) : Complex{1.0};
        for (std::size_t i = 0; i < n; ++i) {
            q(i, k) *= phase;
        }
    }
    return UnitaryMatrix(std::move(q));
}

}  // namespace permoptics
