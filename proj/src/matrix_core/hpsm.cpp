#include "permoptics/hpsm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "permoptics/error.hpp"

namespace permoptics {
namespace {

constexpr double kHermitianTolerance = 1e-10;
constexpr double kDecomposeHermitianTolerance = 1e-8;
constexpr double kPsdTolerance = 1e-10;
constexpr double kOffDiagonalTolerance = 1e-12;
constexpr int kMaxSweeps = 100;

double hermitian_defect(const ComplexMatrix& a) { return max_abs_diff(a, a.adjoint()); }

ComplexMatrix reconstruct(const ComplexMatrix& basis, std::span<const double> mus) {
    const std::size_t n = basis.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex sum{};
            for (std::size_t k = 0; k < n; ++k) {
                sum += basis(i, k) * mus[k] * std::conj(basis(j, k));
            }
            out(i, j) = sum;
        }
    }
    return out;
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (i != j) {
                sum += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(sum);
}

// Zeroes a(p, q) with the unitary J = Phi R, where Phi makes a(p, q) real
// and R is the real Jacobi rotation for the resulting 2x2 block.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double magnitude = std::abs(apq);
    if (magnitude == 0.0) {
        return;
    }
    const Complex phase = apq / magnitude;  // e^{i theta}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * magnitude);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    // J = [[c, s], [-s e^{-i theta}, c e^{-i theta}]] on (p, q).
    const Complex jpp = c;
    const Complex jpq = s;
    const Complex jqp = -s * std::conj(phase);
    const Complex jqq = c * std::conj(phase);
    const std::size_t n = a.dim();

    for (std::size_t k = 0; k < n; ++k) {  // A <- A J
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * jpp + akq * jqp;
        a(k, q) = akp * jpq + akq * jqq;
    }
    for (std::size_t k = 0; k < n; ++k) {  // A <- J^dagger A
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
        a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {  // V <- V J
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * jpp + vkq * jqp;
        v(k, q) = vkp * jpq + vkq * jqq;
    }
}

}  // namespace

Hpsm::Hpsm(ComplexMatrix a, UnitaryMatrix basis, std::vector<double> spectrum)
    : a_(std::move(a)), basis_(std::move(basis)), spectrum_(std::move(spectrum)) {
    if (spectrum_.size() != a_.dim() || basis_.dim() != a_.dim()) {
        throw InputError("Hpsm: matrix, basis and spectrum dimensions disagree");
    }
    if (std::any_of(spectrum_.begin(), spectrum_.end(), [](double mu) { return !(mu >= 0.0); })) {
        throw InputError("Hpsm: spectrum must be nonnegative");
    }
    const double scale = std::max(1.0, mu_max());
    if (hermitian_defect(a_) > kHermitianTolerance * scale) {
        throw InputError("Hpsm: matrix is not Hermitian");
    }
    if (max_abs_diff(reconstruct(basis_.matrix(), spectrum_), a_) > 1e-10 * scale) {
        throw InputError("Hpsm: matrix does not match U diag(mu) U^dagger");
    }
}

double Hpsm::mu_max() const { return *std::max_element(spectrum_.begin(), spectrum_.end()); }

Hpsm hpsm_from(const UnitaryMatrix& basis, std::span<const double> mus) {
    if (mus.size() != basis.dim()) {
        throw InputError("hpsm_from: " + std::to_string(mus.size()) + " mus for a " +
                         std::to_string(basis.dim()) + "-mode basis");
    }
    for (double mu : mus) {
        if (!(mu >= 0.0) || !std::isfinite(mu)) {
            throw InputError("hpsm_from: mean-photon parameters must be finite and >= 0");
        }
    }
    ComplexMatrix a = reconstruct(basis.matrix(), mus);
    a = (a + a.adjoint()) * Complex{0.5};
    return Hpsm(std::move(a), basis, std::vector<double>(mus.begin(), mus.end()));
}

SpectralDecomposition spectral_decompose(const ComplexMatrix& input) {
    if (!input.all_finite()) {
        throw InputError("spectral_decompose: non-finite entries");
    }
    const double norm = input.frobenius_norm();
    if (hermitian_defect(input) > kDecomposeHermitianTolerance * std::max(1.0, norm)) {
        throw InputError("spectral_decompose: matrix is not Hermitian within 1e-8");
    }
    const std::size_t n = input.dim();
    ComplexMatrix a = (input + input.adjoint()) * Complex{0.5};
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double threshold = kOffDiagonalTolerance * norm;

    int sweeps = 0;
    while (off_diagonal_norm(a) > threshold) {
        if (sweeps == kMaxSweeps) {
            throw ConvergenceError("spectral_decompose: no convergence after 100 sweeps");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                jacobi_rotate(a, v, p, q);
            }
        }
        ++sweeps;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return a(x, x).real() > a(y, y).real();
    });

    ComplexMatrix basis(n);
    std::vector<double> eigenvalues(n);
    for (std::size_t col = 0; col < n; ++col) {
        eigenvalues[col] = a(order[col], order[col]).real();
        for (std::size_t row = 0; row < n; ++row) {
            basis(row, col) = v(row, order[col]);
        }
    }

    const bool psd = std::all_of(eigenvalues.begin(), eigenvalues.end(),
                                 [](double ev) { return ev >= -kPsdTolerance; });
    const double error = max_abs_diff(reconstruct(basis, eigenvalues), input);
    return SpectralDecomposition{UnitaryMatrix(std::move(basis)), std::move(eigenvalues), psd,
                                 sweeps, error};
}

ScaledHpsm scale_hpsm(const Hpsm& a) {
    const double mu_max = a.mu_max();
    if (!(mu_max > 0.0)) {
        throw InputError("scale_hpsm: zero matrix has no scale");
    }
    return scale_hpsm(a, mu_max);
}

ScaledHpsm scale_hpsm(const Hpsm& a, double factor) {
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw InputError("scale_hpsm: factor must be positive and finite");
    }
    std::vector<double> spectrum = a.spectrum();
    for (double& mu : spectrum) {
        mu /= factor;
    }
    return ScaledHpsm{hpsm_from(a.basis(), spectrum), factor};
}

}  // namespace permoptics
