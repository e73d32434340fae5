#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "permoptics/matrix.hpp"

namespace permoptics {

// Hermitian positive semidefinite matrix A = U diag(mu) U^dagger, kept
// together with the basis and spectrum that produced it.
class Hpsm {
  public:
    // Validates Hermiticity (1e-10), mus >= 0, and that A reconstructs from
    // (basis, spectrum) within 1e-10 relative to max(1, mu_max). Throws
    // InputError otherwise.
    Hpsm(ComplexMatrix a, UnitaryMatrix basis, std::vector<double> spectrum);

    const ComplexMatrix& matrix() const { return a_; }
    const UnitaryMatrix& basis() const { return basis_; }
    const std::vector<double>& spectrum() const { return spectrum_; }
    std::size_t dim() const { return a_.dim(); }
    double mu_max() const;

  private:
    ComplexMatrix a_;
    UnitaryMatrix basis_;
    std::vector<double> spectrum_;
};

// A = U diag(mus) U^dagger, symmetrized to (A + A^dagger)/2.
// Throws InputError on negative mus or a length mismatch.
Hpsm hpsm_from(const UnitaryMatrix& basis, std::span<const double> mus);

struct SpectralDecomposition {
    UnitaryMatrix basis;              // eigenvectors as columns
    std::vector<double> eigenvalues;  // descending; ties keep original order
    bool positive_semidefinite;       // false if any eigenvalue < -1e-10
    int sweeps;
    double reconstruction_error;      // ||U diag(ev) U^dagger - A||_max
};

// Cyclic Jacobi eigendecomposition of a Hermitian matrix. Iterates until the
// off-diagonal Frobenius norm is <= 1e-12 * ||A||_F, capped at 100 sweeps.
// Throws InputError if A is not Hermitian within 1e-8 and
// ConvergenceError at the cap.
SpectralDecomposition spectral_decompose(const ComplexMatrix& a);

struct ScaledHpsm {
    Hpsm scaled;
    double factor;  // Perm[A] = factor^M * Perm[scaled]
};

// Divides A by mu_max so the spectrum lies in [0, 1].
// Throws InputError for the zero matrix.
ScaledHpsm scale_hpsm(const Hpsm& a);

// Divides A by an arbitrary positive factor. Used to move an HPSM into a
// brighter (or dimmer) source regime; the permanent rescales by factor^M.
ScaledHpsm scale_hpsm(const Hpsm& a, double factor);

}  // namespace permoptics
