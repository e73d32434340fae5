#pragma once

#include <cstddef>
#include <cstdint>

#include "permoptics/matrix.hpp"
#include "permoptics/philox.hpp"

namespace permoptics {

// Haar-distributed M x M unitary. A matrix of i.i.d. standard complex
// Gaussians is QR-factorized (Householder) and each column of Q is
// multiplied by the phase of the matching diagonal entry of R, which
// makes the factorization unique and the result Haar. Deterministic in
// the seed.
UnitaryMatrix haar_random_unitary(std::size_t dim, std::uint64_t seed);

// Same construction drawing from an existing stream.
UnitaryMatrix haar_random_unitary(std::size_t dim, RandomStream& stream);

}  // namespace permoptics
