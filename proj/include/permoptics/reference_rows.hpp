#pragma once

#include <string>
#include <vector>

#include "permoptics/matrix.hpp"

namespace permoptics {

// One printed row of the benchmark table: experimental interferometer U,
// input mean-photon parameters, the printed A = U D U^dagger, and the
// reported values. Matrices are kept exactly as printed (three decimals),
// including entries that are nonzero only through detector noise.
struct ReferenceRow {
    std::string label;
    ComplexMatrix u;
    std::vector<double> mus;
    ComplexMatrix printed_a;
    double perm_exact;      // printed exact permanent
    double perm_exp;        // printed measured permanent
    double perm_exp_sigma;  // printed one-sigma error
    double no_interference; // printed distinguishable-pulse value
    double last_digit;      // one unit in the last printed digit of perm_exact
    double accum_s;         // accumulation time of the run
};

inline constexpr double kReferenceRepRateHz = 80e6;

const std::vector<ReferenceRow>& reference_rows();

// U diag(mus) U^dagger without any unitarity requirement on U.
ComplexMatrix sandwich(const ComplexMatrix& u, const std::vector<double>& mus);

}  // namespace permoptics
