#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "permoptics/matrix.hpp"

namespace permoptics {

enum class PermanentMethod { naive, ryser, glynn };

inline constexpr std::size_t kMaxNaiveDim = 10;
inline constexpr std::size_t kMaxFastDim = 25;

std::string_view to_string(PermanentMethod method);
std::optional<PermanentMethod> parse_permanent_method(std::string_view name);

// Perm[A] = sum over permutations s of prod_i A(i, s(i)).
//
//  naive: explicit sum over all M! permutations (dim <= 10). Kept as the
//         reference the other two are checked against.
//  ryser: inclusion-exclusion over column subsets, visited in Gray-code
//         order so each step updates the row sums by one column; O(2^M M).
//  glynn: Glynn's formula over sign vectors with the first sign fixed,
//         again in Gray-code order; O(2^(M-1) M).
//
// Throws GuardError past the dimension limit and InputError on non-finite
// entries.
Complex permanent(const ComplexMatrix& a, PermanentMethod method = PermanentMethod::glynn);

}  // namespace permoptics
