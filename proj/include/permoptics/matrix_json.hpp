#pragma once

#include <json.hpp>

#include "permoptics/matrix.hpp"

namespace permoptics {

// {"dim": M, "re": [[...], ...], "im": [[...], ...]}, row-major. "im" may be
// omitted for real matrices. Throws InputError on malformed input.
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const ComplexMatrix& m);

}  // namespace permoptics
