#include "permoptics/matrix_json.hpp"

#include <cmath>
#include <string>

#include "permoptics/error.hpp"

namespace permoptics {
namespace {

std::vector<double> read_rows(const nlohmann::json& rows, std::size_t dim, const char* field) {
    if (!rows.is_array() || rows.size() != dim) {
        throw InputError(std::string("matrix JSON: \"") + field + "\" must be an array of " +
                         std::to_string(dim) + " rows");
    }
    std::vector<double> out;
    out.reserve(dim * dim);
    for (const auto& row : rows) {
        if (!row.is_array() || row.size() != dim) {
            throw InputError(std::string("matrix JSON: every \"") + field + "\" row must have " +
                             std::to_string(dim) + " numbers");
        }
        for (const auto& x : row) {
            if (!x.is_number()) {
                throw InputError(std::string("matrix JSON: non-numeric entry in \"") + field +
                                 "\"");
            }
            const double value = x.get<double>();
            if (!std::isfinite(value)) {
                throw InputError("matrix JSON: non-finite entry");
            }
            out.push_back(value);
        }
    }
    return out;
}

}  // namespace

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("re")) {
        throw InputError("matrix JSON: expected an object with \"re\" (and optionally \"im\")");
    }
    std::size_t dim = 0;
    if (j.contains("dim")) {
        if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1) {
            throw InputError("matrix JSON: \"dim\" must be a positive integer");
        }
        dim = j["dim"].get<std::size_t>();
    } else if (j["re"].is_array()) {
        dim = j["re"].size();
    }
    if (dim == 0) {
        throw InputError("matrix JSON: empty matrix");
    }
    const auto re = read_rows(j["re"], dim, "re");
    std::vector<double> im(dim * dim, 0.0);
    if (j.contains("im")) {
        im = read_rows(j["im"], dim, "im");
    }
    std::vector<Complex> data(dim * dim);
    for (std::size_t k = 0; k < data.size(); ++k) {
        data[k] = Complex{re[k], im[k]};
    }
    return ComplexMatrix(dim, std::move(data));
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        nlohmann::json re_row = nlohmann::json::array();
        nlohmann::json im_row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) {
            re_row.push_back(m(i, j).real());
            im_row.push_back(m(i, j).imag());
        }
        re.push_back(std::move(re_row));
        im.push_back(std::move(im_row));
    }
    return nlohmann::json{{"dim", m.dim()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace permoptics
