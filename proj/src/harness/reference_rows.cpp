#include "permoptics/reference_rows.hpp"

namespace permoptics {
namespace {

ComplexMatrix real_matrix(std::size_t dim, std::vector<double> values, double scale = 1.0) {
    std::vector<Complex> entries;
    entries.reserve(values.size());
    for (double v : values) {
        entries.emplace_back(v * scale, 0.0);
    }
    return ComplexMatrix(dim, std::move(entries));
}

std::vector<double> milli(std::vector<double> d) {
    for (double& x : d) {
        x *= 1e-3;
    }
    return d;
}

std::vector<ReferenceRow> build_rows() {
    std::vector<ReferenceRow> rows;
    rows.push_back(ReferenceRow{
        "2x2-a",
        real_matrix(2, {0.707, 0.709,
                        -0.707, 0.705}),
        milli({1.00, 1.04}),
        real_matrix(2, {1.02, 0.02,
                        0.02, 1.02}, 1e-3),
        1.04e-6, 1.02e-6, 0.03e-6, 1.56e-6, 0.01e-6, 20.0});
    rows.push_back(ReferenceRow{
        "2x2-b",
        real_matrix(2, {0.494, 0.864,
                        -0.870, 0.503}),
        milli({1.25, 1.92}),
        real_matrix(2, {1.74, 0.30,
                        0.30, 1.43}, 1e-3),
        2.58e-6, 2.54e-6, 0.04e-6, 3.50e-6, 0.01e-6, 20.0});
    rows.push_back(ReferenceRow{
        "4x4-a",
        real_matrix(4, {-0.635, 0.775, 0.031, 0.045,
                        -0.442, -0.369, -0.513, 0.629,
                        0.634, 0.513, -0.365, 0.462,
                        0.021, 0.019, 0.776, 0.624}),
        milli({1.66, 2.13, 3.11, 1.40}),
        real_matrix(4, {1.95, -0.15, 0.17, 0.12,
                        -0.15, 1.99, 0.12, -0.72,
                        0.17, 0.12, 1.94, -0.43,
                        0.12, -0.72, -0.43, 2.42}, 1e-3),
        21.4e-12, 20.4e-12, 2.7e-12, 49.4e-12, 0.1e-12, 36500.0});
    rows.push_back(ReferenceRow{
        "4x4-b",
        real_matrix(4, {-0.632, 0.775, 0.038, 0.045,
                        -0.441, -0.369, -0.517, 0.629,
                        0.636, 0.513, -0.359, 0.462,
                        0.022, 0.017, 0.776, 0.623}),
        milli({1.57, 2.60, 2.03, 1.40}),
        real_matrix(4, {2.19, -0.31, 0.40, 0.11,
                        -0.31, 1.76, -0.15, -0.30,
                        0.40, -0.15, 1.88, -0.12,
                        0.11, -0.30, -0.12, 1.77}, 1e-3),
        14.3e-12, 14.8e-12, 2.3e-12, 33.7e-12, 0.1e-12, 36500.0});
    return rows;
}

}  // namespace

const std::vector<ReferenceRow>& reference_rows() {
    static const std::vector<ReferenceRow> rows = build_rows();
    return rows;
}

ComplexMatrix sandwich(const ComplexMatrix& u, const std::vector<double>& mus) {
    return u * ComplexMatrix::diagonal(mus) * u.adjoint();
}

}  // namespace permoptics
