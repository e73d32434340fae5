#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace permoptics {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major.
class ComplexMatrix {
  public:
    // Zero matrix of the given dimension (dim >= 1).
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> row_major);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t dim() const { return dim_; }

    Complex& operator()(std::size_t row, std::size_t col) { return data_[row * dim_ + col]; }
    const Complex& operator()(std::size_t row, std::size_t col) const {
        return data_[row * dim_ + col];
    }

    std::span<const Complex> data() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    // Entrywise modulus squared, as a complex matrix with zero imaginary parts.
    ComplexMatrix abs2() const;

    bool all_finite() const;
    double max_abs() const;
    double frobenius_norm() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    bool operator==(const ComplexMatrix&) const = default;

  private:
    std::size_t dim_;
    std::vector<Complex> data_;
};

// max_{ij} |a_ij - b_ij|; dimensions must agree.
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

// max_{ij} |(U^dagger U - I)_ij|
double unitarity_defect(const ComplexMatrix& u);

// max_i |sum_j |U_ji|^2 - 1|
double column_norm_defect(const ComplexMatrix& u);

std::string to_string(const ComplexMatrix& m, int precision = 6);

// How strictly unitarity is enforced. Matrices built by this library are
// held to 1e-10; matrices transcribed from measured data (three printed
// decimals) are only held to unit column norms within 5e-3.
enum class UnitarityLaxity { constructed, experimental };

class UnitaryMatrix {
  public:
    static constexpr double kConstructedTolerance = 1e-10;
    static constexpr double kExperimentalTolerance = 5e-3;

    // Validates and wraps. Throws InputError when the tolerance for the
    // requested laxity is not met. Entries are never renormalized.
    explicit UnitaryMatrix(ComplexMatrix m, UnitarityLaxity laxity = UnitarityLaxity::constructed);

    static UnitaryMatrix identity(std::size_t dim) {
        return UnitaryMatrix(ComplexMatrix::identity(dim));
    }

    const ComplexMatrix& matrix() const { return m_; }
    std::size_t dim() const { return m_.dim(); }
    const Complex& operator()(std::size_t row, std::size_t col) const { return m_(row, col); }
    UnitarityLaxity laxity() const { return laxity_; }
    double tolerance() const;
    // Measured ||U^dagger U - I||_max. For experimental matrices this may
    // exceed tolerance(); it is recorded, not enforced.
    double defect() const { return defect_; }

  private:
    ComplexMatrix m_;
    UnitarityLaxity laxity_;
    double defect_;
};

}  // namespace permoptics
