#include "permoptics/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "permoptics/error.hpp"

namespace permoptics {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) {
        throw InputError("matrix dimension must be at least 1");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> row_major)
    : dim_(dim), data_(std::move(row_major)) {
    if (dim == 0) {
        throw InputError("matrix dimension must be at least 1");
    }
    if (data_.size() != dim * dim) {
        throw InputError("matrix data has " + std::to_string(data_.size()) +
                         " entries, expected " + std::to_string(dim * dim));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
    if (dim_ == 0) {
        throw InputError("matrix dimension must be at least 1");
    }
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) {
            throw InputError("matrix rows must all have length " + std::to_string(dim_));
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = std::conj((*this)(i, j));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            out(j, i) = (*this)(i, j);
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::abs2() const {
    ComplexMatrix out(dim_);
    for (std::size_t k = 0; k < data_.size(); ++k) {
        out.data_[k] = std::norm(data_[k]);
    }
    return out;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const Complex& z) {
        return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& z : data_) {
        best = std::max(best, std::abs(z));
    }
    return best;
}

double ComplexMatrix::frobenius_norm() const {
    double sum = 0.0;
    for (const auto& z : data_) {
        sum += std::norm(z);
    }
    return std::sqrt(sum);
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) {
        throw InputError("matrix dimension mismatch in addition");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] += other.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    if (other.dim_ != dim_) {
        throw InputError("matrix dimension mismatch in subtraction");
    }
    for (std::size_t k = 0; k < data_.size(); ++k) {
        data_[k] -= other.data_[k];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& z : data_) {
        z *= scale;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw InputError("matrix dimension mismatch in product");
    }
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw InputError("matrix dimension mismatch");
    }
    double best = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k) {
        best = std::max(best, std::abs(a.data()[k] - b.data()[k]));
    }
    return best;
}

double unitarity_defect(const ComplexMatrix& u) {
    return max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(u.dim()));
}

double column_norm_defect(const ComplexMatrix& u) {
    double worst = 0.0;
    for (std::size_t col = 0; col < u.dim(); ++col) {
        double norm2 = 0.0;
        for (std::size_t row = 0; row < u.dim(); ++row) {
            norm2 += std::norm(u(row, col));
        }
        worst = std::max(worst, std::abs(norm2 - 1.0));
    }
    return worst;
}

std::string to_string(const ComplexMatrix& m, int precision) {
    std::ostringstream os;
    os << std::setprecision(precision);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        os << (i == 0 ? "[" : " ");
        for (std::size_t j = 0; j < m.dim(); ++j) {
            const Complex z = m(i, j);
            os << (j == 0 ? "[" : ", ") << z.real();
            if (z.imag() != 0.0) {
                os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
            }
        }
        os << "]" << (i + 1 == m.dim() ? "]" : "\n");
    }
    return os.str();
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix m, UnitarityLaxity laxity)
    : m_(std::move(m)), laxity_(laxity), defect_(0.0) {
    if (!m_.all_finite()) {
        throw InputError("unitary matrix has non-finite entries");
    }
    defect_ = unitarity_defect(m_);
    if (laxity_ == UnitarityLaxity::constructed) {
        if (defect_ > kConstructedTolerance) {
            std::ostringstream os;
            os << "matrix is not unitary: ||U^dagger U - I||_max = " << defect_;
            throw InputError(os.str());
        }
    } else {
        const double col = column_norm_defect(m_);
        if (col > kExperimentalTolerance) {
            std::ostringstream os;
            os << "experimental unitary has a column norm off by " << col << " (tolerance "
               << kExperimentalTolerance << ")";
            throw InputError(os.str());
        }
    }
}

double UnitaryMatrix::tolerance() const {
    return laxity_ == UnitarityLaxity::constructed ? kConstructedTolerance
                                                   : kExperimentalTolerance;
}

}  // namespace permoptics
