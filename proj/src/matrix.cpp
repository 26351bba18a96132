#include "wvlab/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "wvlab/error.hpp"

namespace wvlab {

namespace {

void require_same_shape(const Matrix &x, const Matrix &y, const char *op) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(op) + ": " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) + " vs " +
                        std::to_string(y.rows()) + "x" + std::to_string(y.cols()));
    }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw Error(ErrorKind::DimensionMismatch, "matrix data length does not match shape");
    }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::zeros(std::size_t rows, std::size_t cols) {
    return Matrix(rows, cols);
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const Complex> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

Matrix Matrix::outer(std::span<const Complex> a, std::span<const Complex> b) {
    Matrix m(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            m(i, j) = a[i] * std::conj(b[j]);
        }
    }
    return m;
}

Matrix Matrix::column(std::span<const Complex> v) {
    return Matrix(v.size(), 1, std::vector<Complex>(v.begin(), v.end()));
}

Ket Matrix::col(std::size_t c) const {
    Ket out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

void Matrix::set_col(std::size_t c, std::span<const Complex> v) {
    if (v.size() != rows_) {
        throw Error(ErrorKind::DimensionMismatch, "set_col: length mismatch");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        (*this)(r, c) = v[r];
    }
}

Matrix Matrix::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

Complex Matrix::trace() const {
    if (!is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "trace of a non-square matrix");
    }
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto &z : data_) {
        m = std::max(m, std::abs(z));
    }
    return m;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto &z : data_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

Matrix &Matrix::operator+=(const Matrix &rhs) {
    require_same_shape(*this, rhs, "operator+");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += rhs.data_[i];
    }
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &rhs) {
    require_same_shape(*this, rhs, "operator-");
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= rhs.data_[i];
    }
    return *this;
}

Matrix &Matrix::operator*=(Complex s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

Matrix operator*(const Matrix &lhs, const Matrix &rhs) {
    if (lhs.cols_ != rhs.rows_) {
        throw Error(ErrorKind::DimensionMismatch, "matrix product: inner dimensions differ");
    }
    Matrix out(lhs.rows_, rhs.cols_);
    for (std::size_t i = 0; i < lhs.rows_; ++i) {
        for (std::size_t k = 0; k < lhs.cols_; ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < rhs.cols_; ++j) {
                out(i, j) += a * rhs(k, j);
            }
        }
    }
    return out;
}

Ket operator*(const Matrix &lhs, std::span<const Complex> v) {
    if (lhs.cols_ != v.size()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix-vector product: length mismatch");
    }
    Ket out(lhs.rows_);
    for (std::size_t i = 0; i < lhs.rows_; ++i) {
        Complex s = 0.0;
        for (std::size_t k = 0; k < lhs.cols_; ++k) {
            s += lhs(i, k) * v[k];
        }
        out[i] = s;
    }
    return out;
}

double max_abs_diff(const Matrix &x, const Matrix &y) {
    require_same_shape(x, y, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < x.data().size(); ++i) {
        m = std::max(m, std::abs(x.data()[i] - y.data()[i]));
    }
    return m;
}

double hermiticity_residual(const Matrix &x) {
    if (!x.is_square()) {
        throw Error(ErrorKind::DimensionMismatch, "hermiticity check on a non-square matrix");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = i; j < x.cols(); ++j) {
            m = std::max(m, std::abs(x(i, j) - std::conj(x(j, i))));
        }
    }
    return m;
}

bool is_hermitian(const Matrix &x, double tol) {
    return x.is_square() && hermiticity_residual(x) <= tol;
}

double unitarity_residual(const Matrix &u) {
    if (!u.is_square()) {
        return std::numeric_limits<double>::infinity();
    }
    return max_abs_diff(u.adjoint() * u, Matrix::identity(u.rows()));
}

Matrix commutator(const Matrix &x, const Matrix &y) {
    return x * y - y * x;
}

Matrix kron(const Matrix &x, const Matrix &y) {
    Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            const Complex a = x(i, j);
            for (std::size_t k = 0; k < y.rows(); ++k) {
                for (std::size_t l = 0; l < y.cols(); ++l) {
                    out(i * y.rows() + k, j * y.cols() + l) = a * y(k, l);
                }
            }
        }
    }
    return out;
}

Complex inner(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != b.size()) {
        throw Error(ErrorKind::DimensionMismatch, "inner product: length mismatch");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

double norm(std::span<const Complex> v) {
    double s = 0.0;
    for (const auto &z : v) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

Ket normalized(std::span<const Complex> v) {
    const double n = norm(v);
    if (n == 0.0) {
        throw Error(ErrorKind::InvalidArgument, "cannot normalize the zero vector");
    }
    Ket out(v.begin(), v.end());
    for (auto &z : out) {
        z /= n;
    }
    return out;
}

Complex sandwich(std::span<const Complex> a, const Matrix &x, std::span<const Complex> b) {
    return inner(a, x * b);
}

Ket basis_ket(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw Error(ErrorKind::InvalidArgument, "basis index out of range");
    }
    Ket k(dim);
    k[index] = 1.0;
    return k;
}

}  // namespace wvlab
