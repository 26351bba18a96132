#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace wvlab {

using Complex = std::complex<double>;

/// A column vector of amplitudes. Used for kets and post-selection states.
using Ket = std::vector<Complex>;

/// Dense row-major complex matrix for small dimensions.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> data);
    /// Row-list literal, e.g. Matrix{{0, 1}, {1, 0}}.
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(std::size_t n);
    static Matrix zeros(std::size_t rows, std::size_t cols);
    static Matrix diagonal(std::span<const double> values);
    static Matrix diagonal(std::span<const Complex> values);
    /// |a><b|
    static Matrix outer(std::span<const Complex> a, std::span<const Complex> b);
    static Matrix column(std::span<const Complex> v);

    std::size_t rows() const noexcept {
        return rows_;
    }
    std::size_t cols() const noexcept {
        return cols_;
    }
    bool is_square() const noexcept {
        return rows_ == cols_;
    }
    bool empty() const noexcept {
        return data_.empty();
    }

    Complex &operator()(std::size_t r, std::size_t c) {
        return data_[r * cols_ + c];
    }
    const Complex &operator()(std::size_t r, std::size_t c) const {
        return data_[r * cols_ + c];
    }

    std::span<const Complex> data() const noexcept {
        return data_;
    }

    Ket col(std::size_t c) const;
    void set_col(std::size_t c, std::span<const Complex> v);

    Matrix adjoint() const;
    Matrix transpose() const;
    Complex trace() const;
    /// Largest entry modulus.
    double max_abs() const;
    double frobenius_norm() const;

    Matrix &operator+=(const Matrix &rhs);
    Matrix &operator-=(const Matrix &rhs);
    Matrix &operator*=(Complex s);

    friend Matrix operator+(Matrix lhs, const Matrix &rhs) {
        return lhs += rhs;
    }
    friend Matrix operator-(Matrix lhs, const Matrix &rhs) {
        return lhs -= rhs;
    }
    friend Matrix operator*(Matrix lhs, Complex s) {
        return lhs *= s;
    }
    friend Matrix operator*(Complex s, Matrix rhs) {
        return rhs *= s;
    }
    friend Matrix operator*(const Matrix &lhs, const Matrix &rhs);
    friend Ket operator*(const Matrix &lhs, std::span<const Complex> v);
    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

/// Max-entry residual |X - Y|.
double max_abs_diff(const Matrix &x, const Matrix &y);
/// Max-entry residual |X - X^dagger|; requires a square matrix.
double hermiticity_residual(const Matrix &x);
bool is_hermitian(const Matrix &x, double tol);
/// Max-entry residual |U^dagger U - I|.
double unitarity_residual(const Matrix &u);
Matrix commutator(const Matrix &x, const Matrix &y);
Matrix kron(const Matrix &x, const Matrix &y);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(std::span<const Complex> a, std::span<const Complex> b);
double norm(std::span<const Complex> v);
Ket normalized(std::span<const Complex> v);
/// <a|X|b>
Complex sandwich(std::span<const Complex> a, const Matrix &x, std::span<const Complex> b);
Ket basis_ket(std::size_t dim, std::size_t index);

}  // namespace wvlab
