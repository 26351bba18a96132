#pragma once

#include <vector>

#include "wvlab/matrix.hpp"

namespace wvlab {

inline constexpr double kDefaultTol = 1e-10;

struct EigenDecomposition {
    /// Ascending.
    std::vector<double> eigenvalues;
    /// Unitary; column k is the eigenvector of eigenvalues[k].
    Matrix eigenvectors;

    /// V diag(f(lambda)) V^dagger
    template <typename F>
    Matrix apply(F &&f) const {
        const std::size_t n = eigenvalues.size();
        Matrix out(n, n);
        for (std::size_t k = 0; k < n; ++k) {
            const Complex w = f(eigenvalues[k]);
            if (w == Complex{}) {
                continue;
            }
            for (std::size_t i = 0; i < n; ++i) {
                const Complex vi = eigenvectors(i, k) * w;
                for (std::size_t j = 0; j < n; ++j) {
                    out(i, j) += vi * std::conj(eigenvectors(j, k));
                }
            }
        }
        return out;
    }

    Matrix reconstruct() const;
};

/// Cyclic Jacobi diagonalisation of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot entry with a diagonal
/// unitary, then applies a real Jacobi rotation to the resulting real
/// symmetric 2x2 block. Sweeps stop once the off-diagonal Frobenius norm
/// drops below machine precision relative to the full norm.
///
/// Throws NonHermitianInput when |A - A^dagger|_max > tol and NoConvergence
/// when the sweep cap is hit.
EigenDecomposition hermitian_eigendecomposition(const Matrix &a, double tol = kDefaultTol);

struct QrDecomposition {
    Matrix q;
    /// Upper triangular, real non-negative diagonal.
    Matrix r;
};

/// Thin QR of a full-column-rank matrix by modified Gram-Schmidt with one
/// reorthogonalisation pass.
QrDecomposition qr_decompose(const Matrix &a);

/// Principal square root of a positive semidefinite Hermitian matrix.
Matrix psd_sqrt(const Matrix &a, double tol = kDefaultTol);
/// Inverse square root of a positive definite Hermitian matrix.
Matrix psd_inverse_sqrt(const Matrix &a, double tol = kDefaultTol);

}  // namespace wvlab
