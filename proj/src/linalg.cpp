#include "wvlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wvlab/error.hpp"

namespace wvlab {

namespace {

constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix &a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

// A <- G^dagger A G and V <- V G for the 2x2 unitary G acting on (p, q).
void rotate(Matrix &a, Matrix &v, std::size_t p, std::size_t q, Complex gpp, Complex gpq, Complex gqp, Complex gqq) {
    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * gpp + akq * gqp;
        a(k, q) = akp * gpq + akq * gqq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(gpp) * apk + std::conj(gqp) * aqk;
        a(q, k) = std::conj(gpq) * apk + std::conj(gqq) * aqk;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * gpp + vkq * gqp;
        v(k, q) = vkp * gpq + vkq * gqq;
    }
}

}  // namespace

Matrix EigenDecomposition::reconstruct() const {
    return apply([](double lambda) { return Complex(lambda); });
}

EigenDecomposition hermitian_eigendecomposition(const Matrix &input, double tol) {
    if (!input.is_square() || input.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "eigendecomposition needs a non-empty square matrix");
    }
    const double herm = hermiticity_residual(input);
    if (!(herm <= tol)) {
        throw Error(ErrorKind::NonHermitianInput, "|A - A^dagger|_max = " + std::to_string(herm));
    }

    const std::size_t n = input.rows();
    // Work on the exactly Hermitian part.
    Matrix a = input;
    for (std::size_t i = 0; i < n; ++i) {
        a(i, i) = a(i, i).real();
        for (std::size_t j = i + 1; j < n; ++j) {
            const Complex m = 0.5 * (a(i, j) + std::conj(a(j, i)));
            a(i, j) = m;
            a(j, i) = std::conj(m);
        }
    }
    Matrix v = Matrix::identity(n);

    const double scale = a.frobenius_norm();
    const double threshold = std::numeric_limits<double>::epsilon() * 0.5 * scale;
    bool converged = scale == 0.0;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        if (off_diagonal_norm(a) <= threshold) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double r = std::abs(a(p, q));
                if (r == 0.0 || r < std::numeric_limits<double>::min()) {
                    continue;
                }
                const Complex phase = a(p, q) / r;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * r);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const Complex ph = std::conj(phase);
                rotate(a, v, p, q, c, s, -s * ph, c * ph);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
        if (off_diagonal_norm(a) <= threshold) {
            converged = true;
        }
    }
    if (!converged) {
        throw Error(ErrorKind::NoConvergence, "Jacobi sweep cap reached");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        out.eigenvectors.set_col(k, v.col(order[k]));
    }
    return out;
}

QrDecomposition qr_decompose(const Matrix &a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (n > m || n == 0) {
        throw Error(ErrorKind::DimensionMismatch, "thin QR needs rows >= cols >= 1");
    }
    QrDecomposition out{Matrix(m, n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        Ket w = a.col(j);
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < j; ++i) {
                const Ket qi = out.q.col(i);
                const Complex proj = inner(qi, w);
                out.r(i, j) += proj;
                for (std::size_t k = 0; k < m; ++k) {
                    w[k] -= proj * qi[k];
                }
            }
        }
        const double nrm = norm(w);
        if (nrm == 0.0) {
            throw Error(ErrorKind::InvalidArgument, "QR input is column-rank deficient");
        }
        out.r(j, j) = nrm;
        for (auto &z : w) {
            z /= nrm;
        }
        out.q.set_col(j, w);
    }
    return out;
}

Matrix psd_sqrt(const Matrix &a, double tol) {
    const auto eig = hermitian_eigendecomposition(a, tol);
    if (eig.eigenvalues.front() < -tol) {
        throw Error(ErrorKind::InvalidArgument, "psd_sqrt of a matrix with a negative eigenvalue");
    }
    return eig.apply([](double lambda) { return Complex(std::sqrt(std::max(lambda, 0.0))); });
}

Matrix psd_inverse_sqrt(const Matrix &a, double tol) {
    const auto eig = hermitian_eigendecomposition(a, tol);
    if (eig.eigenvalues.front() <= tol) {
        throw Error(ErrorKind::InvalidArgument, "psd_inverse_sqrt of a singular matrix");
    }
    return eig.apply([](double lambda) { return Complex(1.0 / std::sqrt(lambda)); });
}

}  // namespace wvlab
