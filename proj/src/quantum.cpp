#include "wvlab/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wvlab/error.hpp"

namespace wvlab {

namespace {

constexpr double kPurificationCutoff = 1e-12;

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
    if (labels.empty()) {
        labels.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            labels.push_back(std::to_string(i));
        }
    }
    if (labels.size() != n) {
        throw Error(ErrorKind::InvalidMeasurement, "label count does not match element count");
    }
    return labels;
}

}  // namespace

QuantumState QuantumState::pure(Ket psi, double tol) {
    if (psi.empty()) {
        throw Error(ErrorKind::InvalidState, "empty state vector");
    }
    for (const auto &z : psi) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorKind::InvalidState, "non-finite amplitude");
        }
    }
    const double n2 = inner(psi, psi).real();
    if (std::abs(n2 - 1.0) > tol) {
        throw Error(ErrorKind::InvalidState, "<psi|psi> = " + std::to_string(n2));
    }
    QuantumState s;
    s.kind_ = Kind::Pure;
    s.dim_ = psi.size();
    s.ket_ = std::move(psi);
    return s;
}

QuantumState QuantumState::pure_normalized(std::span<const Complex> psi) {
    return pure(normalized(psi));
}

QuantumState QuantumState::mixed(Matrix rho, double tol) {
    if (!rho.is_square() || rho.rows() == 0) {
        throw Error(ErrorKind::InvalidState, "density operator must be square and non-empty");
    }
    for (const auto &z : rho.data()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error(ErrorKind::InvalidState, "non-finite density matrix entry");
        }
    }
    if (hermiticity_residual(rho) > tol) {
        throw Error(ErrorKind::InvalidState, "density operator is not Hermitian");
    }
    const Complex tr = rho.trace();
    if (std::abs(tr - 1.0) > tol) {
        throw Error(ErrorKind::InvalidState, "tr rho = " + std::to_string(tr.real()));
    }
    const auto eig = hermitian_eigendecomposition(rho, tol);
    if (eig.eigenvalues.front() < -tol) {
        throw Error(ErrorKind::InvalidState, "negative eigenvalue " + std::to_string(eig.eigenvalues.front()));
    }
    // Rounding-level negatives are left alone so a stored state reloads bit-identically.
    if (eig.eigenvalues.front() < -1e-12) {
        double total = 0.0;
        for (double lambda : eig.eigenvalues) {
            total += std::max(lambda, 0.0);
        }
        rho = eig.apply([total](double lambda) { return Complex(std::max(lambda, 0.0) / total); });
    }
    QuantumState s;
    s.kind_ = Kind::Mixed;
    s.dim_ = rho.rows();
    s.rho_ = std::move(rho);
    return s;
}

const Ket &QuantumState::ket() const {
    if (!is_pure()) {
        throw Error(ErrorKind::InvalidState, "mixed state has no state vector");
    }
    return ket_;
}

Matrix QuantumState::density() const {
    return is_pure() ? Matrix::outer(ket_, ket_) : rho_;
}

Complex QuantumState::expectation(const Matrix &x) const {
    if (x.rows() != dim_ || x.cols() != dim_) {
        throw Error(ErrorKind::DimensionMismatch, "operator and state dimensions differ");
    }
    if (is_pure()) {
        return sandwich(ket_, x, ket_);
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        for (std::size_t j = 0; j < dim_; ++j) {
            s += rho_(i, j) * x(j, i);
        }
    }
    return s;
}

double QuantumState::purity() const {
    if (is_pure()) {
        return 1.0;
    }
    double s = 0.0;
    for (const auto &z : rho_.data()) {
        s += std::norm(z);
    }
    return s;
}

Observable::Observable(Matrix m, double tol) : matrix_(std::move(m)), hermitian_(false) {
    if (!matrix_.is_square() || matrix_.rows() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "observable must be a non-empty square matrix");
    }
    hermitian_ = hermiticity_residual(matrix_) <= tol;
}

MeasurementModel MeasurementModel::from_basis(std::vector<Ket> basis, std::vector<std::string> labels, double tol) {
    if (basis.empty()) {
        throw Error(ErrorKind::InvalidMeasurement, "empty basis");
    }
    const std::size_t d = basis.front().size();
    if (basis.size() != d) {
        throw Error(ErrorKind::InvalidMeasurement, "basis must have exactly dim vectors");
    }
    for (std::size_t i = 0; i < d; ++i) {
        if (basis[i].size() != d) {
            throw Error(ErrorKind::DimensionMismatch, "basis vectors differ in length");
        }
        for (std::size_t j = 0; j <= i; ++j) {
            const Complex g = inner(basis[i], basis[j]);
            const double expected = i == j ? 1.0 : 0.0;
            if (std::abs(g - expected) > tol) {
                throw Error(ErrorKind::InvalidMeasurement, "basis is not orthonormal");
            }
        }
    }
    MeasurementModel m;
    m.kind_ = Kind::Rank1Projective;
    m.dim_ = d;
    m.labels_ = default_labels(d, std::move(labels));
    m.elements_.reserve(d);
    for (const auto &b : basis) {
        m.elements_.push_back(Matrix::outer(b, b));
    }
    m.basis_ = std::move(basis);
    return m;
}

MeasurementModel MeasurementModel::from_unitary(const Matrix &u, std::vector<std::string> labels, double tol) {
    std::vector<Ket> basis;
    basis.reserve(u.cols());
    for (std::size_t c = 0; c < u.cols(); ++c) {
        basis.push_back(u.col(c));
    }
    return from_basis(std::move(basis), std::move(labels), tol);
}

MeasurementModel MeasurementModel::from_elements(std::vector<Matrix> elements, std::vector<std::string> labels,
                                                 double tol) {
    if (elements.empty()) {
        throw Error(ErrorKind::InvalidMeasurement, "no POVM elements");
    }
    const std::size_t d = elements.front().rows();
    Matrix total(d, d);
    bool projective = true;
    bool rank1 = true;
    for (const auto &e : elements) {
        if (e.rows() != d || e.cols() != d) {
            throw Error(ErrorKind::DimensionMismatch, "POVM elements differ in dimension");
        }
        const auto eig = hermitian_eigendecomposition(e, tol);  // throws NonHermitianInput
        if (eig.eigenvalues.front() < -tol || eig.eigenvalues.back() > 1.0 + tol) {
            throw Error(ErrorKind::InvalidMeasurement, "POVM element spectrum outside [0, 1]");
        }
        total += e;
        if (max_abs_diff(e * e, e) > tol) {
            projective = false;
        }
        if (std::count_if(eig.eigenvalues.begin(), eig.eigenvalues.end(), [tol](double l) { return l > tol; }) > 1) {
            rank1 = false;
        }
    }
    if (max_abs_diff(total, Matrix::identity(d)) > tol) {
        throw Error(ErrorKind::InvalidMeasurement, "POVM elements do not sum to the identity");
    }

    MeasurementModel m;
    m.dim_ = d;
    m.labels_ = default_labels(elements.size(), std::move(labels));
    if (projective && rank1 && elements.size() == d) {
        m.kind_ = Kind::Rank1Projective;
        for (const auto &e : elements) {
            // Any nonzero column of |m><m| is |m> times a scalar.
            std::size_t best = 0;
            double best_norm = -1.0;
            for (std::size_t c = 0; c < d; ++c) {
                const double n = norm(e.col(c));
                if (n > best_norm) {
                    best_norm = n;
                    best = c;
                }
            }
            m.basis_.push_back(normalized(e.col(best)));
        }
    } else {
        m.kind_ = projective ? Kind::Projective : Kind::GeneralPovm;
    }
    m.elements_ = std::move(elements);
    return m;
}

MeasurementModel MeasurementModel::computational(std::size_t dim) {
    std::vector<Ket> basis;
    for (std::size_t i = 0; i < dim; ++i) {
        basis.push_back(basis_ket(dim, i));
    }
    return from_basis(std::move(basis));
}

const std::vector<Ket> &MeasurementModel::basis() const {
    if (!is_rank1_projective()) {
        throw Error(ErrorKind::InvalidMeasurement, "measurement is not rank-1 projective");
    }
    return basis_;
}

std::string_view to_string(MeasurementModel::Kind kind) {
    switch (kind) {
        case MeasurementModel::Kind::Rank1Projective:
            return "rank1_projective";
        case MeasurementModel::Kind::Projective:
            return "projective";
        case MeasurementModel::Kind::GeneralPovm:
            return "general_povm";
    }
    return "unknown";
}

QuantumState purify(const QuantumState &state, double tol) {
    const std::size_t d = state.dim();
    if (state.is_pure()) {
        Ket psi(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            psi[i * d] = state.ket()[i];
        }
        return QuantumState::pure(std::move(psi), tol);
    }
    const auto eig = hermitian_eigendecomposition(state.density(), tol);
    Ket psi(d * d);
    for (std::size_t k = 0; k < d; ++k) {
        const double lambda = eig.eigenvalues[k];
        if (lambda < kPurificationCutoff) {
            continue;
        }
        const double w = std::sqrt(lambda);
        for (std::size_t i = 0; i < d; ++i) {
            psi[i * d + k] = w * eig.eigenvectors(i, k);
        }
    }
    return QuantumState::pure(normalized(psi), tol);
}

Matrix partial_trace_ancilla(std::span<const Complex> psi, std::size_t sys_dim, std::size_t anc_dim) {
    if (psi.size() != sys_dim * anc_dim) {
        throw Error(ErrorKind::DimensionMismatch, "partial trace: vector length is not sys_dim * anc_dim");
    }
    Matrix rho(sys_dim, sys_dim);
    for (std::size_t i = 0; i < sys_dim; ++i) {
        for (std::size_t j = 0; j < sys_dim; ++j) {
            Complex s = 0.0;
            for (std::size_t k = 0; k < anc_dim; ++k) {
                s += psi[i * anc_dim + k] * std::conj(psi[j * anc_dim + k]);
            }
            rho(i, j) = s;
        }
    }
    return rho;
}

Ket fourier_ket(std::size_t dim, std::size_t k) {
    Ket v(dim);
    const double scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (std::size_t j = 0; j < dim; ++j) {
        // Reduce jk mod d first so the phase argument stays small.
        const double angle = 2.0 * std::numbers::pi * static_cast<double>((j * k) % dim) / static_cast<double>(dim);
        v[j] = std::polar(scale, angle);
    }
    return v;
}

MeasurementModel fourier_basis(std::size_t dim) {
    if (dim < 2) {
        throw Error(ErrorKind::InvalidArgument, "fourier_basis needs dim >= 2");
    }
    std::vector<Ket> basis;
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < dim; ++k) {
        basis.push_back(fourier_ket(dim, k));
        labels.push_back("p" + std::to_string(k));
    }
    return MeasurementModel::from_basis(std::move(basis), std::move(labels), 1e-12);
}

QuantumState random_pure_state(std::size_t dim, Rng &rng) {
    if (dim == 0) {
        throw Error(ErrorKind::InvalidArgument, "random_pure_state: dim must be positive");
    }
    return QuantumState::pure_normalized(random_ginibre(dim, 1, rng).data());
}

QuantumState random_density_operator(std::size_t dim, std::size_t rank, Rng &rng) {
    if (dim == 0 || rank == 0 || rank > dim) {
        throw Error(ErrorKind::InvalidArgument, "random_density_operator: need 1 <= rank <= dim");
    }
    const Matrix g = random_ginibre(dim, rank, rng);
    Matrix rho = g * g.adjoint();
    rho *= 1.0 / rho.trace().real();
    // Enforce exact Hermiticity against rounding in the product.
    for (std::size_t i = 0; i < dim; ++i) {
        rho(i, i) = rho(i, i).real();
        for (std::size_t j = i + 1; j < dim; ++j) {
            rho(j, i) = std::conj(rho(i, j));
        }
    }
    return QuantumState::mixed(std::move(rho));
}

MeasurementModel random_rank1_povm(std::size_t dim, Rng &rng) {
    return MeasurementModel::from_unitary(random_haar_unitary(dim, rng));
}

MeasurementModel random_projective_measurement(std::size_t dim, std::size_t outcomes, Rng &rng) {
    if (outcomes == 0 || outcomes > dim) {
        throw Error(ErrorKind::InvalidArgument, "random_projective_measurement: need 1 <= outcomes <= dim");
    }
    const Matrix u = random_haar_unitary(dim, rng);
    // Every outcome gets at least one basis vector; the rest are spread randomly.
    std::vector<std::size_t> owner(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        owner[i] = i < outcomes ? i : rng.uniform_index(0, outcomes - 1);
    }
    std::vector<Matrix> elements(outcomes, Matrix(dim, dim));
    for (std::size_t i = 0; i < dim; ++i) {
        const Ket col = u.col(i);
        elements[owner[i]] += Matrix::outer(col, col);
    }
    return MeasurementModel::from_elements(std::move(elements), {}, 1e-9);
}

MeasurementModel random_general_povm(std::size_t dim, std::size_t outcomes, Rng &rng) {
    if (outcomes == 0) {
        throw Error(ErrorKind::InvalidArgument, "random_general_povm: need outcomes >= 1");
    }
    std::vector<Matrix> w;
    Matrix total(dim, dim);
    for (std::size_t k = 0; k < outcomes; ++k) {
        const Matrix g = random_ginibre(dim, dim, rng);
        w.push_back(g * g.adjoint());
        total += w.back();
    }
    const Matrix s = psd_inverse_sqrt(total, 1e-9);
    std::vector<Matrix> elements;
    for (const auto &wk : w) {
        Matrix e = s * wk * s;
        for (std::size_t i = 0; i < dim; ++i) {
            e(i, i) = e(i, i).real();
            for (std::size_t j = i + 1; j < dim; ++j) {
                const Complex m = 0.5 * (e(i, j) + std::conj(e(j, i)));
                e(i, j) = m;
                e(j, i) = std::conj(m);
            }
        }
        elements.push_back(std::move(e));
    }
    return MeasurementModel::from_elements(std::move(elements), {}, 1e-9);
}

Observable truncated_annihilation(std::size_t dim) {
    if (dim < 2) {
        throw Error(ErrorKind::InvalidArgument, "truncated_annihilation needs dim >= 2");
    }
    Matrix a(dim, dim);
    for (std::size_t n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return Observable(std::move(a));
}

QuantumState truncated_coherent_state(std::size_t dim, Complex alpha) {
    if (dim == 0) {
        throw Error(ErrorKind::InvalidArgument, "truncated_coherent_state: dim must be positive");
    }
    Ket psi(dim);
    Complex c = std::exp(-0.5 * std::norm(alpha));
    for (std::size_t n = 0; n < dim; ++n) {
        psi[n] = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return QuantumState::pure_normalized(psi);
}

}  // namespace wvlab
