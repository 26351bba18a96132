#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wvlab/linalg.hpp"
#include "wvlab/matrix.hpp"
#include "wvlab/random.hpp"

namespace wvlab {

/// Validated pure state or density operator.
class QuantumState {
  public:
    enum class Kind { Pure, Mixed };

    /// Throws InvalidState unless |<psi|psi> - 1| <= tol.
    static QuantumState pure(Ket psi, double tol = kDefaultTol);
    /// Normalises before validating.
    static QuantumState pure_normalized(std::span<const Complex> psi);
    /// Throws InvalidState unless rho is Hermitian with unit trace and
    /// spectrum >= -tol. Eigenvalues in [-tol, 0) are clamped to zero and the
    /// state renormalised.
    static QuantumState mixed(Matrix rho, double tol = kDefaultTol);

    Kind kind() const noexcept {
        return kind_;
    }
    bool is_pure() const noexcept {
        return kind_ == Kind::Pure;
    }
    std::size_t dim() const noexcept {
        return dim_;
    }
    /// The state vector; throws InvalidState for mixed states.
    const Ket &ket() const;
    /// rho (|psi><psi| for pure states).
    Matrix density() const;

    /// tr(rho X)
    Complex expectation(const Matrix &x) const;
    /// tr(rho^2)
    double purity() const;

  private:
    QuantumState() = default;

    Kind kind_ = Kind::Pure;
    std::size_t dim_ = 0;
    Ket ket_;
    Matrix rho_;
};

/// An operator with a cached Hermiticity flag. Non-Hermitian operators (a,
/// a^dagger, unitaries) are admitted.
class Observable {
  public:
    explicit Observable(Matrix m, double tol = kDefaultTol);

    const Matrix &matrix() const noexcept {
        return matrix_;
    }
    bool hermitian() const noexcept {
        return hermitian_;
    }
    std::size_t dim() const noexcept {
        return matrix_.rows();
    }

  private:
    Matrix matrix_;
    bool hermitian_;
};

/// A POVM with opaque outcome labels.
class MeasurementModel {
  public:
    enum class Kind { Rank1Projective, Projective, GeneralPovm };

    /// Projective measurement onto an orthonormal basis.
    static MeasurementModel from_basis(std::vector<Ket> basis, std::vector<std::string> labels = {},
                                       double tol = kDefaultTol);
    /// Basis given by the columns of a unitary.
    static MeasurementModel from_unitary(const Matrix &u, std::vector<std::string> labels = {},
                                         double tol = kDefaultTol);
    /// Validates elements and classifies the kind.
    static MeasurementModel from_elements(std::vector<Matrix> elements, std::vector<std::string> labels = {},
                                          double tol = kDefaultTol);
    static MeasurementModel computational(std::size_t dim);

    Kind kind() const noexcept {
        return kind_;
    }
    bool is_rank1_projective() const noexcept {
        return kind_ == Kind::Rank1Projective;
    }
    bool is_projective() const noexcept {
        return kind_ != Kind::GeneralPovm;
    }
    std::size_t dim() const noexcept {
        return dim_;
    }
    std::size_t size() const noexcept {
        return elements_.size();
    }
    const std::vector<Matrix> &elements() const noexcept {
        return elements_;
    }
    const Matrix &element(std::size_t i) const {
        return elements_.at(i);
    }
    const std::vector<std::string> &labels() const noexcept {
        return labels_;
    }
    /// Unit vectors |m> with element m = |m><m|; throws InvalidMeasurement
    /// unless rank-1 projective.
    const std::vector<Ket> &basis() const;

  private:
    MeasurementModel() = default;

    Kind kind_ = Kind::GeneralPovm;
    std::size_t dim_ = 0;
    std::vector<Matrix> elements_;
    std::vector<std::string> labels_;
    std::vector<Ket> basis_;
};

std::string_view to_string(MeasurementModel::Kind kind);

/// |Psi> = sum_k sqrt(lambda_k) |e_k> (x) |k> on a dim^2 space, system
/// index major. Eigenvalues below 1e-12 are dropped.
QuantumState purify(const QuantumState &rho, double tol = kDefaultTol);
/// Partial trace of |Psi><Psi| over the second factor of dimension anc_dim.
Matrix partial_trace_ancilla(std::span<const Complex> psi, std::size_t sys_dim, std::size_t anc_dim);

/// Basis |p_k> with components exp(2 pi i j k / d) / sqrt(d).
MeasurementModel fourier_basis(std::size_t dim);
Ket fourier_ket(std::size_t dim, std::size_t k);

QuantumState random_pure_state(std::size_t dim, Rng &rng);
/// rho = G G^dagger / tr(G G^dagger), G Ginibre dim x rank.
QuantumState random_density_operator(std::size_t dim, std::size_t rank, Rng &rng);
/// Projective measurement onto a Haar-random orthonormal basis.
MeasurementModel random_rank1_povm(std::size_t dim, Rng &rng);
/// Projective measurement onto `outcomes` blocks of a Haar-random basis.
MeasurementModel random_projective_measurement(std::size_t dim, std::size_t outcomes, Rng &rng);
/// General POVM S^{-1/2} W_k S^{-1/2} built from random positive W_k.
MeasurementModel random_general_povm(std::size_t dim, std::size_t outcomes, Rng &rng);

/// Truncated single-mode annihilation operator: <n-1|a|n> = sqrt(n).
Observable truncated_annihilation(std::size_t dim);
/// Normalised truncation of the coherent state |alpha> to dim levels.
QuantumState truncated_coherent_state(std::size_t dim, Complex alpha);

}  // namespace wvlab
