#pragma once

#include <optional>
#include <vector>

#include "wvlab/quantum.hpp"
#include "wvlab/report.hpp"
#include "wvlab/weak_values.hpp"

namespace wvlab {

/// Row-major grid indexed [a][b].
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    Grid() = default;
    Grid(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c) {
    }
    double &operator()(std::size_t a, std::size_t b) {
        return values[a * cols + b];
    }
    double operator()(std::size_t a, std::size_t b) const {
        return values[a * cols + b];
    }
    double sum() const;
};

/// Weak values of the complementary pair |a><a| post-selected on |b> and
/// |b><b| post-selected on |a>.
struct ProjectorWeakValuePair {
    Complex a_given_b{};  // A^a_w(b)
    Complex b_given_a{};  // B^b_w(a)
    /// Max residual of the two filter identities (pure states only; 0 for
    /// mixed states).
    double filter_residual = 0.0;

    Complex product() const {
        return a_given_b * b_given_a;
    }
};

/// Throws UndefinedPostselection if <b|rho|b> or <a|rho|a> is below delta.
ProjectorWeakValuePair projector_weak_value_pair(std::span<const Complex> a, std::span<const Complex> b,
                                                 const QuantumState &state, double delta = kDenominatorGuard);

struct AnomalousDecomposition {
    double projector_mean = 0.0;  // <Pi_a>
    double uncertainty = 0.0;     // (Var Pi_a)^{1/2}
    Complex anomalous_ratio{};    // <b|psi_bar>/<b|psi>
    Ket orthogonal_state;         // psi_bar

    Complex reassembled() const {
        return projector_mean + uncertainty * anomalous_ratio;
    }
};

/// Splits Pi_a|psi> = <Pi_a>|psi> + Delta |psi_bar> with psi_bar orthogonal
/// to psi. Throws DegenerateDecomposition when Delta <= 1e-12 (psi is an
/// eigenvector of Pi_a) and UndefinedPostselection when |<b|psi>|^2 < delta.
AnomalousDecomposition anomalous_decomposition(std::span<const Complex> a, std::span<const Complex> b,
                                               const QuantumState &state, double delta = kDenominatorGuard);

/// Pure: product equals |<a|b>|^2 (identity, tol 1e-10). Mixed: product real
/// with 0 <= product <= |<a|b>|^2. Skipped when a factor is undefined.
RelationReport complementarity_product(std::span<const Complex> a, std::span<const Complex> b,
                                       const QuantumState &state, double delta = kDenominatorGuard,
                                       double tol = 1e-10);

/// X^j_w(p_k) P^{p_k}_w(j) from the computational and Fourier bases.
Complex fourier_pair_product(std::size_t dim, std::size_t j, std::size_t k, const QuantumState &state,
                             double delta = kDenominatorGuard);

struct WeakJointDistribution {
    /// p_w(a,b) = (1/2)<A_a B_b + B_b A_a>
    Grid joint;
    std::vector<double> p_a;
    std::vector<double> p_b;
    /// p_w(a|b) where p(b) >= delta.
    std::vector<std::optional<double>> a_given_b;
    /// p_w(b|a) where p(a) >= delta.
    std::vector<std::optional<double>> b_given_a;
    double weak_purity = 0.0;
    double anomaly_l1 = 0.0;

    std::optional<double> conditional_a_given_b(std::size_t a, std::size_t b) const {
        return a_given_b[a * joint.cols + b];
    }
    std::optional<double> conditional_b_given_a(std::size_t a, std::size_t b) const {
        return b_given_a[a * joint.cols + b];
    }
    bool has_negative_entry(double threshold = 1e-12) const;
};

WeakJointDistribution weak_joint_distribution(const MeasurementModel &a, const MeasurementModel &b,
                                              const QuantumState &state, double delta = kDenominatorGuard);

struct IncompatibilityProfile {
    /// (1/4)|<[A_a, B_b]>|^2
    Grid cells;
    double total = 0.0;
    double quantum_purity = 0.0;
};

IncompatibilityProfile incompatibility_profile(const MeasurementModel &a, const MeasurementModel &b,
                                               const QuantumState &state);

/// p_w(a,b)^2 + I(a,b) = |tr(rho A_a B_b)|^2 with p_w from the symmetrised
/// product and I from the commutator.
RelationReport identity_check_eq33(const Matrix &a_elem, const Matrix &b_elem, const QuantumState &state,
                                   double tol = 1e-10);

/// Every tradeoff relation for the pair (A, B), folded to one report per
/// relation (worst cell). See the implementation for relation ids.
ReportBundle tradeoff_suite(const MeasurementModel &a, const MeasurementModel &b, const QuantumState &state,
                            double tol = kRelationTol, double delta = kDenominatorGuard);

struct StrongSequentialDistribution {
    /// tr(A_a rho A_a B_b)
    Grid joint;
    ReportBundle reports;
};

/// Throws NotProjective unless both measurements are projective.
StrongSequentialDistribution strong_sequential_distribution(const MeasurementModel &a, const MeasurementModel &b,
                                                            const QuantumState &state, double tol = kRelationTol);

/// max |<a|b>|^2 over the two rank-1 bases.
double max_overlap(const MeasurementModel &a, const MeasurementModel &b);

/// True when every element of the measurement has rank one.
bool has_rank1_elements(const MeasurementModel &m);

}  // namespace wvlab
