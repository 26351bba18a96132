#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wvlab/quantum.hpp"
#include "wvlab/report.hpp"

namespace wvlab {

/// Outcomes with p(m) below this are Undefined.
inline constexpr double kDenominatorGuard = 1e-12;
/// Reconstruction sums need at least this much defined probability mass.
inline constexpr double kMinDefinedMass = 1.0 - 1e-9;

/// A weak value, or nullopt when the post-selection probability is below
/// the guard. Undefined is an ordinary result, not an error.
using WeakValue = std::optional<Complex>;

/// <m|A|psi>/<m|psi> for pure states, tr(rho M A)/tr(rho M) with M = |m><m|
/// for mixed states.
WeakValue weak_value(const Observable &a, std::span<const Complex> post, const QuantumState &state,
                     double delta = kDenominatorGuard);
/// tr(rho M A)/tr(rho M) for a general POVM element M.
WeakValue weak_value(const Observable &a, const Matrix &post_element, const QuantumState &state,
                     double delta = kDenominatorGuard);

struct WeakValueRow {
    std::string label;
    Complex weak_value{};
    double probability = 0.0;
    bool defined = false;
};

struct WeakValueTable {
    std::string observable_id;
    std::string measurement_id;
    std::vector<WeakValueRow> rows;

    double total_probability() const;
    double defined_probability() const;
    bool all_defined() const;
    /// sum_m p(m) A_w(m) over defined outcomes.
    Complex average() const;
    std::vector<Complex> values() const;
    std::vector<double> probabilities() const;
};

WeakValueTable weak_value_table(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                double delta = kDenominatorGuard);

/// sum over undefined outcomes of tr(M_m A rho A^dagger), i.e. |<m|A|psi>|^2
/// for pure states. As p(m) -> 0, p(m)|A_w(m)|^2 tends to this, so it is the
/// second-moment weight a weak-value sum cannot see.
double undefined_outcome_weight(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                double delta = kDenominatorGuard);

/// sum_m p(m) A_w(m)^* B_w(m) against <psi|A^dagger B|psi>. Pure states only.
/// Inconclusive when less than kMinDefinedMass of the probability is defined
/// or an undefined outcome hides more than tol of second-moment weight.
RelationReport product_representation_check(const Observable &a, const Observable &b, const MeasurementModel &m,
                                            const QuantumState &state, double tol = kRelationTol,
                                            double delta = kDenominatorGuard);

/// sum_m p(m) A_w(m) against <A>; the single-operator reconstruction.
RelationReport average_reconstruction_check(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                            double tol = kRelationTol, double delta = kDenominatorGuard);

struct EstimateAssignment {
    /// alpha_m per outcome, in measurement order.
    std::vector<Complex> estimates;
    double mean_square_deviation = 0.0;
};

/// alpha_m = A_w(m) on defined outcomes, 0 elsewhere.
EstimateAssignment optimal_estimate(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                    double delta = kDenominatorGuard);
/// sum_m p(m) |A_w(m) - alpha_m|^2 over defined outcomes.
double estimate_mse(std::span<const Complex> estimates, const Observable &a, const MeasurementModel &m,
                    const QuantumState &state, double delta = kDenominatorGuard);
/// <(A - A_est)^dagger (A - A_est)>_psi with A_est = sum_m alpha_m |m><m|.
double estimate_mse_direct(std::span<const Complex> estimates, const Observable &a, const MeasurementModel &m,
                           const QuantumState &state);

struct TripleProductInstance {
    std::size_t dim = 0;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    Matrix a, b, c;
    Ket psi;
    Matrix basis;  // columns are the post-selection basis
    /// sum_m p(m) A_w^* B_w C_w
    Complex weak_side{};
    /// <psi|A^dagger B C|psi>
    Complex quantum_side{};
    double discrepancy = 0.0;
};

/// Both sides of the would-be triple product formula for one instance.
TripleProductInstance evaluate_triple_product(const Matrix &a, const Matrix &b, const Matrix &c,
                                              const QuantumState &state, const MeasurementModel &m,
                                              double delta = kDenominatorGuard);
/// Regenerates trial instance from its seed.
TripleProductInstance triple_product_trial(std::size_t dim, std::uint64_t trial_seed);
/// Searches `trials` random instances (seeds split from master_seed) for a
/// discrepancy above threshold; returns the first.
std::optional<TripleProductInstance> triple_product_counterexample(std::size_t dim, std::size_t trials,
                                                                   std::uint64_t master_seed, double threshold);

}  // namespace wvlab
