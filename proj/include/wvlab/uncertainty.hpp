#pragma once

#include <optional>
#include <vector>

#include "wvlab/quantum.hpp"
#include "wvlab/report.hpp"
#include "wvlab/weak_values.hpp"

namespace wvlab {

/// Mean and variance of a discrete complex random variable.
struct ComplexRVStats {
    Complex mean{};
    /// <|alpha|^2> - |<alpha>|^2, clamped at zero within 1e-12.
    double variance = 0.0;
};

ComplexRVStats complex_rv_stats(std::span<const Complex> values, std::span<const double> weights);
/// <(alpha - <alpha>)^* (beta - <beta>)>
Complex complex_rv_covariance(std::span<const Complex> alpha, std::span<const Complex> beta,
                              std::span<const double> weights);
/// Var alpha Var beta >= |Cov(alpha, beta)|^2
RelationReport schwarz_check(std::span<const Complex> alpha, std::span<const Complex> beta,
                             std::span<const double> weights, double tol = kRelationTol);

/// Both routes to the Robertson-Schrodinger relation for Hermitian A, B.
struct HeisenbergAnalysis {
    // Classical route, from weak-value statistics over p(m|psi).
    double weak_var_a = 0.0;
    double weak_var_b = 0.0;
    Complex weak_cov{};
    // Direct quantum route.
    double var_a = 0.0;
    double var_b = 0.0;
    /// (1/2)<AB + BA> - <A><B>
    double cov = 0.0;
    /// <[A, B]>
    Complex commutator{};
    ReportBundle reports;
};

/// Route-agreement checks (Var, Var, Cov) and the inequality
/// Var A Var B >= Cov^2 + |<[A,B]>|^2 / 4. Pure state, rank-1 projective M.
HeisenbergAnalysis robertson_schrodinger_check(const Observable &a, const Observable &b, const QuantumState &state,
                                               const MeasurementModel &m, double tol = kRelationTol);

/// <A^dagger A> - |<A>|^2, clamped at zero within 1e-12.
double operator_variance(const Observable &a, const QuantumState &state);

/// Var A Var B >= |<A^dagger B> - <A^dagger><B>|^2 for general operators.
RelationReport nonhermitian_uncertainty_check(const Observable &a, const Observable &b, const QuantumState &state,
                                              double tol = kRelationTol);

/// Var a^dagger - Var a for a truncated mode operator.
struct BosonicVarianceCheck {
    double var_a = 0.0;
    double var_a_dagger = 0.0;
    double gap = 0.0;
    /// Population of the top Fock level, where [a, a^dagger] = 1 fails.
    double top_level_population = 0.0;
    RelationReport report;
};

/// Gated on top-level population < 1e-8; skipped otherwise.
BosonicVarianceCheck bosonic_variance_check(const QuantumState &state, double tol = 1e-6);

struct UnitaryPairSummary {
    double u = 0.0;        // |<U>|
    double v = 0.0;        // |<V>|
    double overlap = 0.0;  // |<U^dagger V>|
    Complex bargmann{};    // <U><U^dagger V><V^dagger>
    /// Principal phase of the Bargmann invariant in (-pi, pi]; nullopt when
    /// its modulus is below 1e-12.
    std::optional<double> bargmann_phase;
    double x = 0.0;  // (u + v)/sqrt 2
    double y = 0.0;  // (u - v)/sqrt 2
};

/// Throws NotUnitary unless U^dagger U = V^dagger V = I to tol.
UnitaryPairSummary unitary_pair_summary(const Observable &u, const Observable &v, const QuantumState &state,
                                        double tol = kDefaultTol);

/// Relations "unitary_ellipse" (u^2+v^2-2uv ov <= 1-ov^2), "unitary_hyperbola"
/// (uv <= (1+ov)/2), "unitary_rotated_ellipse" (x/y form; skipped when
/// ov > 1 - 1e-9), "unitary_bargmann_ellipse" (cos Phi strengthened), and
/// "unitary_implication_chain".
ReportBundle unitary_uncertainty_checks(const UnitaryPairSummary &s, double tol = kRelationTol);

/// LHS of the Bargmann-strengthened relation minus its RHS; <= 0 inside.
double unitary_relation_excess(double u, double v, double overlap, double cos_phi);

struct Curve {
    std::string id;
    std::vector<std::pair<double, double>> points;  // (u, v)
};

/// Boundaries in the positive quadrant: "ellipse" (cos Phi = 1),
/// "hyperbola" uv = (1+ov)/2, and "bargmann_ellipse" at the given Phi.
/// Each curve has exactly `samples` points.
std::vector<Curve> figure1_region_data(double overlap, double phi, std::size_t samples);

/// Full area pi sqrt(1 - ov^2) of the ellipse in the rotated frame.
double unitary_ellipse_area(double overlap);

}  // namespace wvlab
