#include "wvlab/uncertainty.hpp"

#include <cmath>
#include <numbers>

#include "wvlab/error.hpp"

namespace wvlab {

namespace {

constexpr double kVarianceClamp = 1e-12;
constexpr double kBargmannFloor = 1e-12;
constexpr double kBosonicGate = 1e-8;

double clamp_variance(double v) {
    return (v < 0.0 && v >= -kVarianceClamp) ? 0.0 : v;
}

void validate_weights(std::size_t n, std::span<const double> weights) {
    if (weights.size() != n) {
        throw Error(ErrorKind::LengthMismatch, "values and weights differ in length");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw Error(ErrorKind::InvalidWeights, "negative or NaN weight");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-10) {
        throw Error(ErrorKind::InvalidWeights, "weights sum to " + std::to_string(total));
    }
}

}  // namespace

ComplexRVStats complex_rv_stats(std::span<const Complex> values, std::span<const double> weights) {
    validate_weights(values.size(), weights);
    ComplexRVStats s;
    double second = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        s.mean += weights[i] * values[i];
        second += weights[i] * std::norm(values[i]);
    }
    s.variance = clamp_variance(second - std::norm(s.mean));
    return s;
}

Complex complex_rv_covariance(std::span<const Complex> alpha, std::span<const Complex> beta,
                              std::span<const double> weights) {
    if (alpha.size() != beta.size()) {
        throw Error(ErrorKind::LengthMismatch, "alpha and beta differ in length");
    }
    validate_weights(alpha.size(), weights);
    Complex mean_a = 0.0;
    Complex mean_b = 0.0;
    Complex cross = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        mean_a += weights[i] * alpha[i];
        mean_b += weights[i] * beta[i];
        cross += weights[i] * std::conj(alpha[i]) * beta[i];
    }
    return cross - std::conj(mean_a) * mean_b;
}

RelationReport schwarz_check(std::span<const Complex> alpha, std::span<const Complex> beta,
                             std::span<const double> weights, double tol) {
    const double va = complex_rv_stats(alpha, weights).variance;
    const double vb = complex_rv_stats(beta, weights).variance;
    const Complex cov = complex_rv_covariance(alpha, beta, weights);
    return RelationReport::inequality("classical_schwarz", std::norm(cov), va * vb, tol);
}

HeisenbergAnalysis robertson_schrodinger_check(const Observable &a, const Observable &b, const QuantumState &state,
                                               const MeasurementModel &m, double tol) {
    if (!a.hermitian() || !b.hermitian()) {
        throw Error(ErrorKind::NonHermitianInput, "Robertson-Schrodinger check needs Hermitian A and B");
    }
    if (!state.is_pure()) {
        throw Error(ErrorKind::InvalidState, "weak-value route is defined for pure states");
    }
    HeisenbergAnalysis out;

    const auto ta = weak_value_table(a, m, state);
    const auto tb = weak_value_table(b, m, state);
    // Undefined outcomes carry at most ~d * 1e-12 mass; drop them and
    // renormalise the weights over the defined support.
    std::vector<Complex> wa, wb;
    std::vector<double> p;
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
        if (ta.rows[i].defined) {
            wa.push_back(ta.rows[i].weak_value);
            wb.push_back(tb.rows[i].weak_value);
            p.push_back(ta.rows[i].probability);
        }
    }
    const double mass = ta.defined_probability();
    for (auto &w : p) {
        w /= mass;
    }
    out.weak_var_a = complex_rv_stats(wa, p).variance;
    out.weak_var_b = complex_rv_stats(wb, p).variance;
    out.weak_cov = complex_rv_covariance(wa, wb, p);

    const Matrix &am = a.matrix();
    const Matrix &bm = b.matrix();
    const double mean_a = state.expectation(am).real();
    const double mean_b = state.expectation(bm).real();
    out.var_a = clamp_variance(state.expectation(am * am).real() - mean_a * mean_a);
    out.var_b = clamp_variance(state.expectation(bm * bm).real() - mean_b * mean_b);
    out.cov = 0.5 * state.expectation(am * bm + bm * am).real() - mean_a * mean_b;
    out.commutator = state.expectation(commutator(am, bm));

    const double hidden = std::max(undefined_outcome_weight(a, m, state), undefined_outcome_weight(b, m, state));
    if (mass < kMinDefinedMass || hidden > tol) {
        const std::string why = mass < kMinDefinedMass
                                    ? "defined mass too small"
                                    : "an outcome with p(m) = 0 has <m|A|psi> != 0; weak values cannot carry it";
        out.reports.push_back(RelationReport::inconclusive("heisenberg_route_var_a", why));
        out.reports.push_back(RelationReport::inconclusive("heisenberg_route_var_b", why));
        out.reports.push_back(RelationReport::inconclusive("heisenberg_route_cov", why));
    } else {
        out.reports.push_back(RelationReport::identity("heisenberg_route_var_a", out.weak_var_a, out.var_a, tol));
        out.reports.push_back(RelationReport::identity("heisenberg_route_var_b", out.weak_var_b, out.var_b, tol));
        // <AB> - <A><B> = Cov + <[A,B]>/2
        out.reports.push_back(
            RelationReport::identity("heisenberg_route_cov", out.weak_cov, out.cov + 0.5 * out.commutator, tol, true));
    }
    out.reports.push_back(RelationReport::inequality("robertson_schrodinger",
                                                     out.cov * out.cov + 0.25 * std::norm(out.commutator),
                                                     out.var_a * out.var_b, tol));
    return out;
}

double operator_variance(const Observable &a, const QuantumState &state) {
    const Matrix &am = a.matrix();
    const Complex mean = state.expectation(am);
    return clamp_variance(state.expectation(am.adjoint() * am).real() - std::norm(mean));
}

RelationReport nonhermitian_uncertainty_check(const Observable &a, const Observable &b, const QuantumState &state,
                                              double tol) {
    const Matrix ad = a.matrix().adjoint();
    const Complex cov = state.expectation(ad * b.matrix()) - state.expectation(ad) * state.expectation(b.matrix());
    return RelationReport::inequality("general_operator_uncertainty", std::norm(cov),
                                      operator_variance(a, state) * operator_variance(b, state), tol);
}

BosonicVarianceCheck bosonic_variance_check(const QuantumState &state, double tol) {
    const std::size_t d = state.dim();
    const Observable a = truncated_annihilation(d);
    const Observable ad(a.matrix().adjoint());
    BosonicVarianceCheck out;
    out.var_a = operator_variance(a, state);
    out.var_a_dagger = operator_variance(ad, state);
    out.gap = out.var_a_dagger - out.var_a;
    out.top_level_population = state.expectation(Matrix::outer(basis_ket(d, d - 1), basis_ket(d, d - 1))).real();
    if (out.top_level_population >= kBosonicGate) {
        out.report = RelationReport::skipped("bosonic_variance_gap",
                                             "top Fock level population " + std::to_string(out.top_level_population) +
                                                 " exceeds truncation gate");
    } else {
        out.report = RelationReport::identity("bosonic_variance_gap", out.gap, 1.0, tol);
    }
    return out;
}

UnitaryPairSummary unitary_pair_summary(const Observable &u, const Observable &v, const QuantumState &state,
                                        double tol) {
    if (unitarity_residual(u.matrix()) > tol || unitarity_residual(v.matrix()) > tol) {
        throw Error(ErrorKind::NotUnitary, "U and V must be unitary");
    }
    const Complex eu = state.expectation(u.matrix());
    const Complex ev = state.expectation(v.matrix());
    const Complex euv = state.expectation(u.matrix().adjoint() * v.matrix());
    UnitaryPairSummary s;
    s.u = std::abs(eu);
    s.v = std::abs(ev);
    s.overlap = std::abs(euv);
    s.bargmann = eu * euv * std::conj(ev);
    if (std::abs(s.bargmann) >= kBargmannFloor) {
        s.bargmann_phase = std::arg(s.bargmann);
        if (*s.bargmann_phase == -std::numbers::pi) {
            s.bargmann_phase = std::numbers::pi;
        }
    }
    s.x = (s.u + s.v) / std::numbers::sqrt2;
    s.y = (s.u - s.v) / std::numbers::sqrt2;
    return s;
}

double unitary_relation_excess(double u, double v, double overlap, double cos_phi) {
    return u * u + v * v - 2.0 * u * v * overlap * cos_phi - (1.0 - overlap * overlap);
}

ReportBundle unitary_uncertainty_checks(const UnitaryPairSummary &s, double tol) {
    const double ov = s.overlap;
    ReportBundle out;

    auto ellipse = RelationReport::inequality("unitary_ellipse", s.u * s.u + s.v * s.v - 2.0 * s.u * s.v * ov,
                                              1.0 - ov * ov, tol);
    auto hyperbola = RelationReport::inequality("unitary_hyperbola", s.u * s.v, 0.5 * (1.0 + ov), tol);

    RelationReport rotated;
    if (ov > 1.0 - 1e-9) {
        rotated = RelationReport::skipped("unitary_rotated_ellipse", "degenerate ellipse: overlap within 1e-9 of 1");
    } else {
        rotated = RelationReport::inequality("unitary_rotated_ellipse",
                                             s.x * s.x / (1.0 + ov) + s.y * s.y / (1.0 - ov), 1.0, tol);
    }

    const double cos_phi = s.bargmann_phase ? std::cos(*s.bargmann_phase) : 1.0;
    auto bargmann = RelationReport::inequality("unitary_bargmann_ellipse",
                                               s.u * s.u + s.v * s.v - 2.0 * s.u * s.v * ov * cos_phi, 1.0 - ov * ov,
                                               tol);
    if (!s.bargmann_phase) {
        bargmann.with_note("Bargmann invariant below 1e-12; phase undefined, cos term taken as 1");
    }

    const bool chain = (!bargmann.held() || ellipse.held()) && (!ellipse.held() || hyperbola.held());
    out.push_back(std::move(ellipse));
    out.push_back(std::move(hyperbola));
    out.push_back(std::move(rotated));
    out.push_back(std::move(bargmann));
    out.push_back(RelationReport::boolean("unitary_implication_chain", chain,
                                          "bargmann_ellipse => ellipse => hyperbola"));
    return out;
}

std::vector<Curve> figure1_region_data(double overlap, double phi, std::size_t samples) {
    if (!(overlap >= 0.0 && overlap < 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "overlap must lie in [0, 1)");
    }
    if (samples < 16) {
        throw Error(ErrorKind::InvalidArgument, "figure needs at least 16 samples per curve");
    }
    const double ov = overlap;
    // Boundary of u^2 + v^2 - 2uv ov k = 1 - ov^2 along the ray at angle t.
    auto radial = [ov](double t, double k) {
        return std::sqrt((1.0 - ov * ov) / (1.0 - ov * k * std::sin(2.0 * t)));
    };
    std::vector<Curve> curves(3);
    curves[0].id = "ellipse";
    curves[1].id = "hyperbola";
    curves[2].id = "bargmann_ellipse";
    const double h = 0.5 * (1.0 + ov);
    const double cos_phi = std::cos(phi);
    for (std::size_t i = 0; i < samples; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(samples - 1);
        const double t = 0.5 * std::numbers::pi * f;
        const double r12 = radial(t, 1.0);
        const double r16 = radial(t, cos_phi);
        curves[0].points.emplace_back(r12 * std::cos(t), r12 * std::sin(t));
        const double u = h + (1.0 - h) * f;
        curves[1].points.emplace_back(u, h / u);
        curves[2].points.emplace_back(r16 * std::cos(t), r16 * std::sin(t));
    }
    // Pin the axis endpoints exactly; cos(pi/2) is not 0 in floating point.
    for (auto &c : {0, 2}) {
        curves[c].points.front().second = 0.0;
        curves[c].points.back().first = 0.0;
    }
    return curves;
}

double unitary_ellipse_area(double overlap) {
    return std::numbers::pi * std::sqrt(1.0 - overlap * overlap);
}

}  // namespace wvlab
