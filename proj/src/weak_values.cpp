#include "wvlab/weak_values.hpp"

#include <cmath>

#include "wvlab/error.hpp"

namespace wvlab {

namespace {

void require_dim(std::size_t a, std::size_t b, const char *what) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
    }
}

struct Postselected {
    Complex numerator;
    Complex denominator;
    double probability;
};

// Numerator/denominator of the weak value for post-selection on |m>. For
// pure states these are <m|A|psi> and <m|psi>; for mixed states the Eq.-22
// style traces <m|A rho|m> and <m|rho|m>.
Postselected postselect(const Matrix &a, std::span<const Complex> m, const QuantumState &state) {
    if (state.is_pure()) {
        const Ket &psi = state.ket();
        const Complex den = inner(m, psi);
        return {sandwich(m, a, psi), den, std::norm(den)};
    }
    const Matrix rho = state.density();
    const Complex den = sandwich(m, rho, m);
    return {sandwich(m, a * rho, m), den, den.real()};
}

}  // namespace

WeakValue weak_value(const Observable &a, std::span<const Complex> post, const QuantumState &state, double delta) {
    require_dim(a.dim(), state.dim(), "weak_value observable/state");
    require_dim(post.size(), state.dim(), "weak_value post-selection/state");
    if (!(delta > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "denominator guard must be positive");
    }
    const auto ps = postselect(a.matrix(), post, state);
    if (ps.probability < delta) {
        return std::nullopt;
    }
    return ps.numerator / ps.denominator;
}

WeakValue weak_value(const Observable &a, const Matrix &post_element, const QuantumState &state, double delta) {
    require_dim(a.dim(), state.dim(), "weak_value observable/state");
    require_dim(post_element.rows(), state.dim(), "weak_value POVM element/state");
    if (!(delta > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "denominator guard must be positive");
    }
    const Complex den = state.expectation(post_element);
    if (den.real() < delta) {
        return std::nullopt;
    }
    return state.expectation(post_element * a.matrix()) / den;
}

double WeakValueTable::total_probability() const {
    double s = 0.0;
    for (const auto &r : rows) {
        s += r.probability;
    }
    return s;
}

double WeakValueTable::defined_probability() const {
    double s = 0.0;
    for (const auto &r : rows) {
        if (r.defined) {
            s += r.probability;
        }
    }
    return s;
}

bool WeakValueTable::all_defined() const {
    for (const auto &r : rows) {
        if (!r.defined) {
            return false;
        }
    }
    return true;
}

Complex WeakValueTable::average() const {
    Complex s = 0.0;
    for (const auto &r : rows) {
        if (r.defined) {
            s += r.probability * r.weak_value;
        }
    }
    return s;
}

std::vector<Complex> WeakValueTable::values() const {
    std::vector<Complex> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(r.weak_value);
    }
    return out;
}

std::vector<double> WeakValueTable::probabilities() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto &r : rows) {
        out.push_back(r.probability);
    }
    return out;
}

WeakValueTable weak_value_table(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                double delta) {
    require_dim(a.dim(), state.dim(), "weak_value_table observable/state");
    require_dim(m.dim(), state.dim(), "weak_value_table measurement/state");
    const auto &basis = m.basis();
    WeakValueTable table;
    table.observable_id = a.hermitian() ? "hermitian" : "non_hermitian";
    table.measurement_id = std::string(to_string(m.kind()));
    table.rows.reserve(basis.size());
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const auto ps = postselect(a.matrix(), basis[i], state);
        WeakValueRow row;
        row.label = m.labels()[i];
        row.probability = ps.probability;
        row.defined = ps.probability >= delta;
        if (row.defined) {
            row.weak_value = ps.numerator / ps.denominator;
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

RelationReport average_reconstruction_check(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                            double tol, double delta) {
    const auto table = weak_value_table(a, m, state, delta);
    if (table.defined_probability() < kMinDefinedMass) {
        return RelationReport::inconclusive("average_reconstruction",
                                            "defined mass " + std::to_string(table.defined_probability()));
    }
    return RelationReport::identity("average_reconstruction", table.average(), state.expectation(a.matrix()), tol,
                                    true);
}

double undefined_outcome_weight(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                double delta) {
    require_dim(a.dim(), state.dim(), "undefined_outcome_weight observable/state");
    const Matrix &am = a.matrix();
    const Matrix image = am * state.density() * am.adjoint();
    double hidden = 0.0;
    for (const auto &e : m.elements()) {
        if (state.expectation(e).real() < delta) {
            hidden += (e * image).trace().real();
        }
    }
    return hidden;
}

RelationReport product_representation_check(const Observable &a, const Observable &b, const MeasurementModel &m,
                                            const QuantumState &state, double tol, double delta) {
    if (!state.is_pure()) {
        throw Error(ErrorKind::InvalidState, "product representation is implemented for pure states only");
    }
    require_dim(a.dim(), b.dim(), "product_representation_check A/B");
    const auto ta = weak_value_table(a, m, state, delta);
    const auto tb = weak_value_table(b, m, state, delta);
    Complex lhs = 0.0;
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
        if (!ta.rows[i].defined) {
            continue;
        }
        const Complex term = ta.rows[i].probability * std::conj(ta.rows[i].weak_value) * tb.rows[i].weak_value;
        if (!std::isfinite(term.real()) || !std::isfinite(term.imag())) {
            throw Error(ErrorKind::UndefinedOutcome, "denominator underflow at outcome " + ta.rows[i].label);
        }
        lhs += term;
    }
    const Complex rhs = state.expectation(a.matrix().adjoint() * b.matrix());
    const double hidden =
        std::max(undefined_outcome_weight(a, m, state, delta), undefined_outcome_weight(b, m, state, delta));
    if (ta.defined_probability() < kMinDefinedMass || hidden > tol) {
        auto r = RelationReport::inconclusive("product_representation",
                                              "defined mass " + std::to_string(ta.defined_probability()) +
                                                  ", weight hidden in undefined outcomes " + std::to_string(hidden));
        r.lhs = lhs;
        r.rhs = rhs;
        r.complex_valued = true;
        return r;
    }
    return RelationReport::identity("product_representation", lhs, rhs, tol, true);
}

EstimateAssignment optimal_estimate(const Observable &a, const MeasurementModel &m, const QuantumState &state,
                                    double delta) {
    const auto table = weak_value_table(a, m, state, delta);
    EstimateAssignment out;
    out.estimates.reserve(table.rows.size());
    for (const auto &r : table.rows) {
        out.estimates.push_back(r.defined ? r.weak_value : Complex{});
    }
    out.mean_square_deviation = estimate_mse(out.estimates, a, m, state, delta);
    return out;
}

double estimate_mse(std::span<const Complex> estimates, const Observable &a, const MeasurementModel &m,
                    const QuantumState &state, double delta) {
    const auto table = weak_value_table(a, m, state, delta);
    if (estimates.size() != table.rows.size()) {
        throw Error(ErrorKind::DimensionMismatch, "one estimate per outcome required");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (table.rows[i].defined) {
            s += table.rows[i].probability * std::norm(table.rows[i].weak_value - estimates[i]);
        }
    }
    return s;
}

double estimate_mse_direct(std::span<const Complex> estimates, const Observable &a, const MeasurementModel &m,
                           const QuantumState &state) {
    require_dim(a.dim(), state.dim(), "estimate_mse_direct observable/state");
    if (estimates.size() != m.size()) {
        throw Error(ErrorKind::DimensionMismatch, "one estimate per outcome required");
    }
    Matrix diff = a.matrix();
    for (std::size_t i = 0; i < m.size(); ++i) {
        diff -= m.element(i) * estimates[i];
    }
    return state.expectation(diff.adjoint() * diff).real();
}

TripleProductInstance evaluate_triple_product(const Matrix &a, const Matrix &b, const Matrix &c,
                                              const QuantumState &state, const MeasurementModel &m, double delta) {
    const Observable oa(a), ob(b), oc(c);
    const auto ta = weak_value_table(oa, m, state, delta);
    const auto tb = weak_value_table(ob, m, state, delta);
    const auto tc = weak_value_table(oc, m, state, delta);
    TripleProductInstance out;
    out.dim = state.dim();
    out.a = a;
    out.b = b;
    out.c = c;
    if (state.is_pure()) {
        out.psi = state.ket();
    }
    out.basis = Matrix(m.dim(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        out.basis.set_col(i, m.basis()[i]);
    }
    for (std::size_t i = 0; i < ta.rows.size(); ++i) {
        if (ta.rows[i].defined) {
            out.weak_side +=
                ta.rows[i].probability * std::conj(ta.rows[i].weak_value) * tb.rows[i].weak_value * tc.rows[i].weak_value;
        }
    }
    out.quantum_side = state.expectation(a.adjoint() * b * c);
    out.discrepancy = std::abs(out.weak_side - out.quantum_side);
    return out;
}

TripleProductInstance triple_product_trial(std::size_t dim, std::uint64_t trial_seed) {
    if (dim < 2) {
        throw Error(ErrorKind::InvalidArgument, "triple product search needs dim >= 2");
    }
    Rng rng(trial_seed);
    const Matrix a = random_hermitian_unit_radius(dim, rng);
    const Matrix b = random_hermitian_unit_radius(dim, rng);
    const Matrix c = random_hermitian_unit_radius(dim, rng);
    const auto psi = random_pure_state(dim, rng);
    const auto m = random_rank1_povm(dim, rng);
    auto out = evaluate_triple_product(a, b, c, psi, m);
    out.seed = trial_seed;
    return out;
}

std::optional<TripleProductInstance> triple_product_counterexample(std::size_t dim, std::size_t trials,
                                                                   std::uint64_t master_seed, double threshold) {
    if (!(threshold > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "threshold must be positive");
    }
    for (std::size_t t = 0; t < trials; ++t) {
        auto inst = triple_product_trial(dim, split_seed(master_seed, dim, t));
        if (inst.discrepancy > threshold) {
            inst.trial = t;
            return inst;
        }
    }
    return std::nullopt;
}

}  // namespace wvlab
