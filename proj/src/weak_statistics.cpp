#include "wvlab/weak_statistics.hpp"

#include <algorithm>
#include <cmath>

#include "wvlab/error.hpp"

namespace wvlab {

namespace {

constexpr double kDegenerateSpread = 1e-12;
constexpr double kIdentityTol = 1e-10;
constexpr double kAnomalyThreshold = 1e-12;

void require_same_dim(const MeasurementModel &a, const MeasurementModel &b, const QuantumState &state) {
    if (a.dim() != state.dim() || b.dim() != state.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "measurements and state must share a dimension");
    }
}

void require_unit(std::span<const Complex> v, std::size_t dim, const char *name) {
    if (v.size() != dim) {
        throw Error(ErrorKind::DimensionMismatch, std::string(name) + " has the wrong length");
    }
    if (std::abs(norm(v) - 1.0) > kDefaultTol) {
        throw Error(ErrorKind::InvalidArgument, std::string(name) + " must be a unit vector");
    }
}

std::string cell_name(const MeasurementModel &a, const MeasurementModel &b, std::size_t i, std::size_t j) {
    return "cell (" + a.labels()[i] + "," + b.labels()[j] + ")";
}

}  // namespace

double Grid::sum() const {
    double s = 0.0;
    for (double v : values) {
        s += v;
    }
    return s;
}

ProjectorWeakValuePair projector_weak_value_pair(std::span<const Complex> a, std::span<const Complex> b,
                                                 const QuantumState &state, double delta) {
    require_unit(a, state.dim(), "a");
    require_unit(b, state.dim(), "b");
    const Observable pi_a(Matrix::outer(a, a));
    const Observable pi_b(Matrix::outer(b, b));
    const auto a_given_b = weak_value(pi_a, b, state, delta);
    const auto b_given_a = weak_value(pi_b, a, state, delta);
    if (!a_given_b || !b_given_a) {
        throw Error(ErrorKind::UndefinedPostselection, "post-selection probability below the guard");
    }
    ProjectorWeakValuePair out{*a_given_b, *b_given_a, 0.0};
    if (state.is_pure()) {
        const Ket &psi = state.ket();
        const Complex psi_a = inner(a, psi);
        const Complex psi_b = inner(b, psi);
        const Complex ab = inner(a, b);
        out.filter_residual = std::max(std::abs(out.a_given_b * psi_b - std::conj(ab) * psi_a),
                                       std::abs(out.b_given_a * psi_a - ab * psi_b));
    }
    return out;
}

AnomalousDecomposition anomalous_decomposition(std::span<const Complex> a, std::span<const Complex> b,
                                               const QuantumState &state, double delta) {
    if (!state.is_pure()) {
        throw Error(ErrorKind::InvalidState, "anomalous decomposition needs a pure state");
    }
    require_unit(a, state.dim(), "a");
    require_unit(b, state.dim(), "b");
    const Ket &psi = state.ket();
    const Complex b_psi = inner(b, psi);
    if (std::norm(b_psi) < delta) {
        throw Error(ErrorKind::UndefinedPostselection, "|<b|psi>|^2 below the guard");
    }
    const Complex a_psi = inner(a, psi);
    const double mean = std::norm(a_psi);

    // Pi_a|psi> - <Pi_a>|psi>, whose norm is the projector uncertainty.
    Ket residual(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) {
        residual[i] = a[i] * a_psi - mean * psi[i];
    }
    const double spread = norm(residual);
    if (spread <= kDegenerateSpread) {
        throw Error(ErrorKind::DegenerateDecomposition,
                    "state is an eigenvector of the projector; weak value equals " + std::to_string(mean));
    }
    AnomalousDecomposition out;
    out.projector_mean = mean;
    out.uncertainty = spread;
    out.orthogonal_state = residual;
    for (auto &z : out.orthogonal_state) {
        z /= spread;
    }
    out.anomalous_ratio = inner(b, out.orthogonal_state) / b_psi;
    return out;
}

RelationReport complementarity_product(std::span<const Complex> a, std::span<const Complex> b,
                                       const QuantumState &state, double delta, double tol) {
    ProjectorWeakValuePair pair;
    try {
        pair = projector_weak_value_pair(a, b, state, delta);
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::UndefinedPostselection) {
            throw;
        }
        return RelationReport::skipped("complementarity_product", "undefined factor: post-selection below guard");
    }
    const double bound = std::norm(inner(a, b));
    const Complex product = pair.product();
    if (state.is_pure()) {
        return RelationReport::identity("complementarity_product", product, bound, tol, true);
    }
    auto r = RelationReport::inequality("complementarity_product_mixed", product.real(), bound, tol);
    r.lhs = product;
    r.complex_valued = true;
    if (std::abs(product.imag()) > tol) {
        r.fail_with("product is not real");
    }
    if (product.real() < -tol) {
        r.fail_with("product is negative");
    }
    return r;
}

Complex fourier_pair_product(std::size_t dim, std::size_t j, std::size_t k, const QuantumState &state,
                             double delta) {
    if (j >= dim || k >= dim) {
        throw Error(ErrorKind::InvalidArgument, "Fourier pair indices out of range");
    }
    if (state.dim() != dim) {
        throw Error(ErrorKind::DimensionMismatch, "state dimension differs from dim");
    }
    return projector_weak_value_pair(basis_ket(dim, j), fourier_ket(dim, k), state, delta).product();
}

bool WeakJointDistribution::has_negative_entry(double threshold) const {
    return std::any_of(joint.values.begin(), joint.values.end(), [threshold](double v) { return v < -threshold; });
}

WeakJointDistribution weak_joint_distribution(const MeasurementModel &a, const MeasurementModel &b,
                                              const QuantumState &state, double delta) {
    require_same_dim(a, b, state);
    WeakJointDistribution out;
    out.joint = Grid(a.size(), b.size());
    for (const auto &e : a.elements()) {
        out.p_a.push_back(state.expectation(e).real());
    }
    for (const auto &e : b.elements()) {
        out.p_b.push_back(state.expectation(e).real());
    }
    out.a_given_b.resize(a.size() * b.size());
    out.b_given_a.resize(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Matrix &ea = a.element(i);
            const Matrix &eb = b.element(j);
            const double pw = 0.5 * state.expectation(ea * eb + eb * ea).real();
            out.joint(i, j) = pw;
            if (out.p_b[j] >= delta) {
                out.a_given_b[i * b.size() + j] = pw / out.p_b[j];
            }
            if (out.p_a[i] >= delta) {
                out.b_given_a[i * b.size() + j] = pw / out.p_a[i];
            }
            out.weak_purity += pw * pw;
            out.anomaly_l1 += std::abs(pw);
        }
    }
    return out;
}

IncompatibilityProfile incompatibility_profile(const MeasurementModel &a, const MeasurementModel &b,
                                               const QuantumState &state) {
    require_same_dim(a, b, state);
    IncompatibilityProfile out;
    out.cells = Grid(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double v = 0.25 * std::norm(state.expectation(commutator(a.element(i), b.element(j))));
            out.cells(i, j) = v;
            out.total += v;
        }
    }
    out.quantum_purity = state.purity();
    return out;
}

RelationReport identity_check_eq33(const Matrix &a_elem, const Matrix &b_elem, const QuantumState &state,
                                   double tol) {
    if (a_elem.rows() != state.dim() || b_elem.rows() != state.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "POVM elements and state must share a dimension");
    }
    const double pw = 0.5 * state.expectation(a_elem * b_elem + b_elem * a_elem).real();
    const double inc = 0.25 * std::norm(state.expectation(commutator(a_elem, b_elem)));
    const double rhs = std::norm(state.expectation(a_elem * b_elem));
    return RelationReport::identity("weak_incompatibility_identity", pw * pw + inc, rhs, tol);
}

double max_overlap(const MeasurementModel &a, const MeasurementModel &b) {
    double c = 0.0;
    for (const auto &x : a.basis()) {
        for (const auto &y : b.basis()) {
            c = std::max(c, std::norm(inner(x, y)));
        }
    }
    return c;
}

// (tr E)^2 = tr(E^2) exactly when the PSD element E has rank one.
bool has_rank1_elements(const MeasurementModel &m) {
    for (const auto &e : m.elements()) {
        const double t = e.trace().real();
        if (t * t - (e * e).trace().real() > 1e-9 * t * t) {
            return false;
        }
    }
    return true;
}

// Relation ids:
//   weak_incompatibility_identity  p_w^2 + I = |tr(rho A_a B_b)|^2, per cell
//   weak_marginals                 row/column sums of p_w give p(a), p(b)
//   weak_normalization             sum p_w = 1
//   anomaly_criterion              some p_w < 0  <=>  sum |p_w| > 1
//   incompatibility_range          I(A,B) <= 1
//   incompatibility_cell_bound     I(a,b) <= p(a) p(b)
//   pure_cell_identity             p_w^2 + I = |<a|b>|^2 p(a) p(b)   (pure, rank-1)
//   weak_complementarity           p_w(a|b) p_w(b|a) <= |<a|b>|^2   (pure, rank-1)
//   purity_overlap_tradeoff        P_W + I(A,B) <= c_AB <= 1        (pure, rank-1)
//   cell_purity_tradeoff           p_w^2 + I <= P_Q tr(A_a B_b)
//   purity_tradeoff                P_W + I(A,B) <= P_Q    (pure state, or all elements rank-1)
//   weak_purity_bound              P_W <= P_Q             (same domain)
//   purity_tradeoff_schwarz        P_W + I(A,B) <= P_Q sum_ab tr(A_a^2 B_b^2)
//   quantum_purity_bound           P_Q <= 1
//   cell_probability_tradeoff      p_w^2 + I <= p(a) p(b)
//   conditional_product_bound      p_w(a|b) p_w(b|a) <= 1
ReportBundle tradeoff_suite(const MeasurementModel &a, const MeasurementModel &b, const QuantumState &state,
                            double tol, double delta) {
    require_same_dim(a, b, state);
    const auto wj = weak_joint_distribution(a, b, state, delta);
    const auto inc = incompatibility_profile(a, b, state);
    const double pq = inc.quantum_purity;
    const bool maximal = state.is_pure() && a.is_rank1_projective() && b.is_rank1_projective();

    double schwarz_bound = 0.0;
    ReportBundle eq33, cell_bound, pure_cells, weak_comp, cell_purity, cell_prob, cond_product;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            const Matrix &ea = a.element(i);
            const Matrix &eb = b.element(j);
            const double pw = wj.joint(i, j);
            const double ic = inc.cells(i, j);
            const double lhs = pw * pw + ic;
            const double pa_pb = wj.p_a[i] * wj.p_b[j];
            const auto name = cell_name(a, b, i, j);

            eq33.push_back(identity_check_eq33(ea, eb, state, kIdentityTol).with_note(name));
            cell_bound.push_back(RelationReport::inequality("cell", ic, pa_pb, tol).with_note(name));
            cell_purity.push_back(
                RelationReport::inequality("cell", lhs, pq * (ea * eb).trace().real(), tol).with_note(name));
            cell_prob.push_back(RelationReport::inequality("cell", lhs, pa_pb, tol).with_note(name));
            schwarz_bound += (ea * ea * eb * eb).trace().real();

            const auto ab = wj.conditional_a_given_b(i, j);
            const auto ba = wj.conditional_b_given_a(i, j);
            if (ab && ba) {
                cond_product.push_back(RelationReport::inequality("cell", *ab * *ba, 1.0, tol).with_note(name));
            } else {
                cond_product.push_back(RelationReport::skipped("cell", name + " conditional undefined"));
            }

            if (maximal) {
                const double overlap = std::norm(inner(a.basis()[i], b.basis()[j]));
                pure_cells.push_back(RelationReport::identity("cell", lhs, overlap * pa_pb, tol).with_note(name));
                if (ab && ba) {
                    weak_comp.push_back(RelationReport::inequality("cell", *ab * *ba, overlap, tol).with_note(name));
                } else {
                    weak_comp.push_back(RelationReport::skipped("cell", name + " conditional undefined"));
                }
            }
        }
    }

    ReportBundle out;
    out.push_back(worst_of("weak_incompatibility_identity", eq33));

    {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            double row = 0.0;
            for (std::size_t j = 0; j < b.size(); ++j) {
                row += wj.joint(i, j);
            }
            worst = std::max(worst, std::abs(row - wj.p_a[i]));
        }
        for (std::size_t j = 0; j < b.size(); ++j) {
            double col = 0.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                col += wj.joint(i, j);
            }
            worst = std::max(worst, std::abs(col - wj.p_b[j]));
        }
        out.push_back(RelationReport::identity("weak_marginals", worst, 0.0, kIdentityTol));
        out.push_back(RelationReport::identity("weak_normalization", wj.joint.sum(), 1.0, kIdentityTol));
    }

    {
        const bool negative = wj.has_negative_entry(kAnomalyThreshold);
        const bool anomalous = wj.anomaly_l1 > 1.0 + kAnomalyThreshold;
        auto r = RelationReport::boolean("anomaly_criterion", negative == anomalous,
                                         std::string("negative entry: ") + (negative ? "yes" : "no") +
                                             ", sum |p_w| = " + std::to_string(wj.anomaly_l1));
        out.push_back(std::move(r));
    }

    out.push_back(RelationReport::inequality("incompatibility_range", inc.total, 1.0, tol));
    out.push_back(worst_of("incompatibility_cell_bound", cell_bound));

    if (maximal) {
        out.push_back(worst_of("pure_cell_identity", pure_cells));
        out.push_back(worst_of("weak_complementarity", weak_comp));
        const double c_ab = max_overlap(a, b);
        auto r = RelationReport::inequality("purity_overlap_tradeoff", wj.weak_purity + inc.total, c_ab, tol);
        if (c_ab > 1.0 + tol) {
            r.fail_with("c_AB exceeds 1");
        }
        out.push_back(std::move(r));
    } else {
        const char *why = "requires a pure state and rank-1 projective measurements";
        out.push_back(RelationReport::skipped("pure_cell_identity", why));
        out.push_back(RelationReport::skipped("weak_complementarity", why));
        out.push_back(RelationReport::skipped("purity_overlap_tradeoff", why));
    }

    out.push_back(worst_of("cell_purity_tradeoff", cell_purity));
    // Summing the per-cell bound gives sum_ab tr(A_a B_b) = d, not 1, so the
    // P_Q form needs a pure state or rank-1 elements. A mixed state with a
    // degenerate projector (e.g. the one-outcome measurement {I}) breaks it.
    if (state.is_pure() || (has_rank1_elements(a) && has_rank1_elements(b))) {
        out.push_back(RelationReport::inequality("purity_tradeoff", wj.weak_purity + inc.total, pq, tol));
        out.push_back(RelationReport::inequality("weak_purity_bound", wj.weak_purity, pq, tol));
    } else {
        const char *why = "mixed state with a higher-rank element; bound does not apply";
        out.push_back(RelationReport::skipped("purity_tradeoff", why));
        out.push_back(RelationReport::skipped("weak_purity_bound", why));
    }
    out.push_back(
        RelationReport::inequality("purity_tradeoff_schwarz", wj.weak_purity + inc.total, pq * schwarz_bound, tol));
    out.push_back(RelationReport::inequality("quantum_purity_bound", pq, 1.0, tol));
    out.push_back(worst_of("cell_probability_tradeoff", cell_prob));
    out.push_back(worst_of("conditional_product_bound", cond_product));
    return out;
}

StrongSequentialDistribution strong_sequential_distribution(const MeasurementModel &a, const MeasurementModel &b,
                                                            const QuantumState &state, double tol) {
    require_same_dim(a, b, state);
    if (!a.is_projective() || !b.is_projective()) {
        throw Error(ErrorKind::NotProjective, "strong sequential probabilities need projective measurements");
    }
    const Matrix rho = state.density();
    const auto wj = weak_joint_distribution(a, b, state);
    const auto inc = incompatibility_profile(a, b, state);

    StrongSequentialDistribution out;
    out.joint = Grid(a.size(), b.size());
    ReportBundle range, tradeoff, modulus, sqrt_bound, inc_bound;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const Matrix post = a.element(i) * rho * a.element(i);
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double ps = (post * b.element(j)).trace().real();
            out.joint(i, j) = ps;
            const double pw = wj.joint(i, j);
            const double ic = inc.cells(i, j);
            const double root = std::sqrt(std::max(ps, 0.0));
            const auto name = cell_name(a, b, i, j);
            range.push_back(RelationReport::inequality("cell", -ps, 0.0, tol).with_note(name + " p_s >= 0"));
            range.push_back(RelationReport::inequality("cell", ps, 1.0, tol).with_note(name + " p_s <= 1"));
            tradeoff.push_back(RelationReport::inequality("cell", pw * pw + ic, ps, tol).with_note(name));
            modulus.push_back(RelationReport::inequality("cell", std::abs(pw), root, tol).with_note(name));
            sqrt_bound.push_back(RelationReport::inequality("cell", root, 1.0, tol).with_note(name));
            inc_bound.push_back(RelationReport::inequality("cell", ic, ps, tol).with_note(name));
        }
    }
    out.reports.push_back(RelationReport::identity("strong_normalization", out.joint.sum(), 1.0, kIdentityTol));
    out.reports.push_back(worst_of("strong_range", range));
    out.reports.push_back(worst_of("weak_strong_tradeoff", tradeoff));
    out.reports.push_back(worst_of("weak_modulus_bound", modulus));
    out.reports.push_back(worst_of("strong_sqrt_bound", sqrt_bound));
    out.reports.push_back(worst_of("incompatibility_strong_bound", inc_bound));
    return out;
}

}  // namespace wvlab
