// Per-trial instance generators and checks for each fuzz suite.

#include <cmath>

#include "wvlab/error.hpp"
#include "wvlab/harness.hpp"
#include "wvlab/weak_statistics.hpp"

namespace wvlab {

namespace {

// Ginibre draw scaled to unit Frobenius norm.
Matrix random_general_operator(std::size_t dim, Rng &rng) {
    Matrix g = random_ginibre(dim, dim, rng);
    return g * (1.0 / g.frobenius_norm());
}

MeasurementModel random_measurement_of_kind(std::size_t dim, std::size_t kind, Rng &rng) {
    switch (kind) {
        case 0:
            return random_rank1_povm(dim, rng);
        case 1:
            return random_projective_measurement(dim, rng.uniform_index(1, dim), rng);
        default:
            return random_general_povm(dim, rng.uniform_index(2, dim + 2), rng);
    }
}

QuantumState random_state(std::size_t dim, bool pure, Rng &rng) {
    return pure ? random_pure_state(dim, rng) : random_density_operator(dim, rng.uniform_index(1, dim), rng);
}

ReportBundle product_rep_trial(std::size_t d, Rng &rng, double tol, json *inst) {
    const Observable ha(random_hermitian_unit_radius(d, rng));
    const Observable hb(random_hermitian_unit_radius(d, rng));
    const Observable na(random_general_operator(d, rng));
    const Observable nb(random_general_operator(d, rng));
    const auto psi = random_pure_state(d, rng);
    const auto m = random_rank1_povm(d, rng);
    if (inst != nullptr) {
        *inst = {{"A_hermitian", to_json(ha)}, {"B_hermitian", to_json(hb)}, {"A_general", to_json(na)},
                 {"B_general", to_json(nb)},   {"state", to_json(psi)},     {"measurement", to_json(m)}};
    }

    ReportBundle out;
    out.push_back(product_representation_check(ha, hb, m, psi, tol));
    auto nh = product_representation_check(na, nb, m, psi, tol);
    nh.relation_id = "product_representation_nonhermitian";
    out.push_back(std::move(nh));
    out.push_back(average_reconstruction_check(ha, m, psi, tol));
    auto nav = average_reconstruction_check(na, m, psi, tol);
    nav.relation_id = "average_reconstruction_nonhermitian";
    out.push_back(std::move(nav));

    // Linearity of weak values, and agreement of the density-operator form
    // with the state-vector form, outcome by outcome.
    const Observable sum(ha.matrix() + nb.matrix());
    const QuantumState rho = QuantumState::mixed(psi.density());
    ReportBundle linear, consistent;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto &post = m.basis()[i];
        const auto ws = weak_value(sum, post, psi);
        const auto wa = weak_value(ha, post, psi);
        const auto wb = weak_value(nb, post, psi);
        if (!ws || !wa || !wb) {
            linear.push_back(RelationReport::skipped("cell", "undefined outcome"));
            consistent.push_back(RelationReport::skipped("cell", "undefined outcome"));
            continue;
        }
        linear.push_back(RelationReport::identity("cell", *ws, *wa + *wb, 1e-10, true));
        const auto wrho = weak_value(ha, m.element(i), rho);
        if (!wrho) {
            consistent.push_back(RelationReport::skipped("cell", "undefined outcome"));
            continue;
        }
        consistent.push_back(RelationReport::identity("cell", *wrho, *wa, 1e-12 * std::max(1.0, std::abs(*wa)), true));
    }
    out.push_back(worst_of("weak_value_linearity", linear));
    out.push_back(worst_of("density_form_consistency", consistent));
    return out;
}

ReportBundle heisenberg_trial(std::size_t d, Rng &rng, double tol, json *inst) {
    const Observable a(random_hermitian_unit_radius(d, rng));
    const Observable b(random_hermitian_unit_radius(d, rng));
    const Observable na(random_general_operator(d, rng));
    const Observable nb(random_general_operator(d, rng));
    const auto psi = random_pure_state(d, rng);
    const auto m1 = random_rank1_povm(d, rng);
    const auto m2 = random_rank1_povm(d, rng);
    if (inst != nullptr) {
        *inst = {{"A", to_json(a)},        {"B", to_json(b)},      {"A_general", to_json(na)},
                 {"B_general", to_json(nb)}, {"state", to_json(psi)}, {"M1", to_json(m1)},
                 {"M2", to_json(m2)}};
    }

    const auto h1 = robertson_schrodinger_check(a, b, psi, m1, tol);
    const auto h2 = robertson_schrodinger_check(a, b, psi, m2, tol);
    ReportBundle out = h1.reports;

    const auto ta = weak_value_table(a, m1, psi);
    const auto tb = weak_value_table(b, m1, psi);
    if (ta.all_defined()) {
        out.push_back(schwarz_check(ta.values(), tb.values(), ta.probabilities(), tol));
    } else {
        out.push_back(RelationReport::skipped("classical_schwarz", "undefined outcome"));
    }
    out.push_back(RelationReport::identity("measurement_independence", h1.weak_var_a, h2.weak_var_a, tol));
    out.push_back(nonhermitian_uncertainty_check(na, nb, psi, tol));

    const auto tn = weak_value_table(na, m1, psi);
    if (tn.defined_probability() >= kMinDefinedMass) {
        std::vector<Complex> vals;
        std::vector<double> p;
        for (const auto &r : tn.rows) {
            if (r.defined) {
                vals.push_back(r.weak_value);
                p.push_back(r.probability / tn.defined_probability());
            }
        }
        out.push_back(RelationReport::identity("general_variance_route", complex_rv_stats(vals, p).variance,
                                               operator_variance(na, psi), tol));
    } else {
        out.push_back(RelationReport::inconclusive("general_variance_route", "defined mass too small"));
    }
    return out;
}

ReportBundle unitary_trial(std::size_t d, Rng &rng, double tol, json *inst) {
    const Observable u(random_haar_unitary(d, rng));
    const Observable v(random_haar_unitary(d, rng));
    const auto psi = random_pure_state(d, rng);
    const auto rho = random_density_operator(d, rng.uniform_index(1, d), rng);
    if (inst != nullptr) {
        *inst = {{"U", to_json(u)}, {"V", to_json(v)}, {"state", to_json(psi)}, {"mixed_state", to_json(rho)}};
    }

    ReportBundle out = unitary_uncertainty_checks(unitary_pair_summary(u, v, psi), tol);

    // Mixed states: the relations on rho, and the purification route.
    const auto sr = unitary_pair_summary(u, v, rho);
    for (auto r : unitary_uncertainty_checks(sr, tol)) {
        r.relation_id += "_mixed";
        out.push_back(std::move(r));
    }
    const auto lifted = purify(rho);
    const Matrix id = Matrix::identity(d);
    const auto sl = unitary_pair_summary(Observable(kron(u.matrix(), id)), Observable(kron(v.matrix(), id)), lifted);
    const double residual =
        std::max({std::abs(sl.u - sr.u), std::abs(sl.v - sr.v), std::abs(sl.overlap - sr.overlap),
                  std::abs(sl.bargmann - sr.bargmann)});
    out.push_back(RelationReport::identity("purification_lifting", residual, 0.0, tol));
    return out;
}

ReportBundle estimate_trial(std::size_t d, Rng &rng, double tol, json *inst) {
    const bool hermitian = rng.uniform() < 0.5;
    const Observable a(hermitian ? random_hermitian_unit_radius(d, rng) : random_general_operator(d, rng));
    const auto psi = random_pure_state(d, rng);
    const auto m = random_rank1_povm(d, rng);
    std::vector<Complex> perturbation(d);
    for (auto &z : perturbation) {
        z = 0.1 * rng.complex_normal();
    }
    if (inst != nullptr) {
        *inst = {{"A", to_json(a)},
                 {"state", to_json(psi)},
                 {"measurement", to_json(m)},
                 {"perturbation", to_json(std::span<const Complex>(perturbation))}};
    }

    ReportBundle out;
    const auto table = weak_value_table(a, m, psi);
    const auto opt = optimal_estimate(a, m, psi);
    out.push_back(RelationReport::identity("optimal_estimate_zero", opt.mean_square_deviation, 0.0, 1e-12));

    std::vector<Complex> perturbed = opt.estimates;
    std::vector<Complex> real_part = opt.estimates;
    std::vector<Complex> offset = opt.estimates;
    double expected_real = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        perturbed[i] += perturbation[i];
        real_part[i] = opt.estimates[i].real();
        offset[i] += 1.0;
        if (table.rows[i].defined) {
            expected_real += table.rows[i].probability * std::pow(table.rows[i].weak_value.imag(), 2);
        }
    }
    const double mse_perturbed = estimate_mse(perturbed, a, m, psi);
    out.push_back(RelationReport::boolean("perturbed_estimate_positive", mse_perturbed > 0.0,
                                          "mse " + format_double(mse_perturbed)));
    out.push_back(RelationReport::identity("mse_route", mse_perturbed, estimate_mse_direct(perturbed, a, m, psi), tol));
    out.push_back(RelationReport::identity("real_estimate_mse", estimate_mse(real_part, a, m, psi), expected_real,
                                           1e-10));
    out.push_back(RelationReport::identity("unit_offset_mse", estimate_mse(offset, a, m, psi),
                                           table.defined_probability(), 1e-10));

    // Moving any estimate toward the weak value strictly lowers the error.
    std::vector<Complex> closer = perturbed;
    const std::size_t k = rng.uniform_index(0, d - 1);
    if (table.rows[k].defined && table.rows[k].probability > 1e-12) {
        closer[k] = 0.5 * (closer[k] + table.rows[k].weak_value);
        const double mse_closer = estimate_mse(closer, a, m, psi);
        out.push_back(RelationReport::boolean("mse_monotone", mse_closer < mse_perturbed,
                                              format_double(mse_closer) + " < " + format_double(mse_perturbed)));
    } else {
        out.push_back(RelationReport::skipped("mse_monotone", "chosen outcome undefined"));
    }
    return out;
}

ReportBundle complementarity_trial(std::size_t d, Rng &rng, double tol, json *inst) {
    const Ket a = normalized(random_ginibre(d, 1, rng).data());
    const Ket b = normalized(random_ginibre(d, 1, rng).data());
    const auto psi = random_pure_state(d, rng);
    const auto rho = random_density_operator(d, rng.uniform_index(1, d), rng);
    const std::size_t j = rng.uniform_index(0, d - 1);
    const std::size_t k = rng.uniform_index(0, d - 1);
    if (inst != nullptr) {
        *inst = {{"a", to_json(std::span<const Complex>(a))},
                 {"b", to_json(std::span<const Complex>(b))},
                 {"state", to_json(psi)},
                 {"mixed_state", to_json(rho)},
                 {"fourier_j", j},
                 {"fourier_k", k}};
    }
    (void)tol;

    ReportBundle out;
    out.push_back(complementarity_product(a, b, psi));
    out.push_back(complementarity_product(a, b, rho, kDenominatorGuard, kRelationTol));

    try {
        const auto pair = projector_weak_value_pair(a, b, psi);
        out.push_back(RelationReport::identity("filter_identities", pair.filter_residual, 0.0, 1e-10));
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::UndefinedPostselection) {
            throw;
        }
        out.push_back(RelationReport::skipped("filter_identities", "undefined post-selection"));
    }

    try {
        const auto dec = anomalous_decomposition(a, b, psi);
        const auto direct = weak_value(Observable(Matrix::outer(a, a)), b, psi);
        out.push_back(RelationReport::identity("anomalous_reassembly", dec.reassembled(), *direct, 1e-10, true));
        out.push_back(
            RelationReport::identity("anomalous_orthogonality", std::abs(inner(dec.orthogonal_state, psi.ket())), 0.0,
                                     1e-10));
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::UndefinedPostselection && e.kind() != ErrorKind::DegenerateDecomposition) {
            throw;
        }
        out.push_back(RelationReport::skipped("anomalous_reassembly", e.what()));
        out.push_back(RelationReport::skipped("anomalous_orthogonality", e.what()));
    }

    try {
        const Complex product = fourier_pair_product(d, j, k, psi);
        out.push_back(RelationReport::identity("fourier_product", product, 1.0 / static_cast<double>(d), 1e-10, true));
        const Complex mixed = fourier_pair_product(d, j, k, rho);
        out.push_back(RelationReport::inequality("fourier_product_mixed", mixed.real(), 1.0 / static_cast<double>(d)));
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::UndefinedPostselection) {
            throw;
        }
        out.push_back(RelationReport::skipped("fourier_product", "undefined post-selection"));
        out.push_back(RelationReport::skipped("fourier_product_mixed", "undefined post-selection"));
    }
    return out;
}

ReportBundle weak_stats_trial(std::size_t d, Rng &rng, double tol, json *inst) {
    // Half the trials use the maximal case (pure state, two bases) so the
    // overlap-bounded relations are exercised.
    const bool maximal = rng.uniform() < 0.5;
    const auto ma = maximal ? random_rank1_povm(d, rng) : random_measurement_of_kind(d, rng.uniform_index(0, 2), rng);
    const auto mb = maximal ? random_rank1_povm(d, rng) : random_measurement_of_kind(d, rng.uniform_index(0, 2), rng);
    const auto state = random_state(d, maximal || rng.uniform() < 0.5, rng);
    if (inst != nullptr) {
        *inst = {{"A", to_json(ma)}, {"B", to_json(mb)}, {"state", to_json(state)}};
    }

    ReportBundle out = tradeoff_suite(ma, mb, state, tol);
    if (ma.is_projective() || mb.is_projective()) {
        const auto wj = weak_joint_distribution(ma, mb, state);
        const auto inc = incompatibility_profile(ma, mb, state);
        bool holds = true;
        for (std::size_t i = 0; i < ma.size(); ++i) {
            for (std::size_t j = 0; j < mb.size(); ++j) {
                if (inc.cells(i, j) <= 1e-12 && wj.joint(i, j) < -1e-9) {
                    holds = false;
                }
            }
        }
        out.push_back(RelationReport::boolean("projector_commutation_positivity", holds,
                                              "I(a,b) = 0 implies p_w(a,b) >= 0 when one element is a projector"));
    } else {
        out.push_back(RelationReport::skipped("projector_commutation_positivity", "neither measurement projective"));
    }
    return out;
}

ReportBundle strong_seq_trial(std::size_t d, Rng &rng, double tol, json *inst) {
    const auto ma = random_measurement_of_kind(d, rng.uniform_index(0, 1), rng);
    const auto mb = random_measurement_of_kind(d, rng.uniform_index(0, 1), rng);
    const auto state = random_state(d, rng.uniform() < 0.5, rng);
    if (inst != nullptr) {
        *inst = {{"A", to_json(ma)}, {"B", to_json(mb)}, {"state", to_json(state)}};
    }
    return strong_sequential_distribution(ma, mb, state, tol).reports;
}

}  // namespace

TrialOutcome run_trial(Suite suite, std::uint64_t trial_seed, std::size_t dim_lo, std::size_t dim_hi, double tol,
                       bool capture_instance) {
    Rng rng(trial_seed);
    const std::size_t d = rng.uniform_index(dim_lo, dim_hi);
    TrialOutcome out;
    json *inst = capture_instance ? &out.instance : nullptr;
    switch (suite) {
        case Suite::ProductRep:
            out.reports = product_rep_trial(d, rng, tol, inst);
            break;
        case Suite::Heisenberg:
            out.reports = heisenberg_trial(d, rng, tol, inst);
            break;
        case Suite::Unitary:
            out.reports = unitary_trial(d, rng, tol, inst);
            break;
        case Suite::Estimate:
            out.reports = estimate_trial(d, rng, tol, inst);
            break;
        case Suite::Complementarity:
            out.reports = complementarity_trial(d, rng, tol, inst);
            break;
        case Suite::WeakStats:
            out.reports = weak_stats_trial(d, rng, tol, inst);
            break;
        case Suite::StrongSeq:
            out.reports = strong_seq_trial(d, rng, tol, inst);
            break;
        case Suite::TripleCounterexample: {
            // One search per trial seed; a found instance is the expected outcome.
            constexpr std::size_t kSearchTrials = 100;
            constexpr double kThreshold = 0.01;
            const auto found = triple_product_counterexample(d, kSearchTrials, trial_seed, kThreshold);
            if (found) {
                auto r = RelationReport::inequality("triple_product_nonextension", kThreshold, found->discrepancy, 0.0);
                r.with_note("counterexample at search trial " + std::to_string(found->trial));
                out.reports.push_back(std::move(r));
                const auto replay = triple_product_trial(d, found->seed);
                out.reports.push_back(RelationReport::boolean(
                    "triple_product_replay", replay.discrepancy == found->discrepancy &&
                                                 replay.weak_side == found->weak_side &&
                                                 replay.quantum_side == found->quantum_side));
                if (inst != nullptr) {
                    *inst = wvlab::to_json(*found);
                }
            } else {
                out.reports.push_back(
                    RelationReport::boolean("triple_product_nonextension", false, "no counterexample found"));
            }
            break;
        }
    }
    if (inst != nullptr) {
        (*inst)["dim"] = d;
        (*inst)["seed"] = trial_seed;
    }
    for (auto &r : out.reports) {
        r.instance_seed = trial_seed;
    }
    return out;
}

}  // namespace wvlab
