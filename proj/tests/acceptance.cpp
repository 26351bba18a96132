// End-to-end acceptance gate. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include "wvlab/error.hpp"
#include "wvlab/harness.hpp"
#include "wvlab/weak_statistics.hpp"

using namespace wvlab;

namespace {

constexpr int kTrials = 10000;

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome require(bool ok, std::string detail) {
    return {ok, std::move(detail)};
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", x);
    return buf;
}

Matrix unit_frobenius(std::size_t d, Rng &rng) {
    Matrix g = random_ginibre(d, d, rng);
    return g * (1.0 / g.frobenius_norm());
}

QuantumState any_state(std::size_t d, Rng &rng) {
    return rng.uniform() < 0.5 ? random_pure_state(d, rng) : random_density_operator(d, rng.uniform_index(1, d), rng);
}

MeasurementModel any_measurement(std::size_t d, Rng &rng) {
    switch (rng.uniform_index(0, 2)) {
        case 0:
            return random_rank1_povm(d, rng);
        case 1:
            return random_projective_measurement(d, rng.uniform_index(1, d), rng);
        default:
            return random_general_povm(d, rng.uniform_index(2, d + 2), rng);
    }
}

MeasurementModel any_projective(std::size_t d, Rng &rng) {
    return rng.uniform() < 0.5 ? random_rank1_povm(d, rng)
                               : random_projective_measurement(d, rng.uniform_index(1, d), rng);
}

Outcome product_representation() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(1001);
    double worst = 0.0;
    int undefined = 0;
    for (int t = 0; t < kTrials; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const bool hermitian = t % 2 == 0;
        const Matrix a = hermitian ? random_hermitian_unit_radius(d, rng) : unit_frobenius(d, rng);
        const Matrix b = hermitian ? random_hermitian_unit_radius(d, rng) : unit_frobenius(d, rng);
        const auto psi = random_pure_state(d, rng);
        const auto m = random_rank1_povm(d, rng);
        const auto ta = weak_value_table(Observable(a), m, psi);
        const auto tb = weak_value_table(Observable(b), m, psi);
        if (!ta.all_defined()) {
            ++undefined;
            continue;
        }
        Complex weak{};
        for (std::size_t k = 0; k < m.size(); ++k) {
            weak += ta.rows[k].probability * std::conj(ta.rows[k].weak_value) * tb.rows[k].weak_value;
        }
        worst = std::max(worst, std::abs(weak - psi.expectation(a.adjoint() * b)));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return require(worst <= 1e-9 && undefined == 0 && secs < 30.0,
                   "max residual " + num(worst) + ", undefined " + std::to_string(undefined) + ", " + num(secs) + " s");
}

Outcome heisenberg() {
    Rng rng(1002);
    int bad = 0;
    double worst_slack = 1.0;
    for (int t = 0; t < kTrials; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Observable a(random_hermitian_unit_radius(d, rng));
        const Observable b(random_hermitian_unit_radius(d, rng));
        const auto h = robertson_schrodinger_check(a, b, random_pure_state(d, rng), random_rank1_povm(d, rng), 1e-9);
        for (const auto &r : h.reports) {
            bad += !r.held();
            if (r.relation_id == "robertson_schrodinger") {
                worst_slack = std::min(worst_slack, r.slack);
            }
        }
    }
    const Observable sx(Matrix{{0, 1}, {1, 0}});
    const Observable sy(Matrix{{0, Complex(0, -1)}, {Complex(0, 1), 0}});
    const auto sat = robertson_schrodinger_check(sx, sy, QuantumState::pure({1, 0}), fourier_basis(2));
    const auto &ineq = find_report(sat.reports, "robertson_schrodinger");
    const bool saturated = ineq.verdict == Verdict::Saturated && std::abs(ineq.slack) <= 1e-7;
    return require(bad == 0 && worst_slack >= -1e-9 && saturated,
                   "non-held reports " + std::to_string(bad) + ", worst slack " + num(worst_slack) +
                       ", (sx, sy, |0>) slack " + num(ineq.slack) + " " + std::string(to_string(ineq.verdict)));
}

Outcome unitary() {
    Rng rng(1003);
    int bad = 0;
    double worst = 1.0;
    for (int t = 0; t < kTrials; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Observable u(random_haar_unitary(d, rng));
        const Observable v(random_haar_unitary(d, rng));
        const auto s = unitary_pair_summary(u, v, random_pure_state(d, rng));
        for (const auto &r : unitary_uncertainty_checks(s)) {
            if (r.verdict == Verdict::Skipped && r.relation_id == "unitary_rotated_ellipse") {
                continue;
            }
            bad += !r.held();
            if (r.form == RelationReport::Form::Inequality) {
                worst = std::min(worst, r.slack);
            }
        }
    }
    const auto fig = figure1_data(0.25, std::numbers::pi, 200);
    const bool contained = !fig.scatter.empty() && fig.contained == fig.scatter.size();
    return require(bad == 0 && worst >= -1e-9 && contained,
                   "non-held reports " + std::to_string(bad) + ", worst slack " + num(worst) + ", figure scatter " +
                       std::to_string(fig.contained) + "/" + std::to_string(fig.scatter.size()) + " contained");
}

Outcome optimal_estimate_criterion() {
    Rng rng(1004);
    double worst_opt = 0.0, worst_real = 0.0;
    int nonpositive = 0;
    for (int t = 0; t < 1000; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Observable a(t % 2 == 0 ? random_hermitian_unit_radius(d, rng) : unit_frobenius(d, rng));
        const auto psi = random_pure_state(d, rng);
        const auto m = random_rank1_povm(d, rng);
        const auto opt = optimal_estimate(a, m, psi);
        worst_opt = std::max(worst_opt, std::abs(estimate_mse(opt.estimates, a, m, psi)));

        auto perturbed = opt.estimates;
        perturbed[rng.uniform_index(0, d - 1)] += Complex(rng.normal(), rng.normal()) * 1e-2;
        nonpositive += !(estimate_mse_direct(perturbed, a, m, psi) > 0.0);

        const auto table = weak_value_table(a, m, psi);
        std::vector<Complex> real_part;
        double expected = 0.0;
        for (const auto &r : table.rows) {
            real_part.emplace_back(r.weak_value.real());
            expected += r.probability * r.weak_value.imag() * r.weak_value.imag();
        }
        worst_real = std::max(worst_real, std::abs(estimate_mse_direct(real_part, a, m, psi) - expected));
    }
    return require(worst_opt <= 1e-12 && nonpositive == 0 && worst_real <= 1e-10,
                   "optimal " + num(worst_opt) + ", perturbed non-positive " + std::to_string(nonpositive) +
                       ", real-constrained residual " + num(worst_real));
}

Outcome complementarity() {
    Rng rng(1005);
    double worst_pure = 0.0, worst_mixed = 1.0;
    for (int t = 0; t < kTrials; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const Ket a = random_pure_state(d, rng).ket();
        const Ket b = random_pure_state(d, rng).ket();
        const double overlap = std::norm(inner(a, b));
        const auto pure = projector_weak_value_pair(a, b, random_pure_state(d, rng)).product();
        worst_pure = std::max(worst_pure, std::abs(pure - overlap));
        const auto rho = random_density_operator(d, rng.uniform_index(1, d), rng);
        try {
            const auto mixed = projector_weak_value_pair(a, b, rho).product();
            worst_mixed = std::min(worst_mixed, overlap - mixed.real());
        } catch (const Error &e) {
            if (e.kind() != ErrorKind::UndefinedPostselection) {
                throw;
            }
        }
    }
    const Ket a = random_pure_state(4, rng).ket();
    const Ket b = random_pure_state(4, rng).ket();
    double lo = 1e300, hi = -1e300;
    for (int t = 0; t < 100; ++t) {
        const double p = projector_weak_value_pair(a, b, random_pure_state(4, rng)).product().real();
        lo = std::min(lo, p);
        hi = std::max(hi, p);
    }
    double worst_fourier = 0.0;
    for (std::size_t d = 2; d <= 8; ++d) {
        for (std::size_t j = 0; j < d; ++j) {
            const auto psi = random_pure_state(d, rng);
            worst_fourier = std::max(worst_fourier, std::abs(fourier_pair_product(d, j, (j * 3 + 1) % d, psi) - 1.0 / d));
        }
    }
    return require(worst_pure <= 1e-10 && hi - lo <= 1e-10 && worst_mixed >= -1e-9 && worst_fourier <= 1e-10,
                   "pure residual " + num(worst_pure) + ", spread " + num(hi - lo) + ", mixed slack " +
                       num(worst_mixed) + ", Fourier residual " + num(worst_fourier));
}

Outcome keystone() {
    Rng rng(1006);
    double worst = 0.0;
    for (int t = 0; t < kTrials; ++t) {
        const std::size_t d = rng.uniform_index(2, 6);
        const auto ma = any_measurement(d, rng);
        const auto mb = any_measurement(d, rng);
        const auto r = identity_check_eq33(ma.element(rng.uniform_index(0, ma.size() - 1)),
                                           mb.element(rng.uniform_index(0, mb.size() - 1)), any_state(d, rng));
        worst = std::max(worst, r.residual());
    }
    const double h = 1.0 / std::sqrt(2.0);
    const auto psi = QuantumState::pure({h, Complex(0, h)});
    const Matrix a = Matrix::outer(Ket{1, 0}, Ket{1, 0});
    const Matrix b = Matrix::outer(Ket{h, h}, Ket{h, h});
    const auto wj = weak_joint_distribution(MeasurementModel::from_elements({a, Matrix::identity(2) - a}),
                                            MeasurementModel::from_elements({b, Matrix::identity(2) - b}), psi);
    const auto inc = incompatibility_profile(MeasurementModel::from_elements({a, Matrix::identity(2) - a}),
                                             MeasurementModel::from_elements({b, Matrix::identity(2) - b}), psi);
    const double pw2 = wj.joint(0, 0) * wj.joint(0, 0);
    const double i = inc.cells(0, 0);
    const bool qubit = std::abs(pw2 - 1.0 / 16) <= 1e-12 && std::abs(i - 1.0 / 16) <= 1e-12 &&
                       std::abs(pw2 + i - 1.0 / 8) <= 1e-12 && identity_check_eq33(a, b, psi, 1e-12).held();
    return require(worst <= 1e-10 && qubit, "max residual " + num(worst) + ", qubit " + num(pw2) + " + " + num(i) +
                                                " = " + num(pw2 + i));
}

Outcome tradeoffs() {
    // The P_Q-bounded purity relations are checked where they are valid:
    // pure states, or both measurements rank-1. For mixed states with
    // higher-rank elements they fail (rho = I/2, A = B = {I} gives P_W = 1 >
    // P_Q = 1/2); that domain is covered by the Schwarz-weighted form.
    Rng rng(1007);
    int bad = 0, gated = 0, anomaly = 0;
    double worst = 1.0;
    std::string worst_id;
    auto tally = [&](const ReportBundle &reports) {
        for (const auto &r : reports) {
            if (r.verdict == Verdict::Skipped) {
                gated += r.relation_id == "purity_tradeoff";
                continue;
            }
            bad += !r.held();
            if (r.form == RelationReport::Form::Inequality && r.slack < worst) {
                worst = r.slack;
                worst_id = r.relation_id;
            }
        }
    };
    for (int t = 0; t < kTrials; ++t) {
        const std::size_t d = rng.uniform_index(2, 5);
        const bool rank1 = t % 2 == 0;
        const auto ma = rank1 ? random_rank1_povm(d, rng) : any_measurement(d, rng);
        const auto mb = rank1 ? random_rank1_povm(d, rng) : any_measurement(d, rng);
        const auto state = any_state(d, rng);
        tally(tradeoff_suite(ma, mb, state));
        const auto wj = weak_joint_distribution(ma, mb, state);
        anomaly += wj.has_negative_entry(1e-12) != (wj.anomaly_l1 > 1.0 + 1e-12);

        const auto pa = any_projective(d, rng);
        const auto pb = any_projective(d, rng);
        const auto ps = any_state(d, rng);
        tally(tradeoff_suite(pa, pb, ps));
        tally(strong_sequential_distribution(pa, pb, ps).reports);
    }
    return require(bad == 0 && worst >= -1e-9 && anomaly == 0,
                   "non-held reports " + std::to_string(bad) + ", worst slack " + num(worst) + " (" + worst_id +
                       "), anomaly mismatches " + std::to_string(anomaly) + ", P_Q bound gated on " +
                       std::to_string(gated) + " degenerate mixed instances");
}

Outcome anomaly_instance() {
    const double n = 1.0 / std::sqrt(5.0);
    const double h = 1.0 / std::sqrt(2.0);
    const auto psi = QuantumState::pure({2 * n, -n});
    const auto pm = MeasurementModel::from_basis({Ket{h, h}, Ket{h, -h}});
    const auto comp = MeasurementModel::computational(2);
    const auto wj = weak_joint_distribution(pm, comp, psi);
    const double pw = wj.joint(0, 1);
    int bad = 0;
    for (const auto &r : tradeoff_suite(pm, comp, psi)) {
        bad += r.failed() || r.verdict == Verdict::Skipped;
    }
    for (const auto &r : strong_sequential_distribution(pm, comp, psi).reports) {
        bad += !r.held();
    }
    return require(std::abs(pw + 0.1) <= 1e-12 && bad == 0,
                   "p_w = " + num(pw) + ", bounds not held " + std::to_string(bad));
}

Outcome triple_product() {
    const auto found = triple_product_counterexample(2, 100, 42, 0.01);
    if (!found) {
        return require(false, "no counterexample found");
    }
    const auto replay = triple_product_trial(2, found->seed);
    const bool identical = std::memcmp(&replay.discrepancy, &found->discrepancy, sizeof(double)) == 0 &&
                           replay.weak_side == found->weak_side && replay.quantum_side == found->quantum_side;
    return require(found->discrepancy > 0.01 && identical, "trial " + std::to_string(found->trial) + ", discrepancy " +
                                                               num(found->discrepancy) +
                                                               (identical ? ", replay identical" : ", replay differs"));
}

Outcome bosonic() {
    const auto check = bosonic_variance_check(truncated_coherent_state(20, 1.0));
    return require(check.report.held() && std::abs(check.gap - 1.0) <= 1e-6,
                   "Var a^dagger - Var a = " + format_double(check.gap));
}

std::string slurp(const std::filesystem::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome determinism() {
    const auto dir = std::filesystem::temp_directory_path();
    const auto one = dir / "wvlab_acceptance_1.json";
    const auto two = dir / "wvlab_acceptance_2.json";
    auto run = [](const std::filesystem::path &out) {
        const std::string cmd = std::string("\"") + WVLAB_CLI + "\" fuzz --out \"" + out.string() + "\" 2>/dev/null";
        const int status = std::system(cmd.c_str());
        return status == -1 ? -1 : WEXITSTATUS(status);
    };
    const int c1 = run(one);
    const int c2 = run(two);
    const auto a = slurp(one);
    const auto b = slurp(two);
    std::filesystem::remove(one);
    std::filesystem::remove(two);
    return require(c1 == 0 && c2 == 0 && !a.empty() && a == b,
                   "exit codes " + std::to_string(c1) + "/" + std::to_string(c2) + ", " + std::to_string(a.size()) +
                       " bytes, " + (a == b ? "identical" : "different"));
}

}  // namespace

int main() {
    const std::pair<const char *, std::function<Outcome()>> criteria[] = {
        {"product representation", product_representation},
        {"Heisenberg dual route", heisenberg},
        {"unitary relations", unitary},
        {"optimal estimate", optimal_estimate_criterion},
        {"complementarity", complementarity},
        {"keystone identity", keystone},
        {"tradeoffs", tradeoffs},
        {"anomaly existence", anomaly_instance},
        {"triple-product non-extension", triple_product},
        {"bosonic variance", bosonic},
        {"determinism", determinism},
    };
    int failures = 0;
    int index = 1;
    for (const auto &[name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception &e) {
            o = {false, std::string("threw ") + e.what()};
        }
        failures += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << index++ << " " << name << ": " << o.detail << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
