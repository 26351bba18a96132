#include "wvlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <thread>

#include "wvlab/error.hpp"
#include "wvlab/random.hpp"

namespace wvlab {

namespace {

constexpr std::pair<Suite, std::string_view> kSuiteNames[] = {
    {Suite::ProductRep, "product_rep"},
    {Suite::Heisenberg, "heisenberg"},
    {Suite::Unitary, "unitary"},
    {Suite::Estimate, "estimate"},
    {Suite::Complementarity, "complementarity"},
    {Suite::WeakStats, "weak_stats"},
    {Suite::StrongSeq, "strong_seq"},
    {Suite::TripleCounterexample, "triple_counterexample"},
};

bool checked(const RelationReport &r) {
    return r.verdict != Verdict::Skipped && r.verdict != Verdict::Inconclusive;
}

std::vector<TrialOutcome> run_trials(const SuiteConfig &config, Suite suite) {
    std::vector<TrialOutcome> outcomes(config.trials);
    std::size_t workers = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, config.trials);

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    auto work = [&](std::size_t w) {
        try {
            for (std::size_t t = next++; t < config.trials; t = next++) {
                const auto seed = split_seed(config.master_seed, suite_stream(suite), t);
                outcomes[t] = run_trial(suite, seed, config.dim_lo, config.dim_hi, config.tol);
            }
        } catch (...) {
            errors[w] = std::current_exception();
            next = config.trials;
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(work, w);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    for (const auto &e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return outcomes;
}

// Tally one suite's trials, in trial order.
void aggregate(const SuiteConfig &config, Suite suite, const std::vector<TrialOutcome> &outcomes,
               std::vector<RelationSummary> &out) {
    std::map<std::string, std::size_t> index;
    for (const auto &trial : outcomes) {
        for (const auto &r : trial.reports) {
            auto [it, inserted] = index.try_emplace(r.relation_id, out.size());
            if (inserted) {
                RelationSummary s;
                s.suite = suite;
                s.relation_id = r.relation_id;
                out.push_back(std::move(s));
            }
            auto &s = out[it->second];
            switch (r.verdict) {
                case Verdict::Pass:
                    ++s.pass;
                    break;
                case Verdict::Fail:
                    ++s.fail;
                    break;
                case Verdict::Saturated:
                    ++s.saturated;
                    break;
                case Verdict::Skipped:
                    ++s.skipped;
                    break;
                case Verdict::Inconclusive:
                    ++s.inconclusive;
                    break;
            }
            if (checked(r) && (!s.worst_slack || r.slack < *s.worst_slack)) {
                s.worst_slack = r.slack;
                s.worst_seed = r.instance_seed;
            }
            if (r.failed() && s.failures.size() < kMaxRecordedFailures) {
                // Replay from the seed to capture the full instance.
                const auto replay =
                    run_trial(suite, r.instance_seed, config.dim_lo, config.dim_hi, config.tol, true);
                bool identical = false;
                for (const auto &rr : replay.reports) {
                    if (rr.relation_id == r.relation_id) {
                        identical = rr.lhs == r.lhs && rr.rhs == r.rhs;
                        break;
                    }
                }
                json f = wvlab::to_json(r);
                f["instance"] = replay.instance;
                f["replay_identical"] = identical;
                s.failures.push_back(std::move(f));
            }
        }
    }
}

std::string format_optional(const std::optional<double> &x) {
    return x ? format_double(*x) : std::string();
}

}  // namespace

std::string_view to_string(Suite s) {
    for (const auto &[suite, name] : kSuiteNames) {
        if (suite == s) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Suite> suite_from_string(std::string_view name) {
    for (const auto &[suite, n] : kSuiteNames) {
        if (n == name) {
            return suite;
        }
    }
    return std::nullopt;
}

const std::vector<Suite> &all_suites() {
    static const std::vector<Suite> suites = [] {
        std::vector<Suite> v;
        for (const auto &entry : kSuiteNames) {
            v.push_back(entry.first);
        }
        return v;
    }();
    return suites;
}

std::uint64_t suite_stream(Suite s) {
    return static_cast<std::uint64_t>(s) + 1;
}

void SuiteConfig::validate() const {
    if (trials < 1) {
        throw Error(ErrorKind::ConfigError, "trials must be at least 1");
    }
    if (dim_lo < 2 || dim_hi > 64 || dim_lo > dim_hi) {
        throw Error(ErrorKind::ConfigError, "dims must satisfy 2 <= lo <= hi <= 64");
    }
    if (!(tol > 0.0) || !std::isfinite(tol)) {
        throw Error(ErrorKind::ConfigError, "tol must be positive");
    }
    if (suites.empty()) {
        throw Error(ErrorKind::ConfigError, "no suites selected");
    }
}

json SuiteConfig::to_json() const {
    json names = json::array();
    for (auto s : suites) {
        names.push_back(std::string(to_string(s)));
    }
    return {{"suites", names},
            {"dims", {dim_lo, dim_hi}},
            {"trials", trials},
            {"master_seed", master_seed},
            {"tol", tol},
            {"format", format == ReportFormat::Json ? "json" : "csv"}};
}

std::size_t AggregateReport::total_failures() const {
    std::size_t n = 0;
    for (const auto &r : relations) {
        n += r.fail;
    }
    return n;
}

std::size_t AggregateReport::total_checks() const {
    std::size_t n = 0;
    for (const auto &r : relations) {
        n += r.pass + r.fail + r.saturated;
    }
    return n;
}

const RelationSummary *AggregateReport::find(Suite suite, std::string_view relation_id) const {
    for (const auto &r : relations) {
        if (r.suite == suite && r.relation_id == relation_id) {
            return &r;
        }
    }
    return nullptr;
}

json AggregateReport::to_json() const {
    json rel = json::array();
    for (const auto &r : relations) {
        json j = {{"suite", std::string(to_string(r.suite))},
                  {"relation_id", r.relation_id},
                  {"pass", r.pass},
                  {"fail", r.fail},
                  {"saturated", r.saturated},
                  {"skipped", r.skipped},
                  {"inconclusive", r.inconclusive}};
        j["worst_slack"] = r.worst_slack ? json(*r.worst_slack) : json(nullptr);
        j["worst_seed"] = r.worst_seed;
        if (!r.failures.empty()) {
            j["failures"] = r.failures;
        }
        rel.push_back(std::move(j));
    }
    return {{"tool", "wvlab"},
            {"version", std::string(kVersion)},
            {"config", config.to_json()},
            {"relations", std::move(rel)},
            {"total_checks", total_checks()},
            {"total_failures", total_failures()}};
}

void AggregateReport::write_csv(std::ostream &os) const {
    os << "# wvlab " << kVersion << " seed " << config.master_seed << " trials " << config.trials << " dims "
       << config.dim_lo << ".." << config.dim_hi << '\n';
    os << "suite,relation_id,pass,fail,saturated,skipped,inconclusive,worst_slack,worst_seed\n";
    for (const auto &r : relations) {
        os << to_string(r.suite) << ',' << r.relation_id << ',' << r.pass << ',' << r.fail << ',' << r.saturated
           << ',' << r.skipped << ',' << r.inconclusive << ',' << format_optional(r.worst_slack) << ','
           << r.worst_seed << '\n';
    }
}

std::string AggregateReport::serialize() const {
    if (config.format == ReportFormat::Csv) {
        std::ostringstream os;
        write_csv(os);
        return os.str();
    }
    return to_json().dump(2) + "\n";
}

AggregateReport run_suites(const SuiteConfig &config) {
    config.validate();
    AggregateReport report;
    report.config = config;
    for (Suite suite : config.suites) {
        aggregate(config, suite, run_trials(config, suite), report.relations);
    }
    return report;
}

namespace {

// Unitary W with <psi|W|psi> of modulus `overlap`: eigenbasis Haar, phases
// solved for the target. Returns nullopt when the draw cannot reach it.
std::optional<Matrix> unitary_with_expectation_modulus(const Ket &psi, double overlap, Rng &rng) {
    const std::size_t d = psi.size();
    const Matrix w0 = random_haar_unitary(d, rng);
    std::vector<double> weight(d);
    for (std::size_t k = 0; k < d; ++k) {
        weight[k] = std::norm(inner(w0.col(k), psi));
    }
    std::vector<double> theta(d);
    Complex rest{};
    for (std::size_t k = 1; k < d; ++k) {
        theta[k] = 2.0 * std::numbers::pi * rng.uniform();
        rest += weight[k] * std::polar(1.0, theta[k]);
    }
    const double r = std::abs(rest);
    if (weight[0] < 1e-9 || r < 1e-9) {
        return std::nullopt;
    }
    const double c = (overlap * overlap - weight[0] * weight[0] - r * r) / (2.0 * weight[0] * r);
    if (std::abs(c) > 1.0) {
        return std::nullopt;
    }
    const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
    theta[0] = std::arg(rest) + sign * std::acos(c);
    std::vector<Complex> phases(d);
    for (std::size_t k = 0; k < d; ++k) {
        phases[k] = std::polar(1.0, theta[k]);
    }
    return w0 * Matrix::diagonal(std::span<const Complex>(phases)) * w0.adjoint();
}

}  // namespace

Figure1Data figure1_data(double overlap, double phi, std::size_t samples, std::uint64_t seed,
                         std::size_t scatter_count) {
    Figure1Data data;
    data.overlap = overlap;
    data.phi = phi;
    data.curves = figure1_region_data(overlap, phi, samples);

    const double hyperbola = (1.0 + overlap) / 2.0;
    for (std::uint64_t index = 0; data.scatter.size() < scatter_count; ++index) {
        const auto point_seed = split_seed(seed, 0xF161, index);
        Rng rng(point_seed);
        const std::size_t d = rng.uniform_index(2, 4);
        const auto psi = random_pure_state(d, rng);
        const Matrix u = random_haar_unitary(d, rng);
        const auto w = unitary_with_expectation_modulus(psi.ket(), overlap, rng);
        if (!w) {
            continue;
        }
        const auto s = unitary_pair_summary(Observable(u), Observable(u * *w), psi);
        data.scatter.push_back({s.u, s.v, s.overlap, s.bargmann_phase, point_seed});

        const double cos_phi = s.bargmann_phase ? std::cos(*s.bargmann_phase) : 1.0;
        const bool inside = unitary_relation_excess(s.u, s.v, overlap, 1.0) <= kRelationTol &&
                            s.u * s.v <= hyperbola + kRelationTol &&
                            unitary_relation_excess(s.u, s.v, s.overlap, cos_phi) <= kRelationTol;
        if (inside) {
            ++data.contained;
        }
    }
    return data;
}

void write_figure1_csv(std::ostream &os, const Figure1Data &data) {
    write_csv(os, data.curves);
    for (const auto &p : data.scatter) {
        os << "scatter," << format_double(p.u) << ',' << format_double(p.v) << '\n';
    }
}

Figure1Data emit_figure1(double overlap, double phi, std::size_t samples, const std::string &output_path,
                         std::uint64_t seed) {
    auto data = figure1_data(overlap, phi, samples, seed);
    std::ofstream out(output_path);
    if (!out) {
        throw Error(ErrorKind::IoError, "cannot open " + output_path + " for writing");
    }
    write_figure1_csv(out, data);
    out.flush();
    if (!out) {
        throw Error(ErrorKind::IoError, "failed writing " + output_path);
    }
    return data;
}

// Worked examples.

namespace {

std::string fmt(Complex z) {
    std::ostringstream os;
    os.precision(12);
    os << z.real();
    if (z.imag() != 0.0) {
        os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    }
    return os.str();
}

std::string fmt(double x) {
    return fmt(Complex(x, 0.0));
}

void print_report(std::ostream &os, const RelationReport &r) {
    os << "  check " << r.relation_id << ": lhs " << fmt(r.lhs) << ", rhs " << fmt(r.rhs) << ", slack "
       << format_double(r.slack) << " -> " << to_string(r.verdict) << '\n';
}

const Matrix kSigmaX{{0, 1}, {1, 0}};
const Matrix kSigmaY{{0, Complex(0, -1)}, {Complex(0, 1), 0}};

bool example_anomalous_sigma_x(std::ostream &os) {
    const auto psi = QuantumState::pure({1, 0});
    const double s = 1.0 / std::sqrt(10.0);
    const Ket post{s, 3.0 * s};
    const Observable a(kSigmaX);
    os << "A = sigma_x, psi = |0>, post-selection (|0> + 3|1>)/sqrt(10)\n";
    const Complex num = sandwich(post, a.matrix(), psi.ket());
    const Complex den = inner(post, psi.ket());
    os << "  <m|A|psi> = " << fmt(num) << "\n  <m|psi>   = " << fmt(den) << '\n';
    const auto w = weak_value(a, post, psi);
    os << "  A_w = " << fmt(*w) << '\n';
    os << "  spectrum of sigma_x is [-1, 1]; the weak value lies outside it\n";
    const auto r = RelationReport::identity("weak_value", *w, 3.0, 1e-12, true);
    print_report(os, r);
    return r.held() && std::abs(w->real()) > 1.0;
}

bool example_comp_product(std::ostream &os) {
    const double h = 1.0 / std::sqrt(2.0);
    const Ket a{1, 0};
    const Ket b{h, h};
    const auto psi = QuantumState::pure({h, Complex(0, h)});
    os << "a = |0>, b = |+>, psi = (|0> + i|1>)/sqrt(2)\n";
    const auto pair = projector_weak_value_pair(a, b, psi);
    os << "  (Pi_a)_w given b = " << fmt(pair.a_given_b) << '\n';
    os << "  (Pi_b)_w given a = " << fmt(pair.b_given_a) << '\n';
    os << "  product = " << fmt(pair.product()) << ", |<a|b>|^2 = " << fmt(std::norm(inner(a, b))) << '\n';
    const auto r = complementarity_product(a, b, psi);
    print_report(os, r);
    bool ok = r.held();
    os << "  the product does not depend on psi:\n";
    Rng rng(7);
    for (int i = 0; i < 3; ++i) {
        const auto other = random_pure_state(2, rng);
        const auto p = projector_weak_value_pair(a, b, other).product();
        os << "    random psi -> " << fmt(p) << '\n';
        ok = ok && std::abs(p - 0.5) <= 1e-10;
    }
    return ok;
}

bool example_eq33_qubit(std::ostream &os) {
    const double h = 1.0 / std::sqrt(2.0);
    const auto psi = QuantumState::pure({h, Complex(0, h)});
    const Matrix a_elem = Matrix::outer(Ket{1, 0}, Ket{1, 0});
    const Matrix b_elem = Matrix::outer(Ket{h, h}, Ket{h, h});
    os << "psi = (|0> + i|1>)/sqrt(2), A_a = |0><0|, B_b = |+><+|\n";
    const Complex t = psi.expectation(a_elem * b_elem);
    const double pw = 0.5 * psi.expectation(a_elem * b_elem + b_elem * a_elem).real();
    const double inc = 0.25 * std::norm(psi.expectation(commutator(a_elem, b_elem)));
    os << "  tr(rho A_a B_b) = " << fmt(t) << '\n';
    os << "  p_w(a,b) = " << fmt(pw) << ", p_w^2 = " << fmt(pw * pw) << '\n';
    os << "  I(a,b) = " << fmt(inc) << '\n';
    os << "  p_w^2 + I = " << fmt(pw * pw) << " + " << fmt(inc) << " = " << fmt(pw * pw + inc)
       << " = |tr(rho A_a B_b)|^2 = " << fmt(std::norm(t)) << '\n';
    os << "  i.e. 1/16 + 1/16 = 1/8\n";
    const auto r = identity_check_eq33(a_elem, b_elem, psi, 1e-12);
    print_report(os, r);
    return r.held() && std::abs(pw * pw + inc - 0.125) <= 1e-12;
}

bool example_negative_pw(std::ostream &os) {
    const double n = 1.0 / std::sqrt(5.0);
    const double h = 1.0 / std::sqrt(2.0);
    const auto psi = QuantumState::pure({2.0 * n, -n});
    const auto ma = MeasurementModel::from_basis({Ket{h, h}, Ket{h, -h}}, {"+", "-"});
    const auto mb = MeasurementModel::computational(2);
    os << "psi = (2|0> - |1>)/sqrt(5), A = {|+><+|, |-><-|}, B = computational\n";
    const auto wj = weak_joint_distribution(ma, mb, psi);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            os << "  p_w(" << ma.labels()[i] << "," << mb.labels()[j] << ") = " << fmt(wj.joint(i, j)) << '\n';
        }
    }
    os << "  p_w(+,1) is negative; sum |p_w| = " << fmt(wj.anomaly_l1) << " > 1\n";
    bool ok = std::abs(wj.joint(0, 1) + 0.1) <= 1e-12;
    auto reports = tradeoff_suite(ma, mb, psi);
    const auto strong = strong_sequential_distribution(ma, mb, psi);
    reports.insert(reports.end(), strong.reports.begin(), strong.reports.end());
    os << "  p_s(+,1) = " << fmt(strong.joint(0, 1)) << '\n';
    for (const auto &r : reports) {
        if (r.verdict == Verdict::Skipped) {
            continue;
        }
        print_report(os, r);
        ok = ok && !r.failed();
    }
    return ok;
}

bool example_heisenberg_saturation(std::ostream &os) {
    const auto psi = QuantumState::pure({1, 0});
    // Post-selecting in the |+>, |-> basis keeps both outcomes defined.
    os << "A = sigma_x, B = sigma_y, psi = |0>, M = {|+>, |->}\n";
    const auto h = robertson_schrodinger_check(Observable(kSigmaX), Observable(kSigmaY), psi, fourier_basis(2));
    os << "  Var A = " << fmt(h.var_a) << " (weak route " << fmt(h.weak_var_a) << ")\n";
    os << "  Var B = " << fmt(h.var_b) << " (weak route " << fmt(h.weak_var_b) << ")\n";
    os << "  Cov = " << fmt(h.cov) << ", <[A,B]> = " << fmt(h.commutator) << '\n';
    bool ok = true;
    for (const auto &r : h.reports) {
        print_report(os, r);
        ok = ok && r.held();
    }
    return ok && find_report(h.reports, "robertson_schrodinger").verdict == Verdict::Saturated;
}

bool example_fig1(std::ostream &os) {
    const double overlap = 0.25;
    const auto data = figure1_data(overlap, std::numbers::pi, 64);
    os << "overlap |<U^dagger V>| = 0.25, Phi = pi\n";
    for (const auto &c : data.curves) {
        os << "  curve " << c.id << ": " << c.points.size() << " points from (" << fmt(c.points.front().first)
           << ", " << fmt(c.points.front().second) << ") to (" << fmt(c.points.back().first) << ", "
           << fmt(c.points.back().second) << ")\n";
    }
    os << "  ellipse area " << fmt(unitary_ellipse_area(overlap)) << '\n';
    os << "  scatter: " << data.contained << " of " << data.scatter.size() << " random pairs inside the regions\n";
    return data.contained == data.scatter.size();
}

using ExampleFn = bool (*)(std::ostream &);

const std::vector<std::pair<std::string, ExampleFn>> &examples() {
    static const std::vector<std::pair<std::string, ExampleFn>> table = {
        {"anomalous-sigma-x", example_anomalous_sigma_x},
        {"comp-product", example_comp_product},
        {"eq33-qubit", example_eq33_qubit},
        {"negative-pw", example_negative_pw},
        {"heisenberg-saturation", example_heisenberg_saturation},
        {"fig1", example_fig1},
    };
    return table;
}

}  // namespace

const std::vector<std::string> &example_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto &e : examples()) {
            v.push_back(e.first);
        }
        return v;
    }();
    return names;
}

bool worked_example(std::string_view name, std::ostream &os) {
    for (const auto &[n, fn] : examples()) {
        if (n == name) {
            const bool ok = fn(os);
            os << (ok ? "verified\n" : "NOT verified\n");
            return ok;
        }
    }
    throw Error(ErrorKind::UnknownExample, "unknown example '" + std::string(name) + "'");
}

}  // namespace wvlab
