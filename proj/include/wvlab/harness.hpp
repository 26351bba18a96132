#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "wvlab/report.hpp"
#include "wvlab/serialize.hpp"
#include "wvlab/uncertainty.hpp"

namespace wvlab {

inline constexpr std::string_view kVersion = "0.3.0";

enum class Suite {
    ProductRep,
    Heisenberg,
    Unitary,
    Estimate,
    Complementarity,
    WeakStats,
    StrongSeq,
    TripleCounterexample,
};

std::string_view to_string(Suite s);
std::optional<Suite> suite_from_string(std::string_view name);
const std::vector<Suite> &all_suites();

enum class ReportFormat { Json, Csv };

struct SuiteConfig {
    std::vector<Suite> suites = all_suites();
    std::size_t dim_lo = 2;
    std::size_t dim_hi = 4;
    std::size_t trials = 1000;
    std::uint64_t master_seed = 42;
    double tol = kRelationTol;
    std::string output_path;
    ReportFormat format = ReportFormat::Json;
    /// 0 means hardware concurrency. Output does not depend on it.
    std::size_t threads = 0;

    /// Throws ConfigError.
    void validate() const;
    json to_json() const;
};

/// Per-relation tally across all trials of a suite.
struct RelationSummary {
    Suite suite = Suite::ProductRep;
    std::string relation_id;
    std::size_t pass = 0;
    std::size_t fail = 0;
    std::size_t saturated = 0;
    std::size_t skipped = 0;
    std::size_t inconclusive = 0;
    /// Smallest slack among checked (non-skipped) trials.
    std::optional<double> worst_slack;
    std::uint64_t worst_seed = 0;
    /// Up to kMaxRecordedFailures failing reports with their replayable instance.
    std::vector<json> failures;
};

struct AggregateReport {
    SuiteConfig config;
    std::vector<RelationSummary> relations;

    std::size_t total_failures() const;
    std::size_t total_checks() const;
    const RelationSummary *find(Suite suite, std::string_view relation_id) const;
    json to_json() const;
    void write_csv(std::ostream &os) const;
    /// Serialised in the configured format.
    std::string serialize() const;
};

inline constexpr std::size_t kMaxRecordedFailures = 3;
/// Stream id of a suite for seed splitting.
std::uint64_t suite_stream(Suite s);

struct TrialOutcome {
    ReportBundle reports;
    /// The generated instance (matrices, states, measurements).
    json instance;
};

/// Runs one trial of a suite from its seed. Every report carries the seed;
/// replaying the same seed reproduces identical values.
TrialOutcome run_trial(Suite suite, std::uint64_t trial_seed, std::size_t dim_lo, std::size_t dim_hi, double tol,
                       bool capture_instance = false);

/// Deterministic in master_seed; trial seeds come from
/// split_seed(master_seed, suite_stream(suite), trial_index).
AggregateReport run_suites(const SuiteConfig &config);

struct ScatterPoint {
    double u = 0.0;
    double v = 0.0;
    double overlap = 0.0;
    std::optional<double> phase;
    std::uint64_t seed = 0;
};

struct Figure1Data {
    double overlap = 0.0;
    double phi = 0.0;
    std::vector<Curve> curves;
    std::vector<ScatterPoint> scatter;
    /// Scatter points inside the ellipse and hyperbola regions at the target
    /// overlap and inside the Bargmann-strengthened region at their own phase.
    std::size_t contained = 0;
};

/// Boundary curves plus `scatter_count` points from random (U, V, psi)
/// whose overlap |<U^dagger V>| equals the target. V = U W with W built so
/// that <psi|W|psi> has the target modulus; infeasible draws are rejected.
Figure1Data figure1_data(double overlap, double phi, std::size_t samples, std::uint64_t seed = 42,
                         std::size_t scatter_count = 1000);
/// Header curve_id,u,v; scatter rows use curve_id "scatter".
void write_figure1_csv(std::ostream &os, const Figure1Data &data);
/// Writes the CSV to path; throws IoError.
Figure1Data emit_figure1(double overlap, double phi, std::size_t samples, const std::string &output_path,
                         std::uint64_t seed = 42);

const std::vector<std::string> &example_names();
/// Prints the worked example and returns whether its live check passed.
/// Throws UnknownExample.
bool worked_example(std::string_view name, std::ostream &os);

}  // namespace wvlab
