#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "wvlab/error.hpp"
#include "wvlab/harness.hpp"

using namespace wvlab;

namespace {

ErrorKind kind_of(auto &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error";
    return ErrorKind::InvalidArgument;
}

std::size_t count_lines(const std::string &s, std::string_view prefix) {
    std::istringstream in(s);
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        n += line.starts_with(prefix);
    }
    return n;
}

}  // namespace

TEST(Serialize, MatrixRoundTripIsExact) {
    Rng rng(81);
    const Matrix m = random_ginibre(3, 4, rng);
    const Matrix back = matrix_from_json(json::parse(to_json(m).dump()));
    EXPECT_EQ(back.rows(), 3u);
    EXPECT_EQ(back.cols(), 4u);
    for (std::size_t i = 0; i < m.data().size(); ++i) {
        EXPECT_EQ(back.data()[i], m.data()[i]);
    }
}

TEST(Serialize, StatesAndMeasurementsRoundTrip) {
    Rng rng(82);
    const auto pure = random_pure_state(3, rng);
    const auto back = state_from_json(json::parse(to_json(pure).dump()));
    ASSERT_TRUE(back.is_pure());
    EXPECT_EQ(back.ket(), pure.ket());

    const auto mixed = random_density_operator(4, 2, rng);
    const auto mback = state_from_json(json::parse(to_json(mixed).dump()));
    EXPECT_FALSE(mback.is_pure());
    EXPECT_TRUE(std::ranges::equal(mback.density().data(), mixed.density().data()));

    for (const auto &m : {random_rank1_povm(3, rng), random_projective_measurement(4, 2, rng),
                          random_general_povm(3, 5, rng)}) {
        const auto r = measurement_from_json(json::parse(to_json(m).dump()));
        EXPECT_EQ(r.kind(), m.kind());
        EXPECT_EQ(r.labels(), m.labels());
        ASSERT_EQ(r.size(), m.size());
        for (std::size_t k = 0; k < m.size(); ++k) {
            EXPECT_TRUE(std::ranges::equal(r.element(k).data(), m.element(k).data()));
        }
    }
}

TEST(Serialize, RejectsMalformedInput) {
    EXPECT_EQ(kind_of([] { state_from_json(json{{"kind", "bogus"}}); }), ErrorKind::InvalidState);
    EXPECT_EQ(kind_of([] {
                  state_from_json(json{{"kind", "pure"}, {"dim", 3}, {"vector", json::array({1.0, 0.0})}});
              }),
              ErrorKind::DimensionMismatch);
    const auto comp = to_json(MeasurementModel::computational(2));
    auto wrong = comp;
    wrong["kind"] = "general_povm";
    EXPECT_EQ(kind_of([&] { measurement_from_json(wrong); }), ErrorKind::InvalidMeasurement);
    EXPECT_EQ(kind_of([] { complex_from_json(json::array({1.0, 2.0, 3.0})); }), ErrorKind::InvalidArgument);
}

TEST(Serialize, WeakValueTable) {
    const double n = 1.0 / std::sqrt(5.0);
    const auto psi = QuantumState::pure({2 * n, -n});
    const Observable sx(Matrix{{0, 1}, {1, 0}});
    const auto t = weak_value_table(sx, MeasurementModel::computational(2), psi);
    const auto j = json::parse(to_json(t).dump());
    ASSERT_EQ(j.at("rows").size(), 2u);
    EXPECT_EQ(complex_from_json(j["rows"][0]["weak_value"]), t.rows[0].weak_value);
    EXPECT_EQ(j["rows"][1]["probability"].get<double>(), t.rows[1].probability);

    std::ostringstream csv;
    write_csv(csv, t);
    std::istringstream in(csv.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "label,re,im,probability,defined");
    const auto re = std::stod(row.substr(row.find(',') + 1));
    EXPECT_EQ(re, t.rows[0].weak_value.real());
}

TEST(Serialize, FormatDoubleRoundTrips) {
    Rng rng(83);
    for (int t = 0; t < 1000; ++t) {
        const double x = rng.normal() * std::pow(10.0, rng.uniform() * 20 - 10);
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

TEST(Config, Validation) {
    SuiteConfig c;
    EXPECT_NO_THROW(c.validate());
    c.trials = 0;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::ConfigError);
    c = {};
    c.dim_lo = 1;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::ConfigError);
    c = {};
    c.dim_lo = 5;
    c.dim_hi = 3;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::ConfigError);
    c = {};
    c.tol = 0;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::ConfigError);
    c = {};
    c.suites.clear();
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::ConfigError);
    c = {};
    c.trials = 0;
    EXPECT_EQ(kind_of([&] { run_suites(c); }), ErrorKind::ConfigError);
}

TEST(Config, SuiteNames) {
    for (const auto s : all_suites()) {
        EXPECT_EQ(suite_from_string(to_string(s)), s);
    }
    EXPECT_FALSE(suite_from_string("nope").has_value());
}

TEST(Harness, ReportsAreDeterministicAndThreadIndependent) {
    SuiteConfig c;
    c.trials = 60;
    c.threads = 1;
    const auto one = run_suites(c).serialize();
    EXPECT_EQ(run_suites(c).serialize(), one);
    c.threads = 4;
    EXPECT_EQ(run_suites(c).serialize(), one);
    c.format = ReportFormat::Csv;
    const auto csv = run_suites(c).serialize();
    c.threads = 1;
    EXPECT_EQ(run_suites(c).serialize(), csv);
    EXPECT_EQ(count_lines(csv, "suite,relation_id,"), 1u);
}

TEST(Harness, ReportEchoesConfig) {
    SuiteConfig c;
    c.trials = 20;
    c.master_seed = 7;
    c.suites = {Suite::Heisenberg};
    const auto j = json::parse(run_suites(c).serialize());
    EXPECT_EQ(j.at("version").get<std::string>(), kVersion);
    EXPECT_EQ(j.at("config").at("trials").get<std::size_t>(), 20u);
    EXPECT_EQ(j.at("config").at("master_seed").get<std::uint64_t>(), 7u);
    EXPECT_EQ(j.at("total_failures").get<std::size_t>(), 0u);
    for (const auto &r : j.at("relations")) {
        EXPECT_EQ(r.at("suite").get<std::string>(), "heisenberg");
    }
}

TEST(Harness, DefaultConfigHasNoFailures) {
    const auto report = run_suites(SuiteConfig{});
    EXPECT_EQ(report.total_failures(), 0u);
    EXPECT_GT(report.total_checks(), 10000u);
    for (const auto &r : report.relations) {
        EXPECT_EQ(r.fail, 0u) << to_string(r.suite) << "/" << r.relation_id;
    }
}

TEST(Harness, TrialReplayIsBitIdentical) {
    for (const auto s : all_suites()) {
        for (std::uint64_t k = 0; k < 5; ++k) {
            const auto seed = split_seed(42, suite_stream(s), k);
            const auto a = run_trial(s, seed, 2, 4, kRelationTol, true);
            const auto b = run_trial(s, seed, 2, 4, kRelationTol, true);
            ASSERT_EQ(a.reports.size(), b.reports.size());
            for (std::size_t i = 0; i < a.reports.size(); ++i) {
                EXPECT_EQ(a.reports[i].lhs, b.reports[i].lhs);
                EXPECT_EQ(a.reports[i].rhs, b.reports[i].rhs);
                EXPECT_EQ(a.reports[i].instance_seed, seed);
            }
            EXPECT_EQ(a.instance.dump(), b.instance.dump());
        }
    }
}

TEST(Harness, TightToleranceRecordsReplayableFailures) {
    // Identity residuals of ~1e-16 fail at a tolerance no float arithmetic meets.
    SuiteConfig c;
    c.trials = 50;
    c.tol = 1e-300;
    c.suites = {Suite::WeakStats};
    const auto report = run_suites(c);
    ASSERT_GT(report.total_failures(), 0u);
    for (const auto &r : report.relations) {
        EXPECT_LE(r.failures.size(), kMaxRecordedFailures);
        for (const auto &f : r.failures) {
            EXPECT_TRUE(f.at("replay_identical").get<bool>());
            EXPECT_TRUE(f.contains("instance"));
        }
    }
}

TEST(Figure1, RowCountsAndContainment) {
    const auto data = figure1_data(0.25, std::numbers::pi, 16, 42, 200);
    std::ostringstream os;
    write_figure1_csv(os, data);
    const auto s = os.str();
    EXPECT_EQ(count_lines(s, "curve_id,u,v"), 1u);
    EXPECT_EQ(count_lines(s, "ellipse,"), 16u);
    EXPECT_EQ(count_lines(s, "hyperbola,"), 16u);
    EXPECT_EQ(count_lines(s, "bargmann_ellipse,"), 16u);
    EXPECT_EQ(count_lines(s, "scatter,"), 200u);
    EXPECT_EQ(data.contained, data.scatter.size());
    for (const auto &p : data.scatter) {
        EXPECT_NEAR(p.overlap, 0.25, 1e-9);
    }
}

TEST(Figure1, EmitWritesFileAndReportsIoErrors) {
    const auto path = std::filesystem::temp_directory_path() / "wvlab_fig1_test.csv";
    const auto data = emit_figure1(0.25, std::numbers::pi, 16, path.string());
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(count_lines(buf.str(), "scatter,"), data.scatter.size());
    std::filesystem::remove(path);
    EXPECT_EQ(kind_of([] { emit_figure1(0.25, 0.0, 16, "/nonexistent-dir/x/fig.csv"); }), ErrorKind::IoError);
}

TEST(Examples, AllVerify) {
    for (const auto &name : example_names()) {
        std::ostringstream os;
        EXPECT_TRUE(worked_example(name, os)) << name << "\n" << os.str();
        EXPECT_FALSE(os.str().empty());
    }
    std::ostringstream os;
    worked_example("eq33-qubit", os);
    EXPECT_NE(os.str().find("1/16 + 1/16 = 1/8"), std::string::npos) << os.str();
    std::ostringstream sx;
    worked_example("anomalous-sigma-x", sx);
    EXPECT_NE(sx.str().find("3"), std::string::npos);
}

TEST(Examples, UnknownName) {
    std::ostringstream os;
    EXPECT_EQ(kind_of([&] { worked_example("no-such-example", os); }), ErrorKind::UnknownExample);
}
