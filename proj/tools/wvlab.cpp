// wvlab command-line entry point.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>

#include "CLI11.hpp"

#include "wvlab/error.hpp"
#include "wvlab/harness.hpp"

namespace {

constexpr int kExitFailures = 1;
constexpr int kExitError = 2;

// "LO..HI" or a single dimension.
void parse_dims(const std::string &text, wvlab::SuiteConfig &config) {
    const auto dots = text.find("..");
    try {
        if (dots == std::string::npos) {
            config.dim_lo = config.dim_hi = std::stoul(text);
        } else {
            config.dim_lo = std::stoul(text.substr(0, dots));
            config.dim_hi = std::stoul(text.substr(dots + 2));
        }
    } catch (const std::logic_error &) {
        throw wvlab::Error(wvlab::ErrorKind::ConfigError, "dims must look like LO..HI, got '" + text + "'");
    }
}

// Accepts a number, "pi" or "-pi".
double parse_angle(const std::string &text) {
    if (text == "pi") {
        return std::numbers::pi;
    }
    if (text == "-pi") {
        return -std::numbers::pi;
    }
    try {
        std::size_t used = 0;
        const double x = std::stod(text, &used);
        if (used == text.size()) {
            return x;
        }
    } catch (const std::logic_error &) {
    }
    throw wvlab::Error(wvlab::ErrorKind::ConfigError, "phi must be a number or 'pi', got '" + text + "'");
}

void write_output(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    out << text;
    out.flush();
    if (!out) {
        throw wvlab::Error(wvlab::ErrorKind::IoError, "cannot write " + path);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Weak-value and uncertainty-relation laboratory"};
    app.set_version_flag("--version", std::string(wvlab::kVersion));
    app.require_subcommand(1);

    wvlab::SuiteConfig config;
    std::vector<std::string> suite_names;
    std::string dims = "2..4";
    std::string format = "json";
    auto *fuzz = app.add_subcommand("fuzz", "Run randomized relation suites");
    fuzz->add_option("--suite", suite_names, "Suite to run (repeatable; default all)");
    fuzz->add_option("--dims", dims, "Dimension range LO..HI")->capture_default_str();
    fuzz->add_option("--trials", config.trials, "Trials per suite")->capture_default_str();
    fuzz->add_option("--seed", config.master_seed, "Master seed")->capture_default_str();
    fuzz->add_option("--tol", config.tol, "Relation tolerance")->capture_default_str();
    fuzz->add_option("--threads", config.threads, "Worker threads (0 = all cores)");
    fuzz->add_option("--out", config.output_path, "Report path (default stdout)");
    fuzz->add_option("--format", format, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    std::string example_name;
    auto *example = app.add_subcommand("example", "Print a worked example and verify it");
    example->add_option("name", example_name, "Example name")->required();
    example->footer([] {
        std::string s = "Examples:";
        for (const auto &n : wvlab::example_names()) {
            s += " " + n;
        }
        return s;
    }());

    double overlap = 0.25;
    std::string phi = "pi";
    std::size_t samples = 200;
    std::uint64_t figure_seed = 42;
    std::string figure_out;
    auto *figure = app.add_subcommand("figure1", "Emit unitary-relation boundary curves and a scatter as CSV");
    figure->add_option("--overlap", overlap, "|<U^dagger V>| in [0, 1)")->capture_default_str();
    figure->add_option("--phi", phi, "Bargmann phase (number or 'pi')")->capture_default_str();
    figure->add_option("--samples", samples, "Points per curve")->capture_default_str();
    figure->add_option("--seed", figure_seed, "Scatter seed")->capture_default_str();
    figure->add_option("--out", figure_out, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fuzz->parsed()) {
            parse_dims(dims, config);
            config.format = format == "csv" ? wvlab::ReportFormat::Csv : wvlab::ReportFormat::Json;
            if (!suite_names.empty()) {
                config.suites.clear();
                for (const auto &name : suite_names) {
                    const auto s = wvlab::suite_from_string(name);
                    if (!s) {
                        throw wvlab::Error(wvlab::ErrorKind::ConfigError, "unknown suite '" + name + "'");
                    }
                    config.suites.push_back(*s);
                }
            }
            const auto report = wvlab::run_suites(config);
            write_output(config.output_path, report.serialize());
            std::cerr << "wvlab: " << report.total_checks() << " checks, " << report.total_failures()
                      << " failures\n";
            return report.total_failures() == 0 ? 0 : kExitFailures;
        }
        if (example->parsed()) {
            return wvlab::worked_example(example_name, std::cout) ? 0 : kExitFailures;
        }
        if (figure->parsed()) {
            const double angle = parse_angle(phi);
            wvlab::Figure1Data data;
            if (figure_out.empty() || figure_out == "-") {
                data = wvlab::figure1_data(overlap, angle, samples, figure_seed);
                wvlab::write_figure1_csv(std::cout, data);
            } else {
                data = wvlab::emit_figure1(overlap, angle, samples, figure_out, figure_seed);
            }
            std::cerr << "wvlab: " << data.contained << " of " << data.scatter.size()
                      << " scatter points inside the regions\n";
            return data.contained == data.scatter.size() ? 0 : kExitFailures;
        }
    } catch (const wvlab::Error &e) {
        std::cerr << "wvlab: " << e.what() << '\n';
        return kExitError;
    }
    return 0;
}
