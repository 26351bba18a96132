#include "wvlab/report.hpp"

#include <cmath>
#include <stdexcept>

#include "wvlab/error.hpp"

namespace wvlab {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::Fail:
            return "fail";
        case Verdict::Saturated:
            return "saturated";
        case Verdict::Skipped:
            return "skipped";
        case Verdict::Inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
        case ErrorKind::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorKind::NonHermitianInput:
            return "NonHermitianInput";
        case ErrorKind::NoConvergence:
            return "NoConvergence";
        case ErrorKind::InvalidState:
            return "InvalidState";
        case ErrorKind::InvalidMeasurement:
            return "InvalidMeasurement";
        case ErrorKind::NotUnitary:
            return "NotUnitary";
        case ErrorKind::NotProjective:
            return "NotProjective";
        case ErrorKind::UndefinedOutcome:
            return "UndefinedOutcome";
        case ErrorKind::UndefinedPostselection:
            return "UndefinedPostselection";
        case ErrorKind::DegenerateDecomposition:
            return "DegenerateDecomposition";
        case ErrorKind::LengthMismatch:
            return "LengthMismatch";
        case ErrorKind::InvalidWeights:
            return "InvalidWeights";
        case ErrorKind::ConfigError:
            return "ConfigError";
        case ErrorKind::IoError:
            return "IoError";
        case ErrorKind::UnknownExample:
            return "UnknownExample";
    }
    return "Unknown";
}

RelationReport RelationReport::identity(std::string id, Complex lhs, Complex rhs, double tol, bool complex_valued) {
    RelationReport r;
    r.relation_id = std::move(id);
    r.form = Form::Identity;
    r.lhs = lhs;
    r.rhs = rhs;
    r.complex_valued = complex_valued;
    r.tol = tol;
    const double residual = std::abs(lhs - rhs);
    r.slack = -residual;
    r.verdict = (residual <= tol) ? Verdict::Pass : Verdict::Fail;
    return r;
}

RelationReport RelationReport::inequality(std::string id, double lhs, double rhs, double tol) {
    RelationReport r;
    r.relation_id = std::move(id);
    r.form = Form::Inequality;
    r.lhs = lhs;
    r.rhs = rhs;
    r.tol = tol;
    r.slack = rhs - lhs;
    if (!(r.slack >= -tol)) {
        r.verdict = Verdict::Fail;
    } else if (std::abs(r.slack) <= kSaturationBand) {
        r.verdict = Verdict::Saturated;
    } else {
        r.verdict = Verdict::Pass;
    }
    return r;
}

RelationReport RelationReport::boolean(std::string id, bool holds, std::string notes) {
    RelationReport r;
    r.relation_id = std::move(id);
    r.form = Form::Note;
    r.lhs = holds ? 1.0 : 0.0;
    r.rhs = 1.0;
    r.slack = holds ? 0.0 : -1.0;
    r.verdict = holds ? Verdict::Pass : Verdict::Fail;
    r.notes = std::move(notes);
    return r;
}

RelationReport RelationReport::skipped(std::string id, std::string notes) {
    RelationReport r;
    r.relation_id = std::move(id);
    r.verdict = Verdict::Skipped;
    r.notes = std::move(notes);
    return r;
}

RelationReport RelationReport::inconclusive(std::string id, std::string notes) {
    RelationReport r;
    r.relation_id = std::move(id);
    r.verdict = Verdict::Inconclusive;
    r.notes = std::move(notes);
    return r;
}

RelationReport &RelationReport::with_note(std::string_view note) {
    if (!notes.empty()) {
        notes += "; ";
    }
    notes += note;
    return *this;
}

RelationReport &RelationReport::fail_with(std::string_view note) {
    verdict = Verdict::Fail;
    return with_note(note);
}

const RelationReport &find_report(const ReportBundle &bundle, std::string_view id) {
    for (const auto &r : bundle) {
        if (r.relation_id == id) {
            return r;
        }
    }
    throw std::out_of_range("no report with id " + std::string(id));
}

RelationReport worst_of(std::string id, const ReportBundle &cells) {
    const RelationReport *worst = nullptr;
    std::size_t checked = 0;
    std::size_t skipped = 0;
    for (const auto &c : cells) {
        if (c.verdict == Verdict::Skipped || c.verdict == Verdict::Inconclusive) {
            ++skipped;
            continue;
        }
        ++checked;
        if (worst == nullptr || c.slack < worst->slack || (c.failed() && !worst->failed())) {
            worst = &c;
        }
    }
    if (worst == nullptr) {
        return RelationReport::skipped(std::move(id), std::to_string(skipped) + " cells skipped, none checked");
    }
    RelationReport out = *worst;
    out.relation_id = std::move(id);
    for (const auto &c : cells) {
        if (c.failed()) {
            out.verdict = Verdict::Fail;
        }
    }
    out.with_note("worst of " + std::to_string(checked) + " cells" +
                  (skipped ? ", " + std::to_string(skipped) + " skipped" : std::string{}));
    return out;
}

}  // namespace wvlab
