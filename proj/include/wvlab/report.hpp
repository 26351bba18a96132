#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wvlab/matrix.hpp"

namespace wvlab {

/// Default additive tolerance for inequality verdicts.
inline constexpr double kRelationTol = 1e-9;
/// |slack| at or below this marks a passing inequality as saturated.
inline constexpr double kSaturationBand = 1e-7;

enum class Verdict { Pass, Fail, Saturated, Skipped, Inconclusive };

std::string_view to_string(Verdict v);

/// Verdict record for one checked identity or inequality.
///
/// Inequalities are stored as lhs <= rhs with slack = rhs - lhs. Identities
/// store slack = -|lhs - rhs|. Either way a negative slack beyond tol fails.
struct RelationReport {
    enum class Form { Identity, Inequality, Note };

    std::string relation_id;
    Form form = Form::Note;
    Complex lhs{};
    Complex rhs{};
    /// True when lhs/rhs are genuinely complex (serialised as [re, im]).
    bool complex_valued = false;
    double slack = 0.0;
    double tol = kRelationTol;
    Verdict verdict = Verdict::Skipped;
    std::uint64_t instance_seed = 0;
    std::string notes;

    static RelationReport identity(std::string id, Complex lhs, Complex rhs, double tol, bool complex_valued = false);
    static RelationReport inequality(std::string id, double lhs, double rhs, double tol = kRelationTol);
    /// Pass/fail for a boolean property (implication, biconditional).
    static RelationReport boolean(std::string id, bool holds, std::string notes = {});
    static RelationReport skipped(std::string id, std::string notes);
    static RelationReport inconclusive(std::string id, std::string notes);

    bool failed() const noexcept {
        return verdict == Verdict::Fail;
    }
    /// True for pass or saturated.
    bool held() const noexcept {
        return verdict == Verdict::Pass || verdict == Verdict::Saturated;
    }
    /// |lhs - rhs|
    double residual() const {
        return std::abs(lhs - rhs);
    }

    RelationReport &with_seed(std::uint64_t seed) {
        instance_seed = seed;
        return *this;
    }
    RelationReport &with_note(std::string_view note);
    /// Forces a failure with an explanatory note.
    RelationReport &fail_with(std::string_view note);
};

using ReportBundle = std::vector<RelationReport>;

/// First report in the bundle with the given id; throws std::out_of_range.
const RelationReport &find_report(const ReportBundle &bundle, std::string_view id);

/// Fold per-cell checks into one report keeping the worst slack. All
/// reports must share the same form.
RelationReport worst_of(std::string id, const ReportBundle &cells);

}  // namespace wvlab
