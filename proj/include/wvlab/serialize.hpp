#pragma once

#include <ostream>
#include <string>

#include "json.hpp"

#include "wvlab/quantum.hpp"
#include "wvlab/report.hpp"
#include "wvlab/uncertainty.hpp"
#include "wvlab/weak_statistics.hpp"
#include "wvlab/weak_values.hpp"

// JSON layout. Complex numbers are [re, im] pairs; matrices are
//   {"rows": r, "cols": c, "data": [[re, im], ...]}   (row-major)
// states are
//   {"kind": "pure",  "dim": d, "vector": [[re, im], ...]}
//   {"kind": "mixed", "dim": d, "matrix": <matrix>}
// observables are {"matrix": <matrix>, "hermitian": bool} and measurements
//   {"kind": "rank1_projective" | "projective" | "general_povm",
//    "labels": [...], "elements": [<matrix>, ...]}

namespace wvlab {

using json = nlohmann::json;

json complex_to_json(Complex z);
Complex complex_from_json(const json &j);

json to_json(const Matrix &m);
Matrix matrix_from_json(const json &j);

json to_json(std::span<const Complex> v);
Ket ket_from_json(const json &j);

json to_json(const QuantumState &s);
QuantumState state_from_json(const json &j);

json to_json(const Observable &o);
Observable observable_from_json(const json &j);

json to_json(const MeasurementModel &m);
MeasurementModel measurement_from_json(const json &j);

json to_json(const RelationReport &r);
json to_json(const WeakValueTable &t);
json to_json(const TripleProductInstance &t);

/// %.17g, so values round-trip exactly.
std::string format_double(double x);

/// Header label,re,im,probability,defined.
void write_csv(std::ostream &os, const WeakValueTable &t);
/// Header curve_id,u,v.
void write_csv(std::ostream &os, const std::vector<Curve> &curves);
/// Header a_label,b_label,p_w,I,p_s. Pass an empty strong grid to leave the
/// p_s column blank.
void write_grid_csv(std::ostream &os, const MeasurementModel &a, const MeasurementModel &b,
                    const WeakJointDistribution &weak, const IncompatibilityProfile &inc, const Grid *strong);
json grids_to_json(const MeasurementModel &a, const MeasurementModel &b, const WeakJointDistribution &weak,
                   const IncompatibilityProfile &inc, const Grid *strong);

}  // namespace wvlab
