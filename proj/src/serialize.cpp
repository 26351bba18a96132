#include "wvlab/serialize.hpp"

#include <cstdio>

#include "wvlab/error.hpp"

namespace wvlab {

namespace {

json grid_to_json(const Grid &g) {
    json rows = json::array();
    for (std::size_t i = 0; i < g.rows; ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < g.cols; ++j) {
            row.push_back(g(i, j));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json &j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorKind::InvalidArgument, "complex entries must be [re, im] pairs");
    }
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const Matrix &m) {
    json data = json::array();
    for (const auto &z : m.data()) {
        data.push_back(complex_to_json(z));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const json &j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto &data = j.at("data");
    std::vector<Complex> entries;
    entries.reserve(data.size());
    for (const auto &z : data) {
        entries.push_back(complex_from_json(z));
    }
    return Matrix(rows, cols, std::move(entries));
}

json to_json(std::span<const Complex> v) {
    json out = json::array();
    for (const auto &z : v) {
        out.push_back(complex_to_json(z));
    }
    return out;
}

Ket ket_from_json(const json &j) {
    Ket out;
    for (const auto &z : j) {
        out.push_back(complex_from_json(z));
    }
    return out;
}

json to_json(const QuantumState &s) {
    if (s.is_pure()) {
        return {{"kind", "pure"}, {"dim", s.dim()}, {"vector", to_json(std::span<const Complex>(s.ket()))}};
    }
    return {{"kind", "mixed"}, {"dim", s.dim()}, {"matrix", to_json(s.density())}};
}

QuantumState state_from_json(const json &j) {
    const auto kind = j.at("kind").get<std::string>();
    QuantumState s = [&] {
        if (kind == "pure") {
            return QuantumState::pure(ket_from_json(j.at("vector")));
        }
        if (kind == "mixed") {
            return QuantumState::mixed(matrix_from_json(j.at("matrix")));
        }
        throw Error(ErrorKind::InvalidState, "unknown state kind '" + kind + "'");
    }();
    if (j.contains("dim") && j.at("dim").get<std::size_t>() != s.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "declared dim does not match the data");
    }
    return s;
}

json to_json(const Observable &o) {
    return {{"matrix", to_json(o.matrix())}, {"hermitian", o.hermitian()}};
}

Observable observable_from_json(const json &j) {
    return Observable(matrix_from_json(j.at("matrix")));
}

json to_json(const MeasurementModel &m) {
    json elements = json::array();
    for (const auto &e : m.elements()) {
        elements.push_back(to_json(e));
    }
    return {{"kind", std::string(to_string(m.kind()))}, {"labels", m.labels()}, {"elements", std::move(elements)}};
}

MeasurementModel measurement_from_json(const json &j) {
    std::vector<Matrix> elements;
    for (const auto &e : j.at("elements")) {
        elements.push_back(matrix_from_json(e));
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        labels = j.at("labels").get<std::vector<std::string>>();
    }
    auto m = MeasurementModel::from_elements(std::move(elements), std::move(labels));
    if (j.contains("kind") && j.at("kind").get<std::string>() != to_string(m.kind())) {
        throw Error(ErrorKind::InvalidMeasurement,
                    "declared kind " + j.at("kind").get<std::string>() + " but elements are " +
                        std::string(to_string(m.kind())));
    }
    return m;
}

json to_json(const RelationReport &r) {
    json out;
    out["relation_id"] = r.relation_id;
    if (r.complex_valued) {
        out["lhs"] = complex_to_json(r.lhs);
        out["rhs"] = complex_to_json(r.rhs);
    } else {
        out["lhs"] = r.lhs.real();
        out["rhs"] = r.rhs.real();
    }
    out["slack"] = r.slack;
    out["verdict"] = std::string(to_string(r.verdict));
    out["seed"] = r.instance_seed;
    if (!r.notes.empty()) {
        out["notes"] = r.notes;
    }
    return out;
}

json to_json(const WeakValueTable &t) {
    json rows = json::array();
    for (const auto &r : t.rows) {
        json row = {{"label", r.label}, {"probability", r.probability}, {"defined", r.defined}};
        row["weak_value"] = r.defined ? complex_to_json(r.weak_value) : json(nullptr);
        rows.push_back(std::move(row));
    }
    return {{"observable_id", t.observable_id}, {"measurement_id", t.measurement_id}, {"rows", std::move(rows)}};
}

json to_json(const TripleProductInstance &t) {
    return {{"dim", t.dim},
            {"trial", t.trial},
            {"seed", t.seed},
            {"A", to_json(t.a)},
            {"B", to_json(t.b)},
            {"C", to_json(t.c)},
            {"psi", to_json(std::span<const Complex>(t.psi))},
            {"basis", to_json(t.basis)},
            {"weak_side", complex_to_json(t.weak_side)},
            {"quantum_side", complex_to_json(t.quantum_side)},
            {"discrepancy", t.discrepancy}};
}

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_csv(std::ostream &os, const WeakValueTable &t) {
    os << "label,re,im,probability,defined\n";
    for (const auto &r : t.rows) {
        os << r.label << ',' << format_double(r.weak_value.real()) << ',' << format_double(r.weak_value.imag()) << ','
           << format_double(r.probability) << ',' << (r.defined ? "true" : "false") << '\n';
    }
}

void write_csv(std::ostream &os, const std::vector<Curve> &curves) {
    os << "curve_id,u,v\n";
    for (const auto &c : curves) {
        for (const auto &[u, v] : c.points) {
            os << c.id << ',' << format_double(u) << ',' << format_double(v) << '\n';
        }
    }
}

void write_grid_csv(std::ostream &os, const MeasurementModel &a, const MeasurementModel &b,
                    const WeakJointDistribution &weak, const IncompatibilityProfile &inc, const Grid *strong) {
    os << "a_label,b_label,p_w,I,p_s\n";
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < b.size(); ++j) {
            os << a.labels()[i] << ',' << b.labels()[j] << ',' << format_double(weak.joint(i, j)) << ','
               << format_double(inc.cells(i, j)) << ',';
            if (strong != nullptr) {
                os << format_double((*strong)(i, j));
            }
            os << '\n';
        }
    }
}

json grids_to_json(const MeasurementModel &a, const MeasurementModel &b, const WeakJointDistribution &weak,
                   const IncompatibilityProfile &inc, const Grid *strong) {
    json out = {{"a_labels", a.labels()},
                {"b_labels", b.labels()},
                {"p_w", grid_to_json(weak.joint)},
                {"I", grid_to_json(inc.cells)},
                {"p_a", weak.p_a},
                {"p_b", weak.p_b},
                {"weak_purity", weak.weak_purity},
                {"anomaly_l1", weak.anomaly_l1},
                {"incompatibility", inc.total},
                {"quantum_purity", inc.quantum_purity}};
    if (strong != nullptr) {
        out["p_s"] = grid_to_json(*strong);
    }
    return out;
}

}  // namespace wvlab
