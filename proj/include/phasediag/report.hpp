/*
 * Copyright 2026 The phasediag Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Diagram reports: a JSON document with exact rationals as "p/q" strings,
// and a flat CSV rendering.

#include "phasediag/diagram.hpp"
#include "phasediag/errors.hpp"
#include "phasediag/geometry.hpp"
#include "phasediag/rational.hpp"

#include <json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace phasediag {

struct ReportRow {
    Vector coeffs;
    Rational rhs = 0;
    bool equality = false;

    friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct ReportCell {
    std::vector<std::string> policies;
    std::vector<std::size_t> policy_indices;
    long dimension = -1;
    bool full_dimensional = false;
    std::vector<ReportRow> rows;
    std::string throughput_status;
    std::vector<Vector> throughput;  // one row per counter, over the parameters; empty when undetermined
    std::vector<Vector> vertices;    // section at normalize = 1, when requested

    friend bool operator==(const ReportCell&, const ReportCell&) = default;
};

struct DiagramReport {
    std::string model;
    Bindings bindings;
    std::vector<std::string> parameters;
    std::vector<std::string> counters;
    std::optional<std::string> normalize;
    Rational box = 0;
    std::vector<ReportCell> cells;
    DiagramStats stats;

    friend bool operator==(const DiagramReport& a, const DiagramReport& b) {
        return a.model == b.model && a.bindings == b.bindings && a.parameters == b.parameters &&
               a.counters == b.counters && a.normalize == b.normalize && a.box == b.box && a.cells == b.cells &&
               a.stats.total == b.stats.total && a.stats.strictly_feasible == b.stats.strictly_feasible &&
               a.stats.full_dimensional == b.stats.full_dimensional &&
               a.stats.distinct_full_dimensional == b.stats.distinct_full_dimensional &&
               a.stats.distinct == b.stats.distinct;
    }
};

struct ReportOptions {
    bool full_dim_only = false;
    std::optional<std::string> normalize;  // parameter fixed to 1 for vertex output
    Rational box = 10;                     // other parameters bounded by [0, box]
};

/// Vertices of cell ∩ {param = 1} ∩ [0, box]^rest.
inline std::vector<Vector> section_vertices(const HPolyhedron& cell, const std::string& param, const Rational& box) {
    const auto idx = cell.index_of(param);
    if (idx < 0) throw InvalidInput("normalize: unknown parameter '" + param + "'");
    const auto k = static_cast<std::size_t>(idx);
    HPolyhedron p = cell;
    p.add_eq(p.unit(k), 1);
    for (std::size_t j = 0; j < p.dim(); ++j) {
        if (j == k) continue;
        p.add_ineq(p.unit(j, -1), 0);
        p.add_ineq(p.unit(j), box);
    }
    return vertices(p);
}

inline DiagramReport make_report(const std::string& model, const Bindings& bindings, const PWLDynamics& dyn,
                                 const PhaseDiagram& d, const ReportOptions& opt = {}) {
    DiagramReport r;
    r.model = model;
    r.bindings = bindings;
    r.parameters = d.parameters;
    for (const auto& c : dyn.counters) r.counters.push_back(c.name);
    r.normalize = opt.normalize;
    if (opt.normalize) r.box = opt.box;
    r.stats = d.stats;
    for (const auto& cell : d.cells) {
        if (opt.full_dim_only && !cell.full_dimensional()) continue;
        ReportCell rc;
        for (const auto& p : cell.policies) rc.policies.push_back(to_string(p));
        rc.policy_indices = cell.policy_indices;
        rc.dimension = cell.dimension;
        rc.full_dimensional = cell.full_dimensional();
        for (const auto& e : cell.closure.eq_rows) rc.rows.push_back({e.coeffs, e.rhs, true});
        for (const auto& e : cell.closure.ineq_rows) rc.rows.push_back({e.coeffs, e.rhs, false});
        rc.throughput_status = to_string(cell.status);
        if (cell.throughput)
            for (std::size_t i = 0; i < cell.throughput->T.rows(); ++i) rc.throughput.push_back(cell.throughput->T.row(i));
        if (opt.normalize) rc.vertices = section_vertices(cell.closure, *opt.normalize, opt.box);
        r.cells.push_back(std::move(rc));
    }
    return r;
}

namespace detail {

inline nlohmann::json to_json(const Vector& v) {
    auto out = nlohmann::json::array();
    for (const auto& q : v) out.push_back(to_string(q));
    return out;
}

inline Rational rational_from_json(const nlohmann::json& j) {
    if (!j.is_string()) throw SchemaError("report: expected a rational string");
    auto q = try_parse_rational(j.get<std::string>());
    if (!q) throw SchemaError("report: bad rational '" + j.get<std::string>() + "'");
    return *q;
}

inline Vector vector_from_json(const nlohmann::json& j) {
    Vector v;
    for (const auto& e : j) v.push_back(rational_from_json(e));
    return v;
}

} // namespace detail

inline nlohmann::json to_json(const DiagramReport& r) {
    using nlohmann::json;
    json j;
    j["model"] = r.model;
    json b = json::object();
    for (const auto& [k, v] : r.bindings) b[k] = to_string(v);
    j["bindings"] = b;
    j["parameters"] = r.parameters;
    j["counters"] = r.counters;
    if (r.normalize) {
        j["normalize"] = *r.normalize;
        j["box"] = to_string(r.box);
    }
    j["stats"] = {{"total", r.stats.total},
                  {"strictly_feasible", r.stats.strictly_feasible},
                  {"full_dimensional", r.stats.full_dimensional},
                  {"distinct_full_dimensional", r.stats.distinct_full_dimensional},
                  {"distinct", r.stats.distinct}};
    json cells = json::array();
    for (const auto& c : r.cells) {
        json jc;
        jc["policies"] = c.policies;
        jc["policy_indices"] = c.policy_indices;
        jc["dimension"] = c.dimension;
        jc["full_dimensional"] = c.full_dimensional;
        json rows = json::array();
        for (const auto& row : c.rows)
            rows.push_back({{"coeffs", detail::to_json(row.coeffs)}, {"rhs", to_string(row.rhs)},
                            {"kind", row.equality ? "=" : "<="}});
        jc["rows"] = rows;
        jc["throughput_status"] = c.throughput_status;
        json t = json::array();
        for (const auto& row : c.throughput) t.push_back(detail::to_json(row));
        jc["throughput"] = t;
        if (r.normalize) {
            json v = json::array();
            for (const auto& p : c.vertices) v.push_back(detail::to_json(p));
            jc["vertices"] = v;
        }
        cells.push_back(jc);
    }
    j["cells"] = cells;
    return j;
}

inline DiagramReport report_from_json(const nlohmann::json& j) {
    try {
        DiagramReport r;
        r.model = j.at("model").get<std::string>();
        for (const auto& [k, v] : j.at("bindings").items()) r.bindings[k] = detail::rational_from_json(v);
        r.parameters = j.at("parameters").get<std::vector<std::string>>();
        r.counters = j.at("counters").get<std::vector<std::string>>();
        if (j.contains("normalize")) {
            r.normalize = j.at("normalize").get<std::string>();
            r.box = detail::rational_from_json(j.at("box"));
        }
        const auto& s = j.at("stats");
        r.stats.total = s.at("total").get<std::size_t>();
        r.stats.strictly_feasible = s.at("strictly_feasible").get<std::size_t>();
        r.stats.full_dimensional = s.at("full_dimensional").get<std::size_t>();
        r.stats.distinct_full_dimensional = s.at("distinct_full_dimensional").get<std::size_t>();
        r.stats.distinct = s.at("distinct").get<std::size_t>();
        for (const auto& jc : j.at("cells")) {
            ReportCell c;
            c.policies = jc.at("policies").get<std::vector<std::string>>();
            c.policy_indices = jc.at("policy_indices").get<std::vector<std::size_t>>();
            c.dimension = jc.at("dimension").get<long>();
            c.full_dimensional = jc.at("full_dimensional").get<bool>();
            for (const auto& row : jc.at("rows")) {
                auto kind = row.at("kind").get<std::string>();
                if (kind != "=" && kind != "<=") throw SchemaError("report: bad row kind '" + kind + "'");
                c.rows.push_back({detail::vector_from_json(row.at("coeffs")), detail::rational_from_json(row.at("rhs")),
                                  kind == "="});
            }
            c.throughput_status = jc.at("throughput_status").get<std::string>();
            for (const auto& row : jc.at("throughput")) c.throughput.push_back(detail::vector_from_json(row));
            if (jc.contains("vertices"))
                for (const auto& v : jc.at("vertices")) c.vertices.push_back(detail::vector_from_json(v));
            r.cells.push_back(std::move(c));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError(std::string("report: ") + e.what());
    }
}

inline std::string format_row(const ReportRow& row, const std::vector<std::string>& names) {
    std::string lhs;
    for (std::size_t j = 0; j < row.coeffs.size(); ++j) {
        const auto& c = row.coeffs[j];
        if (c == 0) continue;
        if (lhs.empty())
            lhs += c < 0 ? "-" : "";
        else
            lhs += c < 0 ? " - " : " + ";
        Rational a = abs(c);
        if (a != 1) lhs += to_string(a) + "*";
        lhs += names[j];
    }
    if (lhs.empty()) lhs = "0";
    return lhs + (row.equality ? " = " : " <= ") + to_string(row.rhs);
}

/// One line per (cell, counter) with the throughput formula, plus the cell rows.
inline std::string to_csv(const DiagramReport& r) {
    std::ostringstream out;
    out << "cell,policies,dimension,full_dimensional,counter,throughput,rows\n";
    auto quote = [](const std::string& s) { return "\"" + s + "\""; };
    for (std::size_t k = 0; k < r.cells.size(); ++k) {
        const auto& c = r.cells[k];
        std::string pols, rows;
        for (const auto& p : c.policies) pols += (pols.empty() ? "" : " ") + std::string("[") + p + "]";
        for (const auto& row : c.rows) rows += (rows.empty() ? "" : "; ") + format_row(row, r.parameters);
        for (std::size_t i = 0; i < r.counters.size(); ++i) {
            std::string formula = c.throughput.empty() ? c.throughput_status
                                                       : format_row({c.throughput[i], 0, false}, r.parameters);
            if (!c.throughput.empty()) formula = formula.substr(0, formula.find(" <= "));
            out << k << "," << quote(pols) << "," << c.dimension << "," << (c.full_dimensional ? 1 : 0) << ","
                << r.counters[i] << "," << quote(formula) << "," << quote(rows) << "\n";
        }
    }
    return out.str();
}

} // namespace phasediag
