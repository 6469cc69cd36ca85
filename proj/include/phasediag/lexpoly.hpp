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

// Lexicographic polyhedra in standard form
//
//     A x + s = b,   s_i = (s_i^1, ..., s_i^{d_i}) >=_lex 0   for each group i,
//
// plus optional hard equalities on x. A front f marks, per group, how many
// leading slacks are known to vanish on the whole lex-polyhedron.

#include "phasediag/errors.hpp"
#include "phasediag/lp.hpp"
#include "phasediag/polyhedron.hpp"

#include <cassert>
#include <string>
#include <vector>

namespace phasediag {

struct LexSF {
    std::vector<std::string> x_vars;
    std::vector<std::size_t> depths;           // d_i, one per group
    std::vector<std::string> group_labels;     // optional, one per group
    RationalMatrix A;                          // D × N, slack rows in group order
    Vector b;                                  // length D
    std::vector<Constraint> equalities;        // hard equalities over x
    std::vector<std::size_t> sign_groups;      // group realizing rho_i >= 0, per counter (may be empty)

    std::size_t num_x() const { return x_vars.size(); }
    std::size_t num_groups() const { return depths.size(); }

    std::size_t total_depth() const {
        std::size_t d = 0;
        for (auto di : depths) d += di;
        return d;
    }

    /// Row of A holding slack s_i^j (j is 1-based).
    std::size_t slack_row(std::size_t group, std::size_t j) const {
        std::size_t off = 0;
        for (std::size_t g = 0; g < group; ++g) off += depths[g];
        return off + j - 1;
    }

    std::vector<std::string> slack_names() const {
        std::vector<std::string> out;
        for (std::size_t g = 0; g < depths.size(); ++g)
            for (std::size_t j = 1; j <= depths[g]; ++j)
                out.push_back("s" + std::to_string(g + 1) + "_" + std::to_string(j));
        return out;
    }

    void validate() const {
        const std::size_t d = total_depth();
        if (A.rows() != d || b.size() != d || A.cols() != x_vars.size())
            throw InvariantViolation("LexSF: shape of A, b does not match depths and variables");
        for (auto di : depths)
            if (di == 0) throw InvariantViolation("LexSF: empty slack group");
        for (const auto& e : equalities)
            if (e.coeffs.size() != x_vars.size()) throw InvariantViolation("LexSF: equality width mismatch");
    }
};

/// f_i in {1, ..., d_i + 1}; slacks s_i^j with j < f_i are pinned to zero.
using Front = std::vector<std::size_t>;

inline Front initial_front(const LexSF& sf) { return Front(sf.num_groups(), 1); }

inline Front top_front(const LexSF& sf) {
    Front f(sf.num_groups());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = sf.depths[i] + 1;
    return f;
}

inline bool valid_front(const LexSF& sf, const Front& f) {
    if (f.size() != sf.num_groups()) return false;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (f[i] < 1 || f[i] > sf.depths[i] + 1) return false;
    return true;
}

inline std::string to_string(const Front& f) {
    std::string out = "(";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(f[i]);
    }
    return out + ")";
}

/// The polyhedron {A x + s = b, s^{<f} = 0, s^f >= 0} over (x, s).
inline HPolyhedron front_polyhedron(const LexSF& sf, const Front& f) {
    assert(valid_front(sf, f));
    const std::size_t n = sf.num_x();
    const std::size_t d = sf.total_depth();
    auto vars = sf.x_vars;
    auto slacks = sf.slack_names();
    vars.insert(vars.end(), slacks.begin(), slacks.end());
    HPolyhedron p(std::move(vars));
    for (std::size_t r = 0; r < d; ++r) {
        Vector row(n + d, Rational(0));
        for (std::size_t j = 0; j < n; ++j) row[j] = sf.A(r, j);
        row[n + r] = 1;
        p.add_eq(std::move(row), sf.b[r]);
    }
    for (const auto& e : sf.equalities) {
        Vector row(n + d, Rational(0));
        std::copy(e.coeffs.begin(), e.coeffs.end(), row.begin());
        p.add_eq(std::move(row), e.rhs);
    }
    for (std::size_t g = 0; g < sf.num_groups(); ++g) {
        for (std::size_t j = 1; j < f[g]; ++j) p.add_eq(p.unit(n + sf.slack_row(g, j)), 0);
        if (f[g] <= sf.depths[g]) p.add_ineq(p.unit(n + sf.slack_row(g, f[g]), -1), 0);
    }
    return p;
}

/// Same set as front_polyhedron, with the slacks eliminated (s = b - A x).
inline HPolyhedron front_polyhedron_x(const LexSF& sf, const Front& f) {
    assert(valid_front(sf, f));
    HPolyhedron p(sf.x_vars);
    for (const auto& e : sf.equalities) p.add_eq(e.coeffs, e.rhs);
    for (std::size_t g = 0; g < sf.num_groups(); ++g) {
        for (std::size_t j = 1; j < f[g]; ++j) {
            std::size_t r = sf.slack_row(g, j);
            p.add_eq(sf.A.row(r), sf.b[r]);
        }
        if (f[g] <= sf.depths[g]) {
            std::size_t r = sf.slack_row(g, f[g]);
            p.add_ineq(sf.A.row(r), sf.b[r]);
        }
    }
    return p;
}

struct MaxFrontResult {
    Front front;
    std::vector<Front> trace;   // fronts visited, starting at all-ones
    std::size_t lp_calls = 0;
    std::size_t sweeps = 0;
};

/// Greatest front whose polyhedron contains the lex-polyhedron. Each sweep
/// maximizes the current leading slack of every unfinished group and advances,
/// all at once, the groups whose supremum is <= 0 (or whose polyhedron is empty).
inline MaxFrontResult compute_max_front(const LexSF& sf) {
    MaxFrontResult out;
    Front f = initial_front(sf);
    out.trace.push_back(f);
    while (true) {
        ++out.sweeps;
        LPSession session(front_polyhedron_x(sf, f));
        const bool nonempty = session.feasible();
        std::vector<std::size_t> advance;
        for (std::size_t g = 0; g < sf.num_groups(); ++g) {
            if (f[g] > sf.depths[g]) continue;
            ++out.lp_calls;
            if (!nonempty) {
                advance.push_back(g);
                continue;
            }
            // s = b_r - A_r x, so sup s = b_r - inf A_r x
            std::size_t r = sf.slack_row(g, f[g]);
            Vector obj = sf.A.row(r);
            LPResult res = session.optimize(obj, Sense::minimize);
            if (res.status == LPStatus::bounded && sf.b[r] - res.value <= 0) advance.push_back(g);
        }
        if (advance.empty()) break;
        for (auto g : advance) ++f[g];
        out.trace.push_back(f);
    }
    out.front = f;
    return out;
}

inline bool lex_is_empty(const LexSF& sf) {
    return !lp_is_feasible(front_polyhedron(sf, compute_max_front(sf).front));
}

/// Closure of the lex-polyhedron, as the max-front polyhedron over (x, s).
/// Its relative interior is obtained by making every inequality row strict.
struct LexClosure {
    Front front;
    HPolyhedron polyhedron;
    bool empty = false;
};

inline LexClosure lex_closure(const LexSF& sf) {
    LexClosure c;
    c.front = compute_max_front(sf).front;
    c.polyhedron = front_polyhedron(sf, c.front);
    c.empty = !lp_is_feasible(c.polyhedron);
    return c;
}

/// Membership of x in the lex-polyhedron (hard equalities and every group
/// lex-nonnegative), with s = b - A x.
inline bool lex_contains(const LexSF& sf, const Vector& x) {
    for (const auto& e : sf.equalities)
        if (e.evaluate(x) != e.rhs) return false;
    for (std::size_t g = 0; g < sf.num_groups(); ++g) {
        for (std::size_t j = 1; j <= sf.depths[g]; ++j) {
            std::size_t r = sf.slack_row(g, j);
            Rational s = sf.b[r];
            for (std::size_t k = 0; k < sf.num_x(); ++k)
                if (sf.A(r, k) != 0) s -= sf.A(r, k) * x[k];
            if (s > 0) break;
            if (s < 0) return false;
        }
    }
    return true;
}

} // namespace phasediag
