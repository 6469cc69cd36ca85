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

// Exact services on ordinary H-polyhedra: projection, affine hull, equality
// and inclusion tests, a canonical form, and vertex lists of bounded sections.

#include "phasediag/errors.hpp"
#include "phasediag/lp.hpp"
#include "phasediag/matrix.hpp"
#include "phasediag/polyhedron.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace phasediag {

namespace detail {

/// Scales a constraint to coprime integers, keeping its direction.
inline void make_primitive(Constraint& c) {
    Vector all = c.coeffs;
    all.push_back(c.rhs);
    Rational s = primitive_scale(all);
    for (auto& v : c.coeffs) v *= s;
    c.rhs *= s;
}

/// Equality rows additionally get a positive leading coefficient.
inline void make_primitive_eq(Constraint& c) {
    make_primitive(c);
    for (const auto& v : c.coeffs) {
        if (v == 0) continue;
        if (v < 0) {
            for (auto& w : c.coeffs) w = -w;
            c.rhs = -c.rhs;
        }
        break;
    }
}

inline bool constraint_less(const Constraint& a, const Constraint& b) {
    for (std::size_t j = 0; j < a.coeffs.size(); ++j)
        if (a.coeffs[j] != b.coeffs[j]) return a.coeffs[j] < b.coeffs[j];
    return a.rhs < b.rhs;
}

inline HPolyhedron empty_polyhedron(std::vector<std::string> vars) {
    HPolyhedron p(std::move(vars));
    p.add_ineq(Vector(p.dim(), Rational(0)), -1);
    return p;
}

/// Drops zero rows and duplicates; returns false when a zero row is violated.
inline bool tidy_rows(std::vector<Constraint>& rows) {
    std::vector<Constraint> out;
    for (auto& r : rows) {
        if (r.is_trivial()) {
            if (r.rhs < 0) return false;
            continue;
        }
        make_primitive(r);
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), constraint_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    // parallel rows: keep the tightest
    std::vector<Constraint> kept;
    for (auto& r : out) {
        if (!kept.empty() && kept.back().coeffs == r.coeffs) {
            if (r.rhs < kept.back().rhs) kept.back().rhs = r.rhs;
            continue;
        }
        kept.push_back(std::move(r));
    }
    rows = std::move(kept);
    return true;
}

} // namespace detail

/// Inequality rows implied by the rest are dropped one at a time, in order.
/// Returns false when the polyhedron is empty.
inline bool remove_redundant_rows(HPolyhedron& p) {
    if (!lp_is_feasible(p)) return false;
    std::size_t i = 0;
    while (i < p.ineq_rows.size()) {
        HPolyhedron rest(p.variables);
        rest.eq_rows = p.eq_rows;
        for (std::size_t k = 0; k < p.ineq_rows.size(); ++k)
            if (k != i) rest.ineq_rows.push_back(p.ineq_rows[k]);
        auto res = lp_optimize(rest, p.ineq_rows[i].coeffs);
        if (res.status == LPStatus::bounded && res.value <= p.ineq_rows[i].rhs)
            p.ineq_rows.erase(p.ineq_rows.begin() + static_cast<std::ptrdiff_t>(i));
        else
            ++i;
    }
    return true;
}

/// Coordinate projection onto the variables in `keep` (kept in that order).
/// Equalities eliminate what they can; Fourier-Motzkin does the rest, with
/// redundant rows pruned by LP along the way.
inline HPolyhedron project(const HPolyhedron& poly, const std::vector<std::string>& keep) {
    const std::size_t n = poly.dim();
    std::vector<std::size_t> keep_idx;
    std::vector<bool> kept(n, false);
    for (const auto& k : keep) {
        auto j = poly.index_of(k);
        if (j < 0) throw InvalidInput("projection onto unknown variable '" + k + "'");
        keep_idx.push_back(static_cast<std::size_t>(j));
        kept[static_cast<std::size_t>(j)] = true;
    }
    // column order: eliminated variables first, so equalities pivot on them
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j)
        if (!kept[j]) order.push_back(j);
    const std::size_t n_elim = order.size();
    order.insert(order.end(), keep_idx.begin(), keep_idx.end());

    RationalMatrix aug(poly.eq_rows.size(), n + 1);
    for (std::size_t i = 0; i < poly.eq_rows.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = poly.eq_rows[i].coeffs[order[j]];
        aug(i, n) = poly.eq_rows[i].rhs;
    }
    auto pivots = rref(aug, n);
    for (std::size_t i = pivots.size(); i < aug.rows(); ++i)
        if (aug(i, n) != 0) return detail::empty_polyhedron(keep);

    // inequalities in permuted coordinates
    std::vector<Constraint> rows;
    for (const auto& r : poly.ineq_rows) {
        Constraint c{Vector(n), r.rhs};
        for (std::size_t j = 0; j < n; ++j) c.coeffs[j] = r.coeffs[order[j]];
        rows.push_back(std::move(c));
    }
    std::vector<Constraint> kept_eqs;
    std::vector<bool> eliminated(n, false);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        const std::size_t p = pivots[r];
        if (p < n_elim) {
            eliminated[p] = true;
            for (auto& c : rows) {
                if (c.coeffs[p] == 0) continue;
                Rational f = c.coeffs[p];
                for (std::size_t j = 0; j < n; ++j)
                    if (aug(r, j) != 0) c.coeffs[j] -= f * aug(r, j);
                c.rhs -= f * aug(r, n);
            }
        } else {
            Constraint e{Vector(n), aug(r, n)};
            for (std::size_t j = 0; j < n; ++j) e.coeffs[j] = aug(r, j);
            kept_eqs.push_back(std::move(e));
        }
    }
    if (!detail::tidy_rows(rows)) return detail::empty_polyhedron(keep);

    auto as_poly = [&](const std::vector<Constraint>& ineqs) {
        HPolyhedron p(std::vector<std::string>(n, ""));
        for (std::size_t j = 0; j < n; ++j) p.variables[j] = "v" + std::to_string(j);
        p.eq_rows = kept_eqs;
        p.ineq_rows = ineqs;
        return p;
    };

    std::vector<std::size_t> pending;
    for (std::size_t j = 0; j < n_elim; ++j)
        if (!eliminated[j]) pending.push_back(j);
    while (!pending.empty()) {
        // cheapest variable first
        std::size_t best = 0;
        long best_cost = -1;
        for (std::size_t k = 0; k < pending.size(); ++k) {
            long pos = 0, neg = 0;
            for (const auto& c : rows) {
                if (c.coeffs[pending[k]] > 0) ++pos;
                if (c.coeffs[pending[k]] < 0) ++neg;
            }
            long cost = pos * neg - pos - neg;
            if (best_cost == -1 || cost < best_cost) {
                best_cost = cost;
                best = k;
            }
        }
        const std::size_t v = pending[best];
        pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
        std::vector<Constraint> pos, neg, next;
        for (auto& c : rows) {
            if (c.coeffs[v] > 0)
                pos.push_back(c);
            else if (c.coeffs[v] < 0)
                neg.push_back(c);
            else
                next.push_back(c);
        }
        for (const auto& a : pos)
            for (const auto& b : neg) {
                Rational fa = -b.coeffs[v];
                Rational fb = a.coeffs[v];
                Constraint c{Vector(n), fa * a.rhs + fb * b.rhs};
                for (std::size_t j = 0; j < n; ++j) c.coeffs[j] = fa * a.coeffs[j] + fb * b.coeffs[j];
                c.coeffs[v] = 0;
                next.push_back(std::move(c));
            }
        if (!detail::tidy_rows(next)) return detail::empty_polyhedron(keep);
        const std::size_t before = rows.size();
        rows = std::move(next);
        if (rows.size() > before || rows.size() > 4 * n) {
            auto p = as_poly(rows);
            if (!remove_redundant_rows(p)) return detail::empty_polyhedron(keep);
            rows = std::move(p.ineq_rows);
        }
    }

    HPolyhedron out(keep);
    auto restrict_row = [&](const Constraint& c) {
        Constraint r{Vector(keep.size()), c.rhs};
        for (std::size_t k = 0; k < keep.size(); ++k) r.coeffs[k] = c.coeffs[n_elim + k];
        return r;
    };
    for (const auto& e : kept_eqs) out.eq_rows.push_back(restrict_row(e));
    for (const auto& c : rows) out.ineq_rows.push_back(restrict_row(c));
    if (!remove_redundant_rows(out)) return detail::empty_polyhedron(keep);
    return out;
}

struct AffineHull {
    std::vector<std::size_t> implicit_equalities;  // indices into ineq_rows
    long dimension = -1;
};

inline AffineHull affine_hull_dimension(const HPolyhedron& poly) {
    AffineHull out;
    LPSession session(poly);
    if (!session.feasible()) return out;
    for (std::size_t i = 0; i < poly.ineq_rows.size(); ++i) {
        auto res = session.optimize(poly.ineq_rows[i].coeffs, Sense::minimize);
        if (res.status == LPStatus::bounded && res.value == poly.ineq_rows[i].rhs) out.implicit_equalities.push_back(i);
    }
    RationalMatrix e(poly.eq_rows.size() + out.implicit_equalities.size(), poly.dim());
    std::size_t r = 0;
    for (const auto& row : poly.eq_rows) {
        for (std::size_t j = 0; j < poly.dim(); ++j) e(r, j) = row.coeffs[j];
        ++r;
    }
    for (auto i : out.implicit_equalities) {
        for (std::size_t j = 0; j < poly.dim(); ++j) e(r, j) = poly.ineq_rows[i].coeffs[j];
        ++r;
    }
    out.dimension = static_cast<long>(poly.dim()) - static_cast<long>(rank(e));
    return out;
}

inline bool is_empty(const HPolyhedron& poly) { return !lp_is_feasible(poly); }

/// p ⊂ q, by checking every row of q over p.
inline bool includes(const HPolyhedron& q, const HPolyhedron& p) {
    LPSession session(p);
    if (!session.feasible()) return true;
    for (const auto& r : q.eq_rows) {
        auto hi = session.optimize(r.coeffs, Sense::maximize);
        auto lo = session.optimize(r.coeffs, Sense::minimize);
        if (hi.status != LPStatus::bounded || lo.status != LPStatus::bounded) return false;
        if (hi.value != r.rhs || lo.value != r.rhs) return false;
    }
    for (const auto& r : q.ineq_rows) {
        auto hi = session.optimize(r.coeffs, Sense::maximize);
        if (hi.status != LPStatus::bounded || hi.value > r.rhs) return false;
    }
    return true;
}

inline bool poly_equal(const HPolyhedron& p, const HPolyhedron& q) { return includes(q, p) && includes(p, q); }

/// Unique representation of the set: implicit equalities in reduced echelon
/// form, the remaining facets reduced modulo them, primitive and sorted.
inline HPolyhedron canonicalize(const HPolyhedron& poly) {
    const std::size_t n = poly.dim();
    auto hull = affine_hull_dimension(poly);
    if (hull.dimension < 0) return detail::empty_polyhedron(poly.variables);

    std::vector<Constraint> eqs = poly.eq_rows;
    std::vector<bool> implicit(poly.ineq_rows.size(), false);
    for (auto i : hull.implicit_equalities) {
        implicit[i] = true;
        eqs.push_back(poly.ineq_rows[i]);
    }
    RationalMatrix aug(eqs.size(), n + 1);
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = eqs[i].coeffs[j];
        aug(i, n) = eqs[i].rhs;
    }
    auto pivots = rref(aug, n);

    HPolyhedron out(poly.variables);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        Constraint e{aug.row(r), aug(r, n)};
        e.coeffs.pop_back();
        detail::make_primitive_eq(e);
        out.eq_rows.push_back(std::move(e));
    }
    std::vector<Constraint> rows;
    for (std::size_t i = 0; i < poly.ineq_rows.size(); ++i) {
        if (implicit[i]) continue;
        Constraint c = poly.ineq_rows[i];
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            const std::size_t p = pivots[r];
            if (c.coeffs[p] == 0) continue;
            Rational f = c.coeffs[p];
            for (std::size_t j = 0; j < n; ++j)
                if (aug(r, j) != 0) c.coeffs[j] -= f * aug(r, j);
            c.rhs -= f * aug(r, n);
        }
        rows.push_back(std::move(c));
    }
    if (!detail::tidy_rows(rows)) return detail::empty_polyhedron(poly.variables);
    out.ineq_rows = std::move(rows);
    remove_redundant_rows(out);
    return out;
}

/// A point in the relative interior, maximizing a common margin (capped at 1)
/// on the inequalities that are not implicit equalities.
inline std::optional<Vector> relative_interior_point(const HPolyhedron& poly) {
    auto hull = affine_hull_dimension(poly);
    if (hull.dimension < 0) return std::nullopt;
    const std::size_t n = poly.dim();
    auto vars = poly.variables;
    vars.push_back("__margin");
    HPolyhedron p(vars);
    auto lift = [&](const Vector& row, const Rational& last) {
        Vector out(row);
        out.push_back(last);
        return out;
    };
    std::vector<bool> implicit(poly.ineq_rows.size(), false);
    for (auto i : hull.implicit_equalities) implicit[i] = true;
    for (const auto& e : poly.eq_rows) p.add_eq(lift(e.coeffs, 0), e.rhs);
    for (std::size_t i = 0; i < poly.ineq_rows.size(); ++i) {
        const auto& r = poly.ineq_rows[i];
        if (implicit[i])
            p.add_eq(lift(r.coeffs, 0), r.rhs);
        else
            p.add_ineq(lift(r.coeffs, 1), r.rhs);
    }
    p.add_ineq(p.unit(n), 1);
    auto res = lp_optimize(p, p.unit(n));
    if (res.status != LPStatus::bounded) return std::nullopt;
    return Vector(res.witness.begin(), res.witness.begin() + static_cast<std::ptrdiff_t>(n));
}

/// Vertices of a bounded polyhedron, sorted lexicographically.
inline std::vector<Vector> vertices(const HPolyhedron& poly) {
    const std::size_t n = poly.dim();
    HPolyhedron c = canonicalize(poly);
    if (!lp_is_feasible(c)) return {};
    // recession cone must be {0}
    {
        HPolyhedron cone(c.variables);
        for (const auto& e : c.eq_rows) cone.add_eq(e.coeffs, 0);
        for (const auto& r : c.ineq_rows) cone.add_ineq(r.coeffs, 0);
        for (std::size_t j = 0; j < n; ++j) {
            cone.add_ineq(cone.unit(j), 1);
            cone.add_ineq(cone.unit(j, -1), 1);
        }
        LPSession s(cone);
        for (std::size_t j = 0; j < n; ++j)
            for (auto sense : {Sense::maximize, Sense::minimize}) {
                auto r = s.optimize(cone.unit(j), sense);
                if (r.status == LPStatus::bounded && r.value != 0)
                    throw UnboundedError("vertex enumeration needs a bounded polyhedron");
            }
    }
    const std::size_t eq_rank = c.eq_rows.size();
    const std::size_t need = n - eq_rank;
    const std::size_t m = c.ineq_rows.size();
    std::set<Vector> found;
    if (need == 0) {
        auto pt = solve_any(RationalMatrix::from_rows([&] {
                                std::vector<Vector> rows;
                                for (const auto& e : c.eq_rows) rows.push_back(e.coeffs);
                                return rows;
                            }()),
                            [&] {
                                Vector b;
                                for (const auto& e : c.eq_rows) b.push_back(e.rhs);
                                return b;
                            }());
        if (pt && c.contains(*pt)) found.insert(*pt);
        return {found.begin(), found.end()};
    }
    if (m < need) return {};
    std::vector<std::size_t> pick(need);
    for (std::size_t k = 0; k < need; ++k) pick[k] = k;
    while (true) {
        RationalMatrix a(n, n);
        Vector b(n);
        std::size_t r = 0;
        for (const auto& e : c.eq_rows) {
            for (std::size_t j = 0; j < n; ++j) a(r, j) = e.coeffs[j];
            b[r++] = e.rhs;
        }
        for (auto k : pick) {
            for (std::size_t j = 0; j < n; ++j) a(r, j) = c.ineq_rows[k].coeffs[j];
            b[r++] = c.ineq_rows[k].rhs;
        }
        if (auto inv = inverse(a)) {
            Vector x = (*inv) * b;
            if (c.contains(x)) found.insert(x);
        }
        // next combination
        std::size_t k = need;
        while (k > 0 && pick[k - 1] == m - need + k - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t t = k; t < need; ++t) pick[t] = pick[t - 1] + 1;
    }
    return {found.begin(), found.end()};
}

} // namespace phasediag
