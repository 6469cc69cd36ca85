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

// Exact rational linear programming over H-polyhedra.
//
// Equalities are eliminated first by an affine parametrization x = x0 + N y
// (y free), which leaves an inequality-only problem G y <= h. Free variables
// are then pivoted into the basis once and never leave, so the remaining
// simplex runs over nonnegative slacks only. Pivoting follows Bland's rule,
// which terminates on the highly degenerate conic programs that dominate here.

#include "phasediag/matrix.hpp"
#include "phasediag/polyhedron.hpp"

#include <cassert>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

namespace phasediag {

enum class LPStatus { infeasible, bounded, unbounded };

enum class Sense { maximize, minimize };

struct LPResult {
    LPStatus status = LPStatus::infeasible;
    Rational value;   // meaningful when bounded
    Vector witness;   // optimal point when bounded, empty otherwise
};

/// x = origin + basis * y, with y ranging over all of Q^k.
struct AffineParametrization {
    bool consistent = true;
    Vector origin;
    RationalMatrix basis;

    std::size_t free_dim() const { return basis.cols(); }

    Vector lift(const Vector& y) const {
        Vector x = origin;
        for (std::size_t i = 0; i < basis.rows(); ++i)
            for (std::size_t j = 0; j < basis.cols(); ++j)
                if (basis(i, j) != 0) x[i] += basis(i, j) * y[j];
        return x;
    }

    /// Pulls a linear form a·x back to (a·N, a·x0).
    std::pair<Vector, Rational> pull_back(const Vector& a) const {
        Vector g(basis.cols(), Rational(0));
        Rational shift = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0) continue;
            shift += a[i] * origin[i];
            for (std::size_t j = 0; j < basis.cols(); ++j)
                if (basis(i, j) != 0) g[j] += a[i] * basis(i, j);
        }
        return {std::move(g), std::move(shift)};
    }
};

/// Solves the equality rows of `poly`. Pivots prefer columns listed first in
/// `column_order` (all columns when empty).
inline AffineParametrization parametrize_equalities(const std::vector<Constraint>& eq_rows, std::size_t n,
                                                    const std::vector<std::size_t>& column_order = {}) {
    std::vector<std::size_t> order = column_order;
    if (order.empty()) {
        order.resize(n);
        for (std::size_t j = 0; j < n; ++j) order[j] = j;
    }
    assert(order.size() == n);

    RationalMatrix aug(eq_rows.size(), n + 1);
    for (std::size_t i = 0; i < eq_rows.size(); ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = eq_rows[i].coeffs[order[j]];
        aug(i, n) = eq_rows[i].rhs;
    }
    auto pivots = rref(aug, n);

    AffineParametrization par;
    for (std::size_t i = pivots.size(); i < eq_rows.size(); ++i)
        if (aug(i, n) != 0) {
            par.consistent = false;
            return par;
        }
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::size_t> free_cols;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);

    par.origin.assign(n, Rational(0));
    par.basis = RationalMatrix(n, free_cols.size());
    for (std::size_t r = 0; r < pivots.size(); ++r) {
        std::size_t var = order[pivots[r]];
        par.origin[var] = aug(r, n);
        for (std::size_t k = 0; k < free_cols.size(); ++k) par.basis(var, k) = -aug(r, free_cols[k]);
    }
    for (std::size_t k = 0; k < free_cols.size(); ++k) par.basis(order[free_cols[k]], k) = 1;
    return par;
}

/// Simplex over {y : G y <= h}, y free. Phase 1 runs once; each objective
/// starts phase 2 from a copy of the feasible tableau.
class InequalityLP {
public:
    InequalityLP(const RationalMatrix& g, const Vector& h) : rows_(g.rows()), free_(g.cols()) {
        assert(h.size() == rows_);
        width_ = free_ + rows_ + 1;
        art_ = free_ + rows_;
        tab_ = RationalMatrix(rows_, width_);
        rhs_ = h;
        basic_.resize(rows_);
        free_row_.assign(rows_, false);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < free_; ++j) tab_(i, j) = g(i, j);
            tab_(i, free_ + i) = 1;
            basic_[i] = free_ + i;
        }
        lineality_.assign(free_, false);
        free_row_of_.assign(free_, npos);
        cost_.assign(width_, Rational(0));
        for (std::size_t j = 0; j < free_; ++j) {
            std::size_t pick = npos;
            for (std::size_t i = 0; i < rows_; ++i)
                if (!free_row_[i] && tab_(i, j) != 0) {
                    pick = i;
                    break;
                }
            if (pick == npos) {
                lineality_[j] = true;
                continue;
            }
            pivot(pick, j);
            free_row_[pick] = true;
            free_row_of_[j] = pick;
        }
        feasible_ = phase_one();
    }

    bool feasible() const { return feasible_; }

    /// Maximizes c·y. `c` has one entry per free variable.
    LPResult maximize(const Vector& c) const {
        assert(c.size() == free_);
        LPResult out;
        if (!feasible_) return out;
        InequalityLP work = *this;
        work.load_objective(c);
        // a nonbasic free column moves both ways without touching any slack
        for (std::size_t j = 0; j < free_; ++j)
            if (lineality_[j] && work.cost_[j] != 0) {
                out.status = LPStatus::unbounded;
                return out;
            }
        if (!work.run_phase_two()) {
            out.status = LPStatus::unbounded;
            return out;
        }
        out.status = LPStatus::bounded;
        out.value = work.value_;
        out.witness = work.current_point();
        return out;
    }

    /// A feasible point (the phase-1 vertex).
    Vector feasible_point() const { return current_point(); }

private:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    void pivot(std::size_t l, std::size_t e) {
        Rational inv = 1 / tab_(l, e);
        std::vector<std::size_t> nz;
        nz.reserve(width_);
        for (std::size_t j = 0; j < width_; ++j) {
            if (tab_(l, j) == 0) continue;
            tab_(l, j) *= inv;
            nz.push_back(j);
        }
        rhs_[l] *= inv;
        Rational f;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i == l || tab_(i, e) == 0) continue;
            f = tab_(i, e);
            for (auto j : nz) tab_(i, j) -= f * tab_(l, j);
            rhs_[i] -= f * rhs_[l];
        }
        if (cost_[e] != 0) {
            f = cost_[e];
            for (auto j : nz) cost_[j] -= f * tab_(l, j);
            value_ += f * rhs_[l];
        }
        basic_[l] = e;
    }

    bool eligible_entering(std::size_t j) const {
        if (j < free_) return false;  // free columns are basic or lineality
        if (j == art_ && !art_allowed_) return false;
        return true;
    }

    /// Bland's rule: lowest-index improving column, lowest-index leaving basic.
    /// Returns false when unbounded.
    bool run_simplex() {
        while (true) {
            std::size_t e = npos;
            for (std::size_t j = free_; j < width_; ++j) {
                if (!eligible_entering(j) || cost_[j] <= 0) continue;
                if (is_basic(j)) continue;
                e = j;
                break;
            }
            if (e == npos) return true;
            std::size_t l = npos;
            Rational best;
            Rational ratio;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (free_row_[i] || dead_row(i) || tab_(i, e) <= 0) continue;
                ratio = rhs_[i] / tab_(i, e);
                if (l == npos || ratio < best || (ratio == best && basic_[i] < basic_[l])) {
                    l = i;
                    best = ratio;
                }
            }
            if (l == npos) return false;
            pivot(l, e);
        }
    }

    bool is_basic(std::size_t j) const {
        for (std::size_t i = 0; i < rows_; ++i)
            if (basic_[i] == j && !dead_row(i)) return true;
        return false;
    }

    bool dead_row(std::size_t i) const { return !dead_.empty() && dead_[i]; }

    bool phase_one() {
        std::size_t worst = npos;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (free_row_[i]) continue;
            if (rhs_[i] < 0 && (worst == npos || rhs_[i] < rhs_[worst])) worst = i;
        }
        if (worst == npos) return true;

        for (std::size_t i = 0; i < rows_; ++i) tab_(i, art_) = free_row_[i] ? 0 : -1;
        art_allowed_ = true;
        cost_.assign(width_, Rational(0));
        cost_[art_] = -1;
        value_ = 0;
        pivot(worst, art_);
        run_simplex();
        if (value_ < 0) return false;

        for (std::size_t i = 0; i < rows_; ++i) {
            if (basic_[i] != art_) continue;
            std::size_t e = npos;
            for (std::size_t j = free_; j < art_; ++j)
                if (tab_(i, j) != 0) {
                    e = j;
                    break;
                }
            if (e != npos) {
                pivot(i, e);
            } else {
                if (dead_.empty()) dead_.assign(rows_, false);
                dead_[i] = true;
            }
        }
        art_allowed_ = false;
        for (std::size_t i = 0; i < rows_; ++i) tab_(i, art_) = 0;
        return true;
    }

    void load_objective(const Vector& c) {
        cost_.assign(width_, Rational(0));
        value_ = 0;
        for (std::size_t j = 0; j < free_; ++j) cost_[j] = c[j];
        for (std::size_t i = 0; i < rows_; ++i) {
            if (dead_row(i)) continue;
            std::size_t b = basic_[i];
            if (b >= free_ || c[b] == 0) continue;
            const Rational& cb = c[b];
            for (std::size_t j = 0; j < width_; ++j)
                if (tab_(i, j) != 0) cost_[j] -= cb * tab_(i, j);
            value_ += cb * rhs_[i];
        }
    }

    bool run_phase_two() { return run_simplex(); }

    Vector current_point() const {
        Vector y(free_, Rational(0));
        for (std::size_t j = 0; j < free_; ++j)
            if (free_row_of_[j] != npos) y[j] = rhs_[free_row_of_[j]];
        return y;
    }

    std::size_t rows_ = 0;
    std::size_t free_ = 0;
    std::size_t width_ = 0;
    std::size_t art_ = 0;
    bool art_allowed_ = false;
    bool feasible_ = false;
    RationalMatrix tab_;
    Vector rhs_;
    Vector cost_;
    Rational value_;
    std::vector<std::size_t> basic_;
    std::vector<bool> free_row_;
    std::vector<bool> dead_;
    std::vector<bool> lineality_;
    std::vector<std::size_t> free_row_of_;
};

/// Reusable LP oracle over one polyhedron: presolve and phase 1 happen once.
class LPSession {
public:
    explicit LPSession(const HPolyhedron& poly, const std::vector<std::size_t>& column_order = {})
        : dim_(poly.dim()), par_(parametrize_equalities(poly.eq_rows, poly.dim(), column_order)) {
        if (!par_.consistent) return;
        const std::size_t k = par_.free_dim();
        RationalMatrix g(poly.ineq_rows.size(), k);
        Vector h(poly.ineq_rows.size());
        for (std::size_t i = 0; i < poly.ineq_rows.size(); ++i) {
            auto [gi, shift] = par_.pull_back(poly.ineq_rows[i].coeffs);
            for (std::size_t j = 0; j < k; ++j) g(i, j) = gi[j];
            h[i] = poly.ineq_rows[i].rhs - shift;
        }
        lp_.emplace(g, h);
    }

    bool feasible() const { return par_.consistent && lp_->feasible(); }

    LPResult optimize(const Vector& objective, Sense sense = Sense::maximize) {
        assert(objective.size() == dim_);
        ++solves_;
        LPResult out;
        if (!feasible()) return out;
        auto [c, shift] = par_.pull_back(objective);
        if (sense == Sense::minimize)
            for (auto& v : c) v = -v;
        LPResult inner = lp_->maximize(c);
        out.status = inner.status;
        if (inner.status != LPStatus::bounded) return out;
        out.witness = par_.lift(inner.witness);
        out.value = sense == Sense::minimize ? Rational(shift - inner.value) : Rational(shift + inner.value);
        return out;
    }

    /// Some point of the polyhedron, or nullopt when empty.
    std::optional<Vector> feasible_point() const {
        if (!feasible()) return std::nullopt;
        return par_.lift(lp_->feasible_point());
    }

    std::size_t solves() const { return solves_; }

private:
    std::size_t dim_;
    AffineParametrization par_;
    std::optional<InequalityLP> lp_;
    std::size_t solves_ = 0;
};

inline LPResult lp_optimize(const HPolyhedron& poly, const Vector& objective, Sense sense = Sense::maximize) {
    LPSession session(poly);
    return session.optimize(objective, sense);
}

inline bool lp_is_feasible(const HPolyhedron& poly) { return LPSession(poly).feasible(); }

} // namespace phasediag
