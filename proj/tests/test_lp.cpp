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

#include "phasediag/lp.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace phasediag;

namespace {

HPolyhedron line(std::vector<std::string> vars) { return HPolyhedron(std::move(vars)); }

} // namespace

TEST(Lp, UpperBoundIsAttained) {
    auto p = line({"x"});
    p.add_ineq({1}, 3);
    auto r = lp_optimize(p, {1});
    ASSERT_EQ(r.status, LPStatus::bounded);
    EXPECT_EQ(r.value, 3);
    EXPECT_EQ(r.witness, Vector{3});
}

TEST(Lp, HalfLineIsUnbounded) {
    auto p = line({"x"});
    p.add_ineq({-1}, 0);
    EXPECT_EQ(lp_optimize(p, {1}).status, LPStatus::unbounded);
    auto r = lp_optimize(p, {1}, Sense::minimize);
    ASSERT_EQ(r.status, LPStatus::bounded);
    EXPECT_EQ(r.value, 0);
}

TEST(Lp, ContradictoryBoundsAreInfeasible) {
    auto p = line({"x"});
    p.add_ineq({1}, 1);
    p.add_ineq({-1}, -2);
    EXPECT_EQ(lp_optimize(p, {1}).status, LPStatus::infeasible);
    EXPECT_FALSE(lp_is_feasible(p));
}

TEST(Lp, InconsistentEqualitiesAreInfeasible) {
    auto p = line({"x", "y"});
    p.add_eq({1, 1}, 1);
    p.add_eq({2, 2}, 3);
    EXPECT_FALSE(lp_is_feasible(p));
}

TEST(Lp, FreeDirectionWithZeroCostIsBounded) {
    auto p = line({"x", "y"});
    p.add_ineq({1, 0}, 5);
    auto r = lp_optimize(p, {1, 0});
    ASSERT_EQ(r.status, LPStatus::bounded);
    EXPECT_EQ(r.value, 5);
    EXPECT_EQ(lp_optimize(p, {1, 1}).status, LPStatus::unbounded);
}

TEST(Lp, SlackOfChainedLexSystemHasZeroSupremum) {
    // y + s11 = x, x + s12 = z, x + s21 = y, z + s22 = y - 1, s11, s21 >= 0
    auto p = line({"x", "y", "z", "s11", "s12", "s21", "s22"});
    p.add_eq({-1, 1, 0, 1, 0, 0, 0}, 0);
    p.add_eq({1, 0, -1, 0, 1, 0, 0}, 0);
    p.add_eq({1, -1, 0, 0, 0, 1, 0}, 0);
    p.add_eq({0, -1, 1, 0, 0, 0, 1}, -1);
    p.add_ineq(p.unit(3, -1), 0);
    p.add_ineq(p.unit(5, -1), 0);
    auto r = lp_optimize(p, p.unit(3));
    ASSERT_EQ(r.status, LPStatus::bounded);
    EXPECT_EQ(r.value, 0);
    EXPECT_TRUE(p.contains(r.witness));
}

TEST(Lp, DegenerateVertexTerminates) {
    // Many constraints through the origin.
    auto p = line({"x", "y", "z"});
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) p.add_ineq({a, b, 1}, 0);
    p.add_ineq({0, 0, -1}, 1);
    auto r = lp_optimize(p, {0, 0, 1});
    ASSERT_EQ(r.status, LPStatus::bounded);
    EXPECT_EQ(r.value, 0);
}

// Random boxed LPs against exhaustive vertex search.
TEST(Lp, MatchesVertexEnumerationOnRandomBoxes) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> coef(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        auto p = line({"x", "y"});
        for (int j = 0; j < 2; ++j) {
            p.add_ineq(p.unit(j), 4);
            p.add_ineq(p.unit(j, -1), 4);
        }
        for (int k = 0; k < 3; ++k) p.add_ineq({coef(rng), coef(rng)}, coef(rng));
        Vector c{coef(rng), coef(rng)};
        // all pairwise intersections of rows are candidate vertices
        std::optional<Rational> best;
        const auto& rows = p.ineq_rows;
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t j = i + 1; j < rows.size(); ++j) {
                Rational det = rows[i].coeffs[0] * rows[j].coeffs[1] - rows[i].coeffs[1] * rows[j].coeffs[0];
                if (det == 0) continue;
                Vector v{(rows[i].rhs * rows[j].coeffs[1] - rows[i].coeffs[1] * rows[j].rhs) / det,
                         (rows[i].coeffs[0] * rows[j].rhs - rows[i].rhs * rows[j].coeffs[0]) / det};
                if (!p.contains(v)) continue;
                Rational val = c[0] * v[0] + c[1] * v[1];
                if (!best || val > *best) best = val;
            }
        auto r = lp_optimize(p, c);
        if (!best) {
            EXPECT_EQ(r.status, LPStatus::infeasible) << trial;
        } else {
            ASSERT_EQ(r.status, LPStatus::bounded) << trial;
            EXPECT_EQ(r.value, *best) << trial;
            EXPECT_TRUE(p.contains(r.witness));
        }
    }
}

TEST(Lp, SessionCountsSolves) {
    auto p = line({"x"});
    p.add_ineq({1}, 2);
    p.add_ineq({-1}, 0);
    LPSession s(p);
    s.optimize({1});
    s.optimize({1}, Sense::minimize);
    EXPECT_EQ(s.solves(), 2u);
    auto pt = s.feasible_point();
    ASSERT_TRUE(pt);
    EXPECT_TRUE(p.contains(*pt));
}

TEST(Lp, DependentFreeColumnUsesReducedCost) {
    // -x + y <= 0, x - y <= 0 pins x = y; the objective x - y is bounded by 0
    auto p = line({"x", "y", "z"});
    p.add_ineq({-1, 1, 0}, 0);
    p.add_ineq({1, -1, 0}, 0);
    auto r = lp_optimize(p, {1, -1, 0});
    ASSERT_EQ(r.status, LPStatus::bounded);
    EXPECT_EQ(r.value, 0);
    EXPECT_EQ(lp_optimize(p, {1, 0, 0}).status, LPStatus::unbounded);
}
