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

#include "phasediag/lexpoly.hpp"

#include "lex_oracle.hpp"

#include <gtest/gtest.h>

using namespace phasediag;

namespace {

// (y,x) <=lex (x,z) and (x,z) <=lex (y,y-1) over (x,y,z):
// y + s11 = x, x + s12 = z, x + s21 = y, z + s22 = y - 1
LexSF chained_pair() {
    LexSF sf;
    sf.x_vars = {"x", "y", "z"};
    sf.depths = {2, 2};
    sf.A = RationalMatrix::from_rows({{-1, 1, 0}, {1, 0, -1}, {1, -1, 0}, {0, -1, 1}});
    sf.b = {0, 0, 0, -1};
    return sf;
}

LexSF single_upper_bound() {
    LexSF sf;
    sf.x_vars = {"x"};
    sf.depths = {1};
    sf.A = RationalMatrix::from_rows({{1}});
    sf.b = {3};
    return sf;
}

} // namespace

TEST(LexPoly, ChainedPairFrontTrace) {
    auto sf = chained_pair();
    sf.validate();
    auto res = compute_max_front(sf);
    std::vector<Front> expected{{1, 1}, {2, 2}, {3, 3}};
    EXPECT_EQ(res.trace, expected);
    EXPECT_EQ(res.front, (Front{3, 3}));
    EXPECT_LE(res.lp_calls, sf.num_groups() * sf.total_depth());
    EXPECT_TRUE(lex_is_empty(sf));
}

TEST(LexPoly, ChainedPairLeadingSlackSupremumIsZero) {
    auto sf = chained_pair();
    auto p = front_polyhedron(sf, {1, 1});
    auto r = lp_optimize(p, p.unit(3));
    ASSERT_EQ(r.status, LPStatus::bounded);
    EXPECT_EQ(r.value, 0);
}

TEST(LexPoly, ChainedPairSecondFrontIsEmpty) {
    auto sf = chained_pair();
    auto p = front_polyhedron(sf, {2, 2});
    EXPECT_EQ(p.ineq_rows.size(), 2u);
    EXPECT_EQ(p.eq_rows.size(), 4u + 2u);
    EXPECT_FALSE(lp_is_feasible(p));
}

TEST(LexPoly, InitialFrontHasOneInequalityPerGroup) {
    auto sf = chained_pair();
    auto p = front_polyhedron(sf, initial_front(sf));
    EXPECT_EQ(p.ineq_rows.size(), 2u);
    EXPECT_EQ(p.eq_rows.size(), 4u);
}

TEST(LexPoly, TopFrontPinsEverySlack) {
    auto sf = chained_pair();
    auto p = front_polyhedron(sf, top_front(sf));
    EXPECT_TRUE(p.ineq_rows.empty());
    EXPECT_EQ(p.eq_rows.size(), 8u);
}

TEST(LexPoly, SingleUpperBound) {
    auto sf = single_upper_bound();
    auto res = compute_max_front(sf);
    EXPECT_EQ(res.front, Front{1});
    EXPECT_FALSE(lex_is_empty(sf));
}

TEST(LexPoly, NonnegativeVariableIsNonempty) {
    LexSF sf;
    sf.x_vars = {"x"};
    sf.depths = {1};
    sf.A = RationalMatrix::from_rows({{-1}});
    sf.b = {0};
    EXPECT_FALSE(lex_is_empty(sf));
}

TEST(LexPoly, ClosureOfStrictAndLexConstraints) {
    // (x1, x2) >=lex (0, 1) and (x1, x1) >=lex (-x2, 1): closure is x1 >= 0, x1 + x2 >= 0
    LexSF sf;
    sf.x_vars = {"x1", "x2"};
    sf.depths = {2, 2};
    sf.A = RationalMatrix::from_rows({{-1, 0}, {0, -1}, {-1, -1}, {-1, 0}});
    sf.b = {0, -1, 0, -1};
    auto c = lex_closure(sf);
    EXPECT_FALSE(c.empty);
    EXPECT_EQ(c.front, (Front{1, 1}));
    auto px = front_polyhedron_x(sf, c.front);
    ASSERT_EQ(px.ineq_rows.size(), 2u);
    EXPECT_EQ(px.ineq_rows[0].coeffs, (Vector{-1, 0}));
    EXPECT_EQ(px.ineq_rows[1].coeffs, (Vector{-1, -1}));
    // origin lies in the closure but not in the lex-polyhedron
    EXPECT_TRUE(px.contains({0, 0}));
    EXPECT_FALSE(lex_contains(sf, {0, 0}));
    EXPECT_TRUE(lex_contains(sf, {1, 0}));
}

TEST(LexPoly, SlackFreeAndSlackFormsAgree) {
    auto sf = chained_pair();
    for (const Front& f : std::vector<Front>{{1, 1}, {1, 2}, {2, 1}, {2, 3}, {3, 3}}) {
        EXPECT_EQ(lp_is_feasible(front_polyhedron(sf, f)), lp_is_feasible(front_polyhedron_x(sf, f)))
            << to_string(f);
    }
}

TEST(LexPoly, MatchesBruteForceOnRandomInstances) {
    std::mt19937 rng(20260415);
    int nonempty = 0;
    for (int trial = 0; trial < 300; ++trial) {
        LexSF sf = testing_oracle::random_lexsf(rng);
        auto res = compute_max_front(sf);
        auto oracle = testing_oracle::brute_force_max_front(sf);
        ASSERT_EQ(res.front, oracle.front) << "trial " << trial;
        EXPECT_LE(res.lp_calls, sf.num_groups() * sf.total_depth());
        EXPECT_LE(res.sweeps, sf.total_depth() + 1);
        EXPECT_EQ(lex_is_empty(sf), !oracle.lex_nonempty);
        nonempty += oracle.lex_nonempty;
    }
    EXPECT_GT(nonempty, 30);
}

TEST(LexPoly, ClosureSandwichesLexPolyhedron) {
    // relint(closure) ⊂ lex-polyhedron ⊂ closure, checked at witnesses of the
    // pattern LPs (lex points) and at LP-centred points of the closure.
    std::mt19937 rng(99);
    for (int trial = 0; trial < 150; ++trial) {
        LexSF sf = testing_oracle::random_lexsf(rng);
        auto oracle = testing_oracle::brute_force_max_front(sf);
        if (!oracle.lex_nonempty) continue;
        auto closure = front_polyhedron_x(sf, compute_max_front(sf).front);
        for (const auto& p : oracle.lex_points) {
            ASSERT_TRUE(lex_contains(sf, p));
            EXPECT_TRUE(closure.contains(p)) << trial;
        }
        auto inner = testing_oracle::relative_interior_point(closure);
        ASSERT_TRUE(inner.has_value()) << trial;
        EXPECT_TRUE(lex_contains(sf, *inner)) << trial;
    }
}
