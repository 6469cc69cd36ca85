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
#include "phasediag/diagram.hpp"
#include "phasediag/model_io.hpp"

#include <gtest/gtest.h>

using namespace phasediag;

namespace {

PWLDynamics reduced_ed() { return load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml").dynamics(); }

const PhaseDiagram& reduced_diagram() {
    static const PhaseDiagram d = build_diagram(reduced_ed(), {4});
    return d;
}

const PhaseCell* cell_of(const PhaseDiagram& d, const Policy& p) {
    for (const auto& c : d.cells)
        if (std::find(c.policies.begin(), c.policies.end(), p) != c.policies.end()) return &c;
    return nullptr;
}

// rho row of counter i over (lambda, N_C, N_J, N_S)
Vector rho_row(const PhaseCell& c, std::size_t i) {
    Vector out;
    for (std::size_t k = 0; k < c.throughput->T.cols(); ++k) out.push_back(c.throughput->T(i, k));
    return out;
}

Policy policy(std::initializer_list<std::size_t> c) { return Policy{std::vector<std::size_t>(c)}; }

} // namespace

TEST(Policies, EnumerationOrderLastCounterFastest) {
    auto ps = enumerate_policies(reduced_ed());
    ASSERT_EQ(ps.size(), 32u);
    EXPECT_EQ(ps[0], policy({0, 0, 0, 0, 0, 0}));
    EXPECT_EQ(ps[1], policy({0, 0, 0, 0, 0, 1}));
    EXPECT_EQ(ps[31], policy({0, 1, 1, 1, 1, 1}));
}

TEST(Feasibility, ConstantCounterHasNoThroughput) {
    auto dyn = parse_model("name: c\nparameters: {resources: [N]}\ndynamics:\n  - {counter: z, min: [N]}\n").dynamics(true);
    EXPECT_FALSE(strict_feasibility(dyn, policy({0})).strictly_feasible);
    EXPECT_EQ(build_diagram(dyn).stats.strictly_feasible, 0u);
}

TEST(Feasibility, SelfLoopCellIsHalfLine) {
    auto dyn =
        parse_model("name: s\nparameters: {resources: [N]}\ndynamics:\n  - {counter: z, min: [\"N + z(t - 1)\"]}\n")
            .dynamics(true);
    auto d = build_diagram(dyn);
    ASSERT_EQ(d.cells.size(), 1u);
    const auto& c = d.cells[0];
    HPolyhedron half({"N"});
    half.add_ineq({-1}, 0);
    EXPECT_TRUE(poly_equal(c.closure, half));
    EXPECT_EQ(c.dimension, 1);
    EXPECT_EQ(c.throughput->T, RationalMatrix::from_rows({{1}}));
}

TEST(Feasibility, LpCallsWithinBound) {
    auto dyn = reduced_ed();
    for (const auto& sigma : enumerate_policies(dyn)) {
        auto sf = standardize(build_stationary_system(dyn, sigma));
        auto fr = strict_feasibility(dyn, sigma, sf);
        EXPECT_LE(fr.lp_calls, sf.num_groups() * sf.total_depth());
    }
}

TEST(ReducedDiagram, Counts) {
    const auto& s = reduced_diagram().stats;
    EXPECT_EQ(s.total, 32u);
    EXPECT_EQ(s.strictly_feasible, 16u);
    EXPECT_EQ(s.full_dimensional, 8u);
    EXPECT_EQ(s.distinct_full_dimensional, 7u);
    EXPECT_EQ(s.distinct, 14u);
}

TEST(ReducedDiagram, FluidPhase) {
    const auto* c = cell_of(reduced_diagram(), policy({0, 0, 1, 1, 1, 1}));
    ASSERT_TRUE(c && c->full_dimensional());
    for (std::size_t i : {1u, 2u, 4u}) EXPECT_EQ(rho_row(*c, i), (Vector{1, 0, 0, 0}));
    EXPECT_EQ(rho_row(*c, 3), (Vector{0, 0, 0, 0}));
}

TEST(ReducedDiagram, CubicleSaturatedPhase) {
    const auto* c = cell_of(reduced_diagram(), policy({0, 1, 1, 1, 1, 1}));
    ASSERT_TRUE(c && c->full_dimensional());
    EXPECT_EQ(rho_row(*c, 1), (Vector{0, Rational(1, 7), 0, 0}));
}

TEST(ReducedDiagram, SeniorSaturatedPhasesAreNotMerged) {
    const auto& d = reduced_diagram();
    const auto* a = cell_of(d, policy({0, 1, 0, 0, 0, 1}));
    const auto* b = cell_of(d, policy({0, 1, 1, 0, 0, 1}));
    ASSERT_TRUE(a && b);
    EXPECT_NE(a, b);
    EXPECT_EQ(rho_row(*a, 1), (Vector{0, 0, 0, Rational(25, 49)}));
    EXPECT_EQ(rho_row(*a, 1), rho_row(*b, 1));
    EXPECT_FALSE(poly_equal(a->closure, b->closure));
}

TEST(ReducedDiagram, EquivalentPoliciesShareACell) {
    const auto* c = cell_of(reduced_diagram(), policy({0, 1, 1, 0, 0, 1}));
    ASSERT_TRUE(c);
    EXPECT_EQ(c->policies, (std::vector<Policy>{policy({0, 1, 1, 0, 0, 1}), policy({0, 1, 1, 1, 0, 1})}));
}

TEST(ReducedDiagram, ParallelRunIsDeterministic) {
    auto dyn = reduced_ed();
    auto serial = build_diagram(dyn, {1});
    const auto& parallel = reduced_diagram();
    ASSERT_EQ(serial.cells.size(), parallel.cells.size());
    for (std::size_t k = 0; k < serial.cells.size(); ++k) {
        EXPECT_EQ(serial.cells[k].policies, parallel.cells[k].policies);
        EXPECT_EQ(serial.cells[k].closure.ineq_rows, parallel.cells[k].closure.ineq_rows);
        EXPECT_EQ(serial.cells[k].closure.eq_rows, parallel.cells[k].closure.eq_rows);
        EXPECT_EQ(serial.cells[k].throughput, parallel.cells[k].throughput);
    }
}

TEST(ReducedDiagram, InteriorPointsLiftToLexSolutions) {
    auto dyn = reduced_ed();
    for (const auto& c : reduced_diagram().cells) {
        if (!c.full_dimensional()) continue;
        auto p = relative_interior_point(c.closure);
        ASSERT_TRUE(p);
        EXPECT_TRUE(c.closure.strictly_satisfies(*p));
        for (const auto& sigma : c.policies) {
            auto sys = build_stationary_system(dyn, sigma);
            auto sf = standardize(sys);
            auto lifted = front_polyhedron_x(sf, compute_max_front(sf).front);
            for (std::size_t k = 0; k < p->size(); ++k) lifted.add_eq(lifted.unit(sys.param(k)), (*p)[k]);
            auto x = relative_interior_point(lifted);
            ASSERT_TRUE(x) << to_string(sigma);
            EXPECT_TRUE(lex_system_satisfied(sys, *x)) << to_string(sigma);
            Vector rho(x->begin(), x->begin() + static_cast<long>(dyn.size()));
            EXPECT_EQ(rho, c.throughput->evaluate(*p));
        }
    }
}
