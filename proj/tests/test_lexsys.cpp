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
#include "phasediag/lexsys.hpp"
#include "phasediag/geometry.hpp"
#include "phasediag/model_io.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace phasediag;

namespace {

PWLDynamics from_yaml(const char* text) { return parse_model(text).dynamics(true); }

PWLDynamics reduced_ed() { return load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml").dynamics(); }

Rational eval_row(const AffineRow& r, const Vector& x) {
    Rational acc = r.constant;
    for (std::size_t j = 0; j < x.size(); ++j) acc += r.coeffs[j] * x[j];
    return acc;
}

} // namespace

TEST(PolicyMatrices, SelfLoop) {
    auto dyn = from_yaml("name: s\nparameters: {resources: [r]}\ndynamics:\n  - {counter: z, min: [\"r + z(t - 1)\"]}\n");
    auto m = policy_matrices(dyn, Policy{{0}});
    EXPECT_EQ(m.P, RationalMatrix::from_rows({{1}}));
    EXPECT_EQ(m.Pbar, RationalMatrix::from_rows({{1}}));
    ASSERT_EQ(m.r.size(), 1u);
    EXPECT_EQ(m.r[0], ResourceForm::parameter("r"));
}

TEST(PolicyMatrices, TwoCycle) {
    auto dyn = from_yaml(R"Y(
name: c
parameters: {resources: [r1, r2]}
dynamics:
  - {counter: a, min: ["r1 + b(t - 1)"]}
  - {counter: b, min: ["r2 + a(t - 1)"]}
)Y");
    auto m = policy_matrices(dyn, Policy{{0, 0}});
    auto swap = RationalMatrix::from_rows({{0, 1}, {1, 0}});
    EXPECT_EQ(m.P, swap);
    EXPECT_EQ(m.Pbar, swap);
}

TEST(PolicyMatrices, LeftLimitsLandAtDelayZero) {
    auto dyn = reduced_ed();
    Policy fluid{{0, 0, 1, 1, 1, 1}};
    auto m = policy_matrices(dyn, fluid);
    // q_JC = q_C(t) - q_SC(t-)
    EXPECT_EQ(m.P(2, 1), 1);
    EXPECT_EQ(m.P(2, 3), -1);
    EXPECT_EQ(m.Pbar(2, 3), 0);
    EXPECT_EQ(m.L(2, 3), -1);
    EXPECT_EQ(m.P_tau.at(0)(2, 3), -1);
    RationalMatrix sum(m.P.rows(), m.P.cols());
    for (const auto& [tau, pt] : m.P_tau) sum = sum + pt;
    EXPECT_EQ(sum, m.P);
}

TEST(PolicyMatrices, RejectsBadPolicy) {
    auto dyn = reduced_ed();
    EXPECT_THROW(policy_matrices(dyn, Policy{{0, 0}}), InvalidInput);
    EXPECT_THROW(policy_matrices(dyn, Policy{{0, 0, 2, 0, 0, 0}}), InvalidInput);
}

TEST(StationarySystem, TwoActionCounter) {
    auto dyn = from_yaml(R"Y(
name: two
parameters: {resources: [r, s]}
dynamics:
  - {counter: z, min: ["r + z(t - 1)", "s + z(t - 1)"]}
)Y");
    auto sys = build_stationary_system(dyn, Policy{{0}});
    EXPECT_EQ(sys.variables, (std::vector<std::string>{"rho[z]", "u[z]", "r", "s"}));
    // rho - rho = 0 and u - r - u + rho = 0
    ASSERT_EQ(sys.equalities.size(), 2u);
    EXPECT_EQ(sys.equalities[0].coeffs, (Vector{0, 0, 0, 0}));
    EXPECT_EQ(sys.equalities[1].coeffs, (Vector{1, 0, -1, 0}));
    ASSERT_EQ(sys.lex_inequalities.size(), 2u);
    EXPECT_EQ(sys.lex_inequalities[0].rows.size(), 2u);
    EXPECT_EQ(sys.lex_inequalities[0].rows[1].coeffs, (Vector{1, 0, 0, -1}));
    EXPECT_EQ(sys.sign_groups, (std::vector<std::size_t>{1}));
    EXPECT_EQ(sys.lex_inequalities[1].rows.size(), 1u);
}

TEST(StationarySystem, SingletonCounterHasNoLexRows) {
    auto dyn = reduced_ed();
    auto sys = build_stationary_system(dyn, Policy{{0, 0, 1, 1, 1, 1}});
    std::size_t alternatives = 0;
    for (const auto& li : sys.lex_inequalities)
        if (li.label.rfind("q_in:", 0) == 0) ++alternatives;
    EXPECT_EQ(alternatives, 0u);
    EXPECT_EQ(sys.lex_inequalities.size(), 5u + 6u);
    EXPECT_EQ(sys.sign_groups.size(), 6u);
}

TEST(StationarySystem, StandardFormDepths) {
    auto dyn = reduced_ed();
    Policy fluid{{0, 0, 1, 1, 1, 1}};
    auto sys = build_stationary_system(dyn, fluid);
    auto sf = standardize(sys);
    std::size_t expected = 0;
    for (const auto& li : sys.lex_inequalities) expected += li.rows.size();
    EXPECT_EQ(sf.total_depth(), expected);
    EXPECT_EQ(sf.num_groups(), 11u);
    for (auto g : sf.sign_groups) EXPECT_EQ(sf.depths[g], 1u);
}

TEST(StationarySystem, AffineSubstitutionGivesActionPair) {
    auto dyn = reduced_ed();
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> pick(-9, 9);
    const std::size_t n = dyn.size();
    for (int trial = 0; trial < 20; ++trial) {
        Vector rho(n), u(n);
        Bindings b;
        for (std::size_t i = 0; i < n; ++i) {
            rho[i] = pick(rng);
            u[i] = pick(rng);
        }
        for (const auto& p : dyn.resource_parameters) b[p] = pick(rng);
        for (std::size_t i = 0; i < n; ++i)
            for (const auto& a : dyn.counters[i].actions) {
                auto rows = action_rows(n, a);
                Rational slope = 0, offset = a.resource.evaluate(b), eps = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    slope += rows.p[j] * rho[j];
                    offset += rows.p[j] * u[j] - rows.pbar[j] * rho[j];
                    eps -= rows.left[j] * rho[j];
                }
                // value of the action on z(t) = u + rho t, as a function of t
                for (long t : {20L, 31L}) {
                    Rational direct = a.resource.evaluate(b);
                    for (const auto& term : a.terms) {
                        Rational back = static_cast<long>(term.delay);
                        direct += term.coefficient * (u[term.counter] + rho[term.counter] * (Rational(t) - back));
                    }
                    EXPECT_EQ(direct, slope * t + offset);
                }
                if (!rows.has_left_limit) { EXPECT_EQ(eps, 0); }
            }
    }
}

TEST(StationarySystem, SolutionsSatisfyFixedPoint) {
    auto dyn = reduced_ed();
    for (const Policy& sigma : {Policy{{0, 0, 1, 1, 1, 1}}, Policy{{0, 1, 0, 0, 1, 1}}}) {
        auto sys = build_stationary_system(dyn, sigma);
        auto sf = standardize(sys);
        auto front = compute_max_front(sf).front;
        auto x = relative_interior_point(front_polyhedron_x(sf, front));
        ASSERT_TRUE(x.has_value());
        EXPECT_TRUE(lex_system_satisfied(sys, *x));
        auto m = policy_matrices(dyn, sigma);
        Vector rho(x->begin(), x->begin() + static_cast<long>(dyn.size()));
        EXPECT_EQ(m.P * rho, rho);
        for (const auto& e : sys.equalities) EXPECT_EQ(eval_row(e, *x), 0);
    }
}
