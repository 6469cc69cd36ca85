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
#include "phasediag/model_io.hpp"

#include <gtest/gtest.h>

using namespace phasediag;

namespace {

expr::Context context_with(std::set<std::string> symbols, std::set<std::string> counters) {
    expr::Context ctx;
    ctx.symbols = std::move(symbols);
    ctx.counters = std::move(counters);
    ctx.scalars["tau"] = 3;
    return ctx;
}

const char* kArrival = R"Y(
name: arrival
homogeneous: true
parameters:
  resources: [lambda]
places:
  - {name: inflow, marking: lambda, hold: 1}
transitions: [q]
arcs: ["inflow -> q", "q -> inflow"]
)Y";

const char* kSplit = R"Y(
name: split
parameters:
  resources: [N]
  proportions: {p: 0.4}
places:
  - {name: src, marking: N, hold: 1}
  - {name: mid, hold: 2}
transitions: [a, b, c]
arcs: ["src -> a", "a -> src", "a -> mid", "mid -> b", "mid -> c"]
routing:
  mid: {proportions: {b: p, c: 1 - p}}
)Y";

} // namespace

TEST(Expr, ParsesAffineCounterTerms) {
    auto ctx = context_with({"N"}, {"z", "w"});
    auto a = expr::evaluate("2*N + z(t - tau) - w(t-) / 2 + 1", ctx);
    EXPECT_EQ(a.symbols.at("N"), 2);
    EXPECT_EQ(a.constant, 1);
    EXPECT_EQ((a.counters.at(expr::CounterRef{"z", 3, false})), 1);
    EXPECT_EQ((a.counters.at(expr::CounterRef{"w", 0, true})), Rational(-1, 2));
}

TEST(Expr, DecimalLiteralsAreExact) {
    auto a = expr::evaluate("0.4", context_with({}, {}));
    EXPECT_EQ(a.constant, Rational(2, 5));
}

TEST(Expr, CancellingTermsArePruned) {
    auto a = expr::evaluate("z(t - 1) - z(t - 1) + N - N", context_with({"N"}, {"z"}));
    EXPECT_TRUE(a.is_constant());
}

TEST(Expr, RejectsNonAffineAndUnknownNames) {
    auto ctx = context_with({"N"}, {"z"});
    EXPECT_THROW(expr::evaluate("N * z(t)", ctx), SemanticError);
    EXPECT_THROW(expr::evaluate("M + 1", ctx), SemanticError);
    EXPECT_THROW(expr::evaluate("y(t)", ctx), SemanticError);
    EXPECT_THROW(expr::evaluate("z(t - 1/2)", ctx), ConfigError);
    EXPECT_THROW(expr::evaluate("N +", ctx), SchemaError);
}

TEST(Model, SelfLoopArrivalCompilesToSingleCounter) {
    auto dyn = parse_model(kArrival).dynamics();
    ASSERT_EQ(dyn.size(), 1u);
    const auto& acts = dyn.counters[0].actions;
    ASSERT_EQ(acts.size(), 1u);
    EXPECT_EQ(acts[0].resource, ResourceForm::parameter("lambda"));
    ASSERT_EQ(acts[0].terms.size(), 1u);
    EXPECT_EQ(acts[0].terms[0], (DelayedTerm{0, 1, 1, false}));
}

TEST(Model, ProportionCoefficientsSumToOne) {
    auto dyn = parse_model(kSplit).dynamics(true);
    ASSERT_EQ(dyn.size(), 3u);
    Rational sum = 0;
    for (std::size_t i = 1; i < 3; ++i) {
        const auto& t = dyn.counters[i].actions.at(0).terms.at(0);
        EXPECT_EQ(t.delay, 2u);
        EXPECT_GT(t.coefficient, 0);
        sum += t.coefficient;
    }
    EXPECT_EQ(sum, 1);
    EXPECT_EQ(dyn.counters[1].actions[0].terms[0].coefficient, Rational(2, 5));
}

TEST(Model, ReducedEmergencyDepartmentHasSixCounters) {
    auto dyn = load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml").dynamics();
    std::vector<std::string> names;
    for (const auto& c : dyn.counters) names.push_back(c.name);
    EXPECT_EQ(names, (std::vector<std::string>{"q_in", "q_C", "q_JC", "q_SC", "q_JS", "q_EC"}));
    EXPECT_EQ(dyn.policy_count(), 32u);
    EXPECT_TRUE(dyn.is_source(0));
    // junior consultation: min(N_J + q_JS(t - 1), q_C(t) - q_SC(t-))
    const auto& jc = dyn.counters[2].actions;
    ASSERT_EQ(jc.size(), 2u);
    EXPECT_EQ(jc[0].resource, ResourceForm::parameter("N_J"));
    EXPECT_EQ(jc[0].terms, (std::vector<DelayedTerm>{{4, 1, 1, false}}));
    EXPECT_EQ(jc[1].terms, (std::vector<DelayedTerm>{{1, 0, 1, false}, {3, 0, -1, true}}));
}

TEST(Model, OnlyPriorityCompetitionIsNegative) {
    auto m = load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml");
    auto dyn = m.dynamics(true);
    for (const auto& c : dyn.counters)
        for (const auto& a : c.actions)
            for (const auto& t : a.terms)
                if (t.coefficient < 0) { EXPECT_EQ(t.delay, 0u) << c.name; }
}

TEST(Model, CompilationIsDeterministic) {
    auto a = load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml").dynamics();
    auto b = load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml").dynamics();
    EXPECT_EQ(format_dynamics(a), format_dynamics(b));
    EXPECT_EQ(dynamics_to_yaml(a), dynamics_to_yaml(b));
}

TEST(Model, YamlRoundTripOfDynamics) {
    auto dyn = load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml").dynamics();
    auto again = parse_model(dynamics_to_yaml(dyn)).dynamics();
    EXPECT_EQ(format_dynamics(again), format_dynamics(dyn));
}

TEST(Model, BindingOverridesDelays) {
    auto dyn = load_model(PHASEDIAG_MODELS_DIR "/ed-reduced.yaml", {{"tau_JC", 7}}).dynamics();
    EXPECT_EQ(dyn.counters[4].actions[1].terms[0].delay, 7u);
}

TEST(ModelErrors, EmptyTransitionList) {
    EXPECT_THROW(parse_model("name: x\nplaces: [p]\ntransitions: []\narcs: []\n"), SchemaError);
}

TEST(ModelErrors, UnknownField) {
    EXPECT_THROW(parse_model(std::string(kArrival) + "colour: blue\n"), SchemaError);
}

TEST(ModelErrors, ProportionsMustSumToOne) {
    std::string text = kSplit;
    text.replace(text.find("1 - p"), 5, "0.5");
    EXPECT_THROW(parse_model(text), SemanticError);
}

TEST(ModelErrors, UndeclaredParameter) {
    std::string text = kArrival;
    text.replace(text.find("marking: lambda"), 15, "marking: mu");
    EXPECT_THROW(parse_model(text), SemanticError);
}

TEST(ModelErrors, PriorityAndProportionsTogether) {
    std::string text = kSplit;
    text.replace(text.find("{proportions:"), 13, "{priority: [b, c], proportions:");
    EXPECT_THROW(parse_model(text).dynamics(), CompileError);
}

TEST(ModelErrors, InstantaneousCycle) {
    const char* text = R"Y(
name: loop
parameters: {resources: [N]}
dynamics:
  - {counter: x, min: ["N + x(t - 1)", "y(t)"]}
  - {counter: y, min: ["N + y(t - 1)", "x(t)"]}
)Y";
    EXPECT_THROW(parse_model(text).dynamics(), CycleError);
}

TEST(ModelErrors, UnboundDelay) {
    const char* text = R"Y(
name: open
parameters:
  resources: [N]
  delays: {tau: null}
dynamics:
  - {counter: x, min: ["N + x(t - tau)"]}
)Y";
    EXPECT_THROW(parse_model(text), ConfigError);
    EXPECT_NO_THROW(parse_model(text, {{"tau", 2}}));
}
