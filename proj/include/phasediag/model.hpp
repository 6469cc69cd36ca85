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

// Counter dynamics
//
//     z_i(t) = min_{a in A_i} ( r_i^a + sum_tau sum_j (P_tau^a)_ij z_j(t - tau) )
//
// and the timed Petri nets with proportion and priority routing that compile
// into it.

#include "phasediag/errors.hpp"
#include "phasediag/rational.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace phasediag {

using Bindings = std::map<std::string, Rational>;

/// Affine form over named resource parameters.
struct ResourceForm {
    std::map<std::string, Rational> coefficients;
    Rational constant = 0;

    static ResourceForm parameter(const std::string& name, const Rational& c = 1) {
        ResourceForm f;
        if (c != 0) f.coefficients[name] = c;
        return f;
    }
    static ResourceForm number(const Rational& c) {
        ResourceForm f;
        f.constant = c;
        return f;
    }

    bool is_zero() const { return coefficients.empty() && constant == 0; }

    ResourceForm& operator+=(const ResourceForm& o) {
        for (const auto& [k, v] : o.coefficients) {
            auto& c = coefficients[k];
            c += v;
            if (c == 0) coefficients.erase(k);
        }
        constant += o.constant;
        return *this;
    }
    friend ResourceForm operator+(ResourceForm a, const ResourceForm& b) { return a += b; }

    ResourceForm scaled(const Rational& s) const {
        ResourceForm out;
        if (s == 0) return out;
        for (const auto& [k, v] : coefficients) out.coefficients[k] = v * s;
        out.constant = constant * s;
        return out;
    }

    Rational coefficient(const std::string& name) const {
        auto it = coefficients.find(name);
        return it == coefficients.end() ? Rational(0) : it->second;
    }

    /// Missing parameters raise ConfigError.
    Rational evaluate(const Bindings& values) const {
        Rational acc = constant;
        for (const auto& [k, v] : coefficients) {
            auto it = values.find(k);
            if (it == values.end()) throw ConfigError("resource parameter '" + k + "' is not bound");
            acc += v * it->second;
        }
        return acc;
    }

    friend bool operator==(const ResourceForm&, const ResourceForm&) = default;
};

/// coefficient * z_counter(t - delay), or z_counter(t^-) when left_limit.
struct DelayedTerm {
    std::size_t counter = 0;
    std::size_t delay = 0;
    Rational coefficient = 1;
    bool left_limit = false;

    friend bool operator==(const DelayedTerm&, const DelayedTerm&) = default;
};

struct Action {
    ResourceForm resource;
    std::vector<DelayedTerm> terms;
    std::string label;

    friend bool operator==(const Action&, const Action&) = default;
};

/// Sorts terms by (counter, delay, left_limit) and merges duplicates.
inline void normalize_terms(std::vector<DelayedTerm>& terms) {
    std::sort(terms.begin(), terms.end(), [](const DelayedTerm& a, const DelayedTerm& b) {
        return std::tie(a.counter, a.delay, a.left_limit) < std::tie(b.counter, b.delay, b.left_limit);
    });
    std::vector<DelayedTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().counter == t.counter && merged.back().delay == t.delay &&
            merged.back().left_limit == t.left_limit)
            merged.back().coefficient += t.coefficient;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const DelayedTerm& t) { return t.coefficient == 0; });
    terms = std::move(merged);
}

struct Counter {
    std::string name;
    std::vector<Action> actions;

    friend bool operator==(const Counter&, const Counter&) = default;
};

struct PWLDynamics {
    std::string name;
    std::vector<std::string> resource_parameters;
    std::vector<Counter> counters;
    bool homogeneous = false;

    std::size_t size() const { return counters.size(); }

    std::optional<std::size_t> index_of(const std::string& counter) const {
        for (std::size_t i = 0; i < counters.size(); ++i)
            if (counters[i].name == counter) return i;
        return std::nullopt;
    }

    std::vector<std::size_t> delay_set() const {
        std::set<std::size_t> d;
        for (const auto& c : counters)
            for (const auto& a : c.actions)
                for (const auto& t : a.terms) d.insert(t.delay);
        return {d.begin(), d.end()};
    }

    std::size_t max_delay() const {
        auto d = delay_set();
        return d.empty() ? 0 : d.back();
    }

    std::size_t policy_count() const {
        std::size_t total = 1;
        for (const auto& c : counters) total *= c.actions.size();
        return total;
    }

    /// A counter driven only by its own past (an exogenous arrival stream).
    bool is_source(std::size_t i) const {
        const auto& c = counters[i];
        if (c.actions.size() != 1) return false;
        for (const auto& t : c.actions[0].terms)
            if (t.counter != i) return false;
        return !c.actions[0].terms.empty();
    }

    void validate() const {
        if (counters.empty()) throw SemanticError("dynamics has no counters");
        std::set<std::string> params(resource_parameters.begin(), resource_parameters.end());
        if (params.size() != resource_parameters.size()) throw SemanticError("duplicate resource parameter");
        std::set<std::string> names;
        for (const auto& c : counters) {
            if (!names.insert(c.name).second) throw SemanticError("duplicate counter '" + c.name + "'");
            if (c.actions.empty()) throw SemanticError("counter '" + c.name + "' has no actions");
            for (const auto& a : c.actions) {
                for (const auto& [k, v] : a.resource.coefficients)
                    if (!params.count(k)) throw SemanticError("undeclared parameter '" + k + "' in " + c.name);
                if (homogeneous && a.resource.constant != 0)
                    throw SemanticError("homogeneous model has a constant resource term in " + c.name);
                for (const auto& t : a.terms) {
                    if (t.counter >= counters.size()) throw SemanticError("term references unknown counter");
                    if (t.left_limit && t.delay != 0)
                        throw SemanticError("left limit with a positive delay in " + c.name);
                }
            }
        }
    }
};

/// Throws CycleError when the delay-0 dependencies (left limits excluded)
/// contain a cycle; otherwise returns an evaluation order.
inline std::vector<std::size_t> evaluation_order(const PWLDynamics& dyn) {
    const std::size_t n = dyn.size();
    std::vector<std::vector<std::size_t>> deps(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& a : dyn.counters[i].actions)
            for (const auto& t : a.terms)
                if (t.delay == 0 && !t.left_limit) deps[i].push_back(t.counter);
    std::vector<int> state(n, 0);
    std::vector<std::size_t> order;
    std::function<void(std::size_t)> visit = [&](std::size_t i) {
        if (state[i] == 2) return;
        if (state[i] == 1)
            throw CycleError("instantaneous dependency cycle through counter '" + dyn.counters[i].name + "'");
        state[i] = 1;
        for (auto j : deps[i]) visit(j);
        state[i] = 2;
        order.push_back(i);
    };
    for (std::size_t i = 0; i < n; ++i) visit(i);
    return order;
}

/// Substitutes pass-through counters into the counters that read them. A
/// counter qualifies when it has one action, no negative coefficients, no left
/// limits and does not read itself; its throughput is then a nonnegative
/// combination of the others and the stationary analysis is unchanged.
inline PWLDynamics inline_pass_through(const PWLDynamics& input) {
    PWLDynamics dyn = input;
    evaluation_order(dyn);
    auto qualifies = [&](std::size_t i) {
        const auto& c = dyn.counters[i];
        if (c.actions.size() != 1) return false;
        for (const auto& t : c.actions[0].terms)
            if (t.counter == i || t.left_limit || t.coefficient < 0) return false;
        return true;
    };
    while (true) {
        std::optional<std::size_t> pick;
        for (std::size_t i = 0; i < dyn.size() && !pick; ++i)
            if (qualifies(i) && dyn.size() > 1) pick = i;
        if (!pick) break;
        const std::size_t k = *pick;
        const Action body = dyn.counters[k].actions[0];
        for (std::size_t i = 0; i < dyn.size(); ++i) {
            if (i == k) continue;
            for (auto& a : dyn.counters[i].actions) {
                std::vector<DelayedTerm> out;
                for (const auto& t : a.terms) {
                    if (t.counter != k) {
                        out.push_back(t);
                        continue;
                    }
                    a.resource += body.resource.scaled(t.coefficient);
                    for (const auto& s : body.terms) {
                        DelayedTerm u = s;
                        u.coefficient = s.coefficient * t.coefficient;
                        u.delay = s.delay + t.delay;
                        u.left_limit = t.left_limit && u.delay == 0;
                        out.push_back(u);
                    }
                }
                a.terms = std::move(out);
            }
        }
        dyn.counters.erase(dyn.counters.begin() + static_cast<std::ptrdiff_t>(k));
        for (auto& c : dyn.counters)
            for (auto& a : c.actions) {
                for (auto& t : a.terms)
                    if (t.counter > k) --t.counter;
                normalize_terms(a.terms);
            }
    }
    return dyn;
}

// ---------------------------------------------------------------------------
// Petri nets

struct Place {
    std::string name;
    ResourceForm marking;
    std::size_t holding_time = 0;
};

struct Arc {
    std::string from;
    std::string to;
};

/// Routing of a place with several downstream transitions. Exactly one of the
/// two fields may be set.
struct Routing {
    std::map<std::string, Rational> proportions;
    std::vector<std::string> priority;  // highest first
};

struct PetriNetSpec {
    std::string name;
    std::vector<std::string> resource_parameters;
    std::vector<Place> places;
    std::vector<std::string> transitions;
    std::vector<Arc> arcs;
    std::map<std::string, Routing> routing;
    bool homogeneous = false;

    const Place* find_place(const std::string& n) const {
        for (const auto& p : places)
            if (p.name == n) return &p;
        return nullptr;
    }
    bool is_transition(const std::string& n) const {
        return std::find(transitions.begin(), transitions.end(), n) != transitions.end();
    }

    /// Transitions fed by `place`, in arc order.
    std::vector<std::string> downstream(const std::string& place) const {
        std::vector<std::string> out;
        for (const auto& a : arcs)
            if (a.from == place) out.push_back(a.to);
        return out;
    }
    /// Transitions feeding `place`, in arc order.
    std::vector<std::string> upstream_transitions(const std::string& place) const {
        std::vector<std::string> out;
        for (const auto& a : arcs)
            if (a.to == place) out.push_back(a.from);
        return out;
    }
    /// Places feeding `transition`, in arc order.
    std::vector<std::string> upstream_places(const std::string& transition) const {
        std::vector<std::string> out;
        for (const auto& a : arcs)
            if (a.to == transition) out.push_back(a.from);
        return out;
    }

    void validate() const {
        if (transitions.empty()) throw SchemaError("net has no transitions");
        std::set<std::string> params(resource_parameters.begin(), resource_parameters.end());
        std::set<std::string> names;
        for (const auto& p : places) {
            if (!names.insert(p.name).second) throw SemanticError("duplicate node name '" + p.name + "'");
            for (const auto& [k, v] : p.marking.coefficients)
                if (!params.count(k)) throw SemanticError("undeclared parameter '" + k + "' in place " + p.name);
            if (homogeneous && p.marking.constant != 0)
                throw SemanticError("homogeneous model has a constant marking in place " + p.name);
        }
        for (const auto& t : transitions)
            if (!names.insert(t).second) throw SemanticError("duplicate node name '" + t + "'");
        std::set<std::pair<std::string, std::string>> seen;
        for (const auto& a : arcs) {
            bool pt = find_place(a.from) && is_transition(a.to);
            bool tp = is_transition(a.from) && find_place(a.to);
            if (!pt && !tp) throw SemanticError("arc " + a.from + " -> " + a.to + " must join a place and a transition");
            if (!seen.insert({a.from, a.to}).second)
                throw SemanticError("duplicate arc " + a.from + " -> " + a.to);
        }
        for (const auto& [place, r] : routing) {
            if (!find_place(place)) throw SemanticError("routing for unknown place '" + place + "'");
            auto down = downstream(place);
            std::set<std::string> down_set(down.begin(), down.end());
            if (!r.proportions.empty()) {
                Rational sum = 0;
                for (const auto& [t, pi] : r.proportions) {
                    if (!down_set.count(t))
                        throw SemanticError("proportion for " + t + " which is not downstream of " + place);
                    if (pi <= 0 || pi > 1)
                        throw SemanticError("proportion " + to_string(pi) + " at " + place + " is outside (0,1]");
                    sum += pi;
                }
                if (sum != 1) throw SemanticError("proportions at " + place + " sum to " + to_string(sum));
                if (r.proportions.size() != down_set.size())
                    throw SemanticError("proportions at " + place + " do not cover every downstream transition");
            }
            if (!r.priority.empty()) {
                std::set<std::string> prio(r.priority.begin(), r.priority.end());
                if (prio.size() != r.priority.size())
                    throw SemanticError("priority list at " + place + " repeats a transition");
                if (prio != down_set || prio.size() < 2)
                    throw SemanticError("priority list at " + place + " must order all (>= 2) downstream transitions");
            }
        }
    }
};

/// One counter per transition; one action per upstream place.
inline PWLDynamics compile_dynamics(const PetriNetSpec& net) {
    net.validate();
    PWLDynamics dyn;
    dyn.name = net.name;
    dyn.resource_parameters = net.resource_parameters;
    dyn.homogeneous = net.homogeneous;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < net.transitions.size(); ++i) index[net.transitions[i]] = i;

    for (const auto& [place, r] : net.routing)
        if (!r.proportions.empty() && !r.priority.empty())
            throw CompileError("place '" + place + "' carries both proportions and priorities");
    for (const auto& p : net.places) {
        auto down = net.downstream(p.name);
        if (down.size() >= 2 && !net.routing.count(p.name))
            throw CompileError("place '" + p.name + "' feeds several transitions without a routing rule");
    }

    for (const auto& q : net.transitions) {
        Counter c;
        c.name = q;
        for (const auto& pname : net.upstream_places(q)) {
            const Place& place = *net.find_place(pname);
            Action a;
            a.label = pname;
            a.resource = place.marking;
            Rational share = 1;
            const Routing* routing = nullptr;
            if (auto it = net.routing.find(pname); it != net.routing.end()) {
                routing = &it->second;
                if (!routing->proportions.empty()) share = routing->proportions.at(q);
            }
            for (const auto& src : net.upstream_transitions(pname))
                a.terms.push_back({index[src], place.holding_time, share, false});
            if (routing && !routing->priority.empty()) {
                const auto& order = routing->priority;
                const auto mine = std::find(order.begin(), order.end(), q) - order.begin();
                for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(order.size()); ++k) {
                    if (k == mine) continue;
                    a.terms.push_back({index[order[static_cast<std::size_t>(k)]], 0, Rational(-1), k > mine});
                }
            }
            normalize_terms(a.terms);
            c.actions.push_back(std::move(a));
        }
        if (c.actions.empty()) throw CompileError("transition '" + q + "' has no input place");
        dyn.counters.push_back(std::move(c));
    }
    dyn.validate();
    evaluation_order(dyn);
    return dyn;
}

// ---------------------------------------------------------------------------
// Text form

inline std::string format_coefficient_prefix(const Rational& c, bool first) {
    std::string out;
    Rational a = abs(c);
    if (first)
        out = c < 0 ? "-" : "";
    else
        out = c < 0 ? " - " : " + ";
    if (a != 1) out += to_string(a) + "*";
    return out;
}

inline std::string format_term(const PWLDynamics& dyn, const DelayedTerm& t) {
    std::string arg = "t";
    if (t.left_limit)
        arg = "t-";
    else if (t.delay > 0)
        arg = "t - " + std::to_string(t.delay);
    return dyn.counters[t.counter].name + "(" + arg + ")";
}

/// `N_C + 3/5*z_JS(t - 1) - z_SC(t-)`; parseable by the model reader.
inline std::string format_action(const PWLDynamics& dyn, const Action& a) {
    std::string out;
    bool first = true;
    for (const auto& p : dyn.resource_parameters) {
        Rational c = a.resource.coefficient(p);
        if (c == 0) continue;
        out += format_coefficient_prefix(c, first) + p;
        first = false;
    }
    for (const auto& t : a.terms) {
        out += format_coefficient_prefix(t.coefficient, first) + format_term(dyn, t);
        first = false;
    }
    if (a.resource.constant != 0 || first) {
        const Rational& c = a.resource.constant;
        if (first)
            out += to_string(c);
        else
            out += (c < 0 ? " - " : " + ") + to_string(abs(c));
    }
    return out;
}

/// One line per counter: `z(t) = min(a1, a2)`, or `z(t) = a1` for one action.
inline std::string format_dynamics(const PWLDynamics& dyn) {
    std::string out;
    for (const auto& c : dyn.counters) {
        out += c.name + "(t) = ";
        if (c.actions.size() == 1) {
            out += format_action(dyn, c.actions[0]);
        } else {
            out += "min(";
            for (std::size_t k = 0; k < c.actions.size(); ++k) {
                if (k) out += ", ";
                out += format_action(dyn, c.actions[k]);
            }
            out += ")";
        }
        out += "\n";
    }
    return out;
}

} // namespace phasediag
