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

// YAML model files.
//
//   name: ed-reduced
//   parameters:
//     resources: [lambda, N_C]
//     delays: {tau_JC: 4}          # null leaves a delay unbound
//     proportions: {pi_care: 0.4}
//   places:
//     - {name: cubicles, marking: N_C}
//     - {name: consult, hold: tau_JC}
//   transitions: [q_C, q_JC]
//   arcs: ["cubicles -> q_C", "q_C -> consult"]
//   routing:
//     consult_wait: {priority: [q_JC, q_SC]}
//     consult_end: {proportions: {q_exit: 1 - pi_care, q_care: pi_care}}
//
// or, instead of the net sections, counter dynamics written out directly:
//
//   dynamics:
//     - counter: z
//       min: ["lambda + z(t - 1)", {label: pool, expr: "N + z(t - tau)"}]

#include "phasediag/errors.hpp"
#include "phasediag/expr.hpp"
#include "phasediag/model.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <sstream>
#include <variant>

namespace phasediag {

struct Model {
    std::string name;
    std::vector<std::string> resource_parameters;
    Bindings scalars;  // delay and proportion values in force
    std::variant<PetriNetSpec, PWLDynamics> content;

    bool is_net() const { return std::holds_alternative<PetriNetSpec>(content); }

    /// Counter dynamics, compiled from the net when needed. Pass-through
    /// counters are substituted away unless `keep_all` is set.
    PWLDynamics dynamics(bool keep_all = false) const {
        PWLDynamics dyn = is_net() ? compile_dynamics(std::get<PetriNetSpec>(content)) : std::get<PWLDynamics>(content);
        return keep_all ? dyn : inline_pass_through(dyn);
    }
};

namespace detail {

inline std::string where(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.line >= 0 ? "line " + std::to_string(m.line + 1) + ": " : "";
}

inline void require_keys(const YAML::Node& map, std::initializer_list<const char*> allowed, const std::string& ctx) {
    if (!map.IsMap()) throw SchemaError(where(map) + ctx + " must be a mapping");
    for (const auto& kv : map) {
        auto key = kv.first.as<std::string>();
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw SchemaError(where(kv.first) + "unknown field '" + key + "' in " + ctx);
    }
}

inline std::string scalar_text(const YAML::Node& n, const std::string& ctx) {
    if (!n.IsScalar()) throw SchemaError(where(n) + ctx + " must be a scalar");
    return n.Scalar();
}

inline std::vector<std::string> name_list(const YAML::Node& n, const std::string& ctx) {
    if (!n) return {};
    if (!n.IsSequence()) throw SchemaError(where(n) + ctx + " must be a list");
    std::vector<std::string> out;
    for (const auto& e : n) out.push_back(scalar_text(e, ctx + " entry"));
    return out;
}

template <class F>
decltype(auto) located(const YAML::Node& n, F&& f) {
    try {
        return f();
    } catch (const SchemaError& e) {
        throw SchemaError(where(n) + e.what());
    } catch (const SemanticError& e) {
        throw SemanticError(where(n) + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(where(n) + e.what());
    }
}

inline expr::Affine eval(const YAML::Node& n, const expr::Context& ctx, const std::string& what) {
    return located(n, [&] { return expr::evaluate(scalar_text(n, what), ctx); });
}

inline ResourceForm to_resource(const expr::Affine& a) {
    ResourceForm f;
    f.coefficients = a.symbols;
    f.constant = a.constant;
    return f;
}

inline std::size_t to_delay(const Rational& q, const std::string& what) {
    if (q < 0 || !is_integer(q)) throw ConfigError(what + " must be a nonnegative integer, got " + to_string(q));
    return q.get_num().get_ui();
}

} // namespace detail

/// A parsed document whose delays and proportions are not yet fixed.
class ModelDocument {
public:
    static ModelDocument from_text(const std::string& text) {
        ModelDocument doc;
        try {
            doc.root_ = YAML::Load(text);
        } catch (const YAML::Exception& e) {
            throw SchemaError(std::string("malformed YAML: ") + e.what());
        }
        doc.read_header();
        return doc;
    }

    static ModelDocument from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot open model file '" + path + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return from_text(ss.str());
    }

    const std::string& name() const { return name_; }
    const std::vector<std::string>& resources() const { return resources_; }
    const std::vector<std::string>& scalar_names() const { return scalar_order_; }
    const std::map<std::string, std::optional<Rational>>& defaults() const { return defaults_; }

    bool declares_scalar(const std::string& n) const { return defaults_.count(n) > 0; }
    bool declares_resource(const std::string& n) const {
        return std::find(resources_.begin(), resources_.end(), n) != resources_.end();
    }

    /// Fixes every delay and proportion (defaults, then `overrides`).
    Model bind(const Bindings& overrides = {}) const {
        for (const auto& [k, v] : overrides)
            if (!declares_scalar(k)) throw ConfigError("binding for undeclared delay or proportion '" + k + "'");
        Model m;
        m.name = name_;
        m.resource_parameters = resources_;
        for (const auto& [k, v] : defaults_) {
            auto it = overrides.find(k);
            if (it != overrides.end())
                m.scalars[k] = it->second;
            else if (v)
                m.scalars[k] = *v;
            else
                throw ConfigError("parameter '" + k + "' has no value; pass --bind " + k + "=<value>");
        }
        expr::Context ctx;
        ctx.scalars = m.scalars;
        ctx.symbols.insert(resources_.begin(), resources_.end());
        if (root_["dynamics"])
            m.content = read_dynamics(ctx);
        else
            m.content = read_net(ctx);
        return m;
    }

private:
    void read_header() {
        if (!root_.IsMap()) throw SchemaError("model document must be a mapping");
        detail::require_keys(root_, {"name", "description", "homogeneous", "parameters", "places", "transitions",
                                     "arcs", "routing", "dynamics"},
                             "model");
        name_ = root_["name"] ? detail::scalar_text(root_["name"], "name") : std::string("model");
        if (root_["homogeneous"]) homogeneous_ = root_["homogeneous"].as<bool>();
        if (auto params = root_["parameters"]) {
            detail::require_keys(params, {"resources", "delays", "proportions"}, "parameters");
            resources_ = detail::name_list(params["resources"], "parameters.resources");
            for (const char* section : {"delays", "proportions"}) {
                auto sec = params[section];
                if (!sec) continue;
                if (!sec.IsMap()) throw SchemaError(detail::where(sec) + std::string(section) + " must be a mapping");
                for (const auto& kv : sec) {
                    auto key = kv.first.as<std::string>();
                    if (defaults_.count(key) || declares_resource(key))
                        throw SemanticError(detail::where(kv.first) + "parameter '" + key + "' declared twice");
                    std::optional<Rational> value;
                    if (!kv.second.IsNull()) {
                        value = try_parse_rational(detail::scalar_text(kv.second, key));
                        if (!value) throw SchemaError(detail::where(kv.second) + "bad number for '" + key + "'");
                    }
                    defaults_[key] = value;
                    scalar_order_.push_back(key);
                }
            }
        }
        const bool has_net = root_["places"] || root_["transitions"] || root_["arcs"] || root_["routing"];
        if (has_net && root_["dynamics"]) throw SchemaError("a model has either net sections or a dynamics section");
        if (!has_net && !root_["dynamics"]) throw SchemaError("model has neither net sections nor dynamics");
    }

    PWLDynamics read_dynamics(expr::Context ctx) const {
        auto section = root_["dynamics"];
        if (!section.IsSequence() || section.size() == 0)
            throw SchemaError(detail::where(section) + "dynamics must be a nonempty list");
        PWLDynamics dyn;
        dyn.name = name_;
        dyn.resource_parameters = resources_;
        dyn.homogeneous = homogeneous_;
        for (const auto& entry : section) {
            detail::require_keys(entry, {"counter", "min"}, "dynamics entry");
            if (!entry["counter"]) throw SchemaError(detail::where(entry) + "dynamics entry needs 'counter'");
            Counter c;
            c.name = detail::scalar_text(entry["counter"], "counter");
            ctx.counters.insert(c.name);
            dyn.counters.push_back(c);
        }
        std::size_t ci = 0;
        for (const auto& entry : section) {
            auto actions = entry["min"];
            if (!actions || !actions.IsSequence() || actions.size() == 0)
                throw SchemaError(detail::where(entry) + "counter needs a nonempty 'min' list");
            std::size_t k = 0;
            for (const auto& act : actions) {
                Action a;
                YAML::Node text = act;
                if (act.IsMap()) {
                    detail::require_keys(act, {"label", "expr"}, "action");
                    if (act["label"]) a.label = detail::scalar_text(act["label"], "label");
                    text = act["expr"];
                    if (!text) throw SchemaError(detail::where(act) + "action needs 'expr'");
                }
                if (a.label.empty()) a.label = "a" + std::to_string(++k);
                auto value = detail::eval(text, ctx, "action");
                a.resource = detail::to_resource(value);
                for (const auto& [ref, coef] : value.counters)
                    a.terms.push_back({*dyn.index_of(ref.name), ref.delay, coef, ref.left_limit});
                normalize_terms(a.terms);
                dyn.counters[ci].actions.push_back(std::move(a));
            }
            ++ci;
        }
        dyn.validate();
        return dyn;
    }

    PetriNetSpec read_net(const expr::Context& ctx) const {
        PetriNetSpec net;
        net.name = name_;
        net.resource_parameters = resources_;
        net.homogeneous = homogeneous_;
        net.transitions = detail::name_list(root_["transitions"], "transitions");
        if (net.transitions.empty()) throw SchemaError("transitions list is empty");
        auto places = root_["places"];
        if (!places || !places.IsSequence()) throw SchemaError("places must be a list");
        for (const auto& p : places) {
            Place place;
            if (p.IsScalar()) {
                place.name = p.Scalar();
            } else {
                detail::require_keys(p, {"name", "marking", "hold"}, "place");
                if (!p["name"]) throw SchemaError(detail::where(p) + "place needs a name");
                place.name = detail::scalar_text(p["name"], "place name");
                if (p["marking"]) {
                    auto v = detail::eval(p["marking"], ctx, "marking");
                    place.marking = detail::to_resource(v);
                }
                if (p["hold"]) {
                    auto v = detail::eval(p["hold"], ctx, "hold");
                    if (!v.is_constant())
                        throw SemanticError(detail::where(p["hold"]) + "holding time must not depend on resources");
                    place.holding_time =
                        detail::located(p["hold"], [&] { return detail::to_delay(v.constant, "holding time"); });
                }
            }
            net.places.push_back(std::move(place));
        }
        auto arcs = root_["arcs"];
        if (!arcs || !arcs.IsSequence()) throw SchemaError("arcs must be a list");
        for (const auto& a : arcs) {
            auto text = detail::scalar_text(a, "arc");
            auto pos = text.find("->");
            if (pos == std::string::npos) throw SchemaError(detail::where(a) + "arc must read 'from -> to'");
            auto trim = [](std::string s) {
                auto b = s.find_first_not_of(" \t");
                auto e = s.find_last_not_of(" \t");
                return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
            };
            Arc arc{trim(text.substr(0, pos)), trim(text.substr(pos + 2))};
            if (arc.from.empty() || arc.to.empty()) throw SchemaError(detail::where(a) + "arc must read 'from -> to'");
            net.arcs.push_back(std::move(arc));
        }
        if (auto routing = root_["routing"]) {
            if (!routing.IsMap()) throw SchemaError(detail::where(routing) + "routing must be a mapping");
            for (const auto& kv : routing) {
                auto place = kv.first.as<std::string>();
                detail::require_keys(kv.second, {"priority", "proportions"}, "routing of " + place);
                Routing r;
                r.priority = detail::name_list(kv.second["priority"], "priority");
                if (auto props = kv.second["proportions"]) {
                    if (!props.IsMap()) throw SchemaError(detail::where(props) + "proportions must be a mapping");
                    for (const auto& pv : props) {
                        auto v = detail::eval(pv.second, ctx, "proportion");
                        if (!v.is_constant())
                            throw SemanticError(detail::where(pv.second) + "proportion must not depend on resources");
                        r.proportions[pv.first.as<std::string>()] = v.constant;
                    }
                }
                net.routing[place] = std::move(r);
            }
        }
        detail::located(root_, [&] {
            net.validate();
            return 0;
        });
        return net;
    }

    YAML::Node root_;
    std::string name_;
    bool homogeneous_ = false;
    std::vector<std::string> resources_;
    std::vector<std::string> scalar_order_;
    std::map<std::string, std::optional<Rational>> defaults_;
};

inline Model parse_model(const std::string& text, const Bindings& overrides = {}) {
    return ModelDocument::from_text(text).bind(overrides);
}

inline Model load_model(const std::string& path, const Bindings& overrides = {}) {
    return ModelDocument::from_file(path).bind(overrides);
}

/// A dynamics-only document equivalent to `dyn` (delays as numbers).
inline std::string dynamics_to_yaml(const PWLDynamics& dyn) {
    YAML::Emitter out;
    out << YAML::BeginMap;
    out << YAML::Key << "name" << YAML::Value << dyn.name;
    if (dyn.homogeneous) out << YAML::Key << "homogeneous" << YAML::Value << true;
    out << YAML::Key << "parameters" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "resources" << YAML::Value << YAML::Flow << dyn.resource_parameters;
    out << YAML::EndMap;
    out << YAML::Key << "dynamics" << YAML::Value << YAML::BeginSeq;
    for (const auto& c : dyn.counters) {
        out << YAML::BeginMap << YAML::Key << "counter" << YAML::Value << c.name;
        out << YAML::Key << "min" << YAML::Value << YAML::BeginSeq;
        for (const auto& a : c.actions) {
            out << YAML::Flow << YAML::BeginMap;
            out << YAML::Key << "label" << YAML::Value << a.label;
            out << YAML::Key << "expr" << YAML::Value << YAML::DoubleQuoted << format_action(dyn, a);
            out << YAML::EndMap;
        }
        out << YAML::EndSeq << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

} // namespace phasediag
