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

// Small arithmetic language used by model files:
//
//   N_C + (1 - pi_care) * (z_JS(t - tau_JS) + z_SC(t - tau_SC)) - z_SC(t-)
//
// Values are affine combinations of resource symbols and delayed counter
// references with exact rational coefficients. `name(t-)` is a left limit.

#include "phasediag/errors.hpp"
#include "phasediag/rational.hpp"

#include <cctype>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace phasediag::expr {

struct CounterRef {
    std::string name;
    std::size_t delay = 0;
    bool left_limit = false;

    friend auto operator<=>(const CounterRef&, const CounterRef&) = default;
};

struct Affine {
    std::map<std::string, Rational> symbols;
    std::map<CounterRef, Rational> counters;
    Rational constant = 0;

    bool is_constant() const { return symbols.empty() && counters.empty(); }

    void prune() {
        std::erase_if(symbols, [](const auto& kv) { return kv.second == 0; });
        std::erase_if(counters, [](const auto& kv) { return kv.second == 0; });
    }

    Affine& operator+=(const Affine& o) {
        for (const auto& [k, v] : o.symbols) symbols[k] += v;
        for (const auto& [k, v] : o.counters) counters[k] += v;
        constant += o.constant;
        prune();
        return *this;
    }
    Affine& scale(const Rational& s) {
        for (auto& kv : symbols) kv.second *= s;
        for (auto& kv : counters) kv.second *= s;
        constant *= s;
        prune();
        return *this;
    }
};

/// Resolution context: bound scalars, free resource symbols, counter names.
struct Context {
    std::map<std::string, Rational> scalars;
    std::set<std::string> unbound_scalars;  // declared, but no value yet
    std::set<std::string> symbols;
    std::set<std::string> counters;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { number, name, call, add, sub, mul, div, neg } kind;
    Rational number;
    std::string name;
    NodePtr lhs;
    NodePtr rhs;
    // call: delay expression (null for plain t) and left-limit marker
    bool left_limit = false;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        NodePtr n = parse_sum();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return n;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError("expression '" + std::string(text_) + "': " + what + " at offset " + std::to_string(pos_));
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->lhs = std::move(a);
        n->rhs = std::move(b);
        return n;
    }

    NodePtr parse_sum() {
        NodePtr acc = parse_product();
        while (true) {
            if (accept('+'))
                acc = binary(Node::Kind::add, acc, parse_product());
            else if (accept('-'))
                acc = binary(Node::Kind::sub, acc, parse_product());
            else
                return acc;
        }
    }

    NodePtr parse_product() {
        NodePtr acc = parse_unary();
        while (true) {
            if (accept('*'))
                acc = binary(Node::Kind::mul, acc, parse_unary());
            else if (accept('/'))
                acc = binary(Node::Kind::div, acc, parse_unary());
            else
                return acc;
        }
    }

    NodePtr parse_unary() {
        if (accept('-')) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::neg;
            n->lhs = parse_unary();
            return n;
        }
        if (accept('+')) return parse_unary();
        return parse_atom();
    }

    NodePtr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr inner = parse_sum();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            auto q = try_parse_rational(text_.substr(start, pos_ - start));
            if (!q) fail("bad number");
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::number;
            n->number = *q;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            auto n = std::make_shared<Node>();
            n->name = std::string(text_.substr(start, pos_ - start));
            if (accept('(')) {
                n->kind = Node::Kind::call;
                skip_ws();
                if (pos_ >= text_.size() || text_[pos_] != 't') fail("counter argument must start with 't'");
                ++pos_;
                if (accept(')')) return n;
                if (!accept('-')) fail("expected '-' or ')' after 't'");
                if (accept(')')) {
                    n->left_limit = true;
                    return n;
                }
                n->lhs = parse_sum();
                if (!accept(')')) fail("expected ')'");
                return n;
            }
            n->kind = Node::Kind::name;
            return n;
        }
        fail(c == '\0' ? "unexpected end" : "unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

inline NodePtr parse(std::string_view text) { return Parser(text).parse(); }

inline Affine evaluate(const Node& n, const Context& ctx);

inline Rational evaluate_scalar(const Node& n, const Context& ctx, const std::string& what) {
    Affine a = evaluate(n, ctx);
    if (!a.is_constant()) throw SemanticError(what + " must not depend on resources or counters");
    return a.constant;
}

inline Affine evaluate(const Node& n, const Context& ctx) {
    Affine out;
    switch (n.kind) {
    case Node::Kind::number:
        out.constant = n.number;
        return out;
    case Node::Kind::name:
        if (auto it = ctx.scalars.find(n.name); it != ctx.scalars.end()) {
            out.constant = it->second;
            return out;
        }
        if (ctx.symbols.count(n.name)) {
            out.symbols[n.name] = 1;
            return out;
        }
        if (ctx.unbound_scalars.count(n.name)) throw ConfigError("parameter '" + n.name + "' is not bound");
        throw SemanticError("undeclared parameter '" + n.name + "'");
    case Node::Kind::call: {
        if (!ctx.counters.count(n.name)) throw SemanticError("unknown counter '" + n.name + "'");
        CounterRef ref{n.name, 0, n.left_limit};
        if (n.lhs) {
            Rational d = evaluate_scalar(*n.lhs, ctx, "delay of " + n.name);
            if (d < 0 || !is_integer(d)) throw ConfigError("delay of " + n.name + " must be a nonnegative integer");
            ref.delay = d.get_num().get_ui();
        }
        out.counters[ref] = 1;
        return out;
    }
    case Node::Kind::add:
        out = evaluate(*n.lhs, ctx);
        out += evaluate(*n.rhs, ctx);
        return out;
    case Node::Kind::sub: {
        out = evaluate(*n.lhs, ctx);
        Affine r = evaluate(*n.rhs, ctx);
        out += r.scale(-1);
        return out;
    }
    case Node::Kind::neg:
        out = evaluate(*n.lhs, ctx);
        return out.scale(-1);
    case Node::Kind::mul: {
        Affine a = evaluate(*n.lhs, ctx);
        Affine b = evaluate(*n.rhs, ctx);
        if (a.is_constant()) return b.scale(a.constant);
        if (b.is_constant()) return a.scale(b.constant);
        throw SemanticError("product of two non-constant terms is not affine");
    }
    case Node::Kind::div: {
        Affine a = evaluate(*n.lhs, ctx);
        Affine b = evaluate(*n.rhs, ctx);
        if (!b.is_constant()) throw SemanticError("division by a non-constant term");
        if (b.constant == 0) throw SemanticError("division by zero");
        return a.scale(1 / b.constant);
    }
    }
    return out;
}

inline Affine evaluate(std::string_view text, const Context& ctx) { return evaluate(*parse(text), ctx); }

} // namespace phasediag::expr
