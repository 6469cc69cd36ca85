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

// Stationary regimes z(t) = u + rho t of a fixed policy. Substituting the
// affine ansatz into an action gives the pair ([P^a]_i rho, r_i^a + [P^a]_i u -
// [Pbar^a]_i rho), compared lexicographically with (rho_i, u_i).
//
// A left limit z_j(t^-) is read as z_j(t - eps) for an infinitesimal eps > 0.
// It contributes -eps rho_j to the offset, which appears as a third
// lexicographic component -[L^a]_i rho (L collects left-limit coefficients).
// Without it, a queue-limited high-priority transition would leave room for
// its lower-priority competitor to fire, which the priority rule forbids.

#include "phasediag/lexpoly.hpp"
#include "phasediag/matrix.hpp"
#include "phasediag/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace phasediag {

struct Policy {
    std::vector<std::size_t> choice;

    friend bool operator==(const Policy&, const Policy&) = default;
    friend auto operator<=>(const Policy&, const Policy&) = default;
};

inline std::string to_string(const Policy& p) {
    std::string out;
    for (std::size_t i = 0; i < p.choice.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(p.choice[i]);
    }
    return out;
}

inline void check_policy(const PWLDynamics& dyn, const Policy& sigma) {
    if (sigma.choice.size() != dyn.size())
        throw InvalidInput("policy has " + std::to_string(sigma.choice.size()) + " entries, dynamics has " +
                           std::to_string(dyn.size()) + " counters");
    for (std::size_t i = 0; i < dyn.size(); ++i)
        if (sigma.choice[i] >= dyn.counters[i].actions.size())
            throw InvalidInput("action index " + std::to_string(sigma.choice[i]) + " out of range for counter '" +
                               dyn.counters[i].name + "'");
}

struct PolicyMatrices {
    RationalMatrix P;
    RationalMatrix Pbar;
    std::vector<ResourceForm> r;
    std::map<std::size_t, RationalMatrix> P_tau;  // per delay; left limits land at 0
    RationalMatrix L;                             // left-limit part of P_tau[0]
};

/// Row contributions of a single action: [P^a]_i, [Pbar^a]_i and [L^a]_i.
struct ActionRows {
    Vector p;
    Vector pbar;
    Vector left;
    bool has_left_limit = false;
};

inline ActionRows action_rows(std::size_t n, const Action& a) {
    ActionRows rows{Vector(n, Rational(0)), Vector(n, Rational(0)), Vector(n, Rational(0)), false};
    for (const auto& t : a.terms) {
        rows.p[t.counter] += t.coefficient;
        rows.pbar[t.counter] += t.coefficient * static_cast<long>(t.delay);
        if (t.left_limit) {
            rows.left[t.counter] += t.coefficient;
            rows.has_left_limit = true;
        }
    }
    return rows;
}

inline PolicyMatrices policy_matrices(const PWLDynamics& dyn, const Policy& sigma) {
    check_policy(dyn, sigma);
    const std::size_t n = dyn.size();
    PolicyMatrices m;
    m.P = RationalMatrix(n, n);
    m.Pbar = RationalMatrix(n, n);
    m.L = RationalMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const Action& a = dyn.counters[i].actions[sigma.choice[i]];
        m.r.push_back(a.resource);
        for (const auto& t : a.terms) {
            m.P(i, t.counter) += t.coefficient;
            m.Pbar(i, t.counter) += t.coefficient * static_cast<long>(t.delay);
            auto it = m.P_tau.find(t.delay);
            if (it == m.P_tau.end()) it = m.P_tau.emplace(t.delay, RationalMatrix(n, n)).first;
            it->second(i, t.counter) += t.coefficient;
            if (t.left_limit) m.L(i, t.counter) += t.coefficient;
        }
    }
    return m;
}

/// coeffs · x + constant
struct AffineRow {
    Vector coeffs;
    Rational constant = 0;
};

/// rows(x) <=_lex 0
struct LexInequality {
    std::vector<AffineRow> rows;
    std::string label;
};

struct LexSystem {
    std::vector<std::string> variables;
    std::vector<AffineRow> equalities;            // row(x) = 0
    std::vector<LexInequality> lex_inequalities;
    std::vector<std::size_t> sign_groups;         // inequality index of -rho_i <= 0, per counter
    std::size_t counters = 0;

    std::size_t rho(std::size_t i) const { return i; }
    std::size_t u(std::size_t i) const { return counters + i; }
    std::size_t param(std::size_t k) const { return 2 * counters + k; }
    std::size_t num_params() const { return variables.size() - 2 * counters; }
};

/// Variables: rho_1..rho_n, u_1..u_n, then the resource parameters.
inline LexSystem build_stationary_system(const PWLDynamics& dyn, const Policy& sigma) {
    check_policy(dyn, sigma);
    const std::size_t n = dyn.size();
    LexSystem sys;
    sys.counters = n;
    for (const auto& c : dyn.counters) sys.variables.push_back("rho[" + c.name + "]");
    for (const auto& c : dyn.counters) sys.variables.push_back("u[" + c.name + "]");
    for (const auto& p : dyn.resource_parameters) sys.variables.push_back(p);
    const std::size_t width = sys.variables.size();

    // (rho_i - [P^a]_i rho,  u_i - r^a - [P^a]_i u + [Pbar^a]_i rho,  [L^a]_i rho)
    auto difference = [&](std::size_t i, const Action& a) {
        auto rows = action_rows(n, a);
        std::vector<AffineRow> out(rows.has_left_limit ? 3 : 2, AffineRow{Vector(width, Rational(0)), 0});
        out[0].coeffs[sys.rho(i)] += 1;
        out[1].coeffs[sys.u(i)] += 1;
        for (std::size_t j = 0; j < n; ++j) {
            out[0].coeffs[sys.rho(j)] -= rows.p[j];
            out[1].coeffs[sys.u(j)] -= rows.p[j];
            out[1].coeffs[sys.rho(j)] += rows.pbar[j];
            if (rows.has_left_limit) out[2].coeffs[sys.rho(j)] += rows.left[j];
        }
        for (std::size_t k = 0; k < dyn.resource_parameters.size(); ++k)
            out[1].coeffs[sys.param(k)] -= a.resource.coefficient(dyn.resource_parameters[k]);
        out[1].constant = -a.resource.constant;
        return out;
    };

    for (std::size_t i = 0; i < n; ++i)
        for (auto& row : difference(i, dyn.counters[i].actions[sigma.choice[i]])) sys.equalities.push_back(row);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& actions = dyn.counters[i].actions;
        for (std::size_t a = 0; a < actions.size(); ++a) {
            if (a == sigma.choice[i]) continue;
            sys.lex_inequalities.push_back({difference(i, actions[a]), dyn.counters[i].name + ":" + actions[a].label});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        AffineRow neg{Vector(width, Rational(0)), 0};
        neg.coeffs[sys.rho(i)] = -1;
        sys.sign_groups.push_back(sys.lex_inequalities.size());
        sys.lex_inequalities.push_back({{neg}, "rho[" + dyn.counters[i].name + "]>=0"});
    }
    return sys;
}

/// rows(x) <=_lex 0 becomes A x + s = b with s >=_lex 0, i.e. A = rows,
/// b = -constants. Equalities stay hard rows.
inline LexSF standardize(const LexSystem& sys) {
    LexSF sf;
    sf.x_vars = sys.variables;
    std::vector<Vector> rows;
    for (const auto& li : sys.lex_inequalities) {
        sf.depths.push_back(li.rows.size());
        sf.group_labels.push_back(li.label);
        for (const auto& r : li.rows) {
            rows.push_back(r.coeffs);
            sf.b.push_back(-r.constant);
        }
    }
    sf.A = rows.empty() ? RationalMatrix(0, sys.variables.size()) : RationalMatrix::from_rows(rows);
    for (const auto& e : sys.equalities) sf.equalities.push_back({e.coeffs, -e.constant});
    sf.sign_groups = sys.sign_groups;
    sf.validate();
    return sf;
}

/// Whether x = (rho, u, params) satisfies the system exactly (lex sense).
inline bool lex_system_satisfied(const LexSystem& sys, const Vector& x) {
    auto eval = [&](const AffineRow& r) {
        Rational acc = r.constant;
        for (std::size_t j = 0; j < r.coeffs.size(); ++j)
            if (r.coeffs[j] != 0) acc += r.coeffs[j] * x[j];
        return acc;
    };
    for (const auto& e : sys.equalities)
        if (eval(e) != 0) return false;
    for (const auto& li : sys.lex_inequalities) {
        for (const auto& r : li.rows) {
            Rational v = eval(r);
            if (v < 0) break;
            if (v > 0) return false;
        }
    }
    return true;
}

} // namespace phasediag
