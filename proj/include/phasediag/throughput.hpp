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

// Throughput of a policy. With V a basis of right eigenvectors of P for the
// eigenvalue 1 and M the dual left basis (M V = I), a stationary regime has
// rho = V lambda where (M Pbar V) lambda = M r. Also: existence checks on the
// delayed system and the Markov-chain mean payoff used as a reference.

#include "phasediag/errors.hpp"
#include "phasediag/lexsys.hpp"
#include "phasediag/matrix.hpp"
#include "phasediag/model.hpp"
#include "phasediag/polynomial.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace phasediag {

struct EigenStructure {
    std::size_t q = 0;
    RationalMatrix V;  // n × q
    RationalMatrix M;  // q × n
};

enum class EigenFailure { no_eigenvalue_one, not_semisimple };

inline std::variant<EigenStructure, EigenFailure> eigen_structure(const RationalMatrix& P) {
    const std::size_t n = P.rows();
    RationalMatrix a = RationalMatrix::identity(n) - P;
    RationalMatrix k1 = kernel(a);
    if (k1.cols() == 0) return EigenFailure::no_eigenvalue_one;
    if (kernel(a * a).cols() != k1.cols()) return EigenFailure::not_semisimple;
    RationalMatrix left = kernel(a.transpose()).transpose();  // q × n
    auto gram = inverse(left * k1);
    if (!gram) return EigenFailure::not_semisimple;
    EigenStructure e;
    e.q = k1.cols();
    e.V = k1;
    e.M = *gram * left;
    return e;
}

/// rho = T params + offset.
struct ThroughputMap {
    std::vector<std::string> parameters;
    RationalMatrix T;  // n × #parameters
    Vector offset;     // zero for homogeneous models

    Vector evaluate(const Vector& params) const {
        Vector rho = T * params;
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += offset[i];
        return rho;
    }
    Rational coefficient(std::size_t counter, const std::string& param) const {
        for (std::size_t k = 0; k < parameters.size(); ++k)
            if (parameters[k] == param) return T(counter, k);
        return 0;
    }

    friend bool operator==(const ThroughputMap&, const ThroughputMap&) = default;
};

struct DegenerateAggregate {};

/// Splits resource forms into a matrix over `params` and a constant vector.
inline std::pair<RationalMatrix, Vector> resource_matrix(const std::vector<ResourceForm>& r,
                                                         const std::vector<std::string>& params) {
    RationalMatrix R(r.size(), params.size());
    Vector c(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        for (std::size_t k = 0; k < params.size(); ++k) R(i, k) = r[i].coefficient(params[k]);
        c[i] = r[i].constant;
    }
    return {R, c};
}

inline std::variant<ThroughputMap, DegenerateAggregate> throughput_map(const EigenStructure& e, const RationalMatrix& P,
                                                                       const RationalMatrix& Pbar,
                                                                       const std::vector<ResourceForm>& r,
                                                                       const std::vector<std::string>& params) {
    (void)P;
    RationalMatrix agg = e.M * Pbar * e.V;
    auto inv = inverse(agg);
    if (!inv) return DegenerateAggregate{};
    auto [R, c] = resource_matrix(r, params);
    RationalMatrix left = e.V * *inv * e.M;
    ThroughputMap t;
    t.parameters = params;
    t.T = left * R;
    t.offset = left * c;
    return t;
}

enum class ThroughputStatus { unique, zero, not_semisimple, degenerate };

inline std::string to_string(ThroughputStatus s) {
    switch (s) {
    case ThroughputStatus::unique: return "unique";
    case ThroughputStatus::zero: return "zero";
    case ThroughputStatus::not_semisimple: return "not_semisimple";
    case ThroughputStatus::degenerate: return "degenerate_aggregate";
    }
    return "?";
}

struct PolicyThroughput {
    ThroughputStatus status = ThroughputStatus::degenerate;
    std::optional<ThroughputMap> map;  // present for unique and zero
};

/// Throughput from the equality part of the stationary system: rho = P rho,
/// u = r + P u - Pbar rho, and L rho = 0 for a chosen action with left limits.
/// Unique when every solution shares the same rho; without left limits this
/// agrees with throughput_map.
inline PolicyThroughput policy_throughput(const PWLDynamics& dyn, const Policy& sigma) {
    auto sys = build_stationary_system(dyn, sigma);
    const std::size_t n = dyn.size();
    const std::size_t np = sys.num_params();
    const std::size_t w = 2 * n;
    RationalMatrix e(sys.equalities.size(), w + np + 1);
    for (std::size_t r = 0; r < sys.equalities.size(); ++r) {
        const auto& row = sys.equalities[r];
        for (std::size_t j = 0; j < w; ++j) e(r, j) = row.coeffs[j];
        // move parameters and constant to the right-hand side
        for (std::size_t k = 0; k < np; ++k) e(r, w + k) = -row.coeffs[sys.param(k)];
        e(r, w + np) = -row.constant;
    }
    RationalMatrix red = e;
    const auto pivots = rref(red, w);

    PolicyThroughput out;
    std::vector<long> pivot_row(w, -1);
    for (std::size_t r = 0; r < pivots.size(); ++r) pivot_row[pivots[r]] = static_cast<long>(r);
    for (std::size_t i = 0; i < n; ++i) {
        if (pivot_row[i] < 0) return out;
        for (std::size_t j = 0; j < w; ++j)
            if (pivot_row[j] < 0 && red(static_cast<std::size_t>(pivot_row[i]), j) != 0) return out;
    }
    ThroughputMap t;
    t.parameters = dyn.resource_parameters;
    t.T = RationalMatrix(n, np);
    t.offset.assign(n, Rational(0));
    bool zero = true;
    for (std::size_t i = 0; i < n; ++i) {
        auto r = static_cast<std::size_t>(pivot_row[i]);
        for (std::size_t k = 0; k < np; ++k) {
            t.T(i, k) = red(r, w + k);
            if (t.T(i, k) != 0) zero = false;
        }
        t.offset[i] = red(r, w + np);
        if (t.offset[i] != 0) zero = false;
    }
    out.status = zero ? ThroughputStatus::zero : ThroughputStatus::unique;
    out.map = std::move(t);
    return out;
}

// ---------------------------------------------------------------------------
// Existence conditions

struct AssumptionReport {
    bool semisimple = false;           // eigenvalue 1 of P absent or semisimple
    bool spectrum_at_0_ok = false;     // no eigenvalue of P(0) in [1, inf)
    bool alpha_exact_ok = false;       // det(I - P(alpha)) has no root in [0, 1)
    bool alpha_grid_ok = false;        // same, sampled on a grid (heuristic)
    bool aggregate_invertible = false; // I + C S invertible, C the spectral projector
    std::vector<std::string> notes;

    bool all_ok() const {
        return semisimple && spectrum_at_0_ok && alpha_exact_ok && alpha_grid_ok && aggregate_invertible;
    }
};

/// P(alpha) = sum_tau P_tau alpha^tau, with left limits read one step back as
/// in the simulator.
inline RationalMatrix delayed_matrix(const PolicyMatrices& pm, const Rational& alpha) {
    const std::size_t n = pm.P.rows();
    RationalMatrix out(n, n);
    if (pm.L.rows() == n) out = pm.L.scaled(alpha) - pm.L;
    for (const auto& [tau, m] : pm.P_tau) {
        Rational w = 1;
        for (std::size_t k = 0; k < tau; ++k) w *= alpha;
        out = out + m.scaled(w);
    }
    return out;
}

inline AssumptionReport check_existence_assumptions(const PWLDynamics& dyn, const Policy& sigma, std::size_t grid = 64) {
    auto pm = policy_matrices(dyn, sigma);
    const std::size_t n = dyn.size();
    AssumptionReport rep;
    const RationalMatrix id = RationalMatrix::identity(n);

    RationalMatrix p0 = delayed_matrix(pm, Rational(0));
    Polynomial chi = characteristic_polynomial(p0);
    rep.spectrum_at_0_ok = evaluate(chi, Rational(1)) != 0 && count_roots_above(chi, Rational(1)) == 0;
    if (!rep.spectrum_at_0_ok) rep.notes.push_back("P(0) has an eigenvalue in [1, inf)");

    // det(I - P(alpha)) has degree at most n * max delay
    std::size_t deg = n * std::max<std::size_t>(1, dyn.max_delay());
    Vector xs, ys;
    for (std::size_t k = 0; k <= deg; ++k) {
        Rational a(static_cast<long>(k));
        xs.push_back(a);
        ys.push_back(determinant(id - delayed_matrix(pm, a)));
    }
    Polynomial d = interpolate(xs, ys);
    if (d.empty()) {
        rep.alpha_exact_ok = false;
    } else {
        // roots in (0, 1)
        std::size_t in_open = count_roots(d, Rational(0), Rational(1));
        if (evaluate(d, Rational(1)) == 0 && in_open > 0) --in_open;
        rep.alpha_exact_ok = evaluate(d, Rational(0)) != 0 && in_open == 0;
    }
    if (!rep.alpha_exact_ok) rep.notes.push_back("det(I - P(alpha)) vanishes on [0, 1)");
    rep.alpha_grid_ok = true;
    for (std::size_t k = 0; k < grid; ++k) {
        Rational a(static_cast<long>(k), static_cast<long>(grid));
        a.canonicalize();
        if (determinant(id - delayed_matrix(pm, a)) == 0) {
            rep.alpha_grid_ok = false;
            rep.notes.push_back("det(I - P(alpha)) = 0 at alpha = " + to_string(a));
            break;
        }
    }

    auto eig = eigen_structure(pm.P);
    if (auto* fail = std::get_if<EigenFailure>(&eig)) {
        rep.semisimple = *fail == EigenFailure::no_eigenvalue_one;
        if (!rep.semisimple) rep.notes.push_back("eigenvalue 1 of P is not semisimple");
        // without eigenvalue 1 the projector vanishes and I + C S = I
        rep.aggregate_invertible = rep.semisimple;
        return rep;
    }
    rep.semisimple = true;
    const auto& e = std::get<EigenStructure>(eig);
    RationalMatrix projector = e.V * e.M;
    RationalMatrix s = pm.Pbar - pm.P;  // sum (tau - 1) P_tau
    rep.aggregate_invertible = determinant(id + projector * s) != 0;
    if (!rep.aggregate_invertible) rep.notes.push_back("I + C S is singular");
    return rep;
}

// ---------------------------------------------------------------------------
// Markov chains

/// Mean payoff per step of the chain P with rewards r: sum over final classes
/// of (absorption probability) × (invariant measure · r).
inline Vector mdp_mean_payoff(const RationalMatrix& P, const Vector& r) {
    const std::size_t n = P.rows();
    if (P.cols() != n || r.size() != n) throw InvalidInput("mean payoff: shape mismatch");
    for (std::size_t i = 0; i < n; ++i) {
        Rational sum = 0;
        for (std::size_t j = 0; j < n; ++j) {
            if (P(i, j) < 0) throw InvalidInput("mean payoff: negative transition probability");
            sum += P(i, j);
        }
        if (sum != 1) throw InvalidInput("mean payoff: row " + std::to_string(i) + " does not sum to 1");
    }
    // strongly connected components (Tarjan)
    std::vector<long> index(n, -1), low(n, 0), comp(n, -1);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    long counter = 0, ncomp = 0;
    std::function<void(std::size_t)> strong = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t w = 0; w < n; ++w) {
            if (P(v, w) == 0) continue;
            if (index[w] < 0) {
                strong(w);
                low[v] = std::min(low[v], low[w]);
            } else if (on_stack[w]) {
                low[v] = std::min(low[v], index[w]);
            }
        }
        if (low[v] == index[v]) {
            while (true) {
                std::size_t w = stack.back();
                stack.pop_back();
                on_stack[w] = false;
                comp[w] = ncomp;
                if (w == v) break;
            }
            ++ncomp;
        }
    };
    for (std::size_t v = 0; v < n; ++v)
        if (index[v] < 0) strong(v);

    std::vector<bool> final_class(static_cast<std::size_t>(ncomp), true);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (P(i, j) != 0 && comp[i] != comp[j]) final_class[static_cast<std::size_t>(comp[i])] = false;

    std::vector<bool> recurrent(n, false);
    for (std::size_t i = 0; i < n; ++i) recurrent[i] = final_class[static_cast<std::size_t>(comp[i])];
    std::vector<std::size_t> transient;
    for (std::size_t i = 0; i < n; ++i)
        if (!recurrent[i]) transient.push_back(i);

    Vector rho(n, Rational(0));
    for (long k = 0; k < ncomp; ++k) {
        if (!final_class[static_cast<std::size_t>(k)]) continue;
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < n; ++i)
            if (comp[i] == k) members.push_back(i);
        // invariant measure: m (P_FF - I) = 0, sum m = 1
        const std::size_t s = members.size();
        RationalMatrix a(s + 1, s);
        Vector b(s + 1, Rational(0));
        for (std::size_t x = 0; x < s; ++x) {
            for (std::size_t y = 0; y < s; ++y) a(y, x) = P(members[x], members[y]) - (x == y ? 1 : 0);
            a(s, x) = 1;
        }
        b[s] = 1;
        auto m = solve_any(a, b);
        if (!m) throw InvariantViolation("mean payoff: no invariant measure");
        Rational gain = 0;
        for (std::size_t x = 0; x < s; ++x) gain += (*m)[x] * r[members[x]];
        // absorption probabilities from transient states: (I - P_TT) v = P_TF 1
        Vector v(n, Rational(0));
        for (auto i : members) v[i] = 1;
        if (!transient.empty()) {
            const std::size_t t = transient.size();
            RationalMatrix lhs(t, t);
            Vector rhs(t, Rational(0));
            for (std::size_t x = 0; x < t; ++x) {
                for (std::size_t y = 0; y < t; ++y)
                    lhs(x, y) = (x == y ? 1 : 0) - P(transient[x], transient[y]);
                for (auto j : members) rhs[x] += P(transient[x], j);
            }
            auto inv = inverse(lhs);
            if (!inv) throw InvariantViolation("mean payoff: transient block is singular");
            Vector sol = *inv * rhs;
            for (std::size_t x = 0; x < t; ++x) v[transient[x]] = sol[x];
        }
        for (std::size_t i = 0; i < n; ++i) rho[i] += v[i] * gain;
    }
    return rho;
}

} // namespace phasediag
