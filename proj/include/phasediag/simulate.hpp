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

// Discrete-time execution of the counter dynamics.

#include "phasediag/errors.hpp"
#include "phasediag/model.hpp"
#include "phasediag/rational.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace phasediag {

template <class T>
T convert(const Rational& q) {
    if constexpr (std::is_same_v<T, Rational>)
        return q;
    else
        return static_cast<T>(q.get_d());
}

inline double to_double(double x) { return x; }

struct SimulationOptions {
    std::size_t horizon = 1000;  // in time units
    std::size_t substeps = 1;    // grid points per time unit
    bool clamp = true;           // keep counters nondecreasing
};

/// values[i][k] = z_i(k h) with h = 1 / substeps. Entries k < history_length
/// are the seeded history; the rest are computed.
template <class T>
struct Trajectory {
    std::vector<std::string> counters;
    std::size_t substeps = 1;
    std::size_t history_length = 0;
    std::vector<std::vector<T>> values;

    std::size_t steps() const { return values.empty() ? 0 : values[0].size(); }
    double time(std::size_t k) const {
        return static_cast<double>(k) / static_cast<double>(substeps) - static_cast<double>(history_length) / static_cast<double>(substeps);
    }
};

/// History is a function of (counter, time t < 0) giving z_i(t); nullptr means
/// zero history. A left limit reads the previous grid point.
template <class T>
Trajectory<T> simulate(const PWLDynamics& dyn, const Bindings& params, const SimulationOptions& opt,
                       const std::function<T(std::size_t, const Rational&)>& history = nullptr) {
    if (opt.substeps == 0) throw InvalidInput("simulate: substeps must be positive");
    auto order = evaluation_order(dyn);
    const std::size_t n = dyn.size();
    const std::size_t K = opt.substeps;
    const std::size_t lag = std::max<std::size_t>(dyn.max_delay(), 1) * K;

    std::vector<std::vector<T>> r(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& a : dyn.counters[i].actions) {
            for (const auto& [name, _] : a.resource.coefficients)
                if (!params.count(name)) throw ConfigError("simulate: parameter '" + name + "' is not bound");
            r[i].push_back(convert<T>(a.resource.evaluate(params)));
        }

    Trajectory<T> traj;
    for (const auto& c : dyn.counters) traj.counters.push_back(c.name);
    traj.substeps = K;
    traj.history_length = lag;
    const std::size_t total = lag + opt.horizon * K + 1;
    traj.values.assign(n, std::vector<T>(total, T(0)));
    if (history) {
        for (std::size_t k = 0; k < lag; ++k) {
            Rational t(static_cast<long>(k) - static_cast<long>(lag), static_cast<long>(K));
            t.canonicalize();
            for (std::size_t i = 0; i < n; ++i) traj.values[i][k] = history(i, t);
        }
    }
    auto& z = traj.values;
    for (std::size_t k = lag; k < total; ++k) {
        for (auto i : order) {
            const auto& actions = dyn.counters[i].actions;
            T best{};
            for (std::size_t a = 0; a < actions.size(); ++a) {
                T v = r[i][a];
                for (const auto& term : actions[a].terms) {
                    std::size_t back = term.left_limit ? 1 : term.delay * K;
                    v += convert<T>(term.coefficient) * z[term.counter][k - back];
                }
                if (a == 0 || v < best) best = v;
            }
            if (opt.clamp && best < z[i][k - 1]) best = z[i][k - 1];
            z[i][k] = best;
        }
    }
    return traj;
}

struct ThroughputEstimate {
    std::vector<double> slope;
    std::vector<double> residual;  // max |z - fit| over the window, divided by the window length
};

/// Least-squares slope of each counter over the last (1 - burn_in) part of the run.
template <class T>
ThroughputEstimate estimate_throughput(const Trajectory<T>& traj, double burn_in = 0.5) {
    ThroughputEstimate out;
    const std::size_t first_run = traj.history_length;
    const std::size_t steps = traj.steps();
    if (steps <= first_run + 2) throw InvalidInput("estimate_throughput: trajectory too short");
    const std::size_t run = steps - first_run;
    std::size_t start = first_run + static_cast<std::size_t>(std::floor(burn_in * static_cast<double>(run)));
    if (start + 2 > steps) start = steps - 2;
    const double span = traj.time(steps - 1) - traj.time(start);
    for (const auto& series : traj.values) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double m = static_cast<double>(steps - start);
        for (std::size_t k = start; k < steps; ++k) {
            double x = traj.time(k);
            double y = to_double(series[k]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        double icpt = (sy - slope * sx) / m;
        double worst = 0;
        for (std::size_t k = start; k < steps; ++k)
            worst = std::max(worst, std::abs(to_double(series[k]) - (icpt + slope * traj.time(k))));
        out.slope.push_back(slope);
        out.residual.push_back(span > 0 ? worst / span : worst);
    }
    return out;
}

/// ||observed - predicted||_inf / ||predicted||_inf
inline double relative_error(const std::vector<double>& observed, const Vector& predicted) {
    double num = 0, den = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        num = std::max(num, std::abs(observed[i] - predicted[i].get_d()));
        den = std::max(den, std::abs(predicted[i].get_d()));
    }
    return den == 0 ? num : num / den;
}

/// Smallest integer time shift t0 such that along z(t) = u + rho (t + t0) no
/// action's value drops below the counter's own line, from the start of the
/// history window on. Actions with equal slope must already be ordered by
/// their offsets; those are left as they are.
inline long affine_seed_offset(const PWLDynamics& dyn, const Bindings& params, const Vector& u, const Vector& rho,
                               std::size_t substeps = 1) {
    const Rational lag(static_cast<long>(std::max<std::size_t>(dyn.max_delay(), 1)));
    Rational need = 0;
    for (std::size_t i = 0; i < dyn.size(); ++i) {
        for (const auto& a : dyn.counters[i].actions) {
            // value(t) - line_i(t) = alpha + beta t
            Rational alpha = a.resource.evaluate(params) - u[i];
            Rational beta = -rho[i];
            for (const auto& t : a.terms) {
                Rational back = t.left_limit ? Rational(1, static_cast<long>(substeps)) : Rational(static_cast<long>(t.delay));
                alpha += t.coefficient * (u[t.counter] - rho[t.counter] * back);
                beta += t.coefficient * rho[t.counter];
            }
            if (beta > 0 && alpha < 0) {
                Rational start = -alpha / beta + lag;
                if (start > need) need = start;
            }
        }
    }
    mpz_class c;
    mpz_cdiv_q(c.get_mpz_t(), need.get_num_mpz_t(), need.get_den_mpz_t());
    return c.get_si();
}

/// Seeds z(t) = u + rho (t + t0) on the history window and checks that the run
/// stays on that line exactly. Returns the largest deviation.
inline Rational affine_replay_deviation(const PWLDynamics& dyn, const Bindings& params, const Vector& u,
                                        const Vector& rho, std::size_t horizon, std::size_t substeps = 1) {
    SimulationOptions opt;
    opt.horizon = horizon;
    opt.substeps = substeps;
    opt.clamp = true;
    const Rational t0(affine_seed_offset(dyn, params, u, rho, substeps));
    auto line = [&](std::size_t i, const Rational& t) -> Rational { return u[i] + rho[i] * (t + t0); };
    auto traj = simulate<Rational>(dyn, params, opt, line);
    Rational worst = 0;
    for (std::size_t i = 0; i < dyn.size(); ++i)
        for (std::size_t k = traj.history_length; k < traj.steps(); ++k) {
            Rational t(static_cast<long>(k) - static_cast<long>(traj.history_length), static_cast<long>(substeps));
            t.canonicalize();
            Rational d = abs(traj.values[i][k] - line(i, t));
            if (d > worst) worst = d;
        }
    return worst;
}

} // namespace phasediag
