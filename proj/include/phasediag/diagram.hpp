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

// Policy enumeration, strict feasibility, phase cells and the deduplicated
// phase diagram.

#include "phasediag/geometry.hpp"
#include "phasediag/lexpoly.hpp"
#include "phasediag/lexsys.hpp"
#include "phasediag/model.hpp"
#include "phasediag/throughput.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>
#include <vector>

namespace phasediag {

/// Cartesian product of action indices, first counter most significant.
inline std::vector<Policy> enumerate_policies(const PWLDynamics& dyn) {
    std::vector<Policy> out;
    const std::size_t n = dyn.size();
    const std::size_t total = dyn.policy_count();
    out.reserve(total);
    Policy p;
    p.choice.assign(n, 0);
    for (std::size_t k = 0; k < total; ++k) {
        out.push_back(p);
        for (std::size_t i = n; i-- > 0;) {
            if (++p.choice[i] < dyn.counters[i].actions.size()) break;
            p.choice[i] = 0;
        }
    }
    return out;
}

/// Counters that count positivity. Sources (a single self-feeding action,
/// like an arrival clock) always have a positive slope and are skipped unless
/// every counter is one.
inline std::vector<std::size_t> witness_counters(const PWLDynamics& dyn) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < dyn.size(); ++i)
        if (!dyn.is_source(i)) out.push_back(i);
    if (out.empty())
        for (std::size_t i = 0; i < dyn.size(); ++i) out.push_back(i);
    return out;
}

struct FeasibilityResult {
    Policy policy;
    Front max_front;
    std::vector<Front> trace;
    bool strictly_feasible = false;
    std::set<std::size_t> positive_rho_indices;
    std::size_t lp_calls = 0;
};

inline FeasibilityResult strict_feasibility(const PWLDynamics& dyn, const Policy& sigma, const LexSF& sf) {
    FeasibilityResult out;
    out.policy = sigma;
    auto res = compute_max_front(sf);
    out.max_front = res.front;
    out.trace = std::move(res.trace);
    out.lp_calls = res.lp_calls;
    for (auto i : witness_counters(dyn))
        if (out.max_front[sf.sign_groups[i]] == 1) out.positive_rho_indices.insert(i);
    out.strictly_feasible = !out.positive_rho_indices.empty();
    return out;
}

inline FeasibilityResult strict_feasibility(const PWLDynamics& dyn, const Policy& sigma) {
    return strict_feasibility(dyn, sigma, standardize(build_stationary_system(dyn, sigma)));
}

struct PhaseCell {
    HPolyhedron closure;                         // over the resource parameters
    std::vector<std::size_t> relative_interior_rows;  // facet rows strict in the relative interior
    long dimension = -1;
    std::vector<Policy> policies;
    std::vector<std::size_t> policy_indices;
    ThroughputStatus status = ThroughputStatus::degenerate;
    std::optional<ThroughputMap> throughput;

    bool full_dimensional() const { return dimension == static_cast<long>(closure.dim()); }
};

/// Closure of the set of parameters admitting the policy: the max-front
/// polyhedron projected onto the parameters.
inline PhaseCell policy_cell(const PWLDynamics& dyn, const Policy& sigma, const LexSF& sf, const Front& front) {
    PhaseCell cell;
    cell.closure = canonicalize(project(front_polyhedron_x(sf, front), dyn.resource_parameters));
    cell.dimension = affine_hull_dimension(cell.closure).dimension;
    for (std::size_t r = 0; r < cell.closure.ineq_rows.size(); ++r) cell.relative_interior_rows.push_back(r);
    cell.policies.push_back(sigma);
    auto t = policy_throughput(dyn, sigma);
    cell.status = t.status;
    cell.throughput = t.map;
    return cell;
}

inline PhaseCell policy_cell(const PWLDynamics& dyn, const Policy& sigma) {
    auto sf = standardize(build_stationary_system(dyn, sigma));
    auto fr = strict_feasibility(dyn, sigma, sf);
    if (!fr.strictly_feasible) throw InvalidInput("policy " + to_string(sigma) + " is not strictly feasible");
    return policy_cell(dyn, sigma, sf, fr.max_front);
}

struct DiagramStats {
    std::size_t total = 0;
    std::size_t strictly_feasible = 0;
    std::size_t full_dimensional = 0;           // policies with a full-dimensional cell
    std::size_t distinct_full_dimensional = 0;  // full-dimensional cells after merging
    std::size_t distinct = 0;                   // all cells after merging
};

struct PolicyOutcome {
    FeasibilityResult feasibility;
    std::optional<PhaseCell> cell;
};

struct PhaseDiagram {
    std::vector<std::string> parameters;
    std::vector<PhaseCell> cells;
    std::vector<PolicyOutcome> outcomes;  // one per policy, in enumeration order
    DiagramStats stats;
};

inline bool same_regime(const PhaseCell& a, const PhaseCell& b) {
    return a.status == b.status && a.throughput == b.throughput && a.dimension == b.dimension &&
           poly_equal(a.closure, b.closure);
}

struct DiagramOptions {
    std::size_t jobs = 1;
};

inline PhaseDiagram build_diagram(const PWLDynamics& dyn, const DiagramOptions& opt = {}) {
    PhaseDiagram d;
    d.parameters = dyn.resource_parameters;
    auto policies = enumerate_policies(dyn);
    d.outcomes.resize(policies.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            std::size_t k = next.fetch_add(1);
            if (k >= policies.size()) return;
            try {
                auto sf = standardize(build_stationary_system(dyn, policies[k]));
                PolicyOutcome o;
                o.feasibility = strict_feasibility(dyn, policies[k], sf);
                if (o.feasibility.strictly_feasible)
                    o.cell = policy_cell(dyn, policies[k], sf, o.feasibility.max_front);
                d.outcomes[k] = std::move(o);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = policies.size();
                return;
            }
        }
    };
    const std::size_t jobs = std::max<std::size_t>(1, std::min(opt.jobs, policies.size()));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    d.stats.total = policies.size();
    for (std::size_t k = 0; k < policies.size(); ++k) {
        auto& o = d.outcomes[k];
        if (!o.cell) continue;
        ++d.stats.strictly_feasible;
        if (o.cell->full_dimensional()) ++d.stats.full_dimensional;
        auto match = std::find_if(d.cells.begin(), d.cells.end(),
                                  [&](const PhaseCell& c) { return same_regime(c, *o.cell); });
        if (match != d.cells.end()) {
            match->policies.push_back(policies[k]);
            match->policy_indices.push_back(k);
        } else {
            PhaseCell c = *o.cell;
            c.policy_indices = {k};
            d.cells.push_back(std::move(c));
        }
    }
    d.stats.distinct = d.cells.size();
    for (const auto& c : d.cells)
        if (c.full_dimensional()) ++d.stats.distinct_full_dimensional;
    return d;
}

/// Cells whose relative interiors meet; the diagram does not decide which
/// regime is attained there.
inline std::vector<std::pair<std::size_t, std::size_t>> overlapping_cells(const PhaseDiagram& d) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t a = 0; a < d.cells.size(); ++a) {
        if (!d.cells[a].full_dimensional()) continue;
        for (std::size_t b = a + 1; b < d.cells.size(); ++b) {
            if (!d.cells[b].full_dimensional()) continue;
            auto meet = d.cells[a].closure.intersect(d.cells[b].closure);
            if (affine_hull_dimension(meet).dimension == static_cast<long>(meet.dim())) out.emplace_back(a, b);
        }
    }
    return out;
}

} // namespace phasediag
