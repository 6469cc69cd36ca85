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

// Walks through the reduced emergency-department model: dynamics, phase
// diagram, and a simulation check at one point of each full-dimensional cell.

#include "phasediag/phasediag.hpp"

#include <iomanip>
#include <iostream>

namespace pd = phasediag;

int main(int argc, char** argv) {
    std::string path = argc > 1 ? argv[1] : PHASEDIAG_MODELS_DIR "/ed-reduced.yaml";
    try {
        auto model = pd::load_model(path);
        auto dyn = model.dynamics();
        std::cout << "model " << model.name << "\n\n" << pd::format_dynamics(dyn) << "\n";

        auto d = pd::build_diagram(dyn);
        std::cout << d.stats.total << " policies, " << d.stats.strictly_feasible << " strictly feasible, "
                  << d.stats.distinct_full_dimensional << " full-dimensional phases\n\n";

        for (const auto& cell : d.cells) {
            if (!cell.full_dimensional()) continue;
            std::cout << "phase of policy " << pd::to_string(cell.policies.front());
            if (cell.policies.size() > 1) std::cout << " (+" << cell.policies.size() - 1 << " equivalent)";
            std::cout << "\n";
            for (const auto& r : cell.closure.ineq_rows)
                std::cout << "    " << pd::format_row({r.coeffs, r.rhs, false}, d.parameters) << "\n";
            if (!cell.throughput) continue;
            auto point = *pd::relative_interior_point(cell.closure);
            pd::Bindings b;
            for (std::size_t k = 0; k < point.size(); ++k) b[d.parameters[k]] = point[k];
            auto traj = pd::simulate<double>(dyn, b, {2000, 1, true});
            auto est = pd::estimate_throughput(traj);
            auto pred = cell.throughput->evaluate(point);
            for (std::size_t i = 0; i < dyn.size(); ++i) {
                auto row = cell.throughput->T.row(i);
                std::cout << "    rho[" << dyn.counters[i].name << "] = "
                          << pd::format_row({row, 0, false}, d.parameters).substr(
                                 0, pd::format_row({row, 0, false}, d.parameters).find(" <= "))
                          << "   simulated " << std::setprecision(4) << est.slope[i] << " vs " << pred[i].get_d()
                          << "\n";
            }
            std::cout << "\n";
        }
    } catch (const pd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
