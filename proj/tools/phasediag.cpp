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

// Command-line front end: compile, diagram, check-policy, simulate.

#include "phasediag/phasediag.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace pd = phasediag;

namespace {

constexpr int kInputError = 2;
constexpr int kInvariantError = 3;

struct Common {
    std::string model;
    std::vector<std::string> binds;
};

/// "name=p/q" pairs, split into delay/proportion overrides and resource values.
struct SplitBindings {
    pd::Bindings scalars;
    pd::Bindings resources;
};

SplitBindings split_bindings(const pd::ModelDocument& doc, const std::vector<std::string>& binds) {
    SplitBindings out;
    for (const auto& b : binds) {
        auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) throw pd::InvalidInput("--bind expects name=value, got '" + b + "'");
        std::string name = b.substr(0, eq);
        auto value = pd::try_parse_rational(b.substr(eq + 1));
        if (!value) throw pd::InvalidInput("--bind: '" + b.substr(eq + 1) + "' is not a rational");
        if (doc.declares_resource(name))
            out.resources[name] = *value;
        else
            out.scalars[name] = *value;
    }
    return out;
}

std::string format_affine(const pd::Vector& coeffs, const std::vector<std::string>& names) {
    pd::ReportRow row{coeffs, 0, false};
    auto s = pd::format_row(row, names);
    return s.substr(0, s.find(" <= "));
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw pd::InvalidInput("cannot write '" + path + "'");
    f << text;
}

int cmd_compile(const Common& c, bool keep_all, const std::string& format) {
    auto doc = pd::ModelDocument::from_file(c.model);
    auto split = split_bindings(doc, c.binds);
    if (!split.resources.empty()) throw pd::InvalidInput("compile: resource parameters stay symbolic");
    auto dyn = doc.bind(split.scalars).dynamics(keep_all);
    if (format == "yaml")
        std::cout << pd::dynamics_to_yaml(dyn);
    else
        std::cout << pd::format_dynamics(dyn);
    return 0;
}

struct DiagramFlags {
    bool full_dim_only = false;
    std::string normalize;
    std::string box = "10";
    std::size_t jobs = 1;
    std::string format = "json";
    std::string output;
};

int cmd_diagram(const Common& c, const DiagramFlags& f) {
    auto doc = pd::ModelDocument::from_file(c.model);
    auto split = split_bindings(doc, c.binds);
    if (!split.resources.empty()) throw pd::InvalidInput("diagram: resource parameters stay symbolic");
    auto model = doc.bind(split.scalars);
    auto dyn = model.dynamics();
    auto d = pd::build_diagram(dyn, {f.jobs});
    pd::ReportOptions ro;
    ro.full_dim_only = f.full_dim_only;
    if (!f.normalize.empty()) {
        ro.normalize = f.normalize;
        auto box = pd::try_parse_rational(f.box);
        if (!box || *box <= 0) throw pd::InvalidInput("--box must be a positive rational");
        ro.box = *box;
    }
    auto report = pd::make_report(model.name, model.scalars, dyn, d, ro);
    if (f.format == "csv")
        write_output(f.output, pd::to_csv(report));
    else
        write_output(f.output, pd::to_json(report).dump(2) + "\n");
    return 0;
}

pd::Policy parse_policy(const std::string& text, const pd::PWLDynamics& dyn) {
    pd::Policy p;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto q = pd::try_parse_rational(item);
        if (!q || !pd::is_integer(*q) || *q < 0) throw pd::InvalidInput("policy entries must be action indices");
        p.choice.push_back(q->get_num().get_ui());
    }
    pd::check_policy(dyn, p);
    return p;
}

int cmd_check_policy(const Common& c, const std::string& policy_text) {
    auto doc = pd::ModelDocument::from_file(c.model);
    auto split = split_bindings(doc, c.binds);
    auto model = doc.bind(split.scalars);
    auto dyn = model.dynamics();
    auto sigma = parse_policy(policy_text, dyn);

    std::cout << "policy " << pd::to_string(sigma) << "\n";
    for (std::size_t i = 0; i < dyn.size(); ++i) {
        const auto& a = dyn.counters[i].actions[sigma.choice[i]];
        std::cout << "  " << dyn.counters[i].name << " <- " << pd::format_action(dyn, a) << "\n";
    }
    auto sf = pd::standardize(pd::build_stationary_system(dyn, sigma));
    auto fr = pd::strict_feasibility(dyn, sigma, sf);
    std::cout << "front trace:";
    for (const auto& f : fr.trace) std::cout << " " << pd::to_string(f);
    std::cout << "\n";
    if (!fr.strictly_feasible) {
        std::cout << "not strictly feasible\n";
        return 0;
    }
    std::cout << "strictly feasible; positive throughput possible for:";
    for (auto i : fr.positive_rho_indices) std::cout << " " << dyn.counters[i].name;
    std::cout << "\n";
    auto cell = pd::policy_cell(dyn, sigma, sf, fr.max_front);
    std::cout << "cell (dimension " << cell.dimension << " of " << dyn.resource_parameters.size() << "):\n";
    for (const auto& e : cell.closure.eq_rows)
        std::cout << "  " << pd::format_row({e.coeffs, e.rhs, true}, dyn.resource_parameters) << "\n";
    for (const auto& e : cell.closure.ineq_rows)
        std::cout << "  " << pd::format_row({e.coeffs, e.rhs, false}, dyn.resource_parameters) << "\n";
    std::cout << "throughput (" << pd::to_string(cell.status) << "):\n";
    if (cell.throughput)
        for (std::size_t i = 0; i < dyn.size(); ++i)
            std::cout << "  rho[" << dyn.counters[i].name
                      << "] = " << format_affine(cell.throughput->T.row(i), dyn.resource_parameters) << "\n";
    auto rep = pd::check_existence_assumptions(dyn, sigma);
    std::cout << "existence conditions: " << (rep.all_ok() ? "hold" : "not all hold") << "\n";
    for (const auto& note : rep.notes) std::cout << "  " << note << "\n";
    return 0;
}

struct SimulateFlags {
    std::size_t horizon = 10000;
    std::size_t substeps = 1;
    double burn_in = 0.5;
};

int cmd_simulate(const Common& c, const SimulateFlags& f) {
    auto doc = pd::ModelDocument::from_file(c.model);
    auto split = split_bindings(doc, c.binds);
    auto model = doc.bind(split.scalars);
    auto dyn = model.dynamics();
    for (const auto& p : dyn.resource_parameters)
        if (!split.resources.count(p)) throw pd::ConfigError("simulate: resource '" + p + "' is not bound");

    pd::SimulationOptions so;
    so.horizon = f.horizon;
    so.substeps = f.substeps;
    auto traj = pd::simulate<double>(dyn, split.resources, so);
    auto est = pd::estimate_throughput(traj, f.burn_in);

    // prediction from a full-dimensional cell containing the point in its interior
    pd::Vector point;
    for (const auto& p : dyn.resource_parameters) point.push_back(split.resources.at(p));
    std::optional<pd::Vector> predicted;
    std::string source;
    auto d = pd::build_diagram(dyn);
    for (const auto& cell : d.cells) {
        if (!cell.full_dimensional() || !cell.throughput) continue;
        if (!cell.closure.strictly_satisfies(point)) continue;
        predicted = cell.throughput->evaluate(point);
        source = pd::to_string(cell.policies.front());
        break;
    }
    std::cout << "counter,slope,residual,predicted\n";
    for (std::size_t i = 0; i < dyn.size(); ++i) {
        std::cout << dyn.counters[i].name << "," << est.slope[i] << "," << est.residual[i] << ",";
        if (predicted) std::cout << pd::to_string((*predicted)[i]);
        std::cout << "\n";
    }
    if (predicted)
        std::cerr << "cell of policy " << source << ", relative error "
                  << pd::relative_error(est.slope, *predicted) << "\n";
    else
        std::cerr << "point is not interior to a full-dimensional cell\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Congestion phase diagrams of timed systems with priorities"};
    app.require_subcommand(1);

    Common common;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("model", common.model, "model file")->required()->check(CLI::ExistingFile);
        sub->add_option("--bind", common.binds, "name=p/q, repeatable");
    };

    bool keep_all = false;
    std::string compile_format = "text";
    auto* compile = app.add_subcommand("compile", "print the counter dynamics");
    add_common(compile);
    compile->add_flag("--keep-all", keep_all, "keep pass-through counters");
    compile->add_option("--format", compile_format, "text or yaml")->check(CLI::IsMember({"text", "yaml"}));

    DiagramFlags df;
    auto* diagram = app.add_subcommand("diagram", "compute the phase diagram");
    add_common(diagram);
    diagram->add_flag("--full-dim-only", df.full_dim_only, "only full-dimensional cells");
    diagram->add_option("--normalize", df.normalize, "parameter fixed to 1 for vertex output");
    diagram->add_option("--box", df.box, "bound on the other parameters when normalizing");
    diagram->add_option("--jobs", df.jobs, "worker threads")->check(CLI::PositiveNumber);
    diagram->add_option("--format", df.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    diagram->add_option("-o,--output", df.output, "output file");

    std::string policy;
    auto* check = app.add_subcommand("check-policy", "feasibility, cell and throughput of one policy");
    add_common(check);
    check->add_option("--policy", policy, "action index per counter, comma separated")->required();

    SimulateFlags sf;
    auto* sim = app.add_subcommand("simulate", "run the dynamics at a resource point");
    add_common(sim);
    sim->add_option("--horizon", sf.horizon, "time units")->check(CLI::PositiveNumber);
    sim->add_option("--substeps", sf.substeps, "grid points per time unit")->check(CLI::PositiveNumber);
    sim->add_option("--burn-in", sf.burn_in, "discarded fraction")->check(CLI::Range(0.0, 0.95));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*compile) return cmd_compile(common, keep_all, compile_format);
        if (*diagram) return cmd_diagram(common, df);
        if (*check) return cmd_check_policy(common, policy);
        if (*sim) return cmd_simulate(common, sf);
    } catch (const pd::InvariantViolation& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInvariantError;
    } catch (const pd::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInvariantError;
    }
    return 0;
}
