// Copyright 2026 The cvswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <set>
#include <sstream>

#include "cvswitch/bounds.h"
#include "cvswitch/errors.h"
#include "cvswitch/estimation.h"
#include "cvswitch/fock_oracle.h"
#include "cvswitch/schemes.h"
#include "cvswitch/weyl.h"

using namespace cvswitch;
using namespace cvswitch::cli;

namespace {

constexpr uint64_t kInstanceStream = 0x1257a9ce;

const std::set<std::string> kCommands = {"simulate", "scaling", "figure3", "bounds", "fisher", "oracle-check"};

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string cell_text(const Cell &c) {
    if (const auto *s = std::get_if<std::string>(&c)) {
        return *s;
    }
    if (const auto *d = std::get_if<double>(&c)) {
        return format_double(*d);
    }
    return std::to_string(std::get<int64_t>(c));
}

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw InputError(message);
    }
}

ProblemInstance instance_for(const ExperimentConfig &c, int n) {
    std::vector<double> xs(static_cast<size_t>(n), c.x_bar.value_or(0.0));
    std::vector<double> ps(static_cast<size_t>(n), c.p_bar.value_or(0.0));
    if (!c.x_range.empty() || !c.p_range.empty()) {
        Rng rng = Rng(c.seed.value_or(0)).split(kInstanceStream).split(static_cast<uint64_t>(n));
        DisplacementRanges r;
        r.x_min = c.x_range.empty() ? xs[0] : c.x_range[0];
        r.x_max = c.x_range.empty() ? xs[0] : c.x_range[1];
        r.p_min = c.p_range.empty() ? ps[0] : c.p_range[0];
        r.p_max = c.p_range.empty() ? ps[0] : c.p_range[1];
        return make_instance(n, r, rng);
    }
    return make_instance(std::move(xs), std::move(ps));
}

std::vector<double> zbar_grid(const ExperimentConfig &c) {
    std::vector<double> grid;
    auto steps = static_cast<int64_t>(std::floor((c.zbar_max - c.zbar_min) / c.zbar_step + 1e-9));
    for (int64_t k = 0; k <= steps; k++) {
        grid.push_back(c.zbar_min + static_cast<double>(k) * c.zbar_step);
    }
    return grid;
}

Table simulation_rows(const ExperimentConfig &c) {
    Table t;
    t.name = "simulation";
    t.columns = {"scheme",      "n",    "nu",          "trials", "discarded",          "x_bar",
                 "p_bar",       "target", "rmse",      "rmse_stderr", "bias",         "bias_stderr",
                 "crb",         "switch_rmse_control", "fixed_order_floor", "bound_check"};
    const double energy = c.energies.empty() ? 0.5 : c.energies.front();
    for (const auto &name : c.schemes) {
        SchemeTag tag = *parse_scheme(name);
        for (int n : c.n_values) {
            ProblemInstance inst = instance_for(c, n);
            MonteCarloConfig mc;
            mc.nu = *c.nu;
            mc.trials = c.trials;
            mc.seed = *c.seed;
            mc.workers = c.workers;
            mc.beta_gup = c.beta_gup;
            SchemeResult r = monte_carlo_rmse(tag, inst, mc);
            double bound = analytic_rmse(tag, inst, *c.nu, c.beta_gup);
            bool ok = r.rmse >= bound - 3.0 * r.rmse_std_error;
            t.rows.push_back({name, int64_t{n}, *c.nu, int64_t{r.trials}, int64_t{r.discarded}, inst.x_bar(),
                              inst.p_bar(), r.truth, r.rmse, r.rmse_std_error, r.bias, r.bias_std_error, bound,
                              bounds::switch_rmse_control(n, *c.nu),
                              bounds::fixed_order_bound(inst.x_bar(), inst.p_bar(), energy, n, *c.nu),
                              std::string(ok ? "PASS" : "FAIL")});
        }
    }
    return t;
}

double wrap_phase(double v) {
    return std::remainder(v, 2.0 * std::numbers::pi);
}

struct OracleTally {
    std::string check;
    double tolerance;
    int64_t cases = 0;
    double max_deviation = 0.0;

    void add(double deviation) {
        cases++;
        max_deviation = std::max(max_deviation, deviation);
    }
};

// Compares one switch word against the brute-force oracle.
void oracle_case(const ProblemInstance &inst, size_t dim, std::vector<OracleTally> &tallies) {
    ControlledWord word = switch_word(inst.xs(), inst.ps());
    Eigen::VectorXcd vac = fock::number_state(0, dim);
    auto out = fock::apply_controlled_word(word, fock::ControlProbeState::plus_with(vac));
    auto probs = fock::control_outcome_probs(out);
    double na = static_cast<double>(inst.n() * inst.n()) * inst.product();
    tallies[0].add(std::abs(probs.plus - plus_probability(na)));
    tallies[1].add(std::abs(probs.plus - plus_probability(switch_control_phase(inst))));
    for (int b = 0; b < 2; b++) {
        const DisplacementWord &w = b == 0 ? word.branch0 : word.branch1;
        NormalForm nf = normalize(w);
        Eigen::VectorXcd expected = fock::coherent_amplitudes(nf.total_alpha, dim);
        Eigen::VectorXcd got = out.branch(b) * std::sqrt(2.0);
        complex overlap = expected.dot(got);
        tallies[2].add(std::abs(wrap_phase(std::arg(overlap) - nf.phase)));
        tallies[3].add(1.0 - std::norm(overlap));
    }
    Eigen::VectorXcd probe = out.branch(0) * std::sqrt(2.0);
    CoherentState analytic = switch_probe_output(inst);
    for (complex beta : {analytic.alpha, analytic.alpha + complex(0.5, -0.3), analytic.alpha + complex(-1.0, 0.8)}) {
        tallies[4].add(std::abs(fock::heterodyne_density(probe, beta) - heterodyne_density(analytic, beta)));
    }
    tallies[5].add(std::abs(out.norm() - 1.0));
}

}  // namespace

size_t Table::column(const std::string &col) const {
    auto it = std::find(columns.begin(), columns.end(), col);
    if (it == columns.end()) {
        throw std::out_of_range("no column " + col);
    }
    return static_cast<size_t>(it - columns.begin());
}

double Table::number(size_t row, const std::string &col) const {
    const Cell &c = rows.at(row).at(column(col));
    if (const auto *d = std::get_if<double>(&c)) {
        return *d;
    }
    if (const auto *i = std::get_if<int64_t>(&c)) {
        return static_cast<double>(*i);
    }
    throw std::invalid_argument("column " + col + " is not numeric");
}

std::string Table::text(size_t row, const std::string &col) const {
    return cell_text(rows.at(row).at(column(col)));
}

std::pair<double, double> cli::expected_slope(const std::string &scheme) {
    auto tag = parse_scheme(scheme);
    if (!tag) {
        throw InputError("unknown scheme " + scheme);
    }
    switch (*tag) {
        case SchemeTag::Parallel:
            return {-0.5, 0.15};
        case SchemeTag::Sequential:
            return {-1.0, 0.15};
        case SchemeTag::BetaProbe:
            return {-4.0, 0.2};
        default:
            return {-2.0, 0.1};
    }
}

ExperimentConfig cli::resolve(ExperimentConfig c) {
    require(kCommands.count(c.command) > 0, "unknown command '" + c.command + "'");
    const bool monte_carlo = c.command == "simulate" || c.command == "scaling";

    if (c.schemes.empty()) {
        c.schemes = c.command == "scaling" ? std::vector<std::string>{"switch_control", "sequential", "parallel"}
                                           : std::vector<std::string>{"switch_control"};
    }
    for (const auto &s : c.schemes) {
        require(parse_scheme(s).has_value(), "unknown scheme '" + s + "'");
    }
    if (c.n_values.empty()) {
        if (c.command == "scaling") {
            c.n_values = {3, 5, 8, 12, 20};
        } else if (c.command == "figure3") {
            c.n_values = {5, 15};
        } else if (c.command == "oracle-check") {
            c.n_values = {1, 2, 3};
        } else {
            c.n_values = {5};
        }
    }
    for (int n : c.n_values) {
        require(n >= 1, "--n values must be >= 1");
    }
    if (c.command == "scaling") {
        std::set<int> distinct(c.n_values.begin(), c.n_values.end());
        require(distinct.size() >= 3, "scaling needs at least 3 distinct --n values");
    }
    if (c.command == "oracle-check") {
        for (int n : c.n_values) {
            require(n <= 3, "oracle-check supports n <= 3 only (requested n = " + std::to_string(n) + ")");
        }
        require(c.dim >= 2, "--dim must be at least 2");
        require(c.cases >= 1, "--cases must be at least 1");
    }
    if (!c.nu) {
        c.nu = c.command == "figure3" || c.command == "bounds" ? 10 : c.command == "fisher" ? 1 : 10000;
    }
    require(*c.nu >= 1, "--nu must be >= 1");
    require(c.trials >= 2, "--trials must be >= 2");
    if (monte_carlo) {
        require(c.seed.has_value(), c.command + " requires --seed");
    }
    if (!c.seed) {
        c.seed = 1;
    }
    require(!(c.x_bar && !c.x_range.empty()), "--xbar and --x-range are mutually exclusive");
    require(!(c.p_bar && !c.p_range.empty()), "--pbar and --p-range are mutually exclusive");
    for (const auto *r : {&c.x_range, &c.p_range}) {
        if (!r->empty()) {
            require(r->size() == 2, "ranges take exactly two values: min max");
            require((*r)[0] <= (*r)[1], "range min must not exceed max");
            require(std::isfinite((*r)[0]) && std::isfinite((*r)[1]), "ranges must be finite");
        }
    }
    if (c.command != "oracle-check") {
        if (!c.x_bar && c.x_range.empty()) {
            c.x_bar = c.command == "scaling" ? 0.1 : 0.2;
        }
        if (!c.p_bar && c.p_range.empty()) {
            c.p_bar = c.command == "scaling" ? 0.065 : 0.2;
        }
    }
    if (c.energies.empty()) {
        c.energies = c.command == "figure3" ? std::vector<double>{0.5, 1.0} : std::vector<double>{0.5};
    }
    for (double e : c.energies) {
        require(e > 0.0, "--energy values must be positive");
    }
    if (!c.budget) {
        c.budget = c.energies.front();
    }
    require(*c.budget >= 0.0, "--budget must be non-negative");
    if (!c.z_max) {
        double z = 0.0;
        for (double v : c.x_range) z = std::max(z, std::abs(v));
        for (double v : c.p_range) z = std::max(z, std::abs(v));
        if (c.x_bar) z = std::max(z, std::abs(*c.x_bar));
        if (c.p_bar) z = std::max(z, std::abs(*c.p_bar));
        c.z_max = c.command == "oracle-check" && z == 0.0 ? 0.5 : z;
    }
    require(*c.z_max >= 0.0, "--zmax must be non-negative");
    require(c.zbar_step > 0.0 && c.zbar_min > 0.0 && c.zbar_min <= c.zbar_max, "invalid zbar grid");
    require(c.format == "csv" || c.format == "json", "--format must be csv or json");
    require(c.workers >= 1, "--workers must be >= 1");
    if (c.slope_tolerance) {
        require(*c.slope_tolerance > 0.0, "--slope-tolerance must be positive");
    }
    return c;
}

uint64_t cli::config_hash(const ExperimentConfig &c) {
    std::ostringstream s;
    s << c.command << '|';
    for (const auto &v : c.schemes) s << v << ',';
    s << '|';
    for (int v : c.n_values) s << v << ',';
    s << '|' << c.nu.value_or(0) << '|' << c.trials << '|' << c.seed.value_or(0) << '|';
    s << format_double(c.x_bar.value_or(NAN)) << '|' << format_double(c.p_bar.value_or(NAN)) << '|';
    for (double v : c.x_range) s << format_double(v) << ',';
    s << '|';
    for (double v : c.p_range) s << format_double(v) << ',';
    s << '|';
    for (double v : c.energies) s << format_double(v) << ',';
    s << '|' << format_double(c.z_max.value_or(NAN)) << '|' << format_double(c.budget.value_or(NAN)) << '|'
      << format_double(c.beta_gup) << '|' << format_double(c.zbar_min) << '|' << format_double(c.zbar_max) << '|'
      << format_double(c.zbar_step) << '|' << c.dim << '|' << c.cases << '|'
      << format_double(c.slope_tolerance.value_or(NAN)) << '|' << c.format;
    // FNV-1a
    uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s.str()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

CommandResult cli::cmd_simulate(const ExperimentConfig &config) {
    CommandResult result;
    result.tables.push_back(simulation_rows(config));
    return result;
}

CommandResult cli::cmd_scaling(const ExperimentConfig &config) {
    CommandResult result;
    Table rows = simulation_rows(config);
    Table fits;
    fits.name = "fits";
    fits.columns = {"scheme", "points", "slope", "intercept", "r_squared", "expected_slope", "tolerance", "status"};
    for (const auto &name : config.schemes) {
        std::vector<std::pair<double, double>> points;
        std::vector<std::pair<double, double>> analytic;
        for (size_t r = 0; r < rows.rows.size(); r++) {
            if (rows.text(r, "scheme") == name) {
                points.emplace_back(rows.number(r, "n"), rows.number(r, "rmse"));
                analytic.emplace_back(rows.number(r, "n"), rows.number(r, "crb"));
            }
        }
        ScalingFit fit = scaling_fit(points);
        auto [expected, tol] = expected_slope(name);
        if (*parse_scheme(name) == SchemeTag::SwitchJoint) {
            // The joint bound only approaches N^-2 once N*|z| >> 1.
            expected = scaling_fit(analytic).slope;
        }
        if (config.slope_tolerance) {
            tol = *config.slope_tolerance;
        }
        bool pass = std::abs(fit.slope - expected) <= tol;
        if (!pass) {
            result.exit_code = kExitTolerance;
        }
        fits.rows.push_back({name, static_cast<int64_t>(points.size()), fit.slope, fit.intercept, fit.r_squared,
                             expected, tol, std::string(pass ? "PASS" : "FAIL")});
    }
    result.tables.push_back(std::move(rows));
    result.tables.push_back(std::move(fits));
    return result;
}

CommandResult cli::cmd_figure3(const ExperimentConfig &c) {
    Table t;
    t.name = "figure3";
    t.columns = {"energy",
                 "n",
                 "nu",
                 "z_bar",
                 "unit_2pi_over_n2",
                 "red_switch_joint_units",
                 "dashed_switch_control_units",
                 "blue_fixed_order_units",
                 "switch_joint",
                 "switch_control",
                 "fixed_order",
                 "crossover_z_bar",
                 "blue_above_dashed"};
    const int64_t nu = *c.nu;
    for (double e : c.energies) {
        for (int n : c.n_values) {
            double unit = 2.0 * std::numbers::pi / (static_cast<double>(n) * n);
            double dashed = bounds::switch_rmse_control(n, nu);
            double crossing = bounds::crossover_mean(e, n);
            for (double z : zbar_grid(c)) {
                double red = bounds::switch_rmse_joint(z, z, n, nu);
                double blue = bounds::fixed_order_bound(z, z, e, n, nu);
                t.rows.push_back({e, int64_t{n}, nu, z, unit, red / unit, dashed / unit, blue / unit, red, dashed, blue,
                                  crossing, int64_t{blue > dashed ? 1 : 0}});
            }
        }
    }
    CommandResult result;
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult cli::cmd_bounds(const ExperimentConfig &c) {
    Table t;
    t.name = "bounds";
    t.columns = {"n",
                 "nu",
                 "energy",
                 "budget",
                 "x_bar",
                 "p_bar",
                 "z_max",
                 "single_displacement_crb",
                 "switch_rmse_control",
                 "switch_rmse_joint",
                 "fixed_order_bound",
                 "superposition_bound",
                 "ion_trap_rmse",
                 "energy_after_2n_steps",
                 "crossover_z_bar"};
    const int64_t nu = *c.nu;
    double x = c.x_bar.value_or(0.5 * (c.x_range.empty() ? 0.0 : c.x_range[0] + c.x_range[1]));
    double p = c.p_bar.value_or(0.5 * (c.p_range.empty() ? 0.0 : c.p_range[0] + c.p_range[1]));
    for (double e : c.energies) {
        for (int n : c.n_values) {
            double joint = x == 0.0 && p == 0.0 ? NAN : bounds::switch_rmse_joint(x, p, n, nu);
            double sup = p > 0.0 ? bounds::superposition_bound(p, n, nu, *c.z_max, *c.budget) : NAN;
            t.rows.push_back({int64_t{n}, nu, e, *c.budget, x, p, *c.z_max, bounds::single_displacement_crb(e, nu),
                              bounds::switch_rmse_control(n, nu), joint, bounds::fixed_order_bound(x, p, e, n, nu), sup,
                              bounds::ion_trap_rmse(n, nu), bounds::energy_recursion(e, {}, *c.z_max, 2 * n),
                              bounds::crossover_mean(e, n)});
        }
    }
    CommandResult result;
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult cli::cmd_fisher(const ExperimentConfig &c) {
    Table t;
    t.name = "fisher";
    t.columns = {"n", "nu", "x_bar", "p_bar", "A", "fisher_control", "f11", "f12", "f22",
                 "inv11", "inv12", "inv22", "crb_control", "crb_joint"};
    const int64_t nu = *c.nu;
    double x = c.x_bar.value_or(0.0);
    double p = c.p_bar.value_or(0.0);
    for (int n : c.n_values) {
        double fc = fisher_control(x * p, n);
        FisherMatrix2 f = fisher_joint(x, p, n);
        FisherMatrix2 inv = f.inverse();
        t.rows.push_back({int64_t{n}, nu, x, p, x * p, fc, f.f11, f.f12, f.f22, inv.f11, inv.f12, inv.f22, crb(fc, nu),
                          crb(f, nu)});
    }
    CommandResult result;
    result.tables.push_back(std::move(t));
    return result;
}

CommandResult cli::cmd_oracle_check(const ExperimentConfig &c) {
    std::vector<OracleTally> tallies = {{"probability_vs_cosine", 1e-8},     {"probability_vs_weyl", 1e-8},
                                        {"normal_form_phase", 1e-6},         {"normal_form_infidelity", 1e-8},
                                        {"heterodyne_density", 1e-6},        {"norm_preservation", 1e-10}};
    const size_t dim = static_cast<size_t>(c.dim);
    if (c.x_bar || c.p_bar) {
        for (int n : c.n_values) {
            oracle_case(uniform_instance(n, c.x_bar.value_or(0.0), c.p_bar.value_or(0.0)), dim, tallies);
        }
    }
    Rng root(*c.seed);
    DisplacementRanges r{-*c.z_max, *c.z_max, -*c.z_max, *c.z_max};
    for (int k = 0; k < c.cases; k++) {
        Rng rng = root.split(static_cast<uint64_t>(k));
        int n = c.n_values[static_cast<size_t>(k) % c.n_values.size()];
        oracle_case(make_instance(n, r, rng), dim, tallies);
    }

    Table t;
    t.name = "oracle";
    t.columns = {"check", "cases", "max_deviation", "tolerance", "status"};
    CommandResult result;
    for (const auto &tally : tallies) {
        bool pass = tally.max_deviation <= tally.tolerance;
        if (!pass) {
            result.exit_code = kExitTolerance;
        }
        t.rows.push_back(
            {tally.check, tally.cases, tally.max_deviation, tally.tolerance, std::string(pass ? "PASS" : "FAIL")});
    }
    result.tables.push_back(std::move(t));
    return result;
}

void cli::write_csv(const CommandResult &result, const ExperimentConfig &config, std::ostream &out) {
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(config_hash(config)));
    out << "# cvswitch " << kVersion << " command=" << config.command << " seed=" << config.seed.value_or(0)
        << " config_hash=" << hash << "\n";
    bool first = true;
    for (const auto &t : result.tables) {
        if (!first) {
            out << "\n";
        }
        first = false;
        out << "# table=" << t.name << "\n";
        for (size_t k = 0; k < t.columns.size(); k++) {
            out << (k ? "," : "") << t.columns[k];
        }
        out << "\n";
        for (const auto &row : t.rows) {
            for (size_t k = 0; k < row.size(); k++) {
                out << (k ? "," : "") << cell_text(row[k]);
            }
            out << "\n";
        }
    }
}

void cli::write_json(const CommandResult &result, const ExperimentConfig &config, std::ostream &out) {
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx", static_cast<unsigned long long>(config_hash(config)));
    nlohmann::ordered_json doc;
    doc["meta"] = {{"tool", "cvswitch"},
                   {"version", kVersion},
                   {"command", config.command},
                   {"seed", config.seed.value_or(0)},
                   {"config_hash", hash}};
    for (const auto &t : result.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto &row : t.rows) {
            nlohmann::ordered_json obj;
            for (size_t k = 0; k < row.size(); k++) {
                std::visit(
                    [&](const auto &v) {
                        using T = std::decay_t<decltype(v)>;
                        if constexpr (std::is_same_v<T, double>) {
                            if (std::isfinite(v)) {
                                obj[t.columns[k]] = v;
                            } else {
                                obj[t.columns[k]] = nullptr;
                            }
                        } else {
                            obj[t.columns[k]] = v;
                        }
                    },
                    row[k]);
            }
            rows.push_back(std::move(obj));
        }
        doc[t.name] = std::move(rows);
    }
    out << doc.dump(2) << "\n";
}

int cli::run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Quantum-switch metrology simulator and bound calculator", "cvswitch"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Flat key = value config file; command-line flags take precedence");
    app.require_subcommand(1);

    ExperimentConfig c;
    int64_t nu = 0;
    uint64_t seed = 0;
    double x_bar = 0;
    double p_bar = 0;
    double z_max = 0;
    double budget = 0;
    double slope_tol = 0;
    auto *o_scheme = app.add_option("--scheme", c.schemes, "Scheme(s): parallel, sequential, switch_control, "
                                                           "switch_joint, ion_trap, beta_probe");
    app.add_option("--n", c.n_values, "Number N of displacements per quadrature (repeatable)");
    auto *o_nu = app.add_option("--nu", nu, "Repetitions per experiment");
    app.add_option("--trials", c.trials, "Monte Carlo trials per row");
    auto *o_seed = app.add_option("--seed", seed, "Base seed (required for simulate and scaling)");
    auto *o_xbar = app.add_option("--xbar", x_bar, "Every x_j equal to this value");
    auto *o_pbar = app.add_option("--pbar", p_bar, "Every p_j equal to this value");
    app.add_option("--x-range", c.x_range, "Uniform x_j draws from [min, max]")->expected(2);
    app.add_option("--p-range", c.p_range, "Uniform p_j draws from [min, max]")->expected(2);
    app.add_option("--energy", c.energies, "Probe energy E (repeatable)");
    auto *o_zmax = app.add_option("--zmax", z_max, "Largest displacement magnitude");
    auto *o_budget = app.add_option("--budget", budget, "Energy requirement budget for the superposition limit");
    app.add_option("--beta", c.beta_gup, "Modified-commutator coefficient for beta_probe");
    app.add_option("--zbar-min", c.zbar_min, "figure3 grid start");
    app.add_option("--zbar-max", c.zbar_max, "figure3 grid end");
    app.add_option("--zbar-step", c.zbar_step, "figure3 grid step");
    app.add_option("--dim", c.dim, "oracle-check truncation dimension");
    app.add_option("--cases", c.cases, "oracle-check random cases");
    auto *o_tol = app.add_option("--slope-tolerance", slope_tol, "Override the scaling tolerance band");
    app.add_option("--out", c.out, "Output file (default stdout)");
    app.add_option("--format", c.format, "csv or json");
    app.add_option("--workers", c.workers, "Worker threads for Monte Carlo trials");
    (void)o_scheme;

    const std::pair<const char *, const char *> commands[] = {
        {"simulate", "Monte Carlo RMSE, bias and analytic bounds per scheme and N"},
        {"scaling", "Monte Carlo RMSE over several N with log-log slope fits"},
        {"figure3", "Switch, joint-readout and fixed-order curves over a grid of mean displacements"},
        {"bounds", "Closed-form bounds for the given instance"},
        {"fisher", "Control and joint Fisher information with their Cramer-Rao bounds"},
        {"oracle-check", "Compare the algebraic model against the truncated Fock-space oracle"},
    };
    for (const auto &[name, description] : commands) {
        app.add_subcommand(name, description)->fallthrough();
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion &) {
        out << kVersion << "\n";
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "usage error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    c.command = app.get_subcommands().front()->get_name();
    if (o_nu->count()) c.nu = nu;
    if (o_seed->count()) c.seed = seed;
    if (o_xbar->count()) c.x_bar = x_bar;
    if (o_pbar->count()) c.p_bar = p_bar;
    if (o_zmax->count()) c.z_max = z_max;
    if (o_budget->count()) c.budget = budget;
    if (o_tol->count()) c.slope_tolerance = slope_tol;

    try {
        c = resolve(c);
        CommandResult result;
        if (c.command == "simulate") {
            result = cmd_simulate(c);
        } else if (c.command == "scaling") {
            result = cmd_scaling(c);
        } else if (c.command == "figure3") {
            result = cmd_figure3(c);
        } else if (c.command == "bounds") {
            result = cmd_bounds(c);
        } else if (c.command == "fisher") {
            result = cmd_fisher(c);
        } else {
            result = cmd_oracle_check(c);
        }
        std::ostringstream buf;
        if (c.format == "json") {
            write_json(result, c, buf);
        } else {
            write_csv(result, c, buf);
        }
        if (c.out.empty()) {
            out << buf.str();
        } else {
            std::ofstream file(c.out, std::ios::binary);
            if (!file) {
                err << "error: cannot open " << c.out << " for writing\n";
                return kExitUsage;
            }
            file << buf.str();
        }
        return result.exit_code;
    } catch (const TruncationTooSmall &e) {
        err << "numerical error: " << e.what() << " (try --dim " << e.suggested_dim << ")\n";
        return kExitNumerical;
    } catch (const InputError &e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
}
