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

// Acceptance gate. One [PASS]/[FAIL] line per criterion; exit status is nonzero if any selected
// criterion fails. `--criterion k` runs a single criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "cli.h"
#include "cvswitch/bounds.h"
#include "cvswitch/cv_state.h"
#include "cvswitch/estimation.h"
#include "cvswitch/fock_oracle.h"
#include "cvswitch/schemes.h"
#include "cvswitch/weyl.h"
#include "quadrature.h"

using namespace cvswitch;

namespace {

constexpr uint64_t kSeed = 20261015;

struct Outcome {
    bool pass = true;
    std::string detail;

    void check(bool ok, const std::string &what) {
        pass = pass && ok;
        if (!detail.empty()) {
            detail += "; ";
        }
        detail += what + (ok ? "" : " [x]");
    }
};

std::string fmt(const char *f, auto... v) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, v...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

MonteCarloConfig mc(int64_t nu, int trials, uint64_t stream) {
    MonteCarloConfig c;
    c.nu = nu;
    c.trials = trials;
    c.seed = Rng(kSeed).split(stream)();
    return c;
}

double relative(double a, double b) {
    return std::abs(a - b) / std::abs(b);
}

Outcome ac1() {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    SchemeResult r = monte_carlo_rmse(SchemeTag::SwitchControl, uniform_instance(5, 0.2, 0.2), mc(10000, 2000, 1));
    double target = 1.0 / (std::sqrt(10000.0) * 25.0);
    o.check(relative(r.rmse, target) <= 0.10, fmt("rmse %.4e vs %.4e (rel %.3f, tol 0.10)", r.rmse, target,
                                                  relative(r.rmse, target)));
    double secs = seconds_since(t0);
    o.check(secs <= 60.0, fmt("runtime %.1fs <= 60s", secs));
    return o;
}

Outcome ac2() {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    const std::vector<int> ns{3, 5, 8, 12, 20};
    const struct {
        SchemeTag tag;
        double slope;
        double tol;
    } bands[] = {{SchemeTag::SwitchControl, -2.0, 0.1}, {SchemeTag::Sequential, -1.0, 0.15}, {SchemeTag::Parallel, -0.5, 0.15}};
    for (const auto &b : bands) {
        std::vector<std::pair<double, double>> pts;
        for (int n : ns) {
            SchemeResult r = monte_carlo_rmse(b.tag, uniform_instance(n, 0.1, 0.065),
                                              mc(10000, 1000, 200 + static_cast<uint64_t>(b.tag) * 100 + n));
            pts.emplace_back(n, r.rmse);
        }
        double slope = scaling_fit(pts).slope;
        o.check(std::abs(slope - b.slope) <= b.tol, fmt("%s slope %.4f (want %.2f +- %.2f)",
                                                        std::string(scheme_name(b.tag)).c_str(), slope, b.slope, b.tol));
    }
    double secs = seconds_since(t0);
    o.check(secs <= 600.0, fmt("runtime %.1fs <= 600s", secs));
    return o;
}

Outcome ac3() {
    Outcome o;
    const int n = 5;
    const int64_t nu = 10000;
    SchemeResult r = monte_carlo_rmse(SchemeTag::SwitchJoint, uniform_instance(n, 0.2, 0.2), mc(nu, 2000, 3));
    double target = bounds::switch_rmse_joint(0.2, 0.2, n, nu);
    o.check(relative(r.rmse, target) <= 0.10, fmt("joint rmse %.4e vs %.4e (rel %.3f, tol 0.10, %d discarded)", r.rmse,
                                                  target, relative(r.rmse, target), r.discarded));

    Rng rng = Rng(kSeed).split(31);
    std::uniform_real_distribution<double> mag(0.01, 2.0);
    std::uniform_int_distribution<int> ns(1, 30);
    std::bernoulli_distribution neg(0.5);
    double worst = 0.0;
    for (int k = 0; k < 100; k++) {
        double x = mag(rng) * (neg(rng) ? -1.0 : 1.0);
        double p = mag(rng) * (neg(rng) ? -1.0 : 1.0);
        int nn = ns(rng);
        auto sweep_nu = static_cast<int64_t>(1 + k * 997);
        double lhs = fisher_joint(x, p, nn).inverse().f11;
        double rhs = static_cast<double>(sweep_nu) * std::pow(bounds::switch_rmse_joint(x, p, nn, sweep_nu), 2);
        worst = std::max(worst, relative(rhs, lhs));
    }
    o.check(worst <= 1e-12, fmt("identity max rel %.2e over 100 points (tol 1e-12)", worst));
    return o;
}

Outcome ac4() {
    Outcome o;
    Rng rng = Rng(kSeed).split(4);
    std::uniform_real_distribution<double> mag(0.1, 1.0);
    std::uniform_int_distribution<int> ns(1, 6);
    std::bernoulli_distribution neg(0.5);
    double worst = 0.0;
    for (int k = 0; k < 20; k++) {
        double x = mag(rng) * (neg(rng) ? -1.0 : 1.0);
        double p = mag(rng) * (neg(rng) ? -1.0 : 1.0);
        int n = ns(rng);
        FisherMatrix2 closed{n * n * n * n + n * n / (x * x), -n * n * p / (x * x), n * n + n * n * p * p / (x * x)};
        FisherMatrix2 lib = fisher_joint(x, p, n);
        FisherMatrix2 quad = test_support::quadrature_fisher_joint(x, p, n);
        for (auto [a, b] : {std::pair{quad.f11, closed.f11}, std::pair{quad.f12, closed.f12}, std::pair{quad.f22, closed.f22},
                            std::pair{lib.f11, closed.f11}, std::pair{lib.f12, closed.f12}, std::pair{lib.f22, closed.f22}}) {
            worst = std::max(worst, relative(a, b));
        }
    }
    o.check(worst <= 1e-6, fmt("quadrature vs closed form max rel %.2e over 20 points (tol 1e-6)", worst));
    FisherMatrix2 f = fisher_joint(1.0, 0.5, 2);
    o.check(f.f11 == 20.0 && f.f12 == -2.0 && f.f22 == 5.0,
            fmt("worked point [[%g,%g],[%g,%g]]", f.f11, f.f12, f.f12, f.f22));
    return o;
}

Outcome ac5() {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    const size_t dim = 64;
    Rng root = Rng(kSeed).split(5);
    DisplacementRanges r{-0.5, 0.5, -0.5, 0.5};
    Eigen::VectorXcd vac = fock::number_state(0, dim);
    double worst_p = 0.0;
    double worst_phase = 0.0;
    const int cases = 300;
    for (int k = 0; k < cases; k++) {
        Rng rng = root.split(static_cast<uint64_t>(k));
        ProblemInstance inst = make_instance(1 + k % 3, r, rng);
        ControlledWord word = switch_word(inst.xs(), inst.ps());
        auto out = fock::apply_controlled_word(word, fock::ControlProbeState::plus_with(vac));
        auto probs = fock::control_outcome_probs(out);
        double phase = static_cast<double>(inst.n() * inst.n()) * inst.product();
        worst_p = std::max(worst_p, std::abs(probs.plus - 0.5 * (1.0 + std::cos(phase))));
        worst_p = std::max(worst_p, std::abs(probs.minus - 0.5 * (1.0 - std::cos(phase))));
        for (int b = 0; b < 2; b++) {
            NormalForm nf = normalize(b == 0 ? word.branch0 : word.branch1);
            complex overlap = fock::coherent_amplitudes(nf.total_alpha, dim).dot(out.branch(b) * std::sqrt(2.0));
            worst_phase = std::max(worst_phase, std::abs(std::remainder(std::arg(overlap) - nf.phase, 2 * std::numbers::pi)));
        }
    }
    o.check(worst_p <= 1e-8, fmt("p(+-) max dev %.2e over %d cases (tol 1e-8)", worst_p, cases));
    o.check(worst_phase <= 1e-6, fmt("phase max dev %.2e rad (tol 1e-6)", worst_phase));
    double secs = seconds_since(t0);
    o.check(secs <= 120.0, fmt("runtime %.1fs <= 120s", secs));
    return o;
}

Outcome ac6() {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    cli::ExperimentConfig c;
    c.command = "figure3";
    c.energies = {0.5, 1.0};
    c.n_values = {5, 15};
    c.nu = 10;
    cli::CommandResult res = cli::cmd_figure3(cli::resolve(c));
    const cli::Table &t = res.tables.at(0);
    int order_violations = 0;
    int red_violations = 0;
    for (size_t r = 0; r < t.rows.size(); r++) {
        double crossing = std::sqrt(8.0 * t.number(r, "energy")) / t.number(r, "n");
        double z = t.number(r, "z_bar");
        double blue = t.number(r, "fixed_order");
        double dashed = t.number(r, "switch_control");
        bool above = blue > dashed;
        bool expected = z > crossing;
        if (std::abs(z - crossing) < 1e-12 ? std::abs(blue - dashed) > 1e-15 : above != expected) {
            order_violations++;
        }
        if (t.number(r, "switch_joint") > dashed) {
            red_violations++;
        }
    }
    o.check(order_violations == 0, fmt("floor > switch iff z > sqrt(8E)/N: %d violations in %zu rows", order_violations,
                                       t.rows.size()));
    o.check(std::abs(bounds::crossover_mean(0.5, 5) - 0.4) < 1e-15, "crossover 0.4 at E=0.5, N=5");
    o.check(red_violations == 0, fmt("joint <= control everywhere: %d violations", red_violations));
    double secs = seconds_since(t0);
    o.check(secs <= 1.0, fmt("runtime %.3fs <= 1s", secs));
    return o;
}

Outcome ac7() {
    Outcome o;
    Rng rng = Rng(kSeed).split(7);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> steps(1, 40);
    int violations = 0;
    const int sequences = 10000;
    for (int k = 0; k < sequences; k++) {
        double z_max = 0.05 + 2.0 * unit(rng);
        CoherentState s{std::polar(2.0 * unit(rng), 2 * std::numbers::pi * unit(rng))};
        double e0 = energy(s);
        int m = steps(rng);
        for (int j = 0; j < m; j++) {
            // Arbitrary phase-space direction with quadrature magnitude <= z_max.
            double z = z_max * unit(rng);
            s = displace(s, Displacement{std::polar(z / std::numbers::sqrt2, 2 * std::numbers::pi * unit(rng))});
        }
        if (energy(s) > bounds::energy_recursion(e0, {}, z_max, m) * (1.0 + 1e-12)) {
            violations++;
        }
    }
    o.check(violations == 0, fmt("energy above recursion bound in %d of %d sequences", violations, sequences));

    int above = 0;
    int evaluated = 0;
    for (double p : {0.01, 0.1, 0.4, 1.0, 3.0}) {
        for (int n : {1, 2, 5, 10, 100, 1000}) {
            for (int64_t nu : {1, 10, 10000}) {
                for (double zx : {0.0, 0.5, 2.0}) {
                    for (double e : {0.0, 0.5, 1.0, 10.0}) {
                        double z_max = std::max(p, zx);
                        evaluated++;
                        if (bounds::superposition_bound(p, n, nu, z_max, e) > bounds::switch_rmse_control(n, nu)) {
                            above++;
                        }
                    }
                }
            }
        }
    }
    o.check(above == 0, fmt("superposition <= switch control: %d of %d sweep points above", above, evaluated));

    const double p = 0.4;
    const double z_max = 0.5;
    const double e = 1.0;
    const int64_t nu = 10;
    const int n = 1000;
    double scaled = double(n) * n * bounds::superposition_bound(p, n, nu, z_max, e);
    double stated = p / (4.0 * std::sqrt(double(nu)) * (z_max + std::sqrt(e)));
    double asymptote = p / (4.0 * std::sqrt(double(nu)) * z_max);
    o.check(relative(scaled, stated) <= 0.01,
            fmt("N^2*bound at N=1000 %.6e vs p/(4 sqrt(nu)(z_max+sqrt E)) %.6e (rel %.3f, tol 0.01)", scaled, stated,
                relative(scaled, stated)));
    o.detail += fmt("; info: large-N limit of the formula is p/(4 sqrt(nu) z_max) = %.6e, ratio at N=1000 %.4f",
                    asymptote, scaled / asymptote);
    return o;
}

Outcome ac8() {
    Outcome o;
    cli::ExperimentConfig c;
    c.command = "simulate";
    c.schemes = {"parallel", "sequential", "switch_control", "switch_joint", "ion_trap", "beta_probe"};
    c.n_values = {5};
    c.nu = 10000;
    c.trials = 1000;
    c.seed = Rng(kSeed).split(8)();
    c.x_bar = 0.2;
    c.p_bar = 0.2;
    c.beta_gup = 0.01;
    cli::CommandResult res = cli::cmd_simulate(cli::resolve(c));
    const cli::Table &t = res.tables.at(0);
    for (size_t r = 0; r < t.rows.size(); r++) {
        double bias = t.number(r, "bias");
        double bias_se = t.number(r, "bias_stderr");
        double rmse = t.number(r, "rmse");
        double se = t.number(r, "rmse_stderr");
        double bound = t.number(r, "crb");
        o.check(std::abs(bias) <= 2.0 * bias_se && rmse >= bound - 3.0 * se,
                fmt("%s |bias|/se %.2f, rmse %.3e >= crb %.3e - 3se", t.text(r, "scheme").c_str(),
                    std::abs(bias) / bias_se, rmse, bound));
    }
    return o;
}

}  // namespace

int main(int argc, char **argv) {
    const std::vector<std::function<Outcome()>> criteria{ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8};
    int only = 0;
    for (int i = 1; i < argc; i++) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        }
    }
    if (only < 0 || only > static_cast<int>(criteria.size())) {
        std::fprintf(stderr, "criterion must be 1..%zu\n", criteria.size());
        return 2;
    }
    bool all_pass = true;
    for (size_t k = 0; k < criteria.size(); k++) {
        if (only != 0 && only != static_cast<int>(k + 1)) {
            continue;
        }
        Outcome o;
        try {
            o = criteria[k]();
        } catch (const std::exception &e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        all_pass = all_pass && o.pass;
        std::printf("[%s] AC%zu: %s\n", o.pass ? "PASS" : "FAIL", k + 1, o.detail.c_str());
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
