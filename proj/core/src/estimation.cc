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

#include "cvswitch/estimation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "cvswitch/bounds.h"
#include "cvswitch/errors.h"

using namespace cvswitch;

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kSqrt2 = std::sqrt(2.0);

/// Compensated summation; reductions run in trial order so the result is independent of scheduling.
class KahanSum {
   public:
    void add(double v) {
        double y = v - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const {
        return sum_;
    }

   private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

double phase_factor(int n, double phase_scale) {
    return phase_scale * static_cast<double>(n) * static_cast<double>(n);
}

// x log y with 0 log 0 = 0.
double xlogy(double x, double y) {
    if (x == 0.0) {
        return 0.0;
    }
    return y > 0.0 ? x * std::log(y) : kNegInf;
}

struct Derivatives {
    double value;
    double g_a, g_x;
    double h_aa, h_ax, h_xx;
};

// Control part: 2 n+ log|cos(cA/2)| + 2 n- log|sin(cA/2)|; heterodyne part: -nu |mu - mean_beta|^2
// with mu = N (x + i A/x) / sqrt(2).
Derivatives joint_derivatives(const JointStatistics &s, double a, double x, int n) {
    double c = phase_factor(n, 1.0);
    double h = 0.5 * c * a;
    double cs = std::cos(h);
    double sn = std::sin(h);
    double np = static_cast<double>(s.counts.plus);
    double nm = static_cast<double>(s.counts.minus);

    Derivatives d{};
    d.value = xlogy(2.0 * np, std::abs(cs)) + xlogy(2.0 * nm, std::abs(sn));
    double tn = sn / cs;
    double ct = cs / sn;
    d.g_a = c * ((np > 0 ? -np * tn : 0.0) + (nm > 0 ? nm * ct : 0.0));
    d.h_aa = 0.5 * c * c * ((np > 0 ? -np / (cs * cs) : 0.0) + (nm > 0 ? -nm / (sn * sn) : 0.0));

    double nn = static_cast<double>(n);
    double nu = static_cast<double>(s.nu);
    double u = nn * x / kSqrt2;
    double v = nn * a / (kSqrt2 * x);
    double du = u - s.mean_beta.real();
    double dv = v - s.mean_beta.imag();
    double u_x = nn / kSqrt2;
    double v_a = nn / (kSqrt2 * x);
    double v_x = -nn * a / (kSqrt2 * x * x);
    double v_ax = -nn / (kSqrt2 * x * x);
    double v_xx = kSqrt2 * nn * a / (x * x * x);

    d.value += -nu * (du * du + dv * dv);
    d.g_a += -2.0 * nu * dv * v_a;
    d.g_x = -2.0 * nu * (du * u_x + dv * v_x);
    d.h_aa += -2.0 * nu * v_a * v_a;
    d.h_ax = -2.0 * nu * (v_x * v_a + dv * v_ax);
    d.h_xx = -2.0 * nu * (u_x * u_x + v_x * v_x + dv * v_xx);
    return d;
}

}  // namespace

double Interval::clamp(double v) const {
    return std::clamp(v, lo, hi);
}

Interval cvswitch::principal_window(int n, double phase_scale) {
    if (n < 1 || !(phase_scale > 0.0)) {
        throw InvalidRange("principal window needs n >= 1 and a positive phase scale");
    }
    return Interval{0.0, std::numbers::pi / phase_factor(n, phase_scale)};
}

ControlEstimate cvswitch::mle_control(ControlCounts counts, int n, Interval window, double phase_scale) {
    if (counts.plus < 0 || counts.minus < 0 || counts.total() < 1) {
        throw InvalidRange("mle_control needs at least one outcome");
    }
    Interval principal = principal_window(n, phase_scale);
    if (window.lo < principal.lo || window.hi > principal.hi * (1.0 + 1e-12) || window.lo > window.hi) {
        throw InvalidRange("mle_control window must lie inside [0, pi/(k N^2)]");
    }
    double freq = static_cast<double>(counts.plus) / static_cast<double>(counts.total());
    double phase = std::acos(std::clamp(2.0 * freq - 1.0, -1.0, 1.0));
    ControlEstimate est;
    est.value = window.clamp(phase / phase_factor(n, phase_scale));
    est.degenerate = counts.plus == 0 || counts.minus == 0;
    return est;
}

double cvswitch::control_log_likelihood(ControlCounts counts, double a, int n, double phase_scale) {
    double phase = phase_factor(n, phase_scale) * a;
    return xlogy(static_cast<double>(counts.plus), 0.5 * (1.0 + std::cos(phase))) +
           xlogy(static_cast<double>(counts.minus), 0.5 * (1.0 - std::cos(phase)));
}

JointStatistics cvswitch::joint_statistics(const SchemeOutcomes &outcomes) {
    if (!outcomes.control || !outcomes.heterodyne) {
        throw InvalidRange("joint estimation needs both control counts and heterodyne samples");
    }
    const auto &betas = *outcomes.heterodyne;
    if (betas.size() < 2 || static_cast<int64_t>(betas.size()) != outcomes.control->total()) {
        throw InvalidRange("joint estimation needs nu >= 2 matched control and heterodyne outcomes");
    }
    KahanSum re;
    KahanSum im;
    for (const auto &b : betas) {
        re.add(b.real());
        im.add(b.imag());
    }
    double nu = static_cast<double>(betas.size());
    return JointStatistics{*outcomes.control, static_cast<int64_t>(betas.size()),
                           complex(re.value() / nu, im.value() / nu)};
}

double cvswitch::joint_log_likelihood(const JointStatistics &stats, double a, double x_bar, int n) {
    if (x_bar == 0.0) {
        return kNegInf;
    }
    return joint_derivatives(stats, a, x_bar, n).value;
}

JointEstimate cvswitch::mle_joint(const SchemeOutcomes &outcomes, int n, const JointWindows &windows) {
    JointStatistics stats = joint_statistics(outcomes);
    Interval principal = principal_window(n);
    Interval aw{std::max(windows.a.lo, principal.lo), std::min(windows.a.hi, principal.hi)};
    if (aw.lo > aw.hi || windows.x_bar.lo > windows.x_bar.hi) {
        throw InvalidRange("mle_joint windows are empty");
    }
    const double nn = static_cast<double>(n);
    const double nu = static_cast<double>(stats.nu);

    // Marginal estimates: A from the control counts, x_bar from the heterodyne mean.
    double a0 = mle_control(stats.counts, n, aw).value;
    double x0 = kSqrt2 * stats.mean_beta.real() / nn;
    if (x0 == 0.0) {
        x0 = windows.x_bar.clamp(0.0) != 0.0 ? windows.x_bar.clamp(0.0) : 1e-12;
    }

    auto ll = [&](double a, double x) { return joint_log_likelihood(stats, a, x, n); };

    // Coarse grid over a few standard deviations of the asymptotic covariance.
    double sd_a = 0.25 * (aw.hi - aw.lo);
    double sd_x = std::abs(x0);
    try {
        FisherMatrix2 cov = fisher_joint(x0, a0 / x0, n).inverse();
        sd_a = std::sqrt(cov.f11 / nu);
        sd_x = std::sqrt(cov.f22 / nu);
    } catch (const std::exception &) {
    }
    double best_a = a0;
    double best_x = x0;
    double best = ll(a0, x0);
    constexpr int kGrid = 5;
    for (int i = -kGrid; i <= kGrid; i++) {
        for (int j = -kGrid; j <= kGrid; j++) {
            double a = aw.clamp(a0 + 0.8 * i * sd_a);
            double x = x0 + 0.8 * j * sd_x;
            if (x == 0.0 || (x > 0) != (x0 > 0)) {
                continue;
            }
            double v = ll(a, x);
            if (v > best) {
                best = v;
                best_a = a;
                best_x = x;
            }
        }
    }

    double a = best_a;
    double x = best_x;
    double value = best;
    int iter = 0;
    constexpr int kMaxIter = 200;
    for (; iter < kMaxIter; iter++) {
        Derivatives d = joint_derivatives(stats, a, x, n);
        double det = d.h_aa * d.h_xx - d.h_ax * d.h_ax;
        double step_a;
        double step_x;
        if (d.h_aa < 0.0 && det > 0.0) {
            step_a = -(d.h_xx * d.g_a - d.h_ax * d.g_x) / det;
            step_x = -(-d.h_ax * d.g_a + d.h_aa * d.g_x) / det;
        } else {
            step_a = d.g_a / std::max(std::abs(d.h_aa), 1.0);
            step_x = d.g_x / std::max(std::abs(d.h_xx), 1.0);
        }
        double t = 1.0;
        bool improved = false;
        double na = a;
        double nx = x;
        double nv = value;
        for (int k = 0; k < 60; k++) {
            na = aw.clamp(a + t * step_a);
            nx = x + t * step_x;
            nv = ll(na, nx);
            if (std::isfinite(nv) && nv >= value) {
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved) {
            break;
        }
        double gain = nv - value;
        bool moved = std::abs(na - a) > 0.0 || std::abs(nx - x) > 0.0;
        a = na;
        x = nx;
        value = nv;
        if (!moved || gain < 1e-10) {
            break;
        }
    }
    if (!std::isfinite(value) || !windows.x_bar.contains(x)) {
        throw OptimizationDiverged("joint MLE left the x_bar window (x_bar_hat = " + std::to_string(x) + ")");
    }
    return JointEstimate{a, x, value, iter};
}

FisherMatrix2 FisherMatrix2::inverse() const {
    if (!positive_definite()) {
        throw SingularFisher("Fisher matrix is not positive definite");
    }
    double det = determinant();
    return FisherMatrix2{f22 / det, -f12 / det, f11 / det};
}

double cvswitch::fisher_control(double a, int n, double phase_scale) {
    double c = phase_factor(n, phase_scale);
    double h = 0.5 * c * a;
    // p(+) = cos^2(h), p(-) = sin^2(h).
    double p[2] = {std::cos(h) * std::cos(h), std::sin(h) * std::sin(h)};
    double dp = c * std::sin(h) * std::cos(h);
    double dps[2] = {-dp, dp};
    double total = 0.0;
    for (int m = 0; m < 2; m++) {
        if (p[m] > 1e-300) {
            total += dps[m] * dps[m] / p[m];
        } else {
            // Vanishing outcome: (dp)^2 / p tends to c^2 as p -> 0.
            total += c * c;
        }
    }
    return total;
}

FisherMatrix2 cvswitch::fisher_joint(double x_bar, double p_bar, int n) {
    if (x_bar == 0.0) {
        throw SingularParameterization("fisher_joint needs x_bar != 0");
    }
    if (n < 1) {
        throw NonPositiveInput("n must be at least 1");
    }
    double n2 = static_cast<double>(n) * static_cast<double>(n);
    double x2 = x_bar * x_bar;
    return FisherMatrix2{n2 * n2 + n2 / x2, -n2 * p_bar / x2, n2 + n2 * p_bar * p_bar / x2};
}

double cvswitch::crb(double fisher, int64_t nu) {
    if (nu < 1) {
        throw NonPositiveInput("nu must be at least 1");
    }
    if (!(fisher > 0.0)) {
        throw SingularFisher("Fisher information must be positive");
    }
    return 1.0 / std::sqrt(static_cast<double>(nu) * fisher);
}

double cvswitch::crb(const FisherMatrix2 &fisher, int64_t nu) {
    if (nu < 1) {
        throw NonPositiveInput("nu must be at least 1");
    }
    return std::sqrt(fisher.inverse().f11 / static_cast<double>(nu));
}

double cvswitch::analytic_rmse(SchemeTag tag, const ProblemInstance &inst, int64_t nu, double beta_gup) {
    const int n = static_cast<int>(inst.n());
    const double nn = static_cast<double>(n);
    const double nuf = static_cast<double>(nu);
    const double r2 = inst.x_bar() * inst.x_bar() + inst.p_bar() * inst.p_bar();
    switch (tag) {
        case SchemeTag::Parallel:
            // Each of the 2N boxes read out by vacuum homodyne (variance 1/2), nu times.
            return std::sqrt(r2 / (2.0 * nuf * nn));
        case SchemeTag::Sequential:
            return std::sqrt(r2 / (2.0 * nuf)) / nn;
        case SchemeTag::SwitchControl:
            return crb(fisher_control(inst.product(), n), nu);
        case SchemeTag::SwitchJoint:
            return crb(fisher_joint(inst.x_bar(), inst.p_bar(), n), nu);
        case SchemeTag::IonTrap:
            return crb(fisher_control(inst.product(), n, 2.0), nu);
        case SchemeTag::BetaProbe: {
            (void)beta_gup;
            double x = nn * inst.x_bar();
            double p = nn * inst.p_bar();
            double slope = x * p * (7.0 / 3.0) * p * p;
            return 1.0 / (std::sqrt(nuf) * std::abs(slope));
        }
    }
    return NAN;
}

double cvswitch::estimation_target(SchemeTag tag, const ProblemInstance &inst, double beta_gup) {
    return tag == SchemeTag::BetaProbe ? beta_gup : inst.product();
}

static double estimate_beta(ControlCounts counts, double x, double p) {
    double freq = static_cast<double>(counts.plus) / static_cast<double>(counts.total());
    double phase = std::acos(std::clamp(2.0 * freq - 1.0, -1.0, 1.0));
    double base = switch_phase(switch_word(std::span<const double>(&x, 1), std::span<const double>(&p, 1)));
    return (phase / base - 1.0) * 3.0 / (7.0 * p * p);
}

static JointWindows default_joint_windows(const ProblemInstance &inst) {
    Interval a = principal_window(static_cast<int>(inst.n()));
    constexpr double inf = std::numeric_limits<double>::infinity();
    Interval x = inst.x_bar() > 0 ? Interval{std::numeric_limits<double>::min(), inf}
                                  : Interval{-inf, -std::numeric_limits<double>::min()};
    return JointWindows{a, x};
}

double cvswitch::run_and_estimate(SchemeTag tag, const ProblemInstance &inst, int64_t nu, Rng &rng,
                                  double beta_gup) {
    const int n = static_cast<int>(inst.n());
    const double nn = static_cast<double>(n);
    switch (tag) {
        case SchemeTag::Parallel: {
            SchemeOutcomes out = run_parallel(inst, nu, rng);
            const auto &rows = *out.homodyne;
            KahanSum xs;
            KahanSum ps;
            for (size_t j = 0; j < inst.n(); j++) {
                for (double v : rows[j]) {
                    xs.add(v);
                }
                for (double v : rows[inst.n() + j]) {
                    ps.add(v);
                }
            }
            double denom = nn * static_cast<double>(nu);
            return (xs.value() / denom) * (ps.value() / denom);
        }
        case SchemeTag::Sequential: {
            SchemeOutcomes out = run_sequential(inst, nu, rng);
            KahanSum xs;
            KahanSum ps;
            for (double v : (*out.homodyne)[0]) {
                xs.add(v);
            }
            for (double v : (*out.homodyne)[1]) {
                ps.add(v);
            }
            double denom = nn * static_cast<double>(nu);
            return (xs.value() / denom) * (ps.value() / denom);
        }
        case SchemeTag::SwitchControl: {
            SchemeOutcomes out = run_switch_control(inst, nu, rng);
            return mle_control(*out.control, n, principal_window(n)).value;
        }
        case SchemeTag::SwitchJoint: {
            SchemeOutcomes out = run_switch_joint(inst, nu, rng);
            return mle_joint(out, n, default_joint_windows(inst)).a_hat;
        }
        case SchemeTag::IonTrap: {
            SchemeOutcomes out = run_ion_trap(inst, nu, rng);
            return mle_control(*out.control, n, principal_window(n, 2.0), 2.0).value;
        }
        case SchemeTag::BetaProbe: {
            double x = nn * inst.x_bar();
            double p = nn * inst.p_bar();
            SchemeOutcomes out = run_beta_probe(x, p, beta_gup, nu, rng);
            return estimate_beta(*out.control, x, p);
        }
    }
    return NAN;
}

static double readout_phase(SchemeTag tag, const ProblemInstance &inst, double beta_gup) {
    double nn = static_cast<double>(inst.n());
    switch (tag) {
        case SchemeTag::SwitchControl:
        case SchemeTag::SwitchJoint:
            return switch_control_phase(inst);
        case SchemeTag::IonTrap:
            return ion_trap_phase(inst);
        case SchemeTag::BetaProbe:
            return beta_probe_phase(nn * inst.x_bar(), nn * inst.p_bar(), beta_gup);
        default:
            return NAN;
    }
}

SchemeResult cvswitch::monte_carlo_rmse(SchemeTag tag, const ProblemInstance &inst, const MonteCarloConfig &config) {
    if (config.trials < 2) {
        throw InvalidRange("monte_carlo_rmse needs at least 2 trials");
    }
    if (config.nu < 1) {
        throw InvalidRange("nu must be at least 1");
    }
    if (is_switch_family(tag)) {
        double phase = readout_phase(tag, inst, config.beta_gup);
        if (!(phase > 0.0 && phase < std::numbers::pi)) {
            throw InvalidRange("readout phase " + std::to_string(phase) + " of " + std::string(scheme_name(tag)) +
                               " lies outside the identifiable window (0, pi)");
        }
    }
    if (tag == SchemeTag::SwitchJoint && inst.x_bar() == 0.0) {
        throw SingularParameterization("switch_joint estimation needs x_bar != 0");
    }

    const size_t trials = static_cast<size_t>(config.trials);
    std::vector<double> estimates(trials, NAN);
    std::vector<char> discarded(trials, 0);
    const Rng base = Rng(config.seed).split(static_cast<uint64_t>(tag)).split(inst.n());

    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&]() {
        while (true) {
            size_t t = next.fetch_add(1);
            if (t >= trials) {
                return;
            }
            Rng rng = base.split(t);
            try {
                estimates[t] = run_and_estimate(tag, inst, config.nu, rng, config.beta_gup);
            } catch (const OptimizationDiverged &) {
                discarded[t] = 1;
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(trials);
                return;
            }
        }
    };
    unsigned workers = std::max(1u, config.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; w++) {
            pool.emplace_back(worker);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    SchemeResult result;
    result.tag = tag;
    result.n = static_cast<int>(inst.n());
    result.nu = config.nu;
    result.truth = estimation_target(tag, inst, config.beta_gup);

    std::vector<double> errors;
    errors.reserve(trials);
    for (size_t t = 0; t < trials; t++) {
        if (discarded[t]) {
            result.discarded++;
        } else {
            errors.push_back(estimates[t] - result.truth);
        }
    }
    result.trials = static_cast<int>(errors.size());
    if (errors.size() < 2) {
        throw NumericalError("fewer than 2 Monte Carlo trials survived");
    }

    const double count = static_cast<double>(errors.size());
    KahanSum sum;
    KahanSum sum_sq;
    for (double e : errors) {
        sum.add(e);
        sum_sq.add(e * e);
    }
    double mean = sum.value() / count;
    double mse = sum_sq.value() / count;
    result.bias = mean;
    result.rmse = std::sqrt(mse);

    KahanSum dev;
    for (double e : errors) {
        dev.add((e - mean) * (e - mean));
    }
    result.bias_std_error = std::sqrt(dev.value() / (count - 1.0) / count);

    // Leave-one-out jackknife of sqrt(mean e^2).
    std::vector<double> loo(errors.size());
    KahanSum loo_sum;
    for (size_t i = 0; i < errors.size(); i++) {
        loo[i] = std::sqrt(std::max(0.0, (sum_sq.value() - errors[i] * errors[i]) / (count - 1.0)));
        loo_sum.add(loo[i]);
    }
    double loo_mean = loo_sum.value() / count;
    KahanSum loo_dev;
    for (double v : loo) {
        loo_dev.add((v - loo_mean) * (v - loo_mean));
    }
    result.rmse_std_error = std::sqrt((count - 1.0) / count * loo_dev.value());

    if (config.keep_estimates) {
        for (size_t t = 0; t < trials; t++) {
            if (!discarded[t]) {
                result.estimates.push_back(estimates[t]);
            }
        }
    }
    return result;
}

ScalingFit cvswitch::scaling_fit(std::span<const std::pair<double, double>> points) {
    if (points.size() < 3) {
        throw InvalidRange("scaling_fit needs at least 3 points");
    }
    double mx = 0;
    double my = 0;
    for (const auto &[n, r] : points) {
        if (!(n > 0.0) || !(r > 0.0)) {
            throw NonPositiveInput("scaling_fit needs positive n and rmse values");
        }
        mx += std::log(n);
        my += std::log(r);
    }
    double count = static_cast<double>(points.size());
    mx /= count;
    my /= count;
    double sxx = 0;
    double sxy = 0;
    double syy = 0;
    for (const auto &[n, r] : points) {
        double dx = std::log(n) - mx;
        double dy = std::log(r) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) {
        throw InvalidRange("scaling_fit needs at least two distinct n values");
    }
    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (const auto &[n, r] : points) {
        double resid = std::log(r) - (fit.intercept + fit.slope * std::log(n));
        ss_res += resid * resid;
    }
    fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}
