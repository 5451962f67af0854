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

#ifndef CVSWITCH_ESTIMATION_H
#define CVSWITCH_ESTIMATION_H

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "cvswitch/schemes.h"

namespace cvswitch {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const {
        return v >= lo && v <= hi;
    }
    double clamp(double v) const;
};

/// [0, pi / (k N^2)]: the range of A over which the phase k N^2 A is identifiable from a cosine readout.
Interval principal_window(int n, double phase_scale = 1.0);

struct ControlEstimate {
    double value = 0.0;
    /// Every outcome was the same, so the estimate sits on a window edge.
    bool degenerate = false;
};

/// Binomial MLE of A from control counts on the principal branch,
/// arccos(2 n_plus / nu - 1) / (k N^2), clamped into `window`.
/// Throws InvalidRange if there are no counts or the window leaves the principal window.
ControlEstimate mle_control(ControlCounts counts, int n, Interval window, double phase_scale = 1.0);

/// Log-likelihood (up to a constant) of control counts under A.
double control_log_likelihood(ControlCounts counts, double a, int n, double phase_scale = 1.0);

struct JointWindows {
    Interval a;
    Interval x_bar;
};

struct JointEstimate {
    double a_hat = 0.0;
    double x_bar_hat = 0.0;
    double log_likelihood = 0.0;
    int iterations = 0;
};

/// Sufficient statistics of the control + heterodyne record.
struct JointStatistics {
    ControlCounts counts;
    int64_t nu = 0;
    complex mean_beta{0.0, 0.0};
};

JointStatistics joint_statistics(const SchemeOutcomes &outcomes);

/// Log-likelihood (up to a parameter-free constant) of the joint record under (A, x_bar).
double joint_log_likelihood(const JointStatistics &stats, double a, double x_bar, int n);

/// Joint MLE of (A, x_bar) from a switch_joint record. Starts from the
/// closed-form marginal estimates, scans a coarse grid around them, then
/// refines with damped Newton steps until the log-likelihood gain is below
/// 1e-10. Throws OptimizationDiverged if the maximizer leaves the x_bar window.
JointEstimate mle_joint(const SchemeOutcomes &outcomes, int n, const JointWindows &windows);

/// Symmetric 2x2 Fisher matrix in the parameter order (A, x_bar).
struct FisherMatrix2 {
    double f11 = 0.0;
    double f12 = 0.0;
    double f22 = 0.0;

    double determinant() const {
        return f11 * f22 - f12 * f12;
    }
    /// Throws SingularFisher unless positive definite.
    FisherMatrix2 inverse() const;
    bool positive_definite() const {
        return f11 > 0.0 && determinant() > 0.0;
    }
};

/// Fisher information of A carried by one control measurement; equals (k N^2)^2.
double fisher_control(double a, int n, double phase_scale = 1.0);

/// Per-repetition Fisher matrix of the control + heterodyne readout with a vacuum probe.
/// Throws SingularParameterization when x_bar == 0.
FisherMatrix2 fisher_joint(double x_bar, double p_bar, int n);

/// 1 / sqrt(nu F).
double crb(double fisher, int64_t nu);
/// sqrt((F^-1)_11 / nu).
double crb(const FisherMatrix2 &fisher, int64_t nu);

/// Cramer-Rao bound of the estimator each scheme uses, for its target
/// parameter (A, or beta_gup for the beta probe).
double analytic_rmse(SchemeTag tag, const ProblemInstance &inst, int64_t nu, double beta_gup = 0.0);

/// True value the scheme's estimator targets.
double estimation_target(SchemeTag tag, const ProblemInstance &inst, double beta_gup = 0.0);

/// Runs the scheme once and applies its estimator.
double run_and_estimate(SchemeTag tag, const ProblemInstance &inst, int64_t nu, Rng &rng, double beta_gup = 0.0);

struct MonteCarloConfig {
    int64_t nu = 1;
    int trials = 2;
    uint64_t seed = 0;
    unsigned workers = 1;
    double beta_gup = 0.0;
    bool keep_estimates = false;
};

struct SchemeResult {
    SchemeTag tag = SchemeTag::SwitchControl;
    int n = 0;
    int64_t nu = 0;
    int trials = 0;
    int discarded = 0;
    double truth = 0.0;
    double rmse = 0.0;
    /// Jackknife standard error of rmse.
    double rmse_std_error = 0.0;
    double bias = 0.0;
    double bias_std_error = 0.0;
    std::vector<double> estimates;
};

/// Monte Carlo RMSE of a scheme's estimator. Trial t draws from
/// Rng(seed).split(scheme).split(N).split(t), so results do not depend on
/// `workers`. Trials whose joint MLE diverges are discarded and counted.
SchemeResult monte_carlo_rmse(SchemeTag tag, const ProblemInstance &inst, const MonteCarloConfig &config);

struct ScalingFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

/// Least squares of log(rmse) against log(n). Needs at least 3 points, all positive.
ScalingFit scaling_fit(std::span<const std::pair<double, double>> points);

}  // namespace cvswitch

#endif
