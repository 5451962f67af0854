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

#include "cvswitch/schemes.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "cvswitch/errors.h"
#include "cvswitch/estimation.h"
#include "cvswitch/fock_oracle.h"
#include "stats.h"

using namespace cvswitch;
using cvswitch::test_support::mean;
using cvswitch::test_support::two_proportion_p_value;

namespace {

// Switch instance with N^2 A equal to `phase`, all x_j = p_j.
ProblemInstance instance_with_phase(int n, double phase) {
    double z = std::sqrt(phase) / n;
    return uniform_instance(n, z, z);
}

}  // namespace

TEST(SchemeNames, RoundTrip) {
    for (SchemeTag t : {SchemeTag::Parallel, SchemeTag::Sequential, SchemeTag::SwitchControl, SchemeTag::SwitchJoint,
                        SchemeTag::IonTrap, SchemeTag::BetaProbe}) {
        EXPECT_EQ(parse_scheme(scheme_name(t)), t);
    }
    EXPECT_FALSE(parse_scheme("switch").has_value());
    EXPECT_TRUE(is_fixed_order(SchemeTag::Sequential));
    EXPECT_TRUE(is_switch_family(SchemeTag::IonTrap));
    EXPECT_FALSE(is_switch_family(SchemeTag::Parallel));
}

TEST(MakeInstance, ExplicitLists) {
    ProblemInstance inst = make_instance({0.2, 0.4}, {0.1, 0.5});
    EXPECT_NEAR(inst.x_bar(), 0.3, 1e-15);
    EXPECT_NEAR(inst.p_bar(), 0.3, 1e-15);
    EXPECT_NEAR(inst.product(), 0.09, 1e-15);
    EXPECT_FALSE(inst.has_zero_mean());
}

TEST(MakeInstance, UniformDrawsConcentrate) {
    Rng rng(11);
    ProblemInstance inst = make_instance(10000, DisplacementRanges{0.1, 0.5, 0.1, 0.5}, rng);
    EXPECT_NEAR(inst.x_bar(), 0.3, 0.005);
    EXPECT_NEAR(inst.p_bar(), 0.3, 0.005);
    for (double x : inst.xs()) {
        EXPECT_TRUE(x >= 0.1 && x <= 0.5);
    }
}

TEST(MakeInstance, Errors) {
    Rng rng(1);
    EXPECT_THROW(make_instance(0, DisplacementRanges{0.1, 0.5, 0.1, 0.5}, rng), InvalidRange);
    EXPECT_THROW(make_instance(3, DisplacementRanges{0.5, 0.1, 0.1, 0.5}, rng), InvalidRange);
    EXPECT_THROW(make_instance({}, {}), InvalidRange);
    EXPECT_THROW(make_instance({0.1, 0.2}, {0.1}), InvalidRange);
    EXPECT_THROW(make_instance({NAN}, {0.1}), InvalidRange);
    EXPECT_TRUE(uniform_instance(3, 0.0, 0.2).has_zero_mean());
    EXPECT_DOUBLE_EQ(DisplacementRanges({-0.7, 0.1, 0.2, 0.5}).z_max(), 0.7);
}

TEST(Phases, SwitchAndIonTrap) {
    ProblemInstance inst = uniform_instance(2, 0.5, 0.3);
    EXPECT_NEAR(switch_control_phase(inst), 0.6, 1e-14);
    EXPECT_NEAR(ion_trap_phase(inst), 1.2, 1e-14);
    EXPECT_NEAR(plus_probability(0.6), 0.912667807454839, 1e-14);
    EXPECT_NEAR(plus_probability(std::numbers::pi / 2), 0.5, 1e-15);
}

TEST(Phases, BetaProbe) {
    EXPECT_NEAR(beta_probe_phase(2.0, 2.0, 0.01), 4.373333333333333, 1e-12);
    EXPECT_NEAR(beta_probe_phase(0.7, 0.4, 0.0), 0.28, 1e-15);
}

TEST(RunParallel, BoxMeans) {
    Rng rng(21);
    SchemeOutcomes out = run_parallel(make_instance({0.8}, {0.3}), 100000, rng);
    ASSERT_TRUE(out.homodyne.has_value());
    ASSERT_EQ(out.homodyne->size(), 2u);
    EXPECT_NEAR(mean((*out.homodyne)[0]), 0.8, 0.01);
    EXPECT_NEAR(mean((*out.homodyne)[1]), 0.3, 0.01);
    EXPECT_FALSE(out.control.has_value());
}

TEST(RunParallel, ZeroDisplacementsEstimateZero) {
    Rng rng(22);
    double est = run_and_estimate(SchemeTag::Parallel, uniform_instance(4, 0.0, 0.0), 100000, rng);
    EXPECT_NEAR(est, 0.0, 1e-4);
}

TEST(RunSequential, AccumulatedMean) {
    Rng rng(23);
    SchemeOutcomes out = run_sequential(uniform_instance(5, 0.4, 0.1), 100000, rng);
    ASSERT_EQ(out.homodyne->size(), 2u);
    EXPECT_NEAR(mean((*out.homodyne)[0]), 2.0, 0.01);
    EXPECT_NEAR(mean((*out.homodyne)[1]), 0.5, 0.01);
}

TEST(RunSequential, MeanEstimatorSpread) {
    const int n = 10;
    const int64_t nu = 10000;
    ProblemInstance inst = uniform_instance(n, 0.3, 0.2);
    Rng root(24);
    std::vector<double> xs;
    for (int t = 0; t < 2000; t++) {
        Rng rng = root.split(static_cast<uint64_t>(t));
        SchemeOutcomes out = run_sequential(inst, nu, rng);
        xs.push_back(mean((*out.homodyne)[0]) / n);
    }
    double sd = std::sqrt(test_support::variance(xs));
    EXPECT_NEAR(sd / (1.0 / (n * std::sqrt(2.0 * nu))), 1.0, 0.05);
}

TEST(RunSwitchControl, ZeroPhaseAlwaysPlus) {
    Rng rng(25);
    SchemeOutcomes out = run_switch_control(uniform_instance(3, 0.0, 0.4), 5000, rng);
    EXPECT_EQ(out.control->plus, 5000);
    EXPECT_EQ(out.control->minus, 0);
}

TEST(RunSwitchControl, FrequencyWithinBinomialBand) {
    Rng rng(26);
    const int64_t nu = 10000;
    SchemeOutcomes out = run_switch_control(uniform_instance(2, 0.5, 0.3), nu, rng);
    double p = 0.912667807454839;
    double sigma = std::sqrt(p * (1 - p) / nu);
    EXPECT_NEAR(static_cast<double>(out.control->plus) / nu, p, 3 * sigma);
    EXPECT_EQ(out.control->total(), nu);
}

TEST(RunSwitchControl, QuarterPeriod) {
    Rng rng(27);
    const int64_t nu = 40000;
    SchemeOutcomes out = run_switch_control(instance_with_phase(3, std::numbers::pi / 2), nu, rng);
    EXPECT_NEAR(static_cast<double>(out.control->plus) / nu, 0.5, 3 * 0.5 / std::sqrt(nu));
}

TEST(RunSwitchJoint, HeterodyneMean) {
    Rng rng(28);
    const int64_t nu = 100000;
    SchemeOutcomes out = run_switch_joint(uniform_instance(5, 0.2, 0.2), nu, rng);
    ASSERT_TRUE(out.heterodyne.has_value());
    complex sum{};
    for (complex b : *out.heterodyne) {
        sum += b;
    }
    sum /= static_cast<double>(nu);
    EXPECT_NEAR(sum.real(), 0.7071067811865476, 0.01);
    EXPECT_NEAR(sum.imag(), 0.7071067811865476, 0.01);
    EXPECT_NEAR(std::abs(switch_probe_output(uniform_instance(5, 0.2, 0.2)).alpha - complex(1, 1) / std::numbers::sqrt2),
                0.0, 1e-15);
}

TEST(RunSwitchJoint, ControlMarginalMatchesControlScheme) {
    ProblemInstance inst = uniform_instance(3, 0.3, 0.5);
    const int64_t nu = 20000;
    Rng a(29);
    Rng b(30);
    SchemeOutcomes joint = run_switch_joint(inst, nu, a);
    SchemeOutcomes control = run_switch_control(inst, nu, b);
    EXPECT_GT(two_proportion_p_value(joint.control->plus, nu, control.control->plus, nu), 0.01);
}

TEST(RunSwitchJoint, ZeroMeansStillSample) {
    Rng rng(31);
    SchemeOutcomes out = run_switch_joint(uniform_instance(2, 0.0, 0.0), 100, rng);
    EXPECT_EQ(out.control->plus, 100);
    EXPECT_EQ(out.heterodyne->size(), 100u);
}

TEST(RunIonTrap, HalfPeriodGivesMinus) {
    Rng rng(32);
    SchemeOutcomes out = run_ion_trap(instance_with_phase(2, std::numbers::pi / 2), 5000, rng);
    EXPECT_EQ(out.control->plus, 0);
}

TEST(RunIonTrap, AgreesWithFockOracle) {
    ProblemInstance inst = make_instance({0.2, 0.35}, {0.3, 0.15});
    auto state = fock::apply_controlled_word(ion_trap_word(inst.xs(), inst.ps()),
                                             fock::ControlProbeState::plus_with(fock::number_state(0, 64)));
    EXPECT_NEAR(fock::control_outcome_probs(state).plus, plus_probability(ion_trap_phase(inst)), 1e-10);
}

TEST(RunBetaProbe, ZeroBetaIsSwitchPhase) {
    Rng rng(33);
    const int64_t nu = 10000;
    SchemeOutcomes out = run_beta_probe(0.8, 0.9, 0.0, nu, rng);
    double p = plus_probability(0.72);
    EXPECT_NEAR(static_cast<double>(out.control->plus) / nu, p, 4 * std::sqrt(p * (1 - p) / nu));
}

TEST(RunSchemes, RejectNonPositiveNu) {
    Rng rng(34);
    EXPECT_THROW(run_switch_control(uniform_instance(2, 0.1, 0.1), 0, rng), InvalidRange);
}
