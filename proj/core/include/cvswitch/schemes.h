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

#ifndef CVSWITCH_SCHEMES_H
#define CVSWITCH_SCHEMES_H

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "cvswitch/cv_state.h"
#include "cvswitch/rng.h"
#include "cvswitch/weyl.h"

namespace cvswitch {

enum class SchemeTag { Parallel, Sequential, SwitchControl, SwitchJoint, IonTrap, BetaProbe };

std::string_view scheme_name(SchemeTag tag);
std::optional<SchemeTag> parse_scheme(std::string_view name);
/// Schemes whose readout phase is periodic, so A is only identifiable in a principal window.
bool is_switch_family(SchemeTag tag);
/// Schemes that query the boxes in a definite causal order.
bool is_fixed_order(SchemeTag tag);

struct DisplacementRanges {
    double x_min = 0.0;
    double x_max = 0.0;
    double p_min = 0.0;
    double p_max = 0.0;

    /// max(|x_min|, |x_max|, |p_min|, |p_max|).
    double z_max() const;
};

/// The 2N hidden displacements and their derived averages.
class ProblemInstance {
   public:
    /// Throws InvalidRange on empty, unequal-length or non-finite inputs.
    ProblemInstance(std::vector<double> xs, std::vector<double> ps);

    size_t n() const {
        return xs_.size();
    }
    std::span<const double> xs() const {
        return xs_;
    }
    std::span<const double> ps() const {
        return ps_;
    }
    double x_bar() const {
        return x_bar_;
    }
    double p_bar() const {
        return p_bar_;
    }
    /// A = x_bar * p_bar.
    double product() const {
        return x_bar_ * p_bar_;
    }
    /// Either average is exactly zero; Fisher-matrix operations will refuse the instance.
    bool has_zero_mean() const {
        return x_bar_ == 0.0 || p_bar_ == 0.0;
    }

   private:
    std::vector<double> xs_;
    std::vector<double> ps_;
    double x_bar_;
    double p_bar_;
};

ProblemInstance make_instance(std::vector<double> xs, std::vector<double> ps);
/// n i.i.d. uniform draws per quadrature. Throws InvalidRange if n < 1, a range is inverted or non-finite.
ProblemInstance make_instance(int n, const DisplacementRanges &ranges, Rng &rng);
/// All x_j = x_bar and all p_j = p_bar.
ProblemInstance uniform_instance(int n, double x_bar, double p_bar);

struct ControlCounts {
    int64_t plus = 0;
    int64_t minus = 0;

    int64_t total() const {
        return plus + minus;
    }
};

struct SchemeOutcomes {
    SchemeTag tag;
    int64_t nu = 0;
    std::optional<ControlCounts> control;
    std::optional<std::vector<complex>> heterodyne;
    /// One row of nu samples per measured probe: 2N rows (x boxes then p boxes) for
    /// the parallel scheme, 2 rows (x probe, p probe) for the sequential one.
    std::optional<std::vector<std::vector<double>>> homodyne;
};

/// Relative control phase of the switch word, N^2 A, derived from the Weyl algebra.
double switch_control_phase(const ProblemInstance &inst);
/// Relative control phase of the ion-trap gate sequence, 2 N^2 A.
double ion_trap_phase(const ProblemInstance &inst);
/// x p [1 + (7/3) beta p^2]: first-order modified-commutator phase.
double beta_probe_phase(double x, double p, double beta_gup);
/// (1 + cos(phase)) / 2.
double plus_probability(double phase);

SchemeOutcomes run_parallel(const ProblemInstance &inst, int64_t nu, Rng &rng);
SchemeOutcomes run_sequential(const ProblemInstance &inst, int64_t nu, Rng &rng);
SchemeOutcomes run_switch_control(const ProblemInstance &inst, int64_t nu, Rng &rng);
SchemeOutcomes run_switch_joint(const ProblemInstance &inst, int64_t nu, Rng &rng);
SchemeOutcomes run_ion_trap(const ProblemInstance &inst, int64_t nu, Rng &rng);
/// x and p are the total displacements (N x_bar, N p_bar).
SchemeOutcomes run_beta_probe(double x, double p, double beta_gup, int64_t nu, Rng &rng);

/// Probe state after the switch word acts on `probe` (both branches agree).
CoherentState switch_probe_output(const ProblemInstance &inst, const CoherentState &probe = CoherentState::vacuum());

}  // namespace cvswitch

#endif
