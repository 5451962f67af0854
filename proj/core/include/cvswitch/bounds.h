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

#ifndef CVSWITCH_BOUNDS_H
#define CVSWITCH_BOUNDS_H

#include <cstdint>
#include <span>

namespace cvswitch::bounds {

// Closed-form precision limits. All RMSE values are for the product A = x_bar * p_bar
// unless stated otherwise; nu is the number of repetitions, E a probe energy
// <(X^2 + P^2)/2>.

struct BoundQuery {
    int n = 1;
    int64_t nu = 1;
    double energy = 0.5;
    double x_bar = 0.0;
    double p_bar = 0.0;
    double z_max = 0.0;
    /// Total energy requirement for the superposition-of-orders limit; separate from the probe energy.
    double energy_budget = 0.5;
};

/// Quantum CRB on a single displacement: 1 / sqrt(8 nu E).
double single_displacement_crb(double energy, int64_t nu);

/// Control-only switch readout: 1 / (sqrt(nu) N^2).
double switch_rmse_control(int n, int64_t nu);

/// Control plus heterodyne readout with a vacuum probe:
/// switch_rmse_control * sqrt((x^2 + p^2) / (x^2 + p^2 + 1/N^2)).
double switch_rmse_joint(double x_bar, double p_bar, int n, int64_t nu);

/// Floor for any definite-order scheme: min(|x_bar|, |p_bar|) / (sqrt(8 nu E) N).
double fixed_order_bound(double x_bar, double p_bar, double energy, int n, int64_t nu);

/// min_j |c_j| dz_j / N over the 2N displacements. Throws LengthMismatch unless
/// both lists have length 2N.
double general_fixed_order_bound(std::span<const double> c, std::span<const double> delta_z, int n);

/// Upper bound on the probe+ancilla energy after `steps` displacements of size
/// at most z_max interleaved with gates of energy requirement gate_energies[j]:
/// (sqrt(e0) + steps z_max / sqrt(2) + sum_{j < steps} sqrt(e_j))^2. Missing gate
/// energies count as zero.
double energy_recursion(double e0, std::span<const double> gate_energies, double z_max, int steps);

/// Limit for any superposition of definite-order schemes with total energy
/// requirement at most `energy_budget`:
/// p_bar / (4 sqrt(nu) N^2 (z_max + sqrt((2N + 1) E / (2 N^2)))).
double superposition_bound(double p_bar, int n, int64_t nu, double z_max, double energy_budget);

/// Ion-trap simulation of the switch doubles the phase: 1 / (2 sqrt(nu) N^2).
double ion_trap_rmse(int n, int64_t nu);

/// Mean value z at which fixed_order_bound(z, z, E, N, nu) equals switch_rmse_control(N, nu): sqrt(8E)/N.
double crossover_mean(double energy, int n);

}  // namespace cvswitch::bounds

#endif
