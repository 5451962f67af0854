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

#include "cvswitch/bounds.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvswitch/errors.h"

using namespace cvswitch;

namespace {

void require_positive(int n, int64_t nu) {
    if (n < 1 || nu < 1) {
        throw NonPositiveInput("n and nu must be at least 1");
    }
}

double sq(double v) {
    return v * v;
}

}  // namespace

double bounds::single_displacement_crb(double energy, int64_t nu) {
    if (!(energy > 0.0) || nu < 1) {
        throw NonPositiveInput("energy must be positive and nu >= 1");
    }
    return 1.0 / std::sqrt(8.0 * static_cast<double>(nu) * energy);
}

double bounds::switch_rmse_control(int n, int64_t nu) {
    require_positive(n, nu);
    double nn = static_cast<double>(n);
    return 1.0 / (std::sqrt(static_cast<double>(nu)) * nn * nn);
}

double bounds::switch_rmse_joint(double x_bar, double p_bar, int n, int64_t nu) {
    require_positive(n, nu);
    double r2 = sq(x_bar) + sq(p_bar);
    if (r2 == 0.0) {
        throw InvalidRange("switch_rmse_joint needs (x_bar, p_bar) != (0, 0)");
    }
    double nn = static_cast<double>(n);
    return switch_rmse_control(n, nu) * std::sqrt(r2 / (r2 + 1.0 / (nn * nn)));
}

double bounds::fixed_order_bound(double x_bar, double p_bar, double energy, int n, int64_t nu) {
    require_positive(n, nu);
    return std::min(std::abs(x_bar), std::abs(p_bar)) * single_displacement_crb(energy, nu) / static_cast<double>(n);
}

double bounds::general_fixed_order_bound(std::span<const double> c, std::span<const double> delta_z, int n) {
    if (n < 1) {
        throw NonPositiveInput("n must be at least 1");
    }
    size_t expected = 2 * static_cast<size_t>(n);
    if (c.size() != expected || delta_z.size() != expected) {
        throw LengthMismatch("sensitivity and error lists must both have length 2N = " + std::to_string(expected));
    }
    double best = INFINITY;
    for (size_t j = 0; j < expected; j++) {
        if (delta_z[j] < 0.0) {
            throw InvalidRange("per-displacement errors must be non-negative");
        }
        best = std::min(best, std::abs(c[j]) * delta_z[j]);
    }
    return best / static_cast<double>(n);
}

double bounds::energy_recursion(double e0, std::span<const double> gate_energies, double z_max, int steps) {
    if (e0 < 0.0 || steps < 0 || z_max < 0.0) {
        throw InvalidRange("energy_recursion needs e0 >= 0, z_max >= 0, steps >= 0");
    }
    double root = std::sqrt(e0) + steps * z_max / std::sqrt(2.0);
    size_t used = std::min(gate_energies.size(), static_cast<size_t>(steps));
    for (size_t j = 0; j < used; j++) {
        if (gate_energies[j] < 0.0) {
            throw InvalidRange("gate energy requirements must be non-negative");
        }
        root += std::sqrt(gate_energies[j]);
    }
    return root * root;
}

double bounds::superposition_bound(double p_bar, int n, int64_t nu, double z_max, double energy_budget) {
    require_positive(n, nu);
    if (energy_budget < 0.0) {
        throw InvalidRange("energy budget must be non-negative");
    }
    if (!(p_bar > 0.0)) {
        throw InvalidRange("superposition_bound needs p_bar > 0");
    }
    double nn = static_cast<double>(n);
    double spread = z_max + std::sqrt((2.0 * nn + 1.0) * energy_budget / (2.0 * nn * nn));
    return p_bar / (4.0 * std::sqrt(static_cast<double>(nu)) * nn * nn * spread);
}

double bounds::ion_trap_rmse(int n, int64_t nu) {
    return 0.5 * switch_rmse_control(n, nu);
}

double bounds::crossover_mean(double energy, int n) {
    if (!(energy > 0.0) || n < 1) {
        throw NonPositiveInput("crossover_mean needs energy > 0 and n >= 1");
    }
    return std::sqrt(8.0 * energy) / static_cast<double>(n);
}
