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

#ifndef CVSWITCH_WEYL_H
#define CVSWITCH_WEYL_H

#include <complex>
#include <span>
#include <vector>

namespace cvswitch {

using complex = std::complex<double>;

/// D(alpha) = exp(alpha a^dag - conj(alpha) a), with hbar = 1 and X = (a + a^dag)/sqrt(2).
struct Displacement {
    complex alpha{0.0, 0.0};

    /// D_x = exp(-i x P), shifts X by x.
    static Displacement position(double x);
    /// D_p = exp(i p X), shifts P by p.
    static Displacement momentum(double p);

    Displacement inverse() const {
        return Displacement{-alpha};
    }
    bool operator==(const Displacement &) const = default;
};

/// Ordered operator product. factors.front() is the leftmost factor, i.e. the
/// one applied last.
struct DisplacementWord {
    std::vector<Displacement> factors;

    bool empty() const {
        return factors.empty();
    }
    size_t size() const {
        return factors.size();
    }
};

/// word == exp(i * phase) * D(total_alpha). The phase is accumulated, never reduced mod 2pi.
struct NormalForm {
    complex total_alpha{0.0, 0.0};
    double phase = 0.0;
};

/// |0><0| (x) branch0 + |1><1| (x) branch1.
struct ControlledWord {
    DisplacementWord branch0;
    DisplacementWord branch1;
};

struct Composition {
    Displacement product;
    double phase;
};

/// Net displacements of two branches must agree to this absolute tolerance.
inline constexpr double kBranchTolerance = 1e-9;

/// D(a) D(b) = exp(i phase) D(a + b) with phase = Im(a conj(b)).
Composition compose(Displacement a, Displacement b);

/// Left fold of compose over the word.
NormalForm normalize(const DisplacementWord &word);

/// Phase of branch0 relative to branch1: branch0 = exp(i * result) * branch1.
///
/// For the switch word (branch0 applies the x's first, branch1 the p's first)
/// this is (sum x)(sum p) = N^2 * A. Throws BranchMismatch when the net
/// displacements differ, since then the control would entangle with the probe.
double switch_phase(const DisplacementWord &branch0, const DisplacementWord &branch1);
double switch_phase(const ControlledWord &word);

/// prod_j D_{p_j} prod_j D_{x_j}.
DisplacementWord x_first_word(std::span<const double> xs, std::span<const double> ps);
/// prod_j D_{x_j} prod_j D_{p_j}.
DisplacementWord p_first_word(std::span<const double> xs, std::span<const double> ps);

/// The controlled unitary produced by the quantum switch on the 2N boxes.
ControlledWord switch_word(std::span<const double> xs, std::span<const double> ps);

/// Ion-trap simulation of the switch: all U_j, then all D_{p_j}, then all V_j, with
/// U_j = |0><0| D_{x_j} + |1><1| D_{x_j}^dag and V_j = |0><0| D_{x_j}^dag + |1><1| D_{x_j}.
ControlledWord ion_trap_word(std::span<const double> xs, std::span<const double> ps);

}  // namespace cvswitch

#endif
