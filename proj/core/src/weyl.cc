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

#include "cvswitch/weyl.h"

#include <cmath>
#include <string>

#include "cvswitch/errors.h"

using namespace cvswitch;

static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Displacement Displacement::position(double x) {
    return Displacement{complex(x * kInvSqrt2, 0.0)};
}

Displacement Displacement::momentum(double p) {
    return Displacement{complex(0.0, p * kInvSqrt2)};
}

Composition cvswitch::compose(Displacement a, Displacement b) {
    double phase = std::imag(a.alpha * std::conj(b.alpha));
    return Composition{Displacement{a.alpha + b.alpha}, phase};
}

NormalForm cvswitch::normalize(const DisplacementWord &word) {
    NormalForm out;
    Displacement acc{};
    for (const auto &f : word.factors) {
        auto c = compose(acc, f);
        acc = c.product;
        out.phase += c.phase;
    }
    out.total_alpha = acc.alpha;
    return out;
}

double cvswitch::switch_phase(const DisplacementWord &branch0, const DisplacementWord &branch1) {
    NormalForm n0 = normalize(branch0);
    NormalForm n1 = normalize(branch1);
    double gap = std::abs(n0.total_alpha - n1.total_alpha);
    if (!(gap < kBranchTolerance)) {
        throw BranchMismatch(
            "controlled word branches have different net displacements (|delta alpha| = " + std::to_string(gap) +
            ")");
    }
    return n0.phase - n1.phase;
}

double cvswitch::switch_phase(const ControlledWord &word) {
    return switch_phase(word.branch0, word.branch1);
}

static void append_positions(DisplacementWord &w, std::span<const double> xs, bool adjoint = false) {
    for (double x : xs) {
        w.factors.push_back(Displacement::position(adjoint ? -x : x));
    }
}

static void append_momenta(DisplacementWord &w, std::span<const double> ps) {
    for (double p : ps) {
        w.factors.push_back(Displacement::momentum(p));
    }
}

DisplacementWord cvswitch::x_first_word(std::span<const double> xs, std::span<const double> ps) {
    DisplacementWord w;
    append_momenta(w, ps);
    append_positions(w, xs);
    return w;
}

DisplacementWord cvswitch::p_first_word(std::span<const double> xs, std::span<const double> ps) {
    DisplacementWord w;
    append_positions(w, xs);
    append_momenta(w, ps);
    return w;
}

ControlledWord cvswitch::switch_word(std::span<const double> xs, std::span<const double> ps) {
    return ControlledWord{x_first_word(xs, ps), p_first_word(xs, ps)};
}

ControlledWord cvswitch::ion_trap_word(std::span<const double> xs, std::span<const double> ps) {
    // Leftmost factor is applied last: V_N ... V_1, then the D_p's, then U_N ... U_1.
    ControlledWord w;
    append_positions(w.branch0, xs, true);
    append_momenta(w.branch0, ps);
    append_positions(w.branch0, xs, false);

    append_positions(w.branch1, xs, false);
    append_momenta(w.branch1, ps);
    append_positions(w.branch1, xs, true);
    return w;
}
