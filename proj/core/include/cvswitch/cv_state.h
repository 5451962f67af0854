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

#ifndef CVSWITCH_CV_STATE_H
#define CVSWITCH_CV_STATE_H

#include <complex>
#include <span>

#include "cvswitch/rng.h"
#include "cvswitch/weyl.h"

namespace cvswitch {

/// Coherent state |alpha>. Global phases are not tracked here; see normalize().
struct CoherentState {
    complex alpha{0.0, 0.0};

    static CoherentState vacuum() {
        return CoherentState{};
    }
};

struct HeterodyneSample {
    complex beta;
};

enum class Quadrature { X, P };

CoherentState displace(const CoherentState &s, const Displacement &d);
CoherentState displace(const CoherentState &s, const DisplacementWord &word);

/// <(X^2 + P^2)/2> = |alpha|^2 + 1/2.
double energy(const CoherentState &s);

/// Mean of the quadrature on |alpha>: sqrt(2) Re(alpha) for X, sqrt(2) Im(alpha) for P.
double quadrature_mean(const CoherentState &s, Quadrature q);

/// Gaussian with the quadrature mean and variance 1/2.
double sample_homodyne(const CoherentState &s, Quadrature q, Rng &rng);
/// Fills `out` with independent homodyne samples of the same state.
void sample_homodyne(const CoherentState &s, Quadrature q, Rng &rng, std::span<double> out);

/// beta = alpha + g, g with independent N(0, 1/2) real and imaginary parts.
HeterodyneSample sample_heterodyne(const CoherentState &s, Rng &rng);
void sample_heterodyne(const CoherentState &s, Rng &rng, std::span<complex> out);

/// Q-function density (1/pi) exp(-|alpha - beta|^2) of the heterodyne outcome.
double heterodyne_density(const CoherentState &s, complex beta);

}  // namespace cvswitch

#endif
