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

#include "cvswitch/cv_state.h"

#include <cmath>
#include <numbers>
#include <random>

using namespace cvswitch;

static const double kSqrt2 = std::sqrt(2.0);
static const double kHalfSigma = std::sqrt(0.5);

CoherentState cvswitch::displace(const CoherentState &s, const Displacement &d) {
    return CoherentState{s.alpha + d.alpha};
}

CoherentState cvswitch::displace(const CoherentState &s, const DisplacementWord &word) {
    return CoherentState{s.alpha + normalize(word).total_alpha};
}

double cvswitch::energy(const CoherentState &s) {
    return std::norm(s.alpha) + 0.5;
}

double cvswitch::quadrature_mean(const CoherentState &s, Quadrature q) {
    return kSqrt2 * (q == Quadrature::X ? s.alpha.real() : s.alpha.imag());
}

double cvswitch::sample_homodyne(const CoherentState &s, Quadrature q, Rng &rng) {
    std::normal_distribution<double> noise(quadrature_mean(s, q), kHalfSigma);
    return noise(rng);
}

void cvswitch::sample_homodyne(const CoherentState &s, Quadrature q, Rng &rng, std::span<double> out) {
    std::normal_distribution<double> noise(quadrature_mean(s, q), kHalfSigma);
    for (double &v : out) {
        v = noise(rng);
    }
}

HeterodyneSample cvswitch::sample_heterodyne(const CoherentState &s, Rng &rng) {
    std::normal_distribution<double> noise(0.0, kHalfSigma);
    double re = noise(rng);
    double im = noise(rng);
    return HeterodyneSample{s.alpha + complex(re, im)};
}

void cvswitch::sample_heterodyne(const CoherentState &s, Rng &rng, std::span<complex> out) {
    std::normal_distribution<double> noise(0.0, kHalfSigma);
    for (complex &b : out) {
        double re = noise(rng);
        double im = noise(rng);
        b = s.alpha + complex(re, im);
    }
}

double cvswitch::heterodyne_density(const CoherentState &s, complex beta) {
    return std::exp(-std::norm(s.alpha - beta)) / std::numbers::pi;
}
