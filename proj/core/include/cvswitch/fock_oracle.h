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

#ifndef CVSWITCH_FOCK_ORACLE_H
#define CVSWITCH_FOCK_ORACLE_H

#include <Eigen/Dense>
#include <cstddef>

#include "cvswitch/weyl.h"

namespace cvswitch::fock {

// Brute-force number-basis model of a single mode, truncated to `dim` levels.
// Everything here is deliberately independent of the Weyl-algebra shortcuts in
// weyl.h so the two can be compared.

struct TruncatedOperator {
    size_t dim = 0;
    Eigen::MatrixXcd entries;
};

/// a with a[n-1, n] = sqrt(n).
TruncatedOperator annihilation(size_t dim);
TruncatedOperator creation(size_t dim);
/// X = (a + a^dag)/sqrt(2).
TruncatedOperator position_operator(size_t dim);
/// P = i(a^dag - a)/sqrt(2).
TruncatedOperator momentum_operator(size_t dim);

/// Scaling-and-squaring Taylor exponential; the series is cut once a term drops
/// below `series_tolerance` relative to the partial sum.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd &m, double series_tolerance = 1e-12);

/// Smallest dim the truncation heuristic accepts for a total displacement of |alpha|^2.
size_t recommended_dim(double alpha_norm_sq);

/// exp(alpha a^dag - conj(alpha) a). Throws TruncationTooSmall when |alpha|^2 > dim/4.
TruncatedOperator displacement_matrix(complex alpha, size_t dim);

Eigen::VectorXcd number_state(size_t n, size_t dim);
/// Coherent-state amplitudes e^{-|alpha|^2/2} alpha^n / sqrt(n!), n < dim.
Eigen::VectorXcd coherent_amplitudes(complex alpha, size_t dim);

/// Applies the word right-to-left to `state`. Throws TruncationTooSmall if any
/// factor or running total leaves the truncation budget.
Eigen::VectorXcd apply_word(const DisplacementWord &word, const Eigen::VectorXcd &state);

/// Control qubit (x) truncated oscillator; amplitudes[c * dim + n] for control c.
struct ControlProbeState {
    size_t dim = 0;
    Eigen::VectorXcd amplitudes;

    /// |+> (x) probe.
    static ControlProbeState plus_with(const Eigen::VectorXcd &probe);
    /// |c> (x) probe for c in {0, 1}.
    static ControlProbeState basis_with(int control, const Eigen::VectorXcd &probe);

    Eigen::VectorXcd branch(int control) const {
        return amplitudes.segment(static_cast<Eigen::Index>(control * dim), static_cast<Eigen::Index>(dim));
    }
    double norm() const {
        return amplitudes.norm();
    }
};

ControlProbeState apply_controlled_word(const ControlledWord &word, const ControlProbeState &input);

struct ControlProbabilities {
    double plus;
    double minus;
};

/// Outcome probabilities of measuring the control in {|+>, |->}.
ControlProbabilities control_outcome_probs(const ControlProbeState &state);

/// <branch0 output | branch1 output> for a |+>-prepared control (unnormalized by the 1/2).
complex branch_overlap(const ControlProbeState &state);

/// |<beta|probe>|^2 / pi.
double heterodyne_density(const Eigen::VectorXcd &probe, complex beta);

}  // namespace cvswitch::fock

#endif
