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

#include "cvswitch/fock_oracle.h"

#include <cmath>
#include <numbers>
#include <string>

#include "cvswitch/errors.h"

using namespace cvswitch;
using namespace cvswitch::fock;

static void require_dim(size_t dim) {
    if (dim < 2) {
        throw InvalidRange("truncation dimension must be at least 2");
    }
}

static void check_budget(complex alpha, size_t dim, const char *what) {
    double a2 = std::norm(alpha);
    if (a2 > static_cast<double>(dim) / 4.0) {
        throw TruncationTooSmall(
            std::string(what) + ": |alpha|^2 = " + std::to_string(a2) + " exceeds dim/4 at dim = " + std::to_string(dim),
            recommended_dim(a2));
    }
}

TruncatedOperator fock::annihilation(size_t dim) {
    require_dim(dim);
    TruncatedOperator op{dim, Eigen::MatrixXcd::Zero(dim, dim)};
    for (size_t n = 1; n < dim; n++) {
        op.entries(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return op;
}

TruncatedOperator fock::creation(size_t dim) {
    auto a = annihilation(dim);
    return TruncatedOperator{dim, a.entries.adjoint()};
}

TruncatedOperator fock::position_operator(size_t dim) {
    auto a = annihilation(dim).entries;
    return TruncatedOperator{dim, (a + a.adjoint()) / std::sqrt(2.0)};
}

TruncatedOperator fock::momentum_operator(size_t dim) {
    auto a = annihilation(dim).entries;
    return TruncatedOperator{dim, complex(0.0, 1.0) * (a.adjoint() - a) / std::sqrt(2.0)};
}

Eigen::MatrixXcd fock::matrix_exponential(const Eigen::MatrixXcd &m, double series_tolerance) {
    const Eigen::Index n = m.rows();
    double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    }
    Eigen::MatrixXcd scaled = m / std::ldexp(1.0, squarings);

    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (int k = 1; k < 200; k++) {
        term = (term * scaled) / static_cast<double>(k);
        sum += term;
        if (term.cwiseAbs().maxCoeff() <= series_tolerance * sum.cwiseAbs().maxCoeff()) {
            break;
        }
    }
    for (int s = 0; s < squarings; s++) {
        sum = (sum * sum).eval();
    }
    return sum;
}

size_t fock::recommended_dim(double alpha_norm_sq) {
    size_t scaled = 8 * static_cast<size_t>(std::ceil(alpha_norm_sq));
    return scaled > 32 ? scaled : 32;
}

TruncatedOperator fock::displacement_matrix(complex alpha, size_t dim) {
    require_dim(dim);
    check_budget(alpha, dim, "displacement");
    auto a = annihilation(dim).entries;
    Eigen::MatrixXcd generator = alpha * a.adjoint() - std::conj(alpha) * a;
    return TruncatedOperator{dim, matrix_exponential(generator)};
}

Eigen::VectorXcd fock::number_state(size_t n, size_t dim) {
    require_dim(dim);
    if (n >= dim) {
        throw InvalidRange("number state index beyond truncation");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(n)) = 1.0;
    return v;
}

Eigen::VectorXcd fock::coherent_amplitudes(complex alpha, size_t dim) {
    require_dim(dim);
    Eigen::VectorXcd v(static_cast<Eigen::Index>(dim));
    complex c = std::exp(-0.5 * std::norm(alpha));
    for (size_t n = 0; n < dim; n++) {
        v(static_cast<Eigen::Index>(n)) = c;
        c *= alpha / std::sqrt(static_cast<double>(n + 1));
    }
    return v;
}

Eigen::VectorXcd fock::apply_word(const DisplacementWord &word, const Eigen::VectorXcd &state) {
    size_t dim = static_cast<size_t>(state.size());
    Eigen::VectorXcd out = state;
    complex running{0.0, 0.0};
    for (auto it = word.factors.rbegin(); it != word.factors.rend(); ++it) {
        running += it->alpha;
        check_budget(running, dim, "running displacement");
        out = displacement_matrix(it->alpha, dim).entries * out;
    }
    return out;
}

ControlProbeState ControlProbeState::plus_with(const Eigen::VectorXcd &probe) {
    ControlProbeState s;
    s.dim = static_cast<size_t>(probe.size());
    s.amplitudes.resize(2 * probe.size());
    s.amplitudes << probe / std::sqrt(2.0), probe / std::sqrt(2.0);
    return s;
}

ControlProbeState ControlProbeState::basis_with(int control, const Eigen::VectorXcd &probe) {
    if (control != 0 && control != 1) {
        throw InvalidRange("control basis index must be 0 or 1");
    }
    ControlProbeState s;
    s.dim = static_cast<size_t>(probe.size());
    s.amplitudes = Eigen::VectorXcd::Zero(2 * probe.size());
    s.amplitudes.segment(control * probe.size(), probe.size()) = probe;
    return s;
}

ControlProbeState fock::apply_controlled_word(const ControlledWord &word, const ControlProbeState &input) {
    ControlProbeState out = input;
    auto d = static_cast<Eigen::Index>(input.dim);
    out.amplitudes.segment(0, d) = apply_word(word.branch0, input.branch(0));
    out.amplitudes.segment(d, d) = apply_word(word.branch1, input.branch(1));
    return out;
}

ControlProbabilities fock::control_outcome_probs(const ControlProbeState &state) {
    Eigen::VectorXcd b0 = state.branch(0);
    Eigen::VectorXcd b1 = state.branch(1);
    double plus = 0.5 * (b0 + b1).squaredNorm();
    double minus = 0.5 * (b0 - b1).squaredNorm();
    return ControlProbabilities{plus, minus};
}

complex fock::branch_overlap(const ControlProbeState &state) {
    // Undo the 1/sqrt(2) of each branch amplitude.
    return 2.0 * state.branch(0).dot(state.branch(1));
}

double fock::heterodyne_density(const Eigen::VectorXcd &probe, complex beta) {
    Eigen::VectorXcd coh = coherent_amplitudes(beta, static_cast<size_t>(probe.size()));
    return std::norm(coh.dot(probe)) / std::numbers::pi;
}
