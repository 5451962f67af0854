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

#include "quadrature.h"

#include <Eigen/Eigenvalues>
#include <array>
#include <cmath>
#include <numbers>

namespace cvswitch::test_support {

namespace {

double log_density(int sign, double br, double bi, double a, double x, int n) {
    double nn = static_cast<double>(n) * n;
    double p_plus = 0.5 * (1.0 + std::cos(nn * a));
    double p = sign > 0 ? p_plus : 1.0 - p_plus;
    double mr = n * x / std::numbers::sqrt2;
    double mi = n * (a / x) / std::numbers::sqrt2;
    return std::log(p) - std::log(std::numbers::pi) - (br - mr) * (br - mr) - (bi - mi) * (bi - mi);
}

// d/dtheta_k of the log-density, two-step Richardson on central differences.
std::array<double, 2> score(int sign, double br, double bi, double a, double x, int n) {
    std::array<double, 2> s{};
    for (int k = 0; k < 2; k++) {
        double theta = k == 0 ? a : x;
        double h = 1e-3 * std::max(std::abs(theta), 1e-2);
        auto diff = [&](double step) {
            double up = k == 0 ? log_density(sign, br, bi, a + step, x, n) : log_density(sign, br, bi, a, x + step, n);
            double dn = k == 0 ? log_density(sign, br, bi, a - step, x, n) : log_density(sign, br, bi, a, x - step, n);
            return (up - dn) / (2.0 * step);
        };
        s[k] = (4.0 * diff(h / 2.0) - diff(h)) / 3.0;
    }
    return s;
}

}  // namespace

GaussHermiteRule gauss_hermite(int order) {
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int k = 1; k < order; k++) {
        jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(k / 2.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
    GaussHermiteRule rule;
    for (int k = 0; k < order; k++) {
        rule.nodes.push_back(eig.eigenvalues()(k));
        double v = eig.eigenvectors()(0, k);
        rule.weights.push_back(std::sqrt(std::numbers::pi) * v * v);
    }
    return rule;
}

FisherMatrix2 quadrature_fisher_joint(double x_bar, double p_bar, int n, int order) {
    const double a = x_bar * p_bar;
    const double nn = static_cast<double>(n) * n;
    const double mr = n * x_bar / std::numbers::sqrt2;
    const double mi = n * p_bar / std::numbers::sqrt2;
    GaussHermiteRule rule = gauss_hermite(order);
    FisherMatrix2 f;
    for (int sign : {1, -1}) {
        double p = 0.5 * (1.0 + sign * std::cos(nn * a));
        for (int i = 0; i < order; i++) {
            for (int j = 0; j < order; j++) {
                double w = p * rule.weights[i] * rule.weights[j] / std::numbers::pi;
                auto s = score(sign, mr + rule.nodes[i], mi + rule.nodes[j], a, x_bar, n);
                f.f11 += w * s[0] * s[0];
                f.f12 += w * s[0] * s[1];
                f.f22 += w * s[1] * s[1];
            }
        }
    }
    return f;
}

double finite_difference_fisher_control(double a, int n) {
    const double nn = static_cast<double>(n) * n;
    auto p_plus = [&](double v) { return 0.5 * (1.0 + std::cos(nn * v)); };
    double h = 1e-4 * a;
    auto d1 = [&](double step) { return (p_plus(a + step) - p_plus(a - step)) / (2.0 * step); };
    double dp = (4.0 * d1(h / 2.0) - d1(h)) / 3.0;
    double pp = p_plus(a);
    return dp * dp / pp + dp * dp / (1.0 - pp);
}

}  // namespace cvswitch::test_support
