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

#include "cvswitch/schemes.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cvswitch/errors.h"

using namespace cvswitch;

namespace {

struct SchemeEntry {
    SchemeTag tag;
    std::string_view name;
};

constexpr SchemeEntry kSchemes[] = {
    {SchemeTag::Parallel, "parallel"},
    {SchemeTag::Sequential, "sequential"},
    {SchemeTag::SwitchControl, "switch_control"},
    {SchemeTag::SwitchJoint, "switch_joint"},
    {SchemeTag::IonTrap, "ion_trap"},
    {SchemeTag::BetaProbe, "beta_probe"},
};

void require_nu(int64_t nu) {
    if (nu < 1) {
        throw InvalidRange("nu must be at least 1");
    }
}

ControlCounts sample_counts(double p_plus, int64_t nu, Rng &rng) {
    p_plus = std::clamp(p_plus, 0.0, 1.0);
    std::binomial_distribution<int64_t> draw(nu, p_plus);
    int64_t plus = draw(rng);
    return ControlCounts{plus, nu - plus};
}

double mean_of(std::span<const double> v) {
    double s = 0;
    for (double x : v) {
        s += x;
    }
    return s / static_cast<double>(v.size());
}

}  // namespace

std::string_view cvswitch::scheme_name(SchemeTag tag) {
    for (const auto &e : kSchemes) {
        if (e.tag == tag) {
            return e.name;
        }
    }
    return "unknown";
}

std::optional<SchemeTag> cvswitch::parse_scheme(std::string_view name) {
    for (const auto &e : kSchemes) {
        if (e.name == name) {
            return e.tag;
        }
    }
    return std::nullopt;
}

bool cvswitch::is_switch_family(SchemeTag tag) {
    return tag == SchemeTag::SwitchControl || tag == SchemeTag::SwitchJoint || tag == SchemeTag::IonTrap ||
           tag == SchemeTag::BetaProbe;
}

bool cvswitch::is_fixed_order(SchemeTag tag) {
    return tag == SchemeTag::Parallel || tag == SchemeTag::Sequential;
}

double DisplacementRanges::z_max() const {
    return std::max({std::abs(x_min), std::abs(x_max), std::abs(p_min), std::abs(p_max)});
}

ProblemInstance::ProblemInstance(std::vector<double> xs, std::vector<double> ps)
    : xs_(std::move(xs)), ps_(std::move(ps)), x_bar_(0), p_bar_(0) {
    if (xs_.empty()) {
        throw InvalidRange("problem instance needs N >= 1 displacements per quadrature");
    }
    if (xs_.size() != ps_.size()) {
        throw InvalidRange("problem instance needs the same number of x and p displacements");
    }
    for (size_t k = 0; k < xs_.size(); k++) {
        if (!std::isfinite(xs_[k]) || !std::isfinite(ps_[k])) {
            throw InvalidRange("problem instance displacements must be finite");
        }
    }
    x_bar_ = mean_of(xs_);
    p_bar_ = mean_of(ps_);
}

ProblemInstance cvswitch::make_instance(std::vector<double> xs, std::vector<double> ps) {
    return ProblemInstance(std::move(xs), std::move(ps));
}

ProblemInstance cvswitch::make_instance(int n, const DisplacementRanges &r, Rng &rng) {
    if (n < 1) {
        throw InvalidRange("n must be at least 1");
    }
    for (double v : {r.x_min, r.x_max, r.p_min, r.p_max}) {
        if (!std::isfinite(v)) {
            throw InvalidRange("displacement ranges must be finite");
        }
    }
    if (r.x_min > r.x_max || r.p_min > r.p_max) {
        throw InvalidRange("displacement range has min > max");
    }
    std::uniform_real_distribution<double> ux(r.x_min, r.x_max);
    std::uniform_real_distribution<double> up(r.p_min, r.p_max);
    std::vector<double> xs(static_cast<size_t>(n));
    std::vector<double> ps(static_cast<size_t>(n));
    for (auto &x : xs) {
        x = r.x_min == r.x_max ? r.x_min : ux(rng);
    }
    for (auto &p : ps) {
        p = r.p_min == r.p_max ? r.p_min : up(rng);
    }
    return ProblemInstance(std::move(xs), std::move(ps));
}

ProblemInstance cvswitch::uniform_instance(int n, double x_bar, double p_bar) {
    if (n < 1) {
        throw InvalidRange("n must be at least 1");
    }
    return ProblemInstance(std::vector<double>(static_cast<size_t>(n), x_bar),
                           std::vector<double>(static_cast<size_t>(n), p_bar));
}

double cvswitch::switch_control_phase(const ProblemInstance &inst) {
    return switch_phase(switch_word(inst.xs(), inst.ps()));
}

double cvswitch::ion_trap_phase(const ProblemInstance &inst) {
    return switch_phase(ion_trap_word(inst.xs(), inst.ps()));
}

double cvswitch::beta_probe_phase(double x, double p, double beta_gup) {
    // Undeformed part from the Weyl algebra of a single D_x, D_p pair.
    double base = switch_phase(switch_word(std::span<const double>(&x, 1), std::span<const double>(&p, 1)));
    return base * (1.0 + (7.0 / 3.0) * beta_gup * p * p);
}

double cvswitch::plus_probability(double phase) {
    return 0.5 * (1.0 + std::cos(phase));
}

CoherentState cvswitch::switch_probe_output(const ProblemInstance &inst, const CoherentState &probe) {
    return displace(probe, x_first_word(inst.xs(), inst.ps()));
}

SchemeOutcomes cvswitch::run_parallel(const ProblemInstance &inst, int64_t nu, Rng &rng) {
    require_nu(nu);
    SchemeOutcomes out{SchemeTag::Parallel, nu, std::nullopt, std::nullopt, std::vector<std::vector<double>>{}};
    auto &rows = *out.homodyne;
    rows.reserve(2 * inst.n());
    for (double x : inst.xs()) {
        CoherentState s = displace(CoherentState::vacuum(), Displacement::position(x));
        rows.emplace_back(static_cast<size_t>(nu));
        sample_homodyne(s, Quadrature::X, rng, rows.back());
    }
    for (double p : inst.ps()) {
        CoherentState s = displace(CoherentState::vacuum(), Displacement::momentum(p));
        rows.emplace_back(static_cast<size_t>(nu));
        sample_homodyne(s, Quadrature::P, rng, rows.back());
    }
    return out;
}

SchemeOutcomes cvswitch::run_sequential(const ProblemInstance &inst, int64_t nu, Rng &rng) {
    require_nu(nu);
    DisplacementWord x_word;
    DisplacementWord p_word;
    for (double x : inst.xs()) {
        x_word.factors.push_back(Displacement::position(x));
    }
    for (double p : inst.ps()) {
        p_word.factors.push_back(Displacement::momentum(p));
    }
    CoherentState x_probe = displace(CoherentState::vacuum(), x_word);
    CoherentState p_probe = displace(CoherentState::vacuum(), p_word);

    SchemeOutcomes out{SchemeTag::Sequential, nu, std::nullopt, std::nullopt, std::vector<std::vector<double>>(2)};
    auto &rows = *out.homodyne;
    rows[0].resize(static_cast<size_t>(nu));
    rows[1].resize(static_cast<size_t>(nu));
    sample_homodyne(x_probe, Quadrature::X, rng, rows[0]);
    sample_homodyne(p_probe, Quadrature::P, rng, rows[1]);
    return out;
}

SchemeOutcomes cvswitch::run_switch_control(const ProblemInstance &inst, int64_t nu, Rng &rng) {
    require_nu(nu);
    double p_plus = plus_probability(switch_control_phase(inst));
    return SchemeOutcomes{SchemeTag::SwitchControl, nu, sample_counts(p_plus, nu, rng), std::nullopt, std::nullopt};
}

SchemeOutcomes cvswitch::run_switch_joint(const ProblemInstance &inst, int64_t nu, Rng &rng) {
    require_nu(nu);
    // The joint density factorizes, so the control outcome and beta are independent.
    double p_plus = plus_probability(switch_control_phase(inst));
    SchemeOutcomes out{SchemeTag::SwitchJoint, nu, sample_counts(p_plus, nu, rng), std::vector<complex>{},
                       std::nullopt};
    out.heterodyne->resize(static_cast<size_t>(nu));
    sample_heterodyne(switch_probe_output(inst), rng, *out.heterodyne);
    return out;
}

SchemeOutcomes cvswitch::run_ion_trap(const ProblemInstance &inst, int64_t nu, Rng &rng) {
    require_nu(nu);
    double p_plus = plus_probability(ion_trap_phase(inst));
    return SchemeOutcomes{SchemeTag::IonTrap, nu, sample_counts(p_plus, nu, rng), std::nullopt, std::nullopt};
}

SchemeOutcomes cvswitch::run_beta_probe(double x, double p, double beta_gup, int64_t nu, Rng &rng) {
    require_nu(nu);
    double p_plus = plus_probability(beta_probe_phase(x, p, beta_gup));
    return SchemeOutcomes{SchemeTag::BetaProbe, nu, sample_counts(p_plus, nu, rng), std::nullopt, std::nullopt};
}
