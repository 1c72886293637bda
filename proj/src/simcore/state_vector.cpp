// Copyright 2026 The qadsim Authors
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

#include "qadsim/simcore/state_vector.hpp"

#include <cmath>
#include <numbers>

#include "dispatch.hpp"
#include "qadsim/config.hpp"
#include "qadsim/error.hpp"

namespace qadsim::sim {

StateVector::StateVector(RegisterLayout layout, Backend backend)
    : layout_(std::move(layout)), amps_(layout_.dim(), Amp{0.0}), backend_(backend) {
    amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(RegisterLayout layout, std::vector<Amp> amps, Backend backend) {
    if (amps.size() != layout.dim()) {
        throw LayoutError("amplitude count " + std::to_string(amps.size()) + " does not match layout dimension " +
                          std::to_string(layout.dim()));
    }
    StateVector s(std::move(layout), backend);
    s.amps_ = std::move(amps);
    double n = s.norm_squared();
    if (std::abs(n - 1.0) > Tolerances::norm) {
        throw DomainError("amplitudes are not normalized (norm^2 = " + std::to_string(n) + ")");
    }
    return s;
}

double StateVector::norm_squared() const { return dispatch::norm_squared(backend_, std::span<const Amp>(amps_)); }

StateVector new_state(const RegisterLayout& layout) { return StateVector(layout); }

void apply_hadamard_block(StateVector& state, std::string_view reg) {
    const auto& r = state.layout().at(reg);
    const double h = std::numbers::sqrt2 / 2.0;
    const Mat2 m{h, h, h, -h};
    for (int b = 0; b < r.width; ++b) dispatch::apply_1q(state.backend(), state.amplitudes(), r.offset + b, m, Control{});
}

void apply_qft(StateVector& state, std::string_view reg, bool inverse) {
    const auto& r = state.layout().at(reg);
    dispatch::apply_dft(state.backend(), state.amplitudes(), r.field(), inverse, Control{});
}

std::vector<double> marginal(const StateVector& state, std::string_view reg) {
    const auto& r = state.layout().at(reg);
    std::vector<double> out(r.dim(), 0.0);
    dispatch::marginal(state.backend(), state.amplitudes(), r.field(), std::span<double>(out));
    return out;
}

double probability_of(const StateVector& state, std::string_view reg,
                      const std::function<bool(std::uint64_t)>& pred) {
    auto m = marginal(state, reg);
    double p = 0.0;
    for (std::uint64_t l = 0; l < m.size(); ++l) {
        if (pred(l)) p += m[l];
    }
    return std::min(1.0, std::max(0.0, p));
}

Measurement measure(const StateVector& state, std::string_view reg, std::mt19937_64& rng) {
    const auto& r = state.layout().at(reg);
    auto m = marginal(state, reg);
    // 53-bit uniform in [0, 1); avoids the implementation-defined distributions of <random>.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    double total = 0.0;
    for (double p : m) total += p;
    double acc = 0.0;
    std::uint64_t outcome = m.size() - 1;
    for (std::uint64_t l = 0; l < m.size(); ++l) {
        acc += m[l] / total;
        if (u < acc) {
            outcome = l;
            break;
        }
    }
    while (m[outcome] <= 0.0 && outcome > 0) --outcome;
    if (m[outcome] <= 0.0) throw Error("measurement selected a zero-probability outcome");

    StateVector collapsed = state;
    auto amps = collapsed.amplitudes();
    const double scale = 1.0 / std::sqrt(m[outcome]);
    for (std::uint64_t i = 0; i < amps.size(); ++i) {
        if (((i >> r.offset) & low_mask(r.width)) == outcome) {
            amps[i] *= scale;
        } else {
            amps[i] = 0.0;
        }
    }
    return Measurement{outcome, m[outcome], std::move(collapsed)};
}

Measurement measure(const StateVector& state, std::string_view reg, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return measure(state, reg, rng);
}

namespace {

struct ProductSplit {
    std::vector<Amp> rest;  // unnormalized coefficients on the remaining registers
    double residual = 0.0;
};

ProductSplit split_register(const StateVector& state, std::string_view reg) {
    const auto& r = state.layout().at(reg);
    const std::uint64_t rdim = r.dim();
    const std::uint64_t sdim = state.dim() >> r.width;
    const std::uint64_t below = low_mask(r.offset);
    auto amps = state.amplitudes();
    auto full = [&](std::uint64_t s, std::uint64_t l) {
        return (s & below) | ((s & ~below) << r.width) | (l << r.offset);
    };

    std::uint64_t best = 0;
    double best_norm = -1.0;
    std::vector<double> col_norm(sdim, 0.0);
    for (std::uint64_t s = 0; s < sdim; ++s) {
        double n = 0.0;
        for (std::uint64_t l = 0; l < rdim; ++l) n += std::norm(amps[full(s, l)]);
        col_norm[s] = n;
        if (n > best_norm) {
            best_norm = n;
            best = s;
        }
    }
    std::vector<Amp> v(rdim);
    const double inv = 1.0 / std::sqrt(best_norm);
    for (std::uint64_t l = 0; l < rdim; ++l) v[l] = amps[full(best, l)] * inv;

    ProductSplit out;
    out.rest.resize(sdim);
    for (std::uint64_t s = 0; s < sdim; ++s) {
        Amp c{0.0};
        for (std::uint64_t l = 0; l < rdim; ++l) c += std::conj(v[l]) * amps[full(s, l)];
        out.rest[s] = c;
        out.residual += std::max(0.0, col_norm[s] - std::norm(c));
    }
    return out;
}

}  // namespace

double entanglement_residual(const StateVector& state, std::string_view reg) {
    return split_register(state, reg).residual;
}

StateVector discard(const StateVector& state, std::string_view reg) {
    auto split = split_register(state, reg);
    if (split.residual > Tolerances::discard_purity) {
        throw EntangledDiscard("register '" + std::string(reg) + "' is entangled with the rest (residual mass " +
                               std::to_string(split.residual) + ")");
    }
    double n = 0.0;
    for (const auto& c : split.rest) n += std::norm(c);
    const double scale = 1.0 / std::sqrt(n);
    for (auto& c : split.rest) c *= scale;
    return StateVector::from_amplitudes(state.layout().without(reg), std::move(split.rest), state.backend());
}

}  // namespace qadsim::sim
