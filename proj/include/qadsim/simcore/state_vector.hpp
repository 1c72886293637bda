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

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "qadsim/simcore/kernels.hpp"
#include "qadsim/simcore/register_layout.hpp"

namespace qadsim::sim {

/// Dense statevector over a named register layout.
///
/// Single-writer: a StateVector is owned by one logical thread at a time.
/// Distinct states can be processed concurrently.
class StateVector {
   public:
    /// |0...0> over `layout`.
    explicit StateVector(RegisterLayout layout, Backend backend = Backend::parallel);

    /// Wraps explicit amplitudes; throws DomainError if they are not normalized.
    static StateVector from_amplitudes(RegisterLayout layout, std::vector<Amp> amps,
                                       Backend backend = Backend::parallel);

    const RegisterLayout& layout() const { return layout_; }
    std::span<Amp> amplitudes() { return amps_; }
    std::span<const Amp> amplitudes() const { return amps_; }
    Amp amplitude(std::uint64_t index) const { return amps_[index]; }
    std::uint64_t dim() const { return amps_.size(); }

    Backend backend() const { return backend_; }
    void set_backend(Backend b) { backend_ = b; }

    double norm_squared() const;

   private:
    RegisterLayout layout_;
    std::vector<Amp> amps_;
    Backend backend_;
};

StateVector new_state(const RegisterLayout& layout);

void apply_hadamard_block(StateVector& state, std::string_view reg);
void apply_qft(StateVector& state, std::string_view reg, bool inverse = false);

/// Sigma |amplitude|^2 over basis states whose `reg` label satisfies `pred`.
double probability_of(const StateVector& state, std::string_view reg,
                      const std::function<bool(std::uint64_t)>& pred);

/// Marginal distribution of one register's labels.
std::vector<double> marginal(const StateVector& state, std::string_view reg);

struct Measurement {
    std::uint64_t label = 0;
    double probability = 0.0;
    StateVector collapsed;
};

/// Samples `reg` from its marginal and renormalizes onto the outcome.
Measurement measure(const StateVector& state, std::string_view reg, std::mt19937_64& rng);
Measurement measure(const StateVector& state, std::string_view reg, std::uint64_t seed);

/// Drops a register that is in a product state with the rest.
///
/// The register is accepted when the state, viewed as a (register x rest)
/// matrix, is rank one up to a residual mass of Tolerances::discard_purity;
/// otherwise EntangledDiscard is thrown. The kept state is renormalized.
StateVector discard(const StateVector& state, std::string_view reg);

/// Mass left after projecting the state onto the best product form found for `reg`.
double entanglement_residual(const StateVector& state, std::string_view reg);

}  // namespace qadsim::sim
