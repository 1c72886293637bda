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

#include <cstddef>

namespace qadsim {

/// Numeric tolerances and capacity limits shared by every module.
///
/// Everything that compares floating-point values against a threshold reads
/// from here so the whole toolkit can be tightened or relaxed in one place.
struct Tolerances {
    /// Allowed drift of the squared norm after any state operation.
    static constexpr double norm = 1e-10;
    /// Component-wise agreement for gate/inverse round trips.
    static constexpr double unitarity = 1e-12;
    /// Residual mass allowed when discarding a register as unentangled.
    static constexpr double discard_purity = 1e-9;
    /// Below this, an amplitude is treated as exactly zero (measurement, encoding classifier).
    static constexpr double zero_amplitude = 1e-14;
    /// Slack allowed on controlled-rotation amplitudes before |f| > 1 is an error.
    static constexpr double rotation_slack = 1e-12;
    /// Variance floor used by the epsilon-floor degenerate-data policy.
    static constexpr double sigma_min = 1e-6;
};

/// Default qubit cap for dense statevectors; QADSIM_QUBIT_CAP overrides it.
inline constexpr int kDefaultQubitCap = 26;

/// Largest phase register accepted by circuit-mode amplitude estimation.
inline constexpr int kMaxCircuitPhaseBits = 14;

/// Largest grid resolution accepted by ideal-mode amplitude estimation.
inline constexpr int kMaxIdealPhaseBits = 40;

/// Returns the active qubit cap (environment override or the default).
int qubit_cap();

}  // namespace qadsim
