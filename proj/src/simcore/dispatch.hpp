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

#include "qadsim/simcore/kernels.hpp"

namespace qadsim::sim::dispatch {

#define QADSIM_DISPATCH(fn)                                           \
    template <typename... Args>                                       \
    auto fn(Backend b, Args&&... args) {                              \
        if (b == Backend::serial) return serial::fn(std::forward<Args>(args)...); \
        return parallel::fn(std::forward<Args>(args)...);             \
    }

QADSIM_DISPATCH(apply_1q)
QADSIM_DISPATCH(apply_keyed_1q)
QADSIM_DISPATCH(apply_xor_write)
QADSIM_DISPATCH(apply_permutation)
QADSIM_DISPATCH(apply_phase_flip)
QADSIM_DISPATCH(apply_scalar)
QADSIM_DISPATCH(apply_dft)
QADSIM_DISPATCH(norm_squared)
QADSIM_DISPATCH(marginal)

#undef QADSIM_DISPATCH

}  // namespace qadsim::sim::dispatch
