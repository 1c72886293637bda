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

// O_X : |i>|j>|v> -> |i>|j>|v xor x_j^i>  and  O_x : |j>|v> -> |j>|v xor x0_j>.
//
// Values are written as fixed-point words. Padded indices read 0.

#pragma once

#include <string>

#include "qadsim/arith/fixed_point.hpp"
#include "qadsim/dataio/data.hpp"
#include "qadsim/dataio/ledger.hpp"
#include "qadsim/simcore/ops.hpp"

namespace qadsim::data {

/// Throws RangeError at construction if an entry does not fit `fmt`.
/// Applying it to a layout whose index registers do not match the padded
/// dimensions throws LayoutError. Each application costs one O_X query.
sim::OpPtr oracle_OX(const DataMatrix& data, std::string i_reg, std::string j_reg, std::string v_reg,
                     const arith::Format& fmt);
sim::OpPtr oracle_Ox(const QueryPoint& query, std::string j_reg, std::string v_reg, const arith::Format& fmt);

/// Applies an oracle and charges the ledger.
void apply_oracle(sim::StateVector& state, const sim::Op& oracle, QueryLedger* ledger);

}  // namespace qadsim::data
