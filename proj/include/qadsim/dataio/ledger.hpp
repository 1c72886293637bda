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

// Unit-cost query accounting: stands in for oracle and Grover runtime.

#pragma once

#include <atomic>
#include <cstdint>

#include "qadsim/simcore/ops.hpp"

namespace qadsim::data {

struct LedgerSnapshot {
    std::uint64_t data_oracle = 0;   // O_X
    std::uint64_t query_oracle = 0;  // O_x
    std::uint64_t grover = 0;
    std::uint64_t arithmetic = 0;

    bool operator==(const LedgerSnapshot&) const = default;
};

/// Counters are atomic so independent branches may charge concurrently.
class QueryLedger {
   public:
    void charge(const sim::QueryCost& cost, std::uint64_t times = 1);
    void add_grover(std::uint64_t n);
    LedgerSnapshot snapshot() const;
    void reset();

   private:
    std::atomic<std::uint64_t> data_oracle_{0};
    std::atomic<std::uint64_t> query_oracle_{0};
    std::atomic<std::uint64_t> grover_{0};
    std::atomic<std::uint64_t> arithmetic_{0};
};

}  // namespace qadsim::data
