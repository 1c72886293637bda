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

#include "qadsim/dataio/ledger.hpp"

namespace qadsim::data {

void QueryLedger::charge(const sim::QueryCost& cost, std::uint64_t times) {
    data_oracle_.fetch_add(cost.data_oracle * times, std::memory_order_relaxed);
    query_oracle_.fetch_add(cost.query_oracle * times, std::memory_order_relaxed);
    arithmetic_.fetch_add(cost.arithmetic * times, std::memory_order_relaxed);
}

void QueryLedger::add_grover(std::uint64_t n) { grover_.fetch_add(n, std::memory_order_relaxed); }

LedgerSnapshot QueryLedger::snapshot() const {
    return LedgerSnapshot{data_oracle_.load(), query_oracle_.load(), grover_.load(), arithmetic_.load()};
}

void QueryLedger::reset() {
    data_oracle_ = 0;
    query_oracle_ = 0;
    grover_ = 0;
    arithmetic_ = 0;
}

}  // namespace qadsim::data
