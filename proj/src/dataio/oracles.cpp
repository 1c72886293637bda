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

#include "qadsim/dataio/oracles.hpp"

#include <sstream>

#include "qadsim/error.hpp"

namespace qadsim::data {

namespace {

/// Checks index-register widths against the padded dimensions, then delegates.
class OracleOp final : public sim::Op {
   public:
    OracleOp(std::string name, std::vector<std::pair<std::string, int>> index_widths, sim::OpPtr inner)
        : name_(std::move(name)), index_widths_(std::move(index_widths)), inner_(std::move(inner)) {}
    void apply(sim::StateVector& s, sim::Control c) const override {
        check(s);
        inner_->apply(s, c);
    }
    void apply_inverse(sim::StateVector& s, sim::Control c) const override {
        check(s);
        inner_->apply_inverse(s, c);
    }
    std::vector<std::string> registers() const override { return inner_->registers(); }
    sim::QueryCost cost() const override { return inner_->cost(); }
    std::string name() const override { return name_; }

   private:
    void check(const sim::StateVector& s) const {
        for (const auto& [reg, bits] : index_widths_) {
            const int w = s.layout().at(reg).width;
            if (w != bits) {
                throw LayoutError(name_ + ": index register '" + reg + "' has " + std::to_string(w) +
                                  " qubits but the padded dimension needs " + std::to_string(bits));
            }
        }
    }
    std::string name_;
    std::vector<std::pair<std::string, int>> index_widths_;
    sim::OpPtr inner_;
};

std::uint64_t checked_word(double v, const arith::Format& fmt, const std::string& where) {
    try {
        return arith::encode_word(v, fmt);
    } catch (const RangeError& e) {
        throw RangeError(where + ": " + e.what());
    }
}

}  // namespace

sim::OpPtr oracle_OX(const DataMatrix& data, std::string i_reg, std::string j_reg, std::string v_reg,
                     const arith::Format& fmt) {
    const int ib = data.row_bits();
    const int jb = data.col_bits();
    std::vector<std::uint64_t> words(data.padded_rows() * data.padded_cols());
    for (std::size_t i = 0; i < data.padded_rows(); ++i) {
        for (std::size_t j = 0; j < data.padded_cols(); ++j) {
            words[i | (j << ib)] =
                checked_word(data.at(i, j), fmt, "O_X entry (" + std::to_string(i) + ", " + std::to_string(j) + ")");
        }
    }
    auto inner = sim::xor_write(
        v_reg, {i_reg, j_reg},
        [words = std::move(words)](std::uint64_t key) -> std::optional<std::uint64_t> { return words[key]; },
        sim::QueryCost{1, 0, 0}, "O_X");
    return std::make_shared<OracleOp>("O_X", std::vector<std::pair<std::string, int>>{{i_reg, ib}, {j_reg, jb}},
                                      std::move(inner));
}

sim::OpPtr oracle_Ox(const QueryPoint& query, std::string j_reg, std::string v_reg, const arith::Format& fmt) {
    std::vector<std::uint64_t> words(query.padded_dim());
    for (std::size_t j = 0; j < words.size(); ++j) {
        words[j] = checked_word(query.at(j), fmt, "O_x entry " + std::to_string(j));
    }
    auto inner = sim::xor_write(
        v_reg, {j_reg},
        [words = std::move(words)](std::uint64_t key) -> std::optional<std::uint64_t> { return words[key]; },
        sim::QueryCost{0, 1, 0}, "O_x");
    return std::make_shared<OracleOp>("O_x", std::vector<std::pair<std::string, int>>{{j_reg, query.bits()}},
                                      std::move(inner));
}

void apply_oracle(sim::StateVector& state, const sim::Op& oracle, QueryLedger* ledger) {
    oracle.apply(state);
    if (ledger) ledger->charge(oracle.cost());
}

}  // namespace qadsim::data
