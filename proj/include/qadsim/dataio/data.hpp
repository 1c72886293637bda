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

// Training matrix X (M x d) and query point x0, zero-padded to powers of two.
//
// Padded rows/columns hold 0 and are flagged in a mask. Classical statistics
// always use the unpadded entries; quantum pipelines run on the padded index
// registers and rescale by padded/true sizes.

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

namespace qadsim::data {

/// Bits needed to index n items (at least one qubit).
int index_bits(std::size_t n);

class DataMatrix {
   public:
    DataMatrix() = default;
    /// Throws DomainError for empty, ragged or non-finite input.
    static DataMatrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    int row_bits() const { return row_bits_; }
    int col_bits() const { return col_bits_; }
    std::size_t padded_rows() const { return std::size_t{1} << row_bits_; }
    std::size_t padded_cols() const { return std::size_t{1} << col_bits_; }

    /// Padded access; masked entries read 0.
    double at(std::size_t i, std::size_t j) const {
        return (i < rows_ && j < cols_) ? values_[i * cols_ + j] : 0.0;
    }
    bool row_valid(std::size_t i) const { return i < rows_; }
    bool col_valid(std::size_t j) const { return j < cols_; }

    std::vector<double> row(std::size_t i) const;
    std::vector<double> column(std::size_t j) const;
    std::vector<std::vector<double>> to_rows() const;

   private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    int row_bits_ = 1;
    int col_bits_ = 1;
    std::vector<double> values_;
};

class QueryPoint {
   public:
    QueryPoint() = default;
    static QueryPoint from_values(std::vector<double> values);

    std::size_t dim() const { return values_.size(); }
    int bits() const { return index_bits(values_.size()); }
    std::size_t padded_dim() const { return std::size_t{1} << bits(); }
    double at(std::size_t j) const { return j < values_.size() ? values_[j] : 0.0; }
    const std::vector<double>& values() const { return values_; }

   private:
    std::vector<double> values_;
};

/// Throws DomainError unless the query has the data's dimension.
void check_compatible(const DataMatrix& data, const QueryPoint& query);

/// Comma-separated decimal numbers, one point per row. ParseError names row and column.
DataMatrix parse_csv(std::istream& in, bool has_header, const std::string& source = "<input>");
DataMatrix load_csv(const std::string& path, bool has_header);
/// A CSV holding exactly one row.
QueryPoint load_query_csv(const std::string& path, bool has_header);

struct Instance {
    DataMatrix data;
    QueryPoint query;
};

struct InstanceSpec {
    int min_rows = 2;
    int max_rows = 8;
    int min_cols = 1;
    int max_cols = 4;
    double lo = -2.0;
    double hi = 2.0;
    /// Instances whose smallest per-feature variance falls below this are redrawn.
    double min_variance = 0.05;
};

/// Deterministic for a given seed on every platform (no <random> distributions).
Instance random_instance(std::uint64_t seed, const InstanceSpec& spec = {});

}  // namespace qadsim::data
