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

#include "qadsim/dataio/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "qadsim/error.hpp"

namespace qadsim::data {

int index_bits(std::size_t n) {
    int b = 1;
    while ((std::size_t{1} << b) < n) ++b;
    return b;
}

DataMatrix DataMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty()) throw DomainError("data matrix is empty");
    DataMatrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.front().size();
    m.values_.reserve(m.rows_ * m.cols_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw DomainError("row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                              " entries, expected " + std::to_string(m.cols_));
        }
        for (double v : rows[i]) {
            if (!std::isfinite(v)) throw DomainError("non-finite entry in row " + std::to_string(i + 1));
            m.values_.push_back(v);
        }
    }
    m.row_bits_ = index_bits(m.rows_);
    m.col_bits_ = index_bits(m.cols_);
    return m;
}

std::vector<double> DataMatrix::row(std::size_t i) const {
    return std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                               values_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

std::vector<double> DataMatrix::column(std::size_t j) const {
    std::vector<double> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = values_[i * cols_ + j];
    return c;
}

std::vector<std::vector<double>> DataMatrix::to_rows() const {
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
}

QueryPoint QueryPoint::from_values(std::vector<double> values) {
    if (values.empty()) throw DomainError("query point is empty");
    for (double v : values)
        if (!std::isfinite(v)) throw DomainError("non-finite entry in query point");
    QueryPoint q;
    q.values_ = std::move(values);
    return q;
}

void check_compatible(const DataMatrix& data, const QueryPoint& query) {
    if (data.cols() != query.dim()) {
        throw DomainError("query has " + std::to_string(query.dim()) + " features but the data has " +
                          std::to_string(data.cols()));
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

DataMatrix parse_csv(std::istream& in, bool has_header, const std::string& source) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool header_pending = has_header;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        if (header_pending) {
            header_pending = false;
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            const std::string t = trim(cell);
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
            if (t.empty() || ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
                throw ParseError(source + ": row " + std::to_string(rows.size() + 1) + ", column " +
                                 std::to_string(col) + " (line " + std::to_string(line_no) + "): '" + t +
                                 "' is not a number");
            }
            row.push_back(v);
        }
        if (!line.empty() && line.back() == ',') {
            throw ParseError(source + ": row " + std::to_string(rows.size() + 1) + ", column " +
                             std::to_string(col + 1) + " (line " + std::to_string(line_no) + "): empty cell");
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw ParseError(source + ": row " + std::to_string(rows.size() + 1) + " (line " +
                             std::to_string(line_no) + ") has " + std::to_string(row.size()) +
                             " columns, expected " + std::to_string(rows.front().size()));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(source + ": no data rows");
    return DataMatrix::from_rows(rows);
}

DataMatrix load_csv(const std::string& path, bool has_header) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    return parse_csv(in, has_header, path);
}

QueryPoint load_query_csv(const std::string& path, bool has_header) {
    auto m = load_csv(path, has_header);
    if (m.rows() != 1) {
        throw ParseError(path + ": query file must hold exactly one row, found " + std::to_string(m.rows()));
    }
    return QueryPoint::from_values(m.row(0));
}

namespace {

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

}  // namespace

Instance random_instance(std::uint64_t seed, const InstanceSpec& spec) {
    std::mt19937_64 rng(seed);
    for (;;) {
        const int m = uniform_int(rng, spec.min_rows, spec.max_rows);
        const int d = uniform_int(rng, spec.min_cols, spec.max_cols);
        std::vector<std::vector<double>> rows(m, std::vector<double>(d));
        for (auto& r : rows)
            for (auto& v : r) v = spec.lo + (spec.hi - spec.lo) * uniform01(rng);
        std::vector<double> q(d);
        for (auto& v : q) v = spec.lo + (spec.hi - spec.lo) * uniform01(rng);

        bool ok = true;
        for (int j = 0; j < d && ok; ++j) {
            double mu = 0.0, var = 0.0;
            for (int i = 0; i < m; ++i) mu += rows[i][j];
            mu /= m;
            for (int i = 0; i < m; ++i) var += (rows[i][j] - mu) * (rows[i][j] - mu);
            ok = var / m >= spec.min_variance;
        }
        if (ok) return Instance{DataMatrix::from_rows(rows), QueryPoint::from_values(q)};
    }
}

}  // namespace qadsim::data
