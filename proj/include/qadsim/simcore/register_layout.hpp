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
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qadsim/simcore/kernels.hpp"

namespace qadsim::sim {

/// A named, contiguous run of qubits inside a basis label.
struct Register {
    std::string name;
    int width = 0;
    int offset = 0;

    Field field() const { return Field{offset, width}; }
    std::uint64_t mask() const { return low_mask(width) << offset; }
    std::uint64_t dim() const { return std::uint64_t{1} << width; }
};

/// Ordered list of named registers.
///
/// Labels are little-endian everywhere: the first register occupies the
/// lowest bits of a basis index, and inside a register qubit k carries
/// weight 2^k. A register label is therefore `(index >> offset) & (2^width - 1)`.
class RegisterLayout {
   public:
    RegisterLayout() = default;
    explicit RegisterLayout(const std::vector<std::pair<std::string, int>>& spec, int cap = -1);
    RegisterLayout(std::initializer_list<std::pair<std::string, int>> spec);

    const std::vector<Register>& registers() const { return regs_; }
    int num_qubits() const { return num_qubits_; }
    std::uint64_t dim() const { return std::uint64_t{1} << num_qubits_; }

    bool contains(std::string_view name) const;
    /// Throws LayoutError for unknown names.
    const Register& at(std::string_view name) const;

    std::uint64_t label(std::uint64_t index, std::string_view name) const;
    std::uint64_t with_label(std::uint64_t index, std::string_view name, std::uint64_t label) const;

    /// Fields of several registers, in the given order, for composite keys.
    std::vector<Field> fields(const std::vector<std::string>& names) const;

    /// Same layout minus one register; higher registers shift down.
    RegisterLayout without(std::string_view name) const;

    /// "basis label {a=1, b=0}" for error messages.
    std::string describe(std::uint64_t index) const;

    bool operator==(const RegisterLayout& other) const;

   private:
    std::vector<Register> regs_;
    int num_qubits_ = 0;
};

}  // namespace qadsim::sim
