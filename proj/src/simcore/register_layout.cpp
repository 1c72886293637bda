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

#include "qadsim/simcore/register_layout.hpp"

#include <set>

#include "qadsim/config.hpp"
#include "qadsim/error.hpp"

namespace qadsim::sim {

RegisterLayout::RegisterLayout(const std::vector<std::pair<std::string, int>>& spec, int cap) {
    if (cap < 0) cap = qubit_cap();
    std::set<std::string> seen;
    int offset = 0;
    for (const auto& [name, width] : spec) {
        if (name.empty()) throw LayoutError("register name must not be empty");
        if (!seen.insert(name).second) throw LayoutError("duplicate register name '" + name + "'");
        if (width < 1) throw LayoutError("register '" + name + "' must have width >= 1");
        regs_.push_back(Register{name, width, offset});
        offset += width;
    }
    if (offset > cap) {
        throw LayoutError("layout needs " + std::to_string(offset) + " qubits, above the cap of " +
                          std::to_string(cap) + " (set QADSIM_QUBIT_CAP or factor the circuit per branch)");
    }
    num_qubits_ = offset;
}

RegisterLayout::RegisterLayout(std::initializer_list<std::pair<std::string, int>> spec)
    : RegisterLayout(std::vector<std::pair<std::string, int>>(spec)) {}

bool RegisterLayout::contains(std::string_view name) const {
    for (const auto& r : regs_) {
        if (r.name == name) return true;
    }
    return false;
}

const Register& RegisterLayout::at(std::string_view name) const {
    for (const auto& r : regs_) {
        if (r.name == name) return r;
    }
    throw LayoutError("unknown register '" + std::string(name) + "'");
}

std::uint64_t RegisterLayout::label(std::uint64_t index, std::string_view name) const {
    const auto& r = at(name);
    return (index >> r.offset) & low_mask(r.width);
}

std::uint64_t RegisterLayout::with_label(std::uint64_t index, std::string_view name, std::uint64_t label) const {
    const auto& r = at(name);
    if (label >> r.width) throw LayoutError("label does not fit register '" + r.name + "'");
    return (index & ~r.mask()) | (label << r.offset);
}

std::vector<Field> RegisterLayout::fields(const std::vector<std::string>& names) const {
    std::vector<Field> out;
    out.reserve(names.size());
    for (const auto& n : names) out.push_back(at(n).field());
    return out;
}

RegisterLayout RegisterLayout::without(std::string_view name) const {
    at(name);
    std::vector<std::pair<std::string, int>> spec;
    for (const auto& r : regs_) {
        if (r.name != name) spec.emplace_back(r.name, r.width);
    }
    return RegisterLayout(spec);
}

bool RegisterLayout::operator==(const RegisterLayout& other) const {
    if (regs_.size() != other.regs_.size()) return false;
    for (std::size_t k = 0; k < regs_.size(); ++k) {
        if (regs_[k].name != other.regs_[k].name || regs_[k].width != other.regs_[k].width) return false;
    }
    return true;
}

std::string RegisterLayout::describe(std::uint64_t index) const {
    std::string out = "basis label {";
    for (std::size_t k = 0; k < regs_.size(); ++k) {
        if (k) out += ", ";
        out += regs_[k].name + "=" + std::to_string((index >> regs_[k].offset) & low_mask(regs_[k].width));
    }
    return out + "}";
}

}  // namespace qadsim::sim
