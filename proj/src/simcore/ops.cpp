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

#include "qadsim/simcore/ops.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "dispatch.hpp"
#include "qadsim/config.hpp"
#include "qadsim/error.hpp"

namespace qadsim::sim {

namespace {

// Tabulated ops refuse key spaces above this many bits.
constexpr int kMaxTableBits = 24;

std::string describe_index(const RegisterLayout& layout, std::uint64_t index) { return layout.describe(index); }

void check_table_bits(int bits, const std::string& op) {
    if (bits > kMaxTableBits) {
        throw LayoutError(op + ": key space of " + std::to_string(bits) + " bits is too large to tabulate");
    }
}

class HadamardOp final : public Op {
   public:
    explicit HadamardOp(std::string reg) : reg_(std::move(reg)) {}
    void apply(StateVector& s, Control c) const override {
        const auto& r = s.layout().at(reg_);
        const double h = std::numbers::sqrt2 / 2.0;
        const Mat2 m{h, h, h, -h};
        for (int b = 0; b < r.width; ++b) dispatch::apply_1q(s.backend(), s.amplitudes(), r.offset + b, m, c);
    }
    void apply_inverse(StateVector& s, Control c) const override { apply(s, c); }
    std::vector<std::string> registers() const override { return {reg_}; }
    std::string name() const override { return "H(" + reg_ + ")"; }

   private:
    std::string reg_;
};

class QftOp final : public Op {
   public:
    QftOp(std::string reg, bool inverse) : reg_(std::move(reg)), inverse_(inverse) {}
    void apply(StateVector& s, Control c) const override { run(s, c, inverse_); }
    void apply_inverse(StateVector& s, Control c) const override { run(s, c, !inverse_); }
    std::vector<std::string> registers() const override { return {reg_}; }
    std::string name() const override { return (inverse_ ? "QFT^-1(" : "QFT(") + reg_ + ")"; }

   private:
    void run(StateVector& s, Control c, bool inv) const {
        dispatch::apply_dft(s.backend(), s.amplitudes(), s.layout().at(reg_).field(), inv, c);
    }
    std::string reg_;
    bool inverse_;
};

class SingleQubitOp final : public Op {
   public:
    SingleQubitOp(std::string reg, int bit, Mat2 m, std::string name)
        : reg_(std::move(reg)), bit_(bit), m_(m), name_(std::move(name)) {}
    void apply(StateVector& s, Control c) const override { run(s, c, m_); }
    void apply_inverse(StateVector& s, Control c) const override { run(s, c, m_.adjoint()); }
    std::vector<std::string> registers() const override { return {reg_}; }
    std::string name() const override { return name_ + "(" + reg_ + "[" + std::to_string(bit_) + "])"; }

   private:
    void run(StateVector& s, Control c, const Mat2& m) const {
        const auto& r = s.layout().at(reg_);
        if (bit_ < 0 || bit_ >= r.width) throw LayoutError("qubit index out of range for register '" + reg_ + "'");
        dispatch::apply_1q(s.backend(), s.amplitudes(), r.offset + bit_, m, c);
    }
    std::string reg_;
    int bit_;
    Mat2 m_;
    std::string name_;
};

/// Per-width cache for tabulated functions; the function is pure so one table per key width suffices.
template <typename Entry>
class TableCache {
   public:
    template <typename Build>
    std::shared_ptr<const std::vector<Entry>> get(int bits, Build&& build) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = tables_.find(bits);
        if (it != tables_.end()) return it->second;
        auto t = std::make_shared<const std::vector<Entry>>(build(bits));
        tables_.emplace(bits, t);
        return t;
    }

   private:
    mutable std::mutex mu_;
    mutable std::map<int, std::shared_ptr<const std::vector<Entry>>> tables_;
};

class KeyedRotationOp final : public Op {
   public:
    KeyedRotationOp(std::string target, std::vector<std::string> keys, std::function<double(std::uint64_t)> f,
                    QueryCost cost, std::string name)
        : target_(std::move(target)), keys_(std::move(keys)), f_(std::move(f)), cost_(cost), name_(std::move(name)) {
        if (std::find(keys_.begin(), keys_.end(), target_) != keys_.end()) {
            throw LayoutError(name_ + ": target register is also a key register");
        }
    }
    void apply(StateVector& s, Control c) const override { run(s, c, false); }
    void apply_inverse(StateVector& s, Control c) const override { run(s, c, true); }
    std::vector<std::string> registers() const override {
        auto r = keys_;
        r.push_back(target_);
        return r;
    }
    QueryCost cost() const override { return cost_; }
    std::string name() const override { return name_; }

   private:
    void run(StateVector& s, Control c, bool inv) const {
        const auto& t = s.layout().at(target_);
        if (t.width != 1) throw LayoutError(name_ + ": rotation target must be a single qubit");
        auto fields = s.layout().fields(keys_);
        const int bits = total_width(fields);
        check_table_bits(bits, name_);
        const auto& table = inv ? *inverse_cache_.get(bits, [&](int b) { return build(b, true); })
                                : *forward_cache_.get(bits, [&](int b) { return build(b, false); });
        auto bad = dispatch::apply_keyed_1q(s.backend(), s.amplitudes(), t.offset, std::span<const Field>(fields),
                                            std::span<const KeyedMat2>(table), c);
        if (bad != kNoViolation) {
            std::uint64_t key = extract_key(bad, fields);
            std::ostringstream os;
            os << name_ << ": rotation amplitude " << f_(key) << " outside [-1, 1] at "
               << describe_index(s.layout(), bad);
            throw DomainError(os.str());
        }
    }

    std::vector<KeyedMat2> build(int bits, bool inv) const {
        std::vector<KeyedMat2> table(std::size_t{1} << bits);
        for (std::uint64_t k = 0; k < table.size(); ++k) {
            double v = f_(k);
            if (!std::isfinite(v) || std::abs(v) > 1.0 + Tolerances::rotation_slack) {
                table[k].valid = false;
                continue;
            }
            Mat2 m = rotation_matrix(std::clamp(v, -1.0, 1.0));
            table[k].m = inv ? m.adjoint() : m;
        }
        return table;
    }

    std::string target_;
    std::vector<std::string> keys_;
    std::function<double(std::uint64_t)> f_;
    QueryCost cost_;
    std::string name_;
    TableCache<KeyedMat2> forward_cache_;
    TableCache<KeyedMat2> inverse_cache_;
};

class XorWriteOp final : public Op {
   public:
    XorWriteOp(std::string target, std::vector<std::string> sources,
               std::function<std::optional<std::uint64_t>(std::uint64_t)> f, QueryCost cost, std::string name)
        : target_(std::move(target)),
          sources_(std::move(sources)),
          f_(std::move(f)),
          cost_(cost),
          name_(std::move(name)) {
        if (std::find(sources_.begin(), sources_.end(), target_) != sources_.end()) {
            throw LayoutError(name_ + ": target register must be disjoint from the sources");
        }
    }
    void apply(StateVector& s, Control c) const override {
        const auto& t = s.layout().at(target_);
        auto fields = s.layout().fields(sources_);
        const int bits = total_width(fields);
        check_table_bits(bits, name_);
        const int tw = t.width;
        auto table = cache_.get(bits * 64 + tw, [&](int) {
            std::vector<std::uint64_t> tab(std::size_t{1} << bits);
            for (std::uint64_t k = 0; k < tab.size(); ++k) {
                auto v = f_(k);
                tab[k] = (v && (*v >> tw) == 0) ? *v : kInvalidLabel;
            }
            return tab;
        });
        auto bad = dispatch::apply_xor_write(s.backend(), s.amplitudes(), t.field(), std::span<const Field>(fields),
                                             std::span<const std::uint64_t>(*table), c);
        if (bad != kNoViolation) {
            throw RangeError(name_ + ": result does not fit register '" + target_ + "' at " +
                             describe_index(s.layout(), bad));
        }
    }
    void apply_inverse(StateVector& s, Control c) const override { apply(s, c); }
    std::vector<std::string> registers() const override {
        auto r = sources_;
        r.push_back(target_);
        return r;
    }
    QueryCost cost() const override { return cost_; }
    std::string name() const override { return name_; }

   private:
    std::string target_;
    std::vector<std::string> sources_;
    std::function<std::optional<std::uint64_t>(std::uint64_t)> f_;
    QueryCost cost_;
    std::string name_;
    TableCache<std::uint64_t> cache_;
};

class PermutationOp final : public Op {
   public:
    PermutationOp(std::shared_ptr<const BasisTransform> t, std::string name) : t_(std::move(t)), name_(std::move(name)) {}
    void apply(StateVector& s, Control c) const override { run(s, c, t_->forward()); }
    void apply_inverse(StateVector& s, Control c) const override { run(s, c, t_->backward()); }
    std::vector<std::string> registers() const override { return t_->registers(); }
    std::string name() const override { return name_; }

   private:
    void run(StateVector& s, Control c, const std::vector<std::uint64_t>& perm) const {
        auto fields = s.layout().fields(t_->registers());
        if ((std::size_t{1} << total_width(fields)) != perm.size()) {
            throw LayoutError(name_ + ": transform was built for a different register width");
        }
        dispatch::apply_permutation(s.backend(), s.amplitudes(), std::span<const Field>(fields),
                                    std::span<const std::uint64_t>(perm), c);
    }
    std::shared_ptr<const BasisTransform> t_;
    std::string name_;
};

class PhaseFlipOp final : public Op {
   public:
    PhaseFlipOp(std::vector<std::string> regs, std::function<bool(std::uint64_t)> pred, std::string name)
        : regs_(std::move(regs)), pred_(std::move(pred)), name_(std::move(name)) {}
    void apply(StateVector& s, Control c) const override {
        auto fields = s.layout().fields(regs_);
        const int bits = total_width(fields);
        check_table_bits(bits, name_);
        auto table = cache_.get(bits, [&](int b) {
            std::vector<std::uint8_t> t(std::size_t{1} << b);
            for (std::uint64_t k = 0; k < t.size(); ++k) t[k] = pred_(k) ? 1 : 0;
            return t;
        });
        dispatch::apply_phase_flip(s.backend(), s.amplitudes(), std::span<const Field>(fields),
                                   std::span<const std::uint8_t>(*table), c);
    }
    void apply_inverse(StateVector& s, Control c) const override { apply(s, c); }
    std::vector<std::string> registers() const override { return regs_; }
    std::string name() const override { return name_; }

   private:
    std::vector<std::string> regs_;
    std::function<bool(std::uint64_t)> pred_;
    std::string name_;
    TableCache<std::uint8_t> cache_;
};

class GlobalPhaseOp final : public Op {
   public:
    explicit GlobalPhaseOp(Amp p) : p_(p) {}
    void apply(StateVector& s, Control c) const override {
        dispatch::apply_scalar(s.backend(), s.amplitudes(), p_, c);
    }
    void apply_inverse(StateVector& s, Control c) const override {
        dispatch::apply_scalar(s.backend(), s.amplitudes(), std::conj(p_), c);
    }
    std::vector<std::string> registers() const override { return {}; }
    std::string name() const override { return "phase"; }

   private:
    Amp p_;
};

class ControlledOp final : public Op {
   public:
    ControlledOp(std::string reg, std::uint64_t value, OpPtr inner)
        : reg_(std::move(reg)), value_(value), inner_(std::move(inner)) {
        auto regs = inner_->registers();
        if (std::find(regs.begin(), regs.end(), reg_) != regs.end()) {
            throw LayoutError("controlled(" + inner_->name() + "): control register '" + reg_ +
                              "' overlaps the target registers");
        }
    }
    void apply(StateVector& s, Control c) const override { inner_->apply(s, extend(s, c)); }
    void apply_inverse(StateVector& s, Control c) const override { inner_->apply_inverse(s, extend(s, c)); }
    std::vector<std::string> registers() const override {
        auto r = inner_->registers();
        r.push_back(reg_);
        return r;
    }
    QueryCost cost() const override { return inner_->cost(); }
    std::string name() const override { return "C[" + reg_ + "=" + std::to_string(value_) + "](" + inner_->name() + ")"; }

   private:
    Control extend(const StateVector& s, Control c) const {
        const auto& r = s.layout().at(reg_);
        if (value_ >> r.width) throw LayoutError("control value does not fit register '" + reg_ + "'");
        return c.with(r.mask(), value_ << r.offset);
    }
    std::string reg_;
    std::uint64_t value_;
    OpPtr inner_;
};

class InverseOp final : public Op {
   public:
    explicit InverseOp(OpPtr inner) : inner_(std::move(inner)) {}
    void apply(StateVector& s, Control c) const override { inner_->apply_inverse(s, c); }
    void apply_inverse(StateVector& s, Control c) const override { inner_->apply(s, c); }
    std::vector<std::string> registers() const override { return inner_->registers(); }
    QueryCost cost() const override { return inner_->cost(); }
    std::string name() const override { return inner_->name() + "^-1"; }

   private:
    OpPtr inner_;
};

}  // namespace

Circuit& Circuit::add(OpPtr op) {
    ops_.push_back(std::move(op));
    return *this;
}

void Circuit::apply(StateVector& state, Control ctrl) const {
    for (const auto& op : ops_) op->apply(state, ctrl);
}

void Circuit::apply_inverse(StateVector& state, Control ctrl) const {
    for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) (*it)->apply_inverse(state, ctrl);
}

std::vector<std::string> Circuit::registers() const {
    std::vector<std::string> out;
    for (const auto& op : ops_) {
        for (auto& r : op->registers()) {
            if (std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
        }
    }
    return out;
}

QueryCost Circuit::cost() const {
    QueryCost c;
    for (const auto& op : ops_) c += op->cost();
    return c;
}

BasisTransform::BasisTransform(const RegisterLayout& layout, std::vector<std::string> registers,
                               const std::function<std::uint64_t(std::uint64_t)>& map)
    : registers_(std::move(registers)) {
    auto fields = layout.fields(registers_);
    const int bits = total_width(fields);
    check_table_bits(bits, "basis transform");
    const std::uint64_t n = std::uint64_t{1} << bits;
    forward_.resize(n);
    backward_.assign(n, kInvalidLabel);
    for (std::uint64_t k = 0; k < n; ++k) {
        std::uint64_t v = map(k);
        if (v >= n) throw LayoutError("basis transform maps label " + std::to_string(k) + " outside its space");
        if (backward_[v] != kInvalidLabel) {
            throw LayoutError("basis transform is not invertible: labels " + std::to_string(backward_[v]) + " and " +
                              std::to_string(k) + " both map to " + std::to_string(v));
        }
        forward_[k] = v;
        backward_[v] = k;
    }
}

void apply_basis_transform(StateVector& state, const BasisTransform& transform) {
    auto fields = state.layout().fields(transform.registers());
    if ((std::size_t{1} << total_width(fields)) != transform.forward().size()) {
        throw LayoutError("basis transform was built for a different register width");
    }
    dispatch::apply_permutation(state.backend(), state.amplitudes(), std::span<const Field>(fields),
                                std::span<const std::uint64_t>(transform.forward()), Control{});
}

void apply_controlled(StateVector& state, const std::string& control_reg, std::uint64_t value, const Op& inner) {
    auto regs = inner.registers();
    if (std::find(regs.begin(), regs.end(), control_reg) != regs.end()) {
        throw LayoutError("control register '" + control_reg + "' overlaps the target registers of " + inner.name());
    }
    const auto& r = state.layout().at(control_reg);
    if (value >> r.width) throw LayoutError("control value does not fit register '" + control_reg + "'");
    inner.apply(state, Control{r.mask(), value << r.offset});
}

OpPtr hadamard(std::string reg) { return std::make_shared<HadamardOp>(std::move(reg)); }
OpPtr qft(std::string reg, bool inverse) { return std::make_shared<QftOp>(std::move(reg), inverse); }
OpPtr single_qubit(std::string reg, int bit, Mat2 m, std::string name) {
    return std::make_shared<SingleQubitOp>(std::move(reg), bit, m, std::move(name));
}
OpPtr pauli_x(std::string reg, int bit) { return single_qubit(std::move(reg), bit, Mat2{0.0, 1.0, 1.0, 0.0}, "X"); }

OpPtr keyed_rotation(std::string target, std::vector<std::string> key_regs, std::function<double(std::uint64_t)> f,
                     QueryCost cost, std::string name) {
    return std::make_shared<KeyedRotationOp>(std::move(target), std::move(key_regs), std::move(f), cost,
                                             std::move(name));
}

OpPtr xor_write(std::string target, std::vector<std::string> sources,
                std::function<std::optional<std::uint64_t>(std::uint64_t)> f, QueryCost cost, std::string name) {
    return std::make_shared<XorWriteOp>(std::move(target), std::move(sources), std::move(f), cost, std::move(name));
}

OpPtr permutation(std::shared_ptr<const BasisTransform> transform, std::string name) {
    return std::make_shared<PermutationOp>(std::move(transform), std::move(name));
}

OpPtr phase_flip(std::vector<std::string> regs, std::function<bool(std::uint64_t)> pred, std::string name) {
    return std::make_shared<PhaseFlipOp>(std::move(regs), std::move(pred), std::move(name));
}

OpPtr global_phase(Amp phase) { return std::make_shared<GlobalPhaseOp>(phase); }

OpPtr controlled(std::string control_reg, std::uint64_t value, OpPtr inner) {
    return std::make_shared<ControlledOp>(std::move(control_reg), value, std::move(inner));
}

OpPtr inverse(OpPtr inner) { return std::make_shared<InverseOp>(std::move(inner)); }

Mat2 rotation_matrix(double f) {
    const double s = std::sqrt(std::max(0.0, 1.0 - f * f));
    return Mat2{f, -s, s, f};
}

}  // namespace qadsim::sim
