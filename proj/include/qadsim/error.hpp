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

#include <stdexcept>
#include <string>
#include <utility>

namespace qadsim {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Invalid register layout, unknown register, overlapping registers, qubit cap.
class LayoutError : public Error {
   public:
    using Error::Error;
};

/// A value does not fit its fixed-point format.
class RangeError : public Error {
   public:
    using Error::Error;
};

/// A function was evaluated outside its domain (ln of a nonpositive value, |f| > 1 rotation).
class DomainError : public Error {
   public:
    using Error::Error;
};

/// Zero variance or zero normalizing constant under the `error` policy.
class DegenerateDataError : public Error {
   public:
    using Error::Error;
};

/// An estimate pushed a rotation amplitude past a normalizing constant (T, D, C', C'', E).
class ConstantViolation : public Error {
   public:
    explicit ConstantViolation(std::string constant, const std::string& what)
        : Error(what), constant_(std::move(constant)) {}
    const std::string& constant() const { return constant_; }

   private:
    std::string constant_;
};

/// A register that still carries entanglement was asked to be discarded.
class EntangledDiscard : public Error {
   public:
    using Error::Error;
};

/// Malformed CSV input.
class ParseError : public Error {
   public:
    using Error::Error;
};

/// Invalid run configuration (conflicting flags, missing seed, unknown suite).
class ConfigError : public Error {
   public:
    using Error::Error;
};

}  // namespace qadsim
