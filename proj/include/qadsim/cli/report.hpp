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

// JSON forms of the pipeline reports. Field names are fixed by the schemas in
// schemas/; bump kSchemaVersion when either side changes.

#pragma once

#include <string>

#include "json.hpp"
#include "qadsim/adde/pipeline.hpp"
#include "qadsim/adkpca/adkpca.hpp"
#include "qadsim/ae/amplitude_estimation.hpp"
#include "qadsim/flawlab/flawlab.hpp"

namespace qadsim::cli {

using nlohmann::json;
using nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0.0";

ordered_json to_json(const ae::AEResult& r);
ordered_json to_json(const data::LedgerSnapshot& l);
ordered_json to_json(const arith::Format& f);

ordered_json adde_json(const adde::ADDEReport& r);
ordered_json adkpca_json(const adkpca::ADKPCAReport& r);
ordered_json flaws_json(const flawlab::FlawReport& r);

/// {schema_version, generated_at, command} followed by `body`.
ordered_json envelope(const std::string& command, const ordered_json& body);

/// UTC, second resolution.
std::string timestamp_now();

}  // namespace qadsim::cli
