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

#include "qadsim/config.hpp"

#include <cstdlib>
#include <string>

namespace qadsim {

int qubit_cap() {
    if (const char* env = std::getenv("QADSIM_QUBIT_CAP")) {
        try {
            int v = std::stoi(env);
            if (v > 0 && v <= 40) return v;
        } catch (const std::exception&) {
        }
    }
    return kDefaultQubitCap;
}

}  // namespace qadsim
