// Copyright 2026 The pstherm Authors
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

#include "json.hpp"
#include "pstherm/circuit.h"

namespace pstherm {

class CircuitFormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Circuit file layout (positions 1-based):
///
///   {"n": 8, "seed": 1, "generator": "gate-opt", "params": {...},
///    "layers": [[{"kind": "mcx", "controls": [{"pos": 2, "val": 1}], "target": 5}, ...], ...],
///    "rounds": [{"layer": 0, "group": 0, "condition": [{"pos": 2, "val": 1}]}, ...]}
///
/// SignedMCZ gates use "kind": "smcz" and carry "target_val". "rounds" is optional.
nlohmann::json circuit_to_json(const Circuit &c);

/// Throws CircuitFormatError on malformed input. Layers are loaded unchecked;
/// run validate() for structural diagnostics.
Circuit circuit_from_json(const nlohmann::json &j);

/// Compact single-line dump with sorted keys, followed by a newline.
std::string dump_circuit(const Circuit &c);

}  // namespace pstherm
