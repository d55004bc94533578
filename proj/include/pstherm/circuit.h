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

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace pstherm {

/// A polarized control: the gate fires only if bit `site` equals `value`.
/// Sites are 0-based in memory; circuit files use 1-based positions.
struct ControlTerm {
    std::uint32_t site = 0;
    bool value = true;

    bool operator==(const ControlTerm &) const = default;
};

enum class GateKind { kMcx, kSignedMcz };

/// Multi-controlled X, or a signed multi-controlled Z whose sign flip also
/// requires bit `target` to equal `target_value`.
struct Gate {
    GateKind kind = GateKind::kMcx;
    std::vector<ControlTerm> controls;
    std::uint32_t target = 0;
    bool target_value = false;

    static Gate mcx(std::vector<ControlTerm> controls, std::uint32_t target);
    static Gate signed_mcz(std::vector<ControlTerm> controls, std::uint32_t target, bool target_value);

    /// Sites touched by the gate: controls followed by the target.
    std::vector<std::uint32_t> support() const;

    /// Controls counted by the cost model. For SignedMCZ this is the m-1
    /// explicit controls: the target condition is the Z-type site itself.
    std::size_t effective_controls() const { return controls.size(); }

    bool operator==(const Gate &) const = default;
};

/// CCX equivalents of an m-control gate: max(1, 2m - 3). The m >= 3 case is
/// the ancilla ladder with m - 2 clean ancillas.
std::size_t ccx_cost(std::size_t controls);

/// Gates that may execute simultaneously. `checked` rejects overlapping
/// support; `unchecked` exists for loading files that `validate` then inspects.
class Layer {
  public:
    Layer() = default;
    static Layer checked(std::vector<Gate> gates);
    static Layer unchecked(std::vector<Gate> gates);

    /// Throws std::invalid_argument if g overlaps a gate already in the layer.
    void add(Gate g);

    const std::vector<Gate> &gates() const { return gates_; }
    bool empty() const { return gates_.empty(); }
    std::size_t size() const { return gates_.size(); }

    bool operator==(const Layer &) const = default;

  private:
    std::vector<Gate> gates_;
};

/// Control condition evaluated against the state right before `layer` runs.
/// Rounds sharing a `group` form one condition matrix (one column each).
struct ConditionRound {
    std::size_t layer = 0;
    std::uint32_t group = 0;
    std::vector<ControlTerm> condition;

    bool operator==(const ConditionRound &) const = default;
};

struct Circuit {
    std::size_t n = 0;
    std::vector<Layer> layers;
    std::string generator;
    nlohmann::json params = nlohmann::json::object();
    std::uint64_t seed = 0;
    /// Random draws made by the generator, including ones that emitted no
    /// gate. Needed to rebuild condition matrices; may be empty.
    std::vector<ConditionRound> rounds;

    std::size_t gate_count() const;
    bool operator==(const Circuit &) const = default;
};

enum class DepthModel { kUnit, kDecomposed };

/// Unit: number of layers. Decomposed: sum over layers of the largest
/// ccx_cost in the layer. An empty layer still takes one time step, so the
/// decomposed depth is never below the unit depth.
std::size_t depth(const Circuit &c, DepthModel model);
std::size_t ccx_equivalent_count(const Circuit &c);

struct Violation {
    std::size_t layer = 0;
    std::size_t gate = 0;
    std::string message;
};

/// Structural problems: out-of-range sites, duplicate control positions,
/// target inside controls, and overlapping support inside a layer.
std::vector<Violation> validate(const Circuit &c);

/// Appends b's layers and rounds after a's; b's round groups are shifted past
/// a's. Both must have the same n. Metadata comes from a.
Circuit concatenate(const Circuit &a, const Circuit &b);

}  // namespace pstherm
