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

#include "pstherm/circuit_io.h"

namespace pstherm {

using nlohmann::json;

namespace {

json terms_to_json(const std::vector<ControlTerm> &terms) {
    json arr = json::array();
    for (const auto &t : terms) {
        arr.push_back({{"pos", static_cast<std::uint64_t>(t.site) + 1}, {"val", t.value ? 1 : 0}});
    }
    return arr;
}

std::uint32_t read_position(const json &j, const char *field) {
    if (!j.contains(field) || !j.at(field).is_number_integer()) {
        throw CircuitFormatError(std::string("missing integer field '") + field + "'");
    }
    auto pos = j.at(field).get<std::int64_t>();
    if (pos < 1 || pos > static_cast<std::int64_t>(UINT32_MAX)) {
        throw CircuitFormatError(std::string("field '") + field + "' must be a 1-based position");
    }
    return static_cast<std::uint32_t>(pos - 1);
}

bool read_bit(const json &j, const char *field) {
    if (!j.contains(field) || !j.at(field).is_number_integer()) {
        throw CircuitFormatError(std::string("missing bit field '") + field + "'");
    }
    auto v = j.at(field).get<std::int64_t>();
    if (v != 0 && v != 1) {
        throw CircuitFormatError(std::string("field '") + field + "' must be 0 or 1");
    }
    return v == 1;
}

std::vector<ControlTerm> terms_from_json(const json &arr) {
    if (!arr.is_array()) {
        throw CircuitFormatError("control list must be an array");
    }
    std::vector<ControlTerm> out;
    out.reserve(arr.size());
    for (const auto &t : arr) {
        out.push_back({read_position(t, "pos"), read_bit(t, "val")});
    }
    return out;
}

}  // namespace

json circuit_to_json(const Circuit &c) {
    json layers = json::array();
    for (const auto &layer : c.layers) {
        json gates = json::array();
        for (const auto &g : layer.gates()) {
            json jg = {{"kind", g.kind == GateKind::kMcx ? "mcx" : "smcz"},
                       {"controls", terms_to_json(g.controls)},
                       {"target", static_cast<std::uint64_t>(g.target) + 1}};
            if (g.kind == GateKind::kSignedMcz) {
                jg["target_val"] = g.target_value ? 1 : 0;
            }
            gates.push_back(std::move(jg));
        }
        layers.push_back(std::move(gates));
    }
    json out = {{"n", c.n}, {"seed", c.seed}, {"generator", c.generator}, {"params", c.params}, {"layers", layers}};
    if (!c.rounds.empty()) {
        json rounds = json::array();
        for (const auto &r : c.rounds) {
            rounds.push_back({{"layer", r.layer}, {"group", r.group}, {"condition", terms_to_json(r.condition)}});
        }
        out["rounds"] = std::move(rounds);
    }
    return out;
}

Circuit circuit_from_json(const json &j) {
    if (!j.is_object()) {
        throw CircuitFormatError("circuit must be a JSON object");
    }
    Circuit c;
    try {
        c.n = j.at("n").get<std::size_t>();
        c.seed = j.value("seed", std::uint64_t{0});
        c.generator = j.value("generator", std::string{});
        c.params = j.value("params", json::object());
        for (const auto &jl : j.at("layers")) {
            std::vector<Gate> gates;
            for (const auto &jg : jl) {
                auto kind = jg.at("kind").get<std::string>();
                auto controls = terms_from_json(jg.at("controls"));
                auto target = read_position(jg, "target");
                if (kind == "mcx") {
                    gates.push_back(Gate::mcx(std::move(controls), target));
                } else if (kind == "smcz") {
                    gates.push_back(Gate::signed_mcz(std::move(controls), target, read_bit(jg, "target_val")));
                } else {
                    throw CircuitFormatError("unknown gate kind '" + kind + "'");
                }
            }
            c.layers.push_back(Layer::unchecked(std::move(gates)));
        }
        if (j.contains("rounds")) {
            for (const auto &jr : j.at("rounds")) {
                c.rounds.push_back({jr.at("layer").get<std::size_t>(), jr.at("group").get<std::uint32_t>(),
                                    terms_from_json(jr.at("condition"))});
            }
        }
    } catch (const json::exception &e) {
        throw CircuitFormatError(std::string("malformed circuit: ") + e.what());
    }
    return c;
}

std::string dump_circuit(const Circuit &c) { return circuit_to_json(c).dump() + "\n"; }

}  // namespace pstherm
