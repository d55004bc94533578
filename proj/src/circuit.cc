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

#include "pstherm/circuit.h"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace pstherm {

Gate Gate::mcx(std::vector<ControlTerm> controls, std::uint32_t target) {
    return Gate{GateKind::kMcx, std::move(controls), target, false};
}

Gate Gate::signed_mcz(std::vector<ControlTerm> controls, std::uint32_t target, bool target_value) {
    return Gate{GateKind::kSignedMcz, std::move(controls), target, target_value};
}

std::vector<std::uint32_t> Gate::support() const {
    std::vector<std::uint32_t> sites;
    sites.reserve(controls.size() + 1);
    for (const auto &c : controls) {
        sites.push_back(c.site);
    }
    sites.push_back(target);
    return sites;
}

std::size_t ccx_cost(std::size_t controls) { return controls >= 3 ? 2 * controls - 3 : 1; }

Layer Layer::checked(std::vector<Gate> gates) {
    Layer layer;
    for (auto &g : gates) {
        layer.add(std::move(g));
    }
    return layer;
}

Layer Layer::unchecked(std::vector<Gate> gates) {
    Layer layer;
    layer.gates_ = std::move(gates);
    return layer;
}

void Layer::add(Gate g) {
    auto incoming = g.support();
    for (const auto &existing : gates_) {
        for (auto site : existing.support()) {
            if (std::find(incoming.begin(), incoming.end(), site) != incoming.end()) {
                throw std::invalid_argument("Layer::add: gate support overlaps site " + std::to_string(site + 1));
            }
        }
    }
    gates_.push_back(std::move(g));
}

std::size_t Circuit::gate_count() const {
    std::size_t total = 0;
    for (const auto &layer : layers) {
        total += layer.size();
    }
    return total;
}

std::size_t depth(const Circuit &c, DepthModel model) {
    if (model == DepthModel::kUnit) {
        return c.layers.size();
    }
    std::size_t total = 0;
    for (const auto &layer : c.layers) {
        std::size_t widest = 1;
        for (const auto &g : layer.gates()) {
            widest = std::max(widest, ccx_cost(g.effective_controls()));
        }
        total += widest;
    }
    return total;
}

std::size_t ccx_equivalent_count(const Circuit &c) {
    std::size_t total = 0;
    for (const auto &layer : c.layers) {
        for (const auto &g : layer.gates()) {
            total += ccx_cost(g.effective_controls());
        }
    }
    return total;
}

std::vector<Violation> validate(const Circuit &c) {
    std::vector<Violation> out;
    auto site_name = [](std::uint32_t s) { return std::to_string(static_cast<std::uint64_t>(s) + 1); };
    for (std::size_t li = 0; li < c.layers.size(); ++li) {
        std::unordered_set<std::uint32_t> used;
        const auto &gates = c.layers[li].gates();
        for (std::size_t gi = 0; gi < gates.size(); ++gi) {
            const Gate &g = gates[gi];
            std::unordered_set<std::uint32_t> own;
            for (const auto &ctl : g.controls) {
                if (ctl.site >= c.n) {
                    out.push_back({li, gi, "control site " + site_name(ctl.site) + " outside [1, n]"});
                }
                if (!own.insert(ctl.site).second) {
                    out.push_back({li, gi, "duplicate control site " + site_name(ctl.site)});
                }
            }
            if (g.target >= c.n) {
                out.push_back({li, gi, "target site " + site_name(g.target) + " outside [1, n]"});
            }
            if (own.contains(g.target)) {
                out.push_back({li, gi, "target site " + site_name(g.target) + " is also a control"});
            }
            own.insert(g.target);
            for (auto site : own) {
                if (!used.insert(site).second) {
                    out.push_back({li, gi, "site " + site_name(site) + " shared with another gate in the layer"});
                }
            }
        }
    }
    for (std::size_t ri = 0; ri < c.rounds.size(); ++ri) {
        const auto &round = c.rounds[ri];
        if (round.layer > c.layers.size()) {
            out.push_back({round.layer, 0, "round " + std::to_string(ri) + " refers past the last layer"});
        }
        for (const auto &ctl : round.condition) {
            if (ctl.site >= c.n) {
                out.push_back({round.layer, 0, "round " + std::to_string(ri) + " condition site outside [1, n]"});
            }
        }
    }
    return out;
}

Circuit concatenate(const Circuit &a, const Circuit &b) {
    if (a.n != b.n) {
        throw std::invalid_argument("concatenate: circuits act on different n");
    }
    Circuit out = a;
    const std::size_t offset = a.layers.size();
    std::uint32_t group_offset = 0;
    for (const auto &round : a.rounds) {
        group_offset = std::max(group_offset, round.group + 1);
    }
    out.layers.insert(out.layers.end(), b.layers.begin(), b.layers.end());
    for (auto round : b.rounds) {
        round.layer += offset;
        round.group += group_offset;
        out.rounds.push_back(std::move(round));
    }
    return out;
}

}  // namespace pstherm
