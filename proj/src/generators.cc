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

#include "pstherm/generators.h"

#include <cmath>
#include <stdexcept>

namespace pstherm {

namespace {

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

nlohmann::json base_params(const GenParams &gp) {
    return {{"n", gp.n}, {"k", gp.k}, {"t", gp.t}, {"alpha", gp.alpha}, {"m", gp.m}, {"rounds", gp.rounds()}};
}

std::vector<ControlTerm> draw_polarities(const std::vector<std::uint32_t> &sites, Rng &rng) {
    std::vector<ControlTerm> terms;
    terms.reserve(sites.size());
    for (auto s : sites) {
        terms.push_back({s, rng.fair_bit()});
    }
    return terms;
}

void check_common(const GenParams &gp) {
    require(gp.n > 0, "n must be positive");
    require(gp.t >= 1, "t must be at least 1");
    require(gp.m >= 1, "m must be at least 1");
    require(gp.alpha > 0.0 && std::isfinite(gp.alpha), "alpha must be positive");
}

}  // namespace

std::size_t rounds_for(double alpha, std::size_t t) {
    double product = alpha * static_cast<double>(t);
    return static_cast<std::size_t>(std::ceil(product - 1e-9 * std::max(1.0, product)));
}

std::size_t GenParams::rounds() const { return rounds_for(alpha, t); }

RmcDraw rmc(std::size_t n, std::size_t lo, std::size_t hi, std::size_t m, Rng &rng) {
    require(lo <= hi && hi < n, "rmc: window must satisfy lo <= hi < n");
    const std::size_t window = hi - lo + 1;
    require(m <= window, "rmc: m exceeds the control window size");
    RmcDraw out;
    out.controls = draw_polarities(
        rng.sample_distinct(static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi), m), rng);
    out.mask.resize(n - window);
    for (std::size_t i = 0; i < out.mask.size(); ++i) {
        out.mask[i] = rng.fair_bit();
    }
    return out;
}

PrmcDraw prmc(std::size_t n, std::size_t lo, std::size_t hi, std::size_t m, std::size_t groups, Rng &rng) {
    require(lo <= hi && hi < n, "prmc: window must satisfy lo <= hi < n");
    require(m * groups <= hi - lo + 1, "prmc: m * p exceeds the control window size");
    auto sites = rng.sample_distinct(static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi), m * groups);
    auto terms = draw_polarities(sites, rng);
    PrmcDraw out;
    out.groups.reserve(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        out.groups.emplace_back(terms.begin() + static_cast<std::ptrdiff_t>(g * m),
                                terms.begin() + static_cast<std::ptrdiff_t>((g + 1) * m));
    }
    out.apply.resize(groups);
    for (std::size_t g = 0; g < groups; ++g) {
        out.apply[g] = rng.fair_bit();
    }
    return out;
}

Circuit gate_opt_thermalizer(const GenParams &gp, Rng &rng) {
    check_common(gp);
    require(gp.k > 1 && gp.k <= gp.n, "gate-opt: requires 1 < k <= n");
    require(gp.m <= gp.k, "gate-opt: requires m <= k");
    require(gp.m <= gp.n - gp.k, "gate-opt: requires m <= n - k");
    Circuit c;
    c.n = gp.n;
    c.generator = "gate-opt";
    c.params = base_params(gp);
    c.seed = gp.seed;
    const std::size_t rounds = gp.rounds();
    auto run_stage = [&](std::size_t lo, std::size_t hi, std::size_t target_base, std::uint32_t group) {
        for (std::size_t r = 0; r < rounds; ++r) {
            auto draw = rmc(gp.n, lo, hi, gp.m, rng);
            c.rounds.push_back({c.layers.size(), group, draw.controls});
            for (std::size_t x = 0; x < draw.mask.size(); ++x) {
                if (draw.mask[x]) {
                    c.layers.push_back(
                        Layer::checked({Gate::mcx(draw.controls, static_cast<std::uint32_t>(target_base + x))}));
                }
            }
        }
    };
    run_stage(0, gp.k - 1, gp.k, 0);
    run_stage(gp.k, gp.n - 1, 0, 1);
    return c;
}

Circuit gate_opt_thermalizer(const GenParams &gp) {
    Rng rng(gp.seed, "gen", 0);
    return gate_opt_thermalizer(gp, rng);
}

std::size_t depth_opt_stage_count(std::size_t n, std::size_t k, std::size_t m) {
    require(m >= 1 && k >= m, "depth-opt: requires 1 <= m <= k");
    std::size_t stages = 0;
    for (std::size_t s = k; s < n; s += s / m) {
        ++stages;
    }
    return stages;
}

Circuit depth_opt_thermalizer(const GenParams &gp, Rng &rng) {
    check_common(gp);
    require(gp.k > 1 && gp.k < gp.n, "depth-opt: requires 1 < k < n");
    require(gp.m <= gp.k, "depth-opt: requires m <= k");
    require(gp.m * gp.k <= gp.n - gp.k, "depth-opt: closing stage needs m * k <= n - k");
    Circuit c;
    c.n = gp.n;
    c.generator = "depth-opt";
    c.params = base_params(gp);
    c.params["stages"] = depth_opt_stage_count(gp.n, gp.k, gp.m);
    c.seed = gp.seed;
    const std::size_t rounds = gp.rounds();

    // Growth stages: controls in [0, s), targets s, s+1, ... up to n - 1.
    for (std::size_t s = gp.k; s < gp.n;) {
        const std::size_t groups = s / gp.m;
        for (std::size_t r = 0; r < rounds; ++r) {
            auto draw = prmc(gp.n, 0, s - 1, gp.m, groups, rng);
            Layer layer;
            for (std::size_t x = 0; x < groups && s + x < gp.n; ++x) {
                auto target = static_cast<std::uint32_t>(s + x);
                c.rounds.push_back({c.layers.size(), target, draw.groups[x]});
                if (draw.apply[x]) {
                    layer.add(Gate::mcx(draw.groups[x], target));
                }
            }
            c.layers.push_back(std::move(layer));
        }
        s += groups;
    }

    // Closing stage: controls in [k, n), targets [0, k).
    for (std::size_t r = 0; r < rounds; ++r) {
        auto draw = prmc(gp.n, gp.k, gp.n - 1, gp.m, gp.k, rng);
        Layer layer;
        for (std::size_t x = 0; x < gp.k; ++x) {
            auto target = static_cast<std::uint32_t>(x);
            c.rounds.push_back({c.layers.size(), target, draw.groups[x]});
            if (draw.apply[x]) {
                layer.add(Gate::mcx(draw.groups[x], target));
            }
        }
        c.layers.push_back(std::move(layer));
    }
    return c;
}

Circuit depth_opt_thermalizer(const GenParams &gp) {
    Rng rng(gp.seed, "gen", 0);
    return depth_opt_thermalizer(gp, rng);
}

Circuit sign_thermalizer(std::size_t n, std::size_t p, double alpha, std::size_t t, std::size_t m, Rng &rng) {
    require(n > 0, "sign: n must be positive");
    require(p >= 1, "sign: p must be at least 1");
    require(m >= 1, "sign: m must be at least 1");
    require(t >= 1, "sign: t must be at least 1");
    require(alpha > 0.0 && std::isfinite(alpha), "sign: alpha must be positive");
    require(m * p <= n, "sign: requires m * p <= n");
    Circuit c;
    c.n = n;
    c.generator = "sign";
    const std::size_t total = rounds_for(alpha, t);
    const std::size_t layers = (total + p - 1) / p;
    c.params = {{"n", n}, {"p", p}, {"alpha", alpha}, {"t", t}, {"m", m}, {"layers", layers}};
    for (std::size_t l = 0; l < layers; ++l) {
        auto draw = prmc(n, 0, m * p - 1, m, p, rng);
        Layer layer;
        for (std::size_t x = 0; x < p; ++x) {
            const auto &group = draw.groups[x];
            c.rounds.push_back({c.layers.size(), 0, group});
            if (draw.apply[x]) {
                std::vector<ControlTerm> controls(group.begin(), group.end() - 1);
                layer.add(Gate::signed_mcz(std::move(controls), group.back().site, group.back().value));
            }
        }
        c.layers.push_back(std::move(layer));
    }
    return c;
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "gate-opt") {
        return Algorithm::kGateOpt;
    }
    if (name == "depth-opt") {
        return Algorithm::kDepthOpt;
    }
    if (name == "sign") {
        return Algorithm::kSign;
    }
    throw std::invalid_argument("unknown algorithm '" + std::string(name) + "'");
}

std::string_view algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::kGateOpt:
            return "gate-opt";
        case Algorithm::kDepthOpt:
            return "depth-opt";
        case Algorithm::kSign:
            return "sign";
    }
    return "unknown";
}

Circuit generate(Algorithm a, const GenParams &gp, Rng &rng) {
    switch (a) {
        case Algorithm::kGateOpt:
            return gate_opt_thermalizer(gp, rng);
        case Algorithm::kDepthOpt:
            return depth_opt_thermalizer(gp, rng);
        case Algorithm::kSign: {
            Circuit c = sign_thermalizer(gp.n, gp.p, gp.alpha, gp.t, gp.m, rng);
            c.seed = gp.seed;
            return c;
        }
    }
    throw std::invalid_argument("unknown algorithm");
}

Circuit generate(Algorithm a, const GenParams &gp) {
    Rng rng(gp.seed, "gen", 0);
    return generate(a, gp, rng);
}

Circuit subset_phase_circuit(Algorithm bit_algorithm, const GenParams &bits, const GenParams &signs, Rng &rng) {
    require(bit_algorithm != Algorithm::kSign, "subset_phase_circuit: bit algorithm must be gate-opt or depth-opt");
    Circuit head = generate(bit_algorithm, bits, rng);
    Circuit tail = sign_thermalizer(signs.n, signs.p, signs.alpha, signs.t, signs.m, rng);
    Circuit out = concatenate(head, tail);
    out.generator = std::string(algorithm_name(bit_algorithm)) + "+sign";
    out.params = {{"bits", head.params}, {"signs", tail.params}};
    return out;
}

}  // namespace pstherm
