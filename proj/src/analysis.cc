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

#include "pstherm/analysis.h"

#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "pstherm/circuit.h"
#include "pstherm/rank_bounds.h"

namespace pstherm {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

std::vector<std::string> split(std::string_view text, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = text.find(sep, start);
        out.emplace_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::size_t parse_count(const std::string &s) {
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &used);
    } catch (const std::exception &) {
        throw std::invalid_argument("grid: expected an integer, got '" + s + "'");
    }
    if (used != s.size()) {
        throw std::invalid_argument("grid: expected an integer, got '" + s + "'");
    }
    return static_cast<std::size_t>(v);
}

std::vector<std::size_t> parse_list(const std::string &s) {
    std::vector<std::size_t> out;
    if (auto dots = s.find(".."); dots != std::string::npos) {
        std::size_t lo = parse_count(s.substr(0, dots));
        std::size_t hi = parse_count(s.substr(dots + 2));
        if (lo == 0 || hi < lo) {
            throw std::invalid_argument("grid: bad range '" + s + "'");
        }
        for (std::size_t v = lo; v <= hi; v *= 2) {
            out.push_back(v);
        }
        return out;
    }
    for (const auto &item : split(s, ',')) {
        out.push_back(parse_count(item));
    }
    return out;
}

}  // namespace

std::size_t ceil_log2(std::size_t x) {
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < x) {
        ++bits;
    }
    return bits;
}

double theorem1_pt(double alpha, std::size_t t, double epsilon) {
    return full_rank_probability_bound({0.25, t, rounds_for(alpha, t), epsilon});
}

double theorem2_pt(double alpha, std::size_t t, double epsilon) {
    if (t < 2) {
        throw std::invalid_argument("theorem2_pt: t must be at least 2");
    }
    const double td = static_cast<double>(t);
    const double p = 1.0 / td;
    const double q_tilde = 1.0 - (1.0 + epsilon) * p;
    const double s = std::pow(p * (1.0 - p), q_tilde);
    const double leading = (td - 1.0) * std::exp(-alpha) * (std::numbers::e - 1.0);
    const double log_ratio = ((1.0 + epsilon) * alpha - 1.0) * std::log(td - 1.0) - alpha * td * std::log(td);
    const double dependent = std::exp(log_ratio) * s / ((1.0 - s) * (1.0 - s));
    return std::exp(-leading - dependent);
}

double depth_template(std::size_t n, std::size_t t, double alpha) {
    const double lt = std::log2(static_cast<double>(t));
    return alpha * static_cast<double>(t) * std::log(static_cast<double>(n)) * lt * lt;
}

PredictedCost predicted_cost(Algorithm a, const GenParams &gp) {
    PredictedCost out;
    const double rounds = static_cast<double>(gp.rounds());
    switch (a) {
        case Algorithm::kGateOpt: {
            out.gates = rounds * static_cast<double>(gp.n) / 2.0;
            out.unit_depth = out.gates;
            out.decomposed_depth = out.gates * static_cast<double>(ccx_cost(gp.m));
            out.ccx_equivalents = out.decomposed_depth;
            break;
        }
        case Algorithm::kDepthOpt: {
            const double cost = static_cast<double>(ccx_cost(gp.m));
            auto add_layers = [&](std::size_t live_groups) {
                const double g = static_cast<double>(live_groups);
                out.gates += rounds * g / 2.0;
                const double idle = std::pow(0.5, g);
                out.decomposed_depth += rounds * (cost * (1.0 - idle) + idle);
            };
            for (std::size_t s = gp.k; s < gp.n; s += s / gp.m) {
                add_layers(std::min(s / gp.m, gp.n - s));
                ++out.stages;
            }
            add_layers(gp.k);
            out.unit_depth = static_cast<double>(out.stages + 1) * rounds;
            out.ccx_equivalents = out.gates * cost;
            out.stages_asymptotic = std::log(static_cast<double>(gp.n) / static_cast<double>(gp.k)) /
                                    std::log1p(1.0 / static_cast<double>(gp.m));
            break;
        }
        case Algorithm::kSign: {
            const double layers = std::ceil(rounds / static_cast<double>(gp.p));
            const double g = static_cast<double>(gp.p);
            const double cost = static_cast<double>(ccx_cost(gp.m - 1));
            out.gates = layers * g / 2.0;
            out.unit_depth = layers;
            const double idle = std::pow(0.5, g);
            out.decomposed_depth = layers * (cost * (1.0 - idle) + idle);
            out.ccx_equivalents = out.gates * cost;
            break;
        }
    }
    return out;
}

Theorem parse_theorem(std::string_view name) {
    static const std::map<std::string_view, Theorem> names = {
        {"bits-few", Theorem::kBitsFewCopies},   {"bits-many", Theorem::kBitsManyCopies},
        {"depth-few", Theorem::kDepthFewCopies}, {"depth-many", Theorem::kDepthManyCopies},
        {"signs-few", Theorem::kSignsFewCopies}, {"signs-many", Theorem::kSignsManyCopies},
    };
    auto it = names.find(name);
    if (it == names.end()) {
        throw std::invalid_argument("unknown theorem '" + std::string(name) + "'");
    }
    return it->second;
}

std::string_view theorem_name(Theorem th) {
    switch (th) {
        case Theorem::kBitsFewCopies:
            return "bits-few";
        case Theorem::kBitsManyCopies:
            return "bits-many";
        case Theorem::kDepthFewCopies:
            return "depth-few";
        case Theorem::kDepthManyCopies:
            return "depth-many";
        case Theorem::kSignsFewCopies:
            return "signs-few";
        case Theorem::kSignsManyCopies:
            return "signs-many";
    }
    return "unknown";
}

std::vector<Premise> premise_check(Theorem th, const GenParams &gp, double poly_degree) {
    const double n = static_cast<double>(gp.n);
    const double k = static_cast<double>(gp.k);
    const double t = static_cast<double>(gp.t);
    const double at = static_cast<double>(gp.rounds());
    const double log_scale = 2.0 * std::log(n);
    std::vector<Premise> out;
    auto check = [&](std::string name, bool ok, std::string detail) {
        out.push_back({std::move(name), ok, std::move(detail)});
    };
    auto omega_log = [&](const std::string &what, double v) {
        check(what + " = omega(log n)", v >= log_scale, what + " = " + fmt(v) + ", proxy 2 ln n = " + fmt(log_scale));
    };
    auto poly_t = [&] {
        check("t = poly(n)", t <= std::pow(n, poly_degree),
              "t = " + fmt(t) + ", proxy n^" + fmt(poly_degree) + " = " + fmt(std::pow(n, poly_degree)));
    };
    switch (th) {
        case Theorem::kBitsFewCopies:
        case Theorem::kDepthFewCopies:
            omega_log("k", k);
            check("t <= k/2", t <= k / 2.0, "t = " + fmt(t) + ", k/2 = " + fmt(k / 2.0));
            omega_log("alpha t", at);
            check("alpha t <= k/2", at <= k / 2.0, "alpha t = " + fmt(at) + ", k/2 = " + fmt(k / 2.0));
            check("m = 2", gp.m == 2, "m = " + std::to_string(gp.m));
            if (th == Theorem::kBitsFewCopies) {
                check("alpha >> 1", gp.alpha >= 2.0, "alpha = " + fmt(gp.alpha) + ", proxy alpha >= 2");
            }
            break;
        case Theorem::kBitsManyCopies:
        case Theorem::kDepthManyCopies:
            omega_log("k", k);
            poly_t();
            omega_log("alpha", gp.alpha);
            check("m = ceil(log2 t)", gp.m == ceil_log2(gp.t),
                  "m = " + std::to_string(gp.m) + ", ceil(log2 t) = " + std::to_string(ceil_log2(gp.t)));
            break;
        case Theorem::kSignsFewCopies:
            check("t <= n", t <= n, "t = " + fmt(t) + ", n = " + fmt(n));
            check("p = n", gp.p == gp.n, "p = " + std::to_string(gp.p));
            check("m = 1", gp.m == 1, "m = " + std::to_string(gp.m));
            omega_log("alpha t", at);
            check("alpha t <= n", at <= n, "alpha t = " + fmt(at) + ", n = " + fmt(n));
            break;
        case Theorem::kSignsManyCopies: {
            const std::size_t m_star = ceil_log2(gp.n);
            poly_t();
            omega_log("alpha", gp.alpha);
            check("m = ceil(log2 n)", gp.m == m_star,
                  "m = " + std::to_string(gp.m) + ", ceil(log2 n) = " + std::to_string(m_star));
            const std::size_t p_star = m_star == 0 ? gp.n : gp.n / m_star;
            check("p = floor(n / ceil(log2 n))", gp.p == p_star,
                  "p = " + std::to_string(gp.p) + ", expected " + std::to_string(p_star));
            break;
        }
    }
    return out;
}

Theorem infer_theorem(Algorithm a, const GenParams &gp) {
    switch (a) {
        case Algorithm::kGateOpt:
            return gp.m == 2 ? Theorem::kBitsFewCopies : Theorem::kBitsManyCopies;
        case Algorithm::kDepthOpt:
            return gp.m == 2 ? Theorem::kDepthFewCopies : Theorem::kDepthManyCopies;
        case Algorithm::kSign:
            return gp.m == 1 ? Theorem::kSignsFewCopies : Theorem::kSignsManyCopies;
    }
    return Theorem::kBitsFewCopies;
}

double default_alpha(Theorem th, const GenParams &gp) {
    const double base = std::ceil(2.0 * std::log(static_cast<double>(gp.n)));
    const double t = static_cast<double>(std::max<std::size_t>(gp.t, 1));
    double cap = 0.0;
    switch (th) {
        case Theorem::kBitsFewCopies:
        case Theorem::kDepthFewCopies:
            cap = std::floor(static_cast<double>(gp.k) / 2.0) / t;
            break;
        case Theorem::kSignsFewCopies:
            cap = static_cast<double>(gp.n) / t;
            break;
        default:
            return base;
    }
    return cap > 0.0 ? std::min(base, cap) : base;
}

std::vector<Premise> premise_violations(Theorem th, const GenParams &gp, double poly_degree) {
    std::vector<Premise> out;
    for (auto &p : premise_check(th, gp, poly_degree)) {
        if (!p.satisfied) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("loglog_slope: need at least two paired points");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("loglog_slope: x values are all equal");
    }
    return sxy / sxx;
}

std::vector<GridPoint> parse_grid(std::string_view grid, std::uint64_t seed) {
    std::map<std::string, std::string> entries;
    for (const auto &item : split(grid, ';')) {
        if (item.empty()) {
            continue;
        }
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("grid: entry '" + item + "' is not key=value");
        }
        entries[item.substr(0, eq)] = item.substr(eq + 1);
    }
    auto get = [&](const std::string &key, const std::string &fallback) {
        auto it = entries.find(key);
        return it == entries.end() ? fallback : it->second;
    };
    for (const auto &[key, _] : entries) {
        if (key != "algorithm" && key != "n" && key != "t" && key != "k" && key != "m" && key != "alpha" &&
            key != "p") {
            throw std::invalid_argument("grid: unknown key '" + key + "'");
        }
    }
    if (!entries.contains("n") || !entries.contains("t")) {
        throw std::invalid_argument("grid: n and t are required");
    }
    const Algorithm algorithm = parse_algorithm(get("algorithm", "depth-opt"));
    const std::string k_rule = get("k", "log2n");
    const std::string m_rule = get("m", "log2t");
    const std::string alpha_rule = get("alpha", "2ln");
    const std::string p_rule = get("p", "n/log2n");

    std::vector<GridPoint> out;
    for (std::size_t n : parse_list(entries["n"])) {
        for (std::size_t t : parse_list(entries["t"])) {
            GridPoint gp;
            gp.algorithm = algorithm;
            gp.params.n = n;
            gp.params.t = t;
            gp.params.seed = seed;
            gp.params.k = k_rule == "log2n" ? ceil_log2(n) : parse_count(k_rule);
            if (m_rule == "log2t") {
                gp.params.m = std::max<std::size_t>(1, ceil_log2(t));
            } else if (m_rule == "log2n") {
                gp.params.m = ceil_log2(n);
            } else {
                gp.params.m = parse_count(m_rule);
            }
            if (alpha_rule == "2ln") {
                gp.params.alpha = std::ceil(2.0 * std::log(static_cast<double>(n)));
            } else {
                try {
                    gp.params.alpha = std::stod(alpha_rule);
                } catch (const std::exception &) {
                    throw std::invalid_argument("grid: bad alpha '" + alpha_rule + "'");
                }
            }
            if (p_rule == "n") {
                gp.params.p = n;
            } else if (p_rule == "n/log2n") {
                gp.params.p = std::max<std::size_t>(1, n / std::max<std::size_t>(1, ceil_log2(n)));
            } else {
                gp.params.p = parse_count(p_rule);
            }
            out.push_back(gp);
        }
    }
    return out;
}

}  // namespace pstherm
