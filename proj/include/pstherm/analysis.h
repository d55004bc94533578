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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pstherm/generators.h"

namespace pstherm {

/// Full-rank lower bound for the t x ceil(alpha t) condition matrix with
/// entry probability 1/4 (two polarized controls on random bits).
double theorem1_pt(double alpha, std::size_t t, double epsilon = 0.5);

/// Approximated bound for m = ceil(log2 t) controls, entry probability 1/t:
///   exp(-(t-1) e^{-alpha} (e-1)) * exp(-(t-1)^{(1+eps) alpha - 1} / t^{alpha t} * s / (1-s)^2)
/// with s = (p q)^{q~}, p = 1/t. Requires t >= 2.
double theorem2_pt(double alpha, std::size_t t, double epsilon = 0.5);

struct PredictedCost {
    /// Expected gate count (apply bits and masks are fair coins).
    double gates = 0.0;
    /// Exact layer count where the construction fixes it; expected otherwise.
    double unit_depth = 0.0;
    /// Expected decomposed depth; a layer costs ccx_cost(m) when non-empty and
    /// one step when empty.
    double decomposed_depth = 0.0;
    double ccx_equivalents = 0.0;
    /// depth-opt only: exact growth stages and the ln(n/k)/ln(1+1/m) estimate.
    std::size_t stages = 0;
    double stages_asymptotic = 0.0;
};

PredictedCost predicted_cost(Algorithm a, const GenParams &gp);

/// alpha t ln(n) (log2 t)^2, the depth template for the depth-optimized
/// bit thermalizer with m = ceil(log2 t).
double depth_template(std::size_t n, std::size_t t, double alpha);

enum class Theorem {
    kBitsFewCopies,       // gate-opt, m = 2, t <= k/2
    kBitsManyCopies,      // gate-opt, m = ceil(log2 t)
    kDepthFewCopies,      // depth-opt, m = 2
    kDepthManyCopies,     // depth-opt, m = ceil(log2 t)
    kSignsFewCopies,      // sign, p = n, m = 1
    kSignsManyCopies,     // sign, m = ceil(log2 n)
};

Theorem parse_theorem(std::string_view name);
std::string_view theorem_name(Theorem th);

struct Premise {
    std::string name;
    bool satisfied = false;
    std::string detail;
};

/// Mechanical premise check. Asymptotic roles are proxied at finite size:
/// "omega(log n)" means >= 2 ln n and "poly(n)" means <= n^poly_degree.
std::vector<Premise> premise_check(Theorem th, const GenParams &gp, double poly_degree = 3.0);

/// Subset of premise_check that failed.
std::vector<Premise> premise_violations(Theorem th, const GenParams &gp, double poly_degree = 3.0);

/// The premise set a generator run is checked against: m = 2 (or m = 1 for
/// signs) selects the few-copies variant.
Theorem infer_theorem(Algorithm a, const GenParams &gp);

/// ceil(2 ln n), lowered to fit alpha t <= k/2 (few-copies bit variants) or
/// alpha t <= n (few-copies sign variant) when that cap binds.
double default_alpha(Theorem th, const GenParams &gp);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

std::size_t ceil_log2(std::size_t x);

/// One sweep point and the rule set that produced it.
struct GridPoint {
    Algorithm algorithm = Algorithm::kDepthOpt;
    GenParams params;
};

/// Grid syntax: semicolon-separated key=value entries, e.g.
///   "algorithm=depth-opt;n=256,512,1024;t=4,8;k=log2n;m=log2t;alpha=2ln;p=1"
/// n and t take comma lists (or a geometric range "lo..hi"); k takes an
/// integer or "log2n"; m an integer, "log2t" or "log2n"; alpha a number or
/// "2ln"; p an integer, "n" or "n/log2n". Throws std::invalid_argument.
std::vector<GridPoint> parse_grid(std::string_view grid, std::uint64_t seed);

}  // namespace pstherm
