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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <optional>
#include <sstream>

#include "cli.h"
#include "json.hpp"
#include "pstherm/analysis.h"
#include "pstherm/bit_matrix.h"
#include "pstherm/circuit.h"
#include "pstherm/circuit_io.h"
#include "pstherm/copy_ensemble.h"
#include "pstherm/experiments.h"
#include "pstherm/generators.h"
#include "pstherm/rank_bounds.h"
#include "pstherm/subset_state.h"

namespace py = pybind11;
using namespace pstherm;

namespace {

GenParams make_params(const std::string &algorithm, std::size_t n, std::size_t t, std::size_t k,
                      std::optional<double> alpha, std::optional<std::size_t> m, std::optional<std::size_t> p,
                      std::uint64_t seed) {
    const Algorithm a = parse_algorithm(algorithm);
    GenParams gp;
    gp.n = n;
    gp.k = a == Algorithm::kSign ? n : k;
    gp.t = t;
    gp.seed = seed;
    if (a == Algorithm::kSign) {
        gp.m = m.value_or(t <= n ? 1 : ceil_log2(n));
        gp.p = p.value_or(gp.m == 1 ? n : n / gp.m);
    } else {
        gp.m = m.value_or(std::max<std::size_t>(2, ceil_log2(t)));
        gp.p = p.value_or(1);
    }
    gp.alpha = alpha.value_or(default_alpha(infer_theorem(a, gp), gp));
    return gp;
}

BitMatrix matrix_from_rows(const std::vector<std::vector<int>> &rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw std::invalid_argument("gf2_rank: ragged rows");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m.set(r, c, rows[r][c] & 1);
        }
    }
    return m;
}

std::vector<std::string> copy_strings(const CopyEnsemble &e) {
    std::vector<std::string> out;
    for (std::size_t c = 0; c < e.t(); ++c) {
        out.push_back(e.copy_string(c));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "pstherm core bindings";
    mod.attr("__version__") = PSTHERM_VERSION;

    py::class_<Circuit>(mod, "Circuit")
        .def_static(
            "from_json", [](const std::string &text) { return circuit_from_json(nlohmann::json::parse(text)); },
            py::arg("text"))
        .def("to_json", &dump_circuit)
        .def_readonly("n", &Circuit::n)
        .def_property_readonly("gate_count", &Circuit::gate_count)
        .def_property_readonly("layer_count", [](const Circuit &c) { return c.layers.size(); })
        .def_property_readonly("unit_depth", [](const Circuit &c) { return depth(c, DepthModel::kUnit); })
        .def_property_readonly("decomposed_depth", [](const Circuit &c) { return depth(c, DepthModel::kDecomposed); })
        .def_property_readonly("ccx_equivalents", &ccx_equivalent_count)
        .def("violations",
             [](const Circuit &c) {
                 std::vector<std::string> out;
                 for (const auto &v : validate(c)) {
                     out.push_back(v.message);
                 }
                 return out;
             })
        .def("__repr__", [](const Circuit &c) {
            return "<Circuit n=" + std::to_string(c.n) + " layers=" + std::to_string(c.layers.size()) +
                   " gates=" + std::to_string(c.gate_count()) + ">";
        });

    mod.def(
        "generate",
        [](const std::string &algorithm, std::size_t n, std::size_t t, std::size_t k, std::optional<double> alpha,
           std::optional<std::size_t> m, std::optional<std::size_t> p, std::uint64_t seed) {
            auto gp = make_params(algorithm, n, t, k, alpha, m, p, seed);
            Rng rng(seed, "gen", 0);
            return generate(parse_algorithm(algorithm), gp, rng);
        },
        py::arg("algorithm"), py::arg("n"), py::arg("t"), py::arg("k") = 0, py::arg("alpha") = py::none(),
        py::arg("m") = py::none(), py::arg("p") = py::none(), py::arg("seed") = 1,
        "Generate a thermalizer circuit; unset parameters take the command line defaults.");

    mod.def(
        "premise_violations",
        [](const std::string &algorithm, std::size_t n, std::size_t t, std::size_t k, std::optional<double> alpha,
           std::optional<std::size_t> m, std::optional<std::size_t> p) {
            auto gp = make_params(algorithm, n, t, k, alpha, m, p, 0);
            std::vector<std::string> out;
            for (const auto &v : premise_violations(infer_theorem(parse_algorithm(algorithm), gp), gp)) {
                out.push_back(v.name);
            }
            return out;
        },
        py::arg("algorithm"), py::arg("n"), py::arg("t"), py::arg("k") = 0, py::arg("alpha") = py::none(),
        py::arg("m") = py::none(), py::arg("p") = py::none());

    mod.def(
        "sample_initial_copies",
        [](std::size_t n, std::size_t k, std::size_t t, std::uint64_t seed) {
            Rng rng(seed, "copies", 0);
            return copy_strings(sample_initial_copies(n, k, t, rng));
        },
        py::arg("n"), py::arg("k"), py::arg("t"), py::arg("seed") = 1,
        "t distinct strings of {0,1}^k x 0^(n-k), site 1 first.");

    mod.def(
        "apply_circuit",
        [](const Circuit &c, const std::vector<std::string> &copies) {
            return copy_strings(apply_circuit(CopyEnsemble::from_strings(copies), c));
        },
        py::arg("circuit"), py::arg("copies"));

    mod.def(
        "gf2_rank", [](const std::vector<std::vector<int>> &rows) { return rank(matrix_from_rows(rows)); },
        py::arg("rows"));

    mod.def(
        "full_rank_bound",
        [](std::size_t l, std::size_t m, double p, double epsilon) {
            return full_rank_probability_bound({p, l, m, epsilon});
        },
        py::arg("l"), py::arg("m"), py::arg("p") = 0.25, py::arg("epsilon") = 0.5);
    mod.def(
        "full_rank_sequential",
        [](std::size_t l, std::size_t m, double p, double epsilon) {
            auto s = full_rank_probability_sequential({p, l, m, epsilon});
            return py::make_tuple(s.value, s.valid);
        },
        py::arg("l"), py::arg("m"), py::arg("p") = 0.25, py::arg("epsilon") = 0.5);
    mod.def(
        "monte_carlo_full_rank",
        [](std::size_t rows, std::size_t cols, double p, std::size_t trials, std::uint64_t seed) {
            auto mc = monte_carlo_full_rank(rows, cols, p, trials, seed);
            return py::make_tuple(mc.estimate, mc.ci95.lo, mc.ci95.hi);
        },
        py::arg("rows"), py::arg("cols"), py::arg("p") = 0.25, py::arg("trials") = 10000, py::arg("seed") = 1,
        "(estimate, ci95_lo, ci95_hi)");

    mod.def("theorem1_pt", &theorem1_pt, py::arg("alpha"), py::arg("t"), py::arg("epsilon") = 0.5);
    mod.def("theorem2_pt", &theorem2_pt, py::arg("alpha"), py::arg("t"), py::arg("epsilon") = 0.5);
    mod.def("ccx_cost", &ccx_cost, py::arg("controls"));

    mod.def(
        "predicted_cost",
        [](const std::string &algorithm, std::size_t n, std::size_t t, std::size_t k, std::optional<double> alpha,
           std::optional<std::size_t> m, std::optional<std::size_t> p) {
            auto gp = make_params(algorithm, n, t, k, alpha, m, p, 0);
            auto pc = predicted_cost(parse_algorithm(algorithm), gp);
            py::dict d;
            d["gates"] = pc.gates;
            d["unit_depth"] = pc.unit_depth;
            d["decomposed_depth"] = pc.decomposed_depth;
            d["ccx_equivalents"] = pc.ccx_equivalents;
            d["stages"] = pc.stages;
            return d;
        },
        py::arg("algorithm"), py::arg("n"), py::arg("t"), py::arg("k") = 0, py::arg("alpha") = py::none(),
        py::arg("m") = py::none(), py::arg("p") = py::none());

    mod.def(
        "haar_trace_distance",
        [](std::size_t n, std::size_t k, std::size_t t, std::size_t samples, double alpha, std::size_t m,
           std::optional<double> sign_alpha, std::size_t sign_m, bool oracle, std::uint64_t seed) {
            SubsetTrialConfig cfg;
            cfg.bits = {n, k, t, alpha, m, 1, seed};
            cfg.with_signs = true;
            cfg.signs = {n, n, t, sign_alpha.value_or(alpha), sign_m, n / sign_m, seed};
            cfg.samples = samples;
            cfg.seed = seed;
            cfg.source = oracle ? Source::kOracle : Source::kAlgorithm;
            py::gil_scoped_release release;
            return trace_distance(subset_trial_moment(cfg, t), haar_moment(n, t));
        },
        py::arg("n"), py::arg("k"), py::arg("t"), py::arg("samples"), py::arg("alpha"), py::arg("m") = 2,
        py::arg("sign_alpha") = py::none(), py::arg("sign_m") = 2, py::arg("oracle") = false, py::arg("seed") = 1,
        "Trace distance between the t-th moment of a gate-opt + sign ensemble and the Haar moment.");

    mod.def(
        "cli",
        [](const std::vector<std::string> &args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = cli::run(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the command line tool in process; returns (exit_code, stdout, stderr).");
}
