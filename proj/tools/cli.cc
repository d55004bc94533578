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


#include "cli.h"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unistd.h>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pstherm/analysis.h"
#include "pstherm/circuit_io.h"
#include "pstherm/experiments.h"
#include "pstherm/parallel.h"
#include "pstherm/rank_bounds.h"
#include "pstherm/rng.h"
#include "pstherm/stats.h"
#include "pstherm/subset_state.h"

namespace pstherm::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PremiseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::uint64_t seed = 1;
    std::size_t threads = 1;
    std::string format;
};

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

json meta(const std::string &command, const json &config, const Globals &g) {
    return {{"tool", "pstherm"},
            {"version", PSTHERM_VERSION},
            {"rng", std::string(kRngAlgorithm)},
            {"command", command},
            {"seed", g.seed},
            {"config", config}};
}

void write_atomic(const std::string &path, const std::string &content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) {
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        }
        f << content;
        f.flush();
        if (!f) {
            throw std::runtime_error("write to '" + tmp.string() + "' failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error("cannot move output into '" + path + "': " + ec.message());
    }
}

void emit(const std::string &path, const std::string &content, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << content;
    } else {
        write_atomic(path, content);
    }
}

std::string read_file(const std::string &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot read '" + path + "'");
    }
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string format_or(const Globals &g, const std::string &fallback) {
    const std::string f = g.format.empty() ? fallback : g.format;
    if (f != "json" && f != "csv") {
        throw UsageError("--format must be json or csv");
    }
    return f;
}

std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

std::string csv_with_meta(const json &m, const std::string &header, const std::vector<std::string> &rows) {
    std::string out = "# " + m.dump() + "\n" + header + "\n";
    for (const auto &r : rows) {
        out += r + "\n";
    }
    return out;
}

// Generator parameters shared by gen and verify.
struct GenOptions {
    std::string algorithm;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t t = 0;
    std::optional<double> alpha;
    std::optional<std::size_t> m;
    std::optional<std::size_t> p;
    std::string theorem;
    double poly_degree = 3.0;
    bool strict = false;
};

void add_gen_options(CLI::App *sub, GenOptions &o) {
    sub->add_option("--algorithm", o.algorithm, "gate-opt, depth-opt or sign")->required();
    sub->add_option("--n", o.n, "number of qubits")->required();
    sub->add_option("--k", o.k, "initial subset dimension (bit thermalizers)");
    sub->add_option("--t", o.t, "number of copies")->required();
    sub->add_option("--alpha", o.alpha, "round factor; rounds = ceil(alpha t)");
    sub->add_option("--m", o.m, "controls per gate");
    sub->add_option("--p", o.p, "gates per layer (sign thermalizer)");
    sub->add_option("--theorem", o.theorem,
                    "premise set: bits-few, bits-many, depth-few, depth-many, signs-few, signs-many");
    sub->add_option("--poly-degree", o.poly_degree, "t <= n^d stands in for t = poly(n)");
    sub->add_flag("--strict", o.strict, "exit 2 when a premise fails");
}

json gen_config(const GenOptions &o) {
    json j = {{"algorithm", o.algorithm}, {"n", o.n}, {"k", o.k}, {"t", o.t}, {"poly_degree", o.poly_degree}};
    if (o.alpha) {
        j["alpha"] = *o.alpha;
    }
    if (o.m) {
        j["m"] = *o.m;
    }
    if (o.p) {
        j["p"] = *o.p;
    }
    if (!o.theorem.empty()) {
        j["theorem"] = o.theorem;
    }
    return j;
}

struct Resolved {
    Algorithm algorithm;
    GenParams gp;
    Theorem theorem;
    std::vector<Premise> violations;
};

Resolved resolve(const GenOptions &o, std::uint64_t seed, std::ostream &err) {
    Resolved r{};
    r.algorithm = parse_algorithm(o.algorithm);
    GenParams &gp = r.gp;
    gp.n = o.n;
    gp.k = o.k;
    gp.t = o.t;
    gp.seed = seed;
    if (gp.n == 0 || gp.t == 0) {
        throw UsageError("--n and --t must be positive");
    }
    if (r.algorithm == Algorithm::kSign) {
        gp.m = o.m.value_or(gp.t <= gp.n ? 1 : ceil_log2(gp.n));
        if (gp.m == 0) {
            throw UsageError("--m must be positive");
        }
        gp.p = o.p.value_or(gp.m == 1 ? gp.n : gp.n / gp.m);
    } else {
        if (gp.k == 0) {
            throw UsageError("--k is required for bit thermalizers");
        }
        gp.m = o.m.value_or(std::max<std::size_t>(2, ceil_log2(gp.t)));
        gp.p = o.p.value_or(1);
    }
    r.theorem = o.theorem.empty() ? infer_theorem(r.algorithm, gp) : parse_theorem(o.theorem);
    gp.alpha = o.alpha.value_or(default_alpha(r.theorem, gp));
    r.violations = premise_violations(r.theorem, gp, o.poly_degree);
    for (const auto &v : r.violations) {
        err << "warning: " << theorem_name(r.theorem) << " premise '" << v.name << "' fails (" << v.detail << ")\n";
    }
    if (o.strict && !r.violations.empty()) {
        throw PremiseError(std::to_string(r.violations.size()) + " premise(s) fail under --strict");
    }
    return r;
}

json premises_json(const Resolved &r) {
    json out = json::array();
    for (const auto &v : r.violations) {
        out.push_back({{"premise", v.name}, {"detail", v.detail}});
    }
    return out;
}

json resolved_params(const Resolved &r) {
    return {{"algorithm", std::string(algorithm_name(r.algorithm))},
            {"theorem", std::string(theorem_name(r.theorem))},
            {"n", r.gp.n},
            {"k", r.gp.k},
            {"t", r.gp.t},
            {"alpha", r.gp.alpha},
            {"m", r.gp.m},
            {"p", r.gp.p},
            {"rounds", r.gp.rounds()}};
}

// ---------------------------------------------------------------- gen

int run_gen(const GenOptions &o, const std::string &out_path, const Globals &g, std::ostream &out,
            std::ostream &err) {
    Resolved r = resolve(o, g.seed, err);
    Circuit c = generate(r.algorithm, r.gp);
    json j = circuit_to_json(c);
    json config = gen_config(o);
    config["out"] = out_path;
    json m = meta("gen", config, g);
    m["resolved"] = resolved_params(r);
    m["premise_violations"] = premises_json(r);
    j["meta"] = m;
    emit(out_path, j.dump() + "\n", out);
    return kExitOk;
}

// ---------------------------------------------------------------- sim

struct SimOptions {
    std::string circuit;
    std::size_t trials = 1000;
    std::optional<std::size_t> t;
    std::optional<std::size_t> k;
    std::string diagnostics = "none";
    std::string report;
};

Circuit load_circuit(const std::string &path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw std::runtime_error("'" + path + "' is not valid JSON: " + e.what());
    }
    Circuit c = circuit_from_json(j);
    auto violations = validate(c);
    if (!violations.empty()) {
        const auto &v = violations.front();
        throw std::runtime_error("'" + path + "' fails validation at layer " + std::to_string(v.layer) + ": " +
                                 v.message);
    }
    return c;
}

std::optional<std::size_t> param_count(const Circuit &c, const char *key) {
    if (c.params.contains(key) && c.params.at(key).is_number_unsigned()) {
        return c.params.at(key).get<std::size_t>();
    }
    return std::nullopt;
}

int run_sim(const SimOptions &o, const Globals &g, std::ostream &out, std::ostream &) {
    if (o.diagnostics != "none" && o.diagnostics != "rank") {
        throw UsageError("--diagnostics must be none or rank");
    }
    Circuit c = load_circuit(o.circuit);
    const bool signs_only = c.generator == "sign";
    TrialConfig cfg;
    cfg.algorithm = signs_only ? Algorithm::kSign : Algorithm::kGateOpt;
    cfg.params.n = c.n;
    auto t = o.t ? o.t : param_count(c, "t");
    auto k = o.k ? o.k : param_count(c, "k");
    if (!t) {
        throw UsageError("circuit does not record t; pass --t");
    }
    if (!signs_only && !k) {
        throw UsageError("circuit does not record k; pass --k");
    }
    cfg.params.t = *t;
    cfg.params.k = k.value_or(c.n);
    cfg.trials = o.trials;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.diagnostics = o.diagnostics == "rank";
    cfg.fixed_circuit = &c;
    CopyTrials res = run_copy_trials(cfg);

    const std::size_t n = c.n;
    const std::size_t copies = cfg.params.t;
    std::vector<std::vector<std::size_t>> ones(copies, std::vector<std::size_t>(n, 0));
    std::vector<std::size_t> minus(copies, 0);
    std::size_t distinct = 0;
    std::size_t full_first = 0;
    std::size_t full_all = 0;
    json per_trial = json::array();
    for (std::size_t i = 0; i < o.trials; ++i) {
        const auto &e = res.finals[i];
        for (std::size_t cp = 0; cp < copies; ++cp) {
            for (std::size_t s = 0; s < n; ++s) {
                ones[cp][s] += e.bit(cp, s) ? 1 : 0;
            }
            minus[cp] += e.sign(cp) < 0 ? 1 : 0;
        }
        distinct += res.distinct[i] ? 1 : 0;
        json row = {{"distinct", static_cast<bool>(res.distinct[i])}};
        if (cfg.diagnostics) {
            full_first += res.first_group_full_rank[i] ? 1 : 0;
            full_all += res.all_groups_full_rank[i] ? 1 : 0;
            row["rank"] = res.first_group_rank[i];
            row["full_rank"] = static_cast<bool>(res.first_group_full_rank[i]);
            row["all_groups_full_rank"] = static_cast<bool>(res.all_groups_full_rank[i]);
        }
        per_trial.push_back(row);
    }
    const double trials = static_cast<double>(std::max<std::size_t>(o.trials, 1));
    json marginals = json::array();
    json sign_minus = json::array();
    for (std::size_t cp = 0; cp < copies; ++cp) {
        json rowj = json::array();
        for (std::size_t s = 0; s < n; ++s) {
            rowj.push_back(static_cast<double>(ones[cp][s]) / trials);
        }
        marginals.push_back(rowj);
        sign_minus.push_back(static_cast<double>(minus[cp]) / trials);
    }
    json config = {{"circuit", o.circuit}, {"trials", o.trials}, {"t", copies}, {"k", cfg.params.k},
                   {"diagnostics", o.diagnostics}, {"report", o.report}, {"threads", g.threads}};
    json report = {{"meta", meta("sim", config, g)},
                   {"circuit",
                    {{"n", c.n},
                     {"generator", c.generator},
                     {"seed", c.seed},
                     {"gates", c.gate_count()},
                     {"unit_depth", depth(c, DepthModel::kUnit)},
                     {"decomposed_depth", depth(c, DepthModel::kDecomposed)},
                     {"ccx_equivalents", ccx_equivalent_count(c)}}},
                   {"trials", o.trials},
                   {"all_distinct", distinct == o.trials},
                   {"distinct_frequency", static_cast<double>(distinct) / trials},
                   {"marginals", marginals},
                   {"sign_minus_frequency", sign_minus},
                   {"per_trial", per_trial}};
    if (cfg.diagnostics) {
        report["full_rank_frequency"] = static_cast<double>(full_first) / trials;
        report["all_groups_full_rank_frequency"] = static_cast<double>(full_all) / trials;
    }
    emit(o.report, report.dump(2) + "\n", out);
    return kExitOk;
}

// ---------------------------------------------------------------- rank-mc

struct RankMcOptions {
    std::size_t rows = 0;
    std::size_t cols = 0;
    double p = 0.25;
    std::size_t trials = 10000;
    std::string out;
};

int run_rank_mc(const RankMcOptions &o, const Globals &g, std::ostream &out, std::ostream &) {
    const std::string fmt = format_or(g, "json");
    MonteCarloRank mc = monte_carlo_full_rank(o.rows, o.cols, o.p, o.trials, g.seed, g.threads);
    json config = {{"rows", o.rows}, {"cols", o.cols}, {"p", o.p}, {"trials", o.trials}, {"out", o.out}};
    json m = meta("rank-mc", config, g);
    if (fmt == "csv") {
        std::string row = std::to_string(o.rows) + "," + std::to_string(o.cols) + "," + num(o.p) + "," +
                          num(mc.estimate) + "," + num(mc.ci95.lo) + "," + num(mc.ci95.hi) + "," +
                          std::to_string(mc.full_rank) + "," + std::to_string(mc.trials) + "," +
                          std::to_string(g.seed);
        emit(o.out, csv_with_meta(m, "rows,cols,p,estimate,ci_lo,ci_hi,full_rank,trials,seed", {row}), out);
    } else {
        json j = {{"meta", m},           {"rows", o.rows},         {"cols", o.cols},
                  {"p", o.p},            {"estimate", mc.estimate}, {"ci95", {mc.ci95.lo, mc.ci95.hi}},
                  {"full_rank", mc.full_rank}, {"trials", mc.trials}, {"seed", g.seed}};
        emit(o.out, j.dump(2) + "\n", out);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- bounds

struct BoundsOptions {
    double p = 0.25;
    std::string l = "16";
    std::string m = "64";
    double epsilon = 0.5;
    std::size_t trials = 10000;
    std::string out;
};

std::size_t to_count(const std::string &s, const char *what) {
    std::size_t v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw UsageError(std::string("bad ") + what + " value '" + s + "'");
    }
    return v;
}

int run_bounds(const BoundsOptions &o, const Globals &g, std::ostream &out, std::ostream &) {
    const std::string fmt = format_or(g, "csv");
    auto ls = split_list(o.l);
    auto ms = split_list(o.m);
    if (ls.empty() || ls.size() != ms.size()) {
        throw UsageError("--l and --m must list the same number of values");
    }
    json config = {{"p", o.p}, {"l", o.l}, {"m", o.m}, {"epsilon", o.epsilon}, {"trials", o.trials}, {"out", o.out}};
    json m = meta("bounds", config, g);
    std::vector<std::string> rows;
    json points = json::array();
    for (std::size_t i = 0; i < ls.size(); ++i) {
        RankBoundParams bp{o.p, to_count(ls[i], "--l"), to_count(ms[i], "--m"), o.epsilon};
        bp.validate();
        const double closed = full_rank_probability_bound(bp);
        const SequentialBound seq = full_rank_probability_sequential(bp);
        const MonteCarloRank mc = monte_carlo_full_rank(bp.l, bp.m, bp.p, o.trials, g.seed, g.threads);
        rows.push_back(num(bp.p) + "," + std::to_string(bp.l) + "," + std::to_string(bp.m) + "," + num(bp.epsilon) +
                       "," + num(closed) + "," + num(seq.value) + "," + num(mc.estimate) + "," + num(mc.ci95.lo) +
                       "," + num(mc.ci95.hi) + "," + std::to_string(mc.trials) + "," + std::to_string(g.seed));
        points.push_back({{"p", bp.p},
                          {"l", bp.l},
                          {"m", bp.m},
                          {"epsilon", bp.epsilon},
                          {"bound_closed", closed},
                          {"bound_sequential", seq.value},
                          {"bound_sequential_valid", seq.valid},
                          {"mc_estimate", mc.estimate},
                          {"mc_ci_lo", mc.ci95.lo},
                          {"mc_ci_hi", mc.ci95.hi},
                          {"trials", mc.trials},
                          {"seed", g.seed}});
    }
    if (fmt == "csv") {
        emit(o.out,
             csv_with_meta(m,
                           "p,l,m,epsilon,bound_closed,bound_sequential,mc_estimate,mc_ci_lo,mc_ci_hi,trials,seed",
                           rows),
             out);
    } else {
        emit(o.out, json{{"meta", m}, {"points", points}}.dump(2) + "\n", out);
    }
    return kExitOk;
}

// ---------------------------------------------------------------- moments

struct MomentsOptions {
    std::size_t n = 6;
    std::size_t k = 4;
    std::size_t t = 2;
    std::size_t samples = 20000;
    std::string algorithm = "gate-opt";
    std::optional<double> alpha;
    std::size_t m = 2;
    std::optional<double> sign_alpha;
    std::size_t sign_m = 2;
    std::optional<std::size_t> sign_p;
    std::string baseline = "oracle";
    std::string report;
};

int run_moments(const MomentsOptions &o, const Globals &g, std::ostream &out, std::ostream &err) {
    if (o.baseline != "oracle" && o.baseline != "algorithm") {
        throw UsageError("--baseline must be oracle or algorithm");
    }
    check_moment_dimension(o.n, o.t);
    if (o.t > 3) {
        throw UsageError("moments supports t <= 3");
    }
    SubsetTrialConfig cfg;
    cfg.bit_algorithm = parse_algorithm(o.algorithm);
    if (cfg.bit_algorithm == Algorithm::kSign) {
        throw UsageError("--algorithm must be a bit thermalizer");
    }
    cfg.bits.n = o.n;
    cfg.bits.k = o.k;
    cfg.bits.t = o.t;
    cfg.bits.m = o.m;
    cfg.bits.seed = g.seed;
    cfg.bits.alpha = o.alpha.value_or(std::ceil(2.0 * std::log(static_cast<double>(o.n))));
    cfg.with_signs = true;
    cfg.signs.n = o.n;
    cfg.signs.t = o.t;
    cfg.signs.m = o.sign_m;
    cfg.signs.p = o.sign_p.value_or(o.sign_m == 0 ? 0 : o.n / o.sign_m);
    cfg.signs.alpha = o.sign_alpha.value_or(cfg.bits.alpha);
    cfg.samples = o.samples;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.tag = "moments";

    const Theorem bit_th = infer_theorem(cfg.bit_algorithm, cfg.bits);
    for (const auto &v : premise_violations(bit_th, cfg.bits)) {
        err << "warning: " << theorem_name(bit_th) << " premise '" << v.name << "' fails (" << v.detail << ")\n";
    }

    const MomentMatrix haar = haar_moment(o.n, o.t);
    double td_empirical = 0.0;
    {
        MomentMatrix emp = subset_trial_moment(cfg, o.t);
        td_empirical = trace_distance(emp, haar);
    }
    SubsetTrialConfig base = cfg;
    if (o.baseline == "oracle") {
        base.source = Source::kOracle;
        base.tag = "moments-oracle";
    } else {
        base.tag = "moments-baseline";
    }
    double td_baseline = 0.0;
    {
        MomentMatrix bm = subset_trial_moment(base, o.t);
        td_baseline = trace_distance(bm, haar);
    }
    json config = {{"n", o.n},
                   {"k", o.k},
                   {"t", o.t},
                   {"samples", o.samples},
                   {"algorithm", o.algorithm},
                   {"alpha", cfg.bits.alpha},
                   {"m", o.m},
                   {"sign_alpha", cfg.signs.alpha},
                   {"sign_m", cfg.signs.m},
                   {"sign_p", cfg.signs.p},
                   {"baseline", o.baseline},
                   {"report", o.report},
                   {"threads", g.threads}};
    json report = {{"meta", meta("moments", config, g)},
                   {"td_empirical", td_empirical},
                   {"td_oracle_baseline", td_baseline},
                   {"td_excess", td_empirical - td_baseline},
                   {"baseline", o.baseline},
                   {"samples", o.samples},
                   {"seed", g.seed}};
    emit(o.report, report.dump(2) + "\n", out);
    return kExitOk;
}

// ---------------------------------------------------------------- verify

struct VerifyOptions {
    GenOptions gen;
    std::size_t trials = 1000;
    std::string source = "algorithm";
    std::string tests;
    std::size_t sign_copies = 8;
    std::size_t subset_t = 1;
    std::string circuit;
    double significance = 1e-3;
    double rank_threshold = 0.99;
    std::size_t min_samples = 1000;
    std::string report;
};

TestReport rank_report(const CopyTrials &res, double threshold, std::uint64_t seed) {
    TestReport r;
    r.name = "condition_rank";
    std::size_t full = 0;
    for (bool b : res.first_group_full_rank) {
        full += b ? 1 : 0;
    }
    r.samples = res.first_group_full_rank.size();
    r.statistic = r.samples == 0 ? 0.0 : static_cast<double>(full) / static_cast<double>(r.samples);
    r.threshold = threshold;
    r.passed = r.samples > 0 && r.statistic >= threshold;
    r.seed = seed;
    r.detail = {{"full_rank", full}};
    return r;
}

TestReport distinct_report(const CopyTrials &res, std::uint64_t seed) {
    TestReport r;
    r.name = "distinctness";
    std::size_t kept = 0;
    for (bool b : res.distinct) {
        kept += b ? 1 : 0;
    }
    r.samples = res.distinct.size();
    r.statistic = r.samples == 0 ? 0.0 : static_cast<double>(kept) / static_cast<double>(r.samples);
    r.threshold = 1.0;
    r.passed = kept == r.samples;
    r.seed = seed;
    return r;
}

int run_verify(VerifyOptions o, const Globals &g, std::ostream &out, std::ostream &err) {
    Resolved r = resolve(o.gen, g.seed, err);
    const Source source = parse_source(o.source);
    const bool signs_only = r.algorithm == Algorithm::kSign;
    auto tests = split_list(o.tests.empty() ? (signs_only ? "sign" : "marginal,xor,rank,distinct") : o.tests);

    std::optional<Circuit> fixed;
    if (!o.circuit.empty()) {
        fixed = load_circuit(o.circuit);
    }

    TestOptions topt;
    topt.significance = o.significance;
    topt.seed = g.seed;
    topt.min_samples = o.min_samples;

    bool need_copies = false;
    bool need_rank = false;
    for (const auto &t : tests) {
        if (t == "marginal" || t == "xor" || t == "sign" || t == "distinct") {
            need_copies = true;
        } else if (t == "rank") {
            need_copies = need_rank = true;
        } else if (t != "subset") {
            throw UsageError("unknown test '" + t + "'");
        }
    }
    std::optional<CopyTrials> copies;
    if (need_copies) {
        TrialConfig cfg;
        cfg.algorithm = r.algorithm;
        cfg.params = r.gp;
        cfg.trials = o.trials;
        cfg.seed = g.seed;
        cfg.threads = g.threads;
        cfg.source = source;
        cfg.diagnostics = need_rank;
        cfg.fixed_circuit = fixed ? &*fixed : nullptr;
        copies = run_copy_trials(cfg);
    }

    std::vector<TestReport> reports;
    for (const auto &t : tests) {
        if (t == "marginal") {
            reports.push_back(marginal_bias_test(copies->finals, topt));
        } else if (t == "xor") {
            reports.push_back(pairwise_xor_test(copies->finals, topt));
        } else if (t == "sign") {
            reports.push_back(sign_vector_test(copies->finals, std::min(o.sign_copies, r.gp.t), topt));
        } else if (t == "rank") {
            reports.push_back(rank_report(*copies, o.rank_threshold, g.seed));
        } else if (t == "distinct") {
            reports.push_back(distinct_report(*copies, g.seed));
        } else if (t == "subset") {
            if (signs_only) {
                throw UsageError("the subset test needs a bit thermalizer");
            }
            SubsetTrialConfig scfg;
            scfg.bit_algorithm = r.algorithm;
            scfg.bits = r.gp;
            scfg.samples = o.trials;
            scfg.seed = g.seed;
            scfg.threads = g.threads;
            scfg.source = source;
            auto samples = run_subset_trials(scfg);
            reports.push_back(subset_uniformity_test(samples, o.subset_t, topt));
        }
    }

    json config = gen_config(o.gen);
    config["trials"] = o.trials;
    config["source"] = o.source;
    config["tests"] = tests;
    config["sign_copies"] = o.sign_copies;
    config["subset_t"] = o.subset_t;
    config["circuit"] = o.circuit;
    config["significance"] = o.significance;
    config["rank_threshold"] = o.rank_threshold;
    config["min_samples"] = o.min_samples;
    config["strict"] = o.gen.strict;
    config["threads"] = g.threads;
    json m = meta("verify", config, g);
    m["resolved"] = resolved_params(r);
    m["premise_violations"] = premises_json(r);

    json arr = json::array();
    bool all_passed = true;
    for (const auto &rep : reports) {
        json j = to_json(rep);
        j["meta"] = m;
        arr.push_back(j);
        all_passed = all_passed && rep.passed;
        err << (rep.passed ? "PASS " : "FAIL ") << rep.name << "\n";
    }
    emit(o.report, arr.dump(2) + "\n", out);
    return (o.gen.strict && !all_passed) ? kExitTestFailure : kExitOk;
}

// ---------------------------------------------------------------- scaling

struct ScalingOptions {
    std::string grid;
    std::size_t trials = 1;
    std::string out;
};

int run_scaling(const ScalingOptions &o, const Globals &g, std::ostream &out, std::ostream &) {
    const std::string fmt = format_or(g, "csv");
    auto points = parse_grid(o.grid, g.seed);
    struct Row {
        GridPoint point;
        std::uint64_t seed = 0;
        std::size_t gates = 0;
        std::size_t unit = 0;
        std::size_t decomposed = 0;
        PredictedCost predicted;
    };
    std::vector<Row> rows(points.size() * o.trials);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        rows[i].point = points[i / o.trials];
        rows[i].seed = trial_seed(g.seed, i);
    }
    parallel_for(rows.size(), g.threads, [&](std::size_t i) {
        Row &row = rows[i];
        GenParams gp = row.point.params;
        gp.seed = row.seed;
        Circuit c = generate(row.point.algorithm, gp);
        row.gates = c.gate_count();
        row.unit = depth(c, DepthModel::kUnit);
        row.decomposed = depth(c, DepthModel::kDecomposed);
        row.predicted = predicted_cost(row.point.algorithm, gp);
    });
    json config = {{"grid", o.grid}, {"trials", o.trials}, {"out", o.out}, {"threads", g.threads}};
    json m = meta("scaling", config, g);
    if (fmt == "csv") {
        std::vector<std::string> lines;
        for (const auto &row : rows) {
            const GenParams &gp = row.point.params;
            lines.push_back(std::string(algorithm_name(row.point.algorithm)) + "," + std::to_string(gp.n) + "," +
                            std::to_string(gp.k) + "," + std::to_string(gp.t) + "," + num(gp.alpha) + "," +
                            std::to_string(gp.m) + "," + std::to_string(row.gates) + "," +
                            std::to_string(row.unit) + "," + std::to_string(row.decomposed) + "," +
                            num(row.predicted.gates) + "," + num(row.predicted.decomposed_depth) + "," +
                            std::to_string(row.seed));
        }
        emit(o.out,
             csv_with_meta(m,
                           "algorithm,n,k,t,alpha,m,gates,unit_depth,decomposed_depth,predicted_gates,"
                           "predicted_depth,seed",
                           lines),
             out);
    } else {
        json arr = json::array();
        for (const auto &row : rows) {
            const GenParams &gp = row.point.params;
            arr.push_back({{"algorithm", std::string(algorithm_name(row.point.algorithm))},
                           {"n", gp.n},
                           {"k", gp.k},
                           {"t", gp.t},
                           {"alpha", gp.alpha},
                           {"m", gp.m},
                           {"p", gp.p},
                           {"gates", row.gates},
                           {"unit_depth", row.unit},
                           {"decomposed_depth", row.decomposed},
                           {"predicted_gates", row.predicted.gates},
                           {"predicted_unit_depth", row.predicted.unit_depth},
                           {"predicted_depth", row.predicted.decomposed_depth},
                           {"seed", row.seed}});
        }
        emit(o.out, json{{"meta", m}, {"rows", arr}}.dump(2) + "\n", out);
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Classical simulator and statistical verifier for pseudothermalization circuits", "pstherm"};
    app.set_version_flag("--version", PSTHERM_VERSION);
    app.require_subcommand(1);
    Globals g;
    app.add_option("--seed", g.seed, "master seed")->capture_default_str();
    app.add_option("--threads", g.threads, "worker threads")->capture_default_str();
    app.add_option("--format", g.format, "json or csv (where both apply)");

    GenOptions gen;
    std::string gen_out;
    auto *gen_cmd = app.add_subcommand("gen", "generate a circuit");
    add_gen_options(gen_cmd, gen);
    gen_cmd->add_option("--out", gen_out, "circuit file (stdout when omitted)");
    gen_cmd->add_option("--seed", g.seed, "master seed");

    SimOptions sim;
    auto *sim_cmd = app.add_subcommand("sim", "simulate t copies under a circuit file");
    sim_cmd->add_option("--circuit", sim.circuit, "circuit file")->required();
    sim_cmd->add_option("--trials", sim.trials)->capture_default_str();
    sim_cmd->add_option("--t", sim.t, "copies (default: from the circuit)");
    sim_cmd->add_option("--k", sim.k, "initial subset dimension (default: from the circuit)");
    sim_cmd->add_option("--diagnostics", sim.diagnostics, "none or rank")->capture_default_str();
    sim_cmd->add_option("--report", sim.report, "report file (stdout when omitted)");
    sim_cmd->add_option("--seed", g.seed, "master seed");

    RankMcOptions rmc_opt;
    auto *rmc_cmd = app.add_subcommand("rank-mc", "Monte Carlo full-rank frequency of Bernoulli matrices");
    rmc_cmd->add_option("--rows", rmc_opt.rows)->required();
    rmc_cmd->add_option("--cols", rmc_opt.cols)->required();
    rmc_cmd->add_option("--p", rmc_opt.p)->capture_default_str();
    rmc_cmd->add_option("--trials", rmc_opt.trials)->capture_default_str();
    rmc_cmd->add_option("--out", rmc_opt.out);
    rmc_cmd->add_option("--seed", g.seed, "master seed");

    BoundsOptions bounds;
    auto *bounds_cmd = app.add_subcommand("bounds", "full-rank bounds next to Monte Carlo estimates");
    bounds_cmd->add_option("--p", bounds.p)->capture_default_str();
    bounds_cmd->add_option("--l", bounds.l, "rows, comma separated")->capture_default_str();
    bounds_cmd->add_option("--m", bounds.m, "columns, comma separated")->capture_default_str();
    bounds_cmd->add_option("--epsilon", bounds.epsilon)->capture_default_str();
    bounds_cmd->add_option("--trials", bounds.trials)->capture_default_str();
    bounds_cmd->add_option("--out", bounds.out);
    bounds_cmd->add_option("--seed", g.seed, "master seed");

    MomentsOptions mom;
    auto *mom_cmd = app.add_subcommand("moments", "exact t-th moment trace distance to the Haar moment");
    mom_cmd->add_option("--n", mom.n)->capture_default_str();
    mom_cmd->add_option("--k", mom.k)->capture_default_str();
    mom_cmd->add_option("--t", mom.t)->capture_default_str();
    mom_cmd->add_option("--samples", mom.samples)->capture_default_str();
    mom_cmd->add_option("--algorithm", mom.algorithm)->capture_default_str();
    mom_cmd->add_option("--alpha", mom.alpha, "bit round factor (default ceil(2 ln n))");
    mom_cmd->add_option("--m", mom.m)->capture_default_str();
    mom_cmd->add_option("--sign-alpha", mom.sign_alpha, "sign round factor (default: --alpha)");
    mom_cmd->add_option("--sign-m", mom.sign_m)->capture_default_str();
    mom_cmd->add_option("--sign-p", mom.sign_p, "sign gates per layer (default n / sign-m)");
    mom_cmd->add_option("--baseline", mom.baseline, "oracle or algorithm")->capture_default_str();
    mom_cmd->add_option("--report", mom.report);
    mom_cmd->add_option("--seed", g.seed, "master seed");

    VerifyOptions ver;
    auto *ver_cmd = app.add_subcommand("verify", "run the statistical test battery");
    add_gen_options(ver_cmd, ver.gen);
    ver_cmd->add_option("--trials", ver.trials)->capture_default_str();
    ver_cmd->add_option("--source", ver.source, "algorithm, oracle or initial")->capture_default_str();
    ver_cmd->add_option("--tests", ver.tests, "comma list of marginal, xor, rank, distinct, sign, subset");
    ver_cmd->add_option("--sign-copies", ver.sign_copies)->capture_default_str();
    ver_cmd->add_option("--subset-t", ver.subset_t)->capture_default_str();
    ver_cmd->add_option("--circuit", ver.circuit, "use this circuit for every trial");
    ver_cmd->add_option("--significance", ver.significance)->capture_default_str();
    ver_cmd->add_option("--rank-threshold", ver.rank_threshold)->capture_default_str();
    ver_cmd->add_option("--min-samples", ver.min_samples, "refuse to test fewer trials")->capture_default_str();
    ver_cmd->add_option("--report", ver.report);
    ver_cmd->add_option("--seed", g.seed, "master seed");

    ScalingOptions sc;
    auto *sc_cmd = app.add_subcommand("scaling", "cost sweep over a parameter grid");
    sc_cmd->add_option("--grid", sc.grid, "e.g. algorithm=depth-opt;n=256..8192;t=4,8,16,32")->required();
    sc_cmd->add_option("--trials", sc.trials, "circuits per grid point")->capture_default_str();
    sc_cmd->add_option("--out", sc.out);
    sc_cmd->add_option("--seed", g.seed, "master seed");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::Success &e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }

    try {
        if (g.threads == 0) {
            throw UsageError("--threads must be at least 1");
        }
        if (*gen_cmd) {
            return run_gen(gen, gen_out, g, out, err);
        }
        if (*sim_cmd) {
            return run_sim(sim, g, out, err);
        }
        if (*rmc_cmd) {
            return run_rank_mc(rmc_opt, g, out, err);
        }
        if (*bounds_cmd) {
            return run_bounds(bounds, g, out, err);
        }
        if (*mom_cmd) {
            return run_moments(mom, g, out, err);
        }
        if (*ver_cmd) {
            return run_verify(ver, g, out, err);
        }
        if (*sc_cmd) {
            return run_scaling(sc, g, out, err);
        }
    } catch (const PremiseError &e) {
        err << "error: " << e.what() << "\n";
        return kExitPremise;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace pstherm::cli
