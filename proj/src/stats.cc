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

#include "pstherm/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace pstherm {

using nlohmann::json;

namespace {

void require_samples(std::size_t have, const TestOptions &opt, const char *test) {
    if (have < opt.min_samples) {
        throw std::invalid_argument(std::string(test) + ": needs at least " + std::to_string(opt.min_samples) +
                                    " samples, got " + std::to_string(have));
    }
}

void require_same_shape(std::span<const CopyEnsemble> ensembles, const char *test) {
    for (const auto &e : ensembles) {
        if (e.n() != ensembles.front().n() || e.t() != ensembles.front().t()) {
            throw std::invalid_argument(std::string(test) + ": ensembles differ in shape");
        }
    }
}

/// Two-sided normal quantile for a Bonferroni split of `alpha` over `cells`.
double bonferroni_z(double alpha, std::size_t cells) {
    boost::math::normal standard;
    double tail = alpha / (2.0 * static_cast<double>(std::max<std::size_t>(cells, 1)));
    return boost::math::quantile(boost::math::complement(standard, tail));
}

double normal_two_sided_p(double z) {
    boost::math::normal standard;
    return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(standard, std::abs(z))));
}

}  // namespace

json to_json(const TestReport &r) {
    json j = {{"test", r.name},
              {"statistic", r.statistic},
              {"samples", r.samples},
              {"passed", r.passed},
              {"threshold", r.threshold},
              {"seed", r.seed},
              {"detail", r.detail}};
    j["p_value"] = r.p_value ? json(*r.p_value) : json(nullptr);
    j["tv"] = r.tv ? json(*r.tv) : json(nullptr);
    return j;
}

double tv_distance(std::span<const std::uint64_t> counts, std::span<const double> reference) {
    if (counts.size() != reference.size()) {
        throw std::invalid_argument("tv_distance: domain mismatch");
    }
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    if (total == 0.0) {
        throw std::invalid_argument("tv_distance: empty histogram");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        sum += std::abs(static_cast<double>(counts[i]) / total - reference[i]);
    }
    return std::clamp(0.5 * sum, 0.0, 1.0);
}

double chi_square_sf(double statistic, double dof) {
    if (statistic <= 0.0) {
        return 1.0;
    }
    return boost::math::gamma_q(0.5 * dof, 0.5 * statistic);
}

std::optional<double> exact_uniform_multinomial_tail(std::span<const std::uint64_t> counts, double budget) {
    const std::size_t cells = counts.size();
    if (cells == 0) {
        return 1.0;
    }
    std::uint64_t total = 0;
    std::uint64_t observed = 0;
    for (auto c : counts) {
        total += c;
        observed += c * c;
    }
    const double cost = static_cast<double>(cells) * static_cast<double>(total + 1) * static_cast<double>(total + 1) *
                        static_cast<double>(observed) / 2.0;
    if (cost > budget) {
        return std::nullopt;
    }
    // mass[r * observed + s]: probability that r balls remain and the partial
    // sum of squares is s < observed. Paths reaching s >= observed go to `tail`.
    const std::size_t width = static_cast<std::size_t>(observed);
    std::vector<double> mass((total + 1) * width, 0.0);
    std::vector<double> next(mass.size(), 0.0);
    mass[total * width + 0] = 1.0;
    double tail = 0.0;
    std::vector<double> pmf;
    for (std::size_t j = 0; j < cells; ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        const double remaining_cells = static_cast<double>(cells - j);
        for (std::uint64_t r = 0; r <= total; ++r) {
            // Binomial(r, 1 / remaining_cells) pmf; the last cell takes everything.
            pmf.assign(r + 1, 0.0);
            if (cells - j == 1) {
                pmf[r] = 1.0;
            } else {
                const double p = 1.0 / remaining_cells;
                pmf[0] = std::pow(1.0 - p, static_cast<double>(r));
                for (std::uint64_t x = 0; x < r; ++x) {
                    pmf[x + 1] = pmf[x] * static_cast<double>(r - x) / static_cast<double>(x + 1) * p / (1.0 - p);
                }
            }
            for (std::size_t s = 0; s < width; ++s) {
                const double w = mass[r * width + s];
                if (w == 0.0) {
                    continue;
                }
                for (std::uint64_t x = 0; x <= r; ++x) {
                    const double contrib = w * pmf[x];
                    if (contrib == 0.0) {
                        continue;
                    }
                    const std::uint64_t ns = s + x * x;
                    if (ns >= observed) {
                        tail += contrib;
                    } else {
                        next[(r - x) * width + ns] += contrib;
                    }
                }
            }
        }
        std::swap(mass, next);
    }
    return std::clamp(tail, 0.0, 1.0);
}

UniformFit uniform_fit(std::span<const std::uint64_t> counts) {
    UniformFit fit;
    const auto cells = static_cast<double>(counts.size());
    const double total = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
    const double expected = total / cells;
    for (auto c : counts) {
        const double d = static_cast<double>(c) - expected;
        fit.chi_square += d * d / expected;
    }
    if (expected < 5.0) {
        if (auto exact = exact_uniform_multinomial_tail(counts)) {
            fit.p_value = *exact;
            fit.exact = true;
            return fit;
        }
    }
    fit.p_value = chi_square_sf(fit.chi_square, cells - 1.0);
    return fit;
}

TestReport marginal_bias_test(std::span<const CopyEnsemble> ensembles, const TestOptions &opt) {
    require_samples(ensembles.size(), opt, "marginal_bias_test");
    require_same_shape(ensembles, "marginal_bias_test");
    const std::size_t n = ensembles.front().n();
    const std::size_t t = ensembles.front().t();
    std::vector<std::uint64_t> ones(n * t, 0);
    for (const auto &e : ensembles) {
        for (std::size_t s = 0; s < n; ++s) {
            auto plane = e.plane(s);
            for (std::size_t c = 0; c < t; ++c) {
                ones[c * n + s] += (plane[c / 64] >> (c % 64)) & 1u;
            }
        }
    }
    const double trials = static_cast<double>(ensembles.size());
    const double sigma = std::sqrt(0.25 / trials);
    const double z_cut = std::max(4.0, bonferroni_z(opt.significance, ones.size()));
    double worst = 0.0;
    std::size_t flagged = 0;
    json flags = json::array();
    for (std::size_t c = 0; c < t; ++c) {
        for (std::size_t s = 0; s < n; ++s) {
            const double z = (static_cast<double>(ones[c * n + s]) / trials - 0.5) / sigma;
            worst = std::max(worst, std::abs(z));
            if (std::abs(z) > z_cut) {
                ++flagged;
                if (flags.size() < 32) {
                    flags.push_back({{"copy", c}, {"site", s + 1}, {"z", z}});
                }
            }
        }
    }
    TestReport r;
    r.name = "marginal_bias";
    r.statistic = worst;
    r.p_value = std::min(1.0, normal_two_sided_p(worst) * static_cast<double>(ones.size()));
    r.samples = ensembles.size();
    r.passed = flagged == 0;
    r.threshold = opt.significance;
    r.seed = opt.seed;
    r.detail = {{"cells", ones.size()}, {"z_cut", z_cut}, {"flagged", flagged}, {"first_flags", flags}};
    return r;
}

TestReport pairwise_xor_test(std::span<const CopyEnsemble> ensembles, const TestOptions &opt) {
    require_samples(ensembles.size(), opt, "pairwise_xor_test");
    require_same_shape(ensembles, "pairwise_xor_test");
    const std::size_t n = ensembles.front().n();
    const std::size_t t = ensembles.front().t();
    if (t < 2) {
        throw std::invalid_argument("pairwise_xor_test: needs at least two copies");
    }
    const std::size_t pairs = t * (t - 1) / 2;
    std::vector<std::uint64_t> xors(pairs * n, 0);
    std::vector<unsigned char> bits(t);
    for (const auto &e : ensembles) {
        for (std::size_t s = 0; s < n; ++s) {
            auto plane = e.plane(s);
            for (std::size_t c = 0; c < t; ++c) {
                bits[c] = (plane[c / 64] >> (c % 64)) & 1u;
            }
            std::size_t pair = 0;
            for (std::size_t a = 0; a < t; ++a) {
                for (std::size_t b = a + 1; b < t; ++b, ++pair) {
                    xors[pair * n + s] += bits[a] ^ bits[b];
                }
            }
        }
    }
    const double trials = static_cast<double>(ensembles.size());
    double chi = 0.0;
    double worst = 0.0;
    for (auto count : xors) {
        const double d = static_cast<double>(count) - 0.5 * trials;
        const double z2 = d * d / (0.25 * trials);
        chi += z2;
        worst = std::max(worst, z2);
    }
    const double dof = static_cast<double>(xors.size());
    TestReport r;
    r.name = "pairwise_xor";
    r.statistic = chi;
    r.p_value = chi_square_sf(chi, dof);
    r.samples = ensembles.size();
    r.passed = *r.p_value >= opt.significance;
    r.threshold = opt.significance;
    r.seed = opt.seed;
    r.detail = {{"cells", xors.size()}, {"dof", dof}, {"max_cell_z", std::sqrt(worst)}};
    return r;
}

TestReport sign_vector_test(std::span<const CopyEnsemble> ensembles, std::size_t copies, const TestOptions &opt) {
    require_samples(ensembles.size(), opt, "sign_vector_test");
    require_same_shape(ensembles, "sign_vector_test");
    if (copies == 0 || copies > 16 || copies > ensembles.front().t()) {
        throw std::invalid_argument("sign_vector_test: copies must lie in [1, min(16, t)]");
    }
    std::vector<std::uint64_t> hist(std::size_t{1} << copies, 0);
    for (const auto &e : ensembles) {
        std::size_t key = 0;
        for (std::size_t c = 0; c < copies; ++c) {
            if (e.sign(c) < 0) {
                key |= std::size_t{1} << c;
            }
        }
        ++hist[key];
    }
    auto fit = uniform_fit(hist);
    std::vector<double> uniform(hist.size(), 1.0 / static_cast<double>(hist.size()));
    TestReport r;
    r.name = "sign_vector";
    r.statistic = fit.chi_square;
    r.p_value = fit.p_value;
    r.tv = tv_distance(hist, uniform);
    r.samples = ensembles.size();
    r.passed = fit.p_value >= opt.significance;
    r.threshold = opt.significance;
    r.seed = opt.seed;
    r.detail = {{"copies", copies}, {"cells", hist.size()}, {"exact", fit.exact}};
    return r;
}

TestReport subset_uniformity_test(std::span<const SubsetState> samples, std::size_t t, const TestOptions &opt) {
    require_samples(samples.size(), opt, "subset_uniformity_test");
    if (t != 1 && t != 2) {
        throw std::invalid_argument("subset_uniformity_test: t must be 1 or 2");
    }
    const std::size_t n = samples.front().n();
    if (n > 20) {
        throw std::invalid_argument("subset_uniformity_test: domain of t-subsets is too large");
    }
    const std::uint64_t strings = std::uint64_t{1} << n;
    const std::uint64_t domain = t == 1 ? strings : strings * (strings - 1) / 2;
    if (domain > 100000) {
        throw std::invalid_argument("subset_uniformity_test: binom(2^n, t) exceeds 1e5");
    }
    auto cell = [&](std::uint64_t a, std::uint64_t b) -> std::uint64_t {
        if (a > b) {
            std::swap(a, b);
        }
        return a * (2 * strings - a - 1) / 2 + (b - a - 1);
    };
    std::vector<std::uint64_t> all(domain, 0);
    std::vector<std::uint64_t> single(domain, 0);
    Rng rng(opt.seed, "subset-test", 0);
    for (const auto &s : samples) {
        if (s.n() != n || s.size() < t) {
            throw std::invalid_argument("subset_uniformity_test: samples differ in shape");
        }
        auto images = s.images();
        if (t == 1) {
            for (auto img : images) {
                ++all[img];
            }
            ++single[images[rng.uniform_below(images.size())]];
        } else {
            for (std::size_t a = 0; a < images.size(); ++a) {
                for (std::size_t b = a + 1; b < images.size(); ++b) {
                    ++all[cell(images[a], images[b])];
                }
            }
            auto pick = rng.sample_distinct(0, static_cast<std::uint32_t>(images.size() - 1), 2);
            ++single[cell(images[pick[0]], images[pick[1]])];
        }
    }
    std::vector<double> uniform(domain, 1.0 / static_cast<double>(domain));
    auto fit = uniform_fit(single);
    TestReport r;
    r.name = "subset_uniformity";
    r.statistic = fit.chi_square;
    r.p_value = fit.p_value;
    r.tv = tv_distance(all, uniform);
    r.samples = samples.size();
    r.passed = fit.p_value >= opt.significance;
    r.threshold = opt.significance;
    r.seed = opt.seed;
    r.detail = {{"t", t}, {"cells", domain}, {"exact", fit.exact}, {"tv_single_draw", tv_distance(single, uniform)}};
    return r;
}

}  // namespace pstherm
