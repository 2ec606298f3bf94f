#include "sigkit/aso.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sigkit/errors.hpp"
#include "sigkit/math.hpp"
#include "sigkit/parallel.hpp"

namespace sigkit {

namespace {

// Iterations per bootstrap chunk. Part of the output contract for a given
// seed (chunk j seeds derive_stream(seed, j)), so changing it changes
// results.
constexpr std::size_t kBootstrapChunk = 64;

std::vector<double> ratio_grid(double dt) {
    if (!(dt > 0.0 && dt < 0.5)) {
        throw DomainError("violation ratio: dt must lie in (0, 0.5)");
    }
    std::vector<double> t;
    for (std::size_t k = 1;; ++k) {
        const double v = static_cast<double>(k) * dt;
        if (v >= 1.0) break;
        t.push_back(v);
    }
    if (t.size() < 3) {
        throw DomainError("violation ratio: dt leaves fewer than 3 grid points");
    }
    return t;
}

std::vector<std::size_t> grid_indices(std::size_t n, const std::vector<double>& t) {
    std::vector<std::size_t> idx(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) idx[k] = quantile_index(n, t[k]);
    return idx;
}

// Core ratio evaluation over precomputed per-grid-point sample indices.
ViolationRatio ratio_on_grid(const double* a, const double* b,
                             const std::vector<std::size_t>& ia,
                             const std::vector<std::size_t>& ib, double dt) {
    double w2 = 0.0;
    double num = 0.0;
    for (std::size_t k = 0; k < ia.size(); ++k) {
        const double f = a[ia[k]];
        const double g = b[ib[k]];
        const double diff = g - f;
        const double d2 = diff * diff;
        w2 += d2;
        if (f < g) num += d2;
    }
    w2 *= dt;
    num *= dt;
    if (w2 <= 1e-12) return {0.5, w2};
    return {num / w2, w2};
}

// Sorted bootstrap resample into a reusable buffer, consuming exactly `size`
// uniforms; the multiset of draws matches inverse_transform_resample.
void resample_sorted_into(const std::vector<double>& sorted_values, std::size_t size,
                          RngStream& rng, std::vector<std::size_t>& counts,
                          std::vector<double>& out) {
    const std::size_t n = sorted_values.size();
    counts.assign(n, 0);
    for (std::size_t i = 0; i < size; ++i) {
        counts[quantile_index(n, rng.next_uniform())] += 1;
    }
    out.clear();
    for (std::size_t k = 0; k < n; ++k) {
        out.insert(out.end(), counts[k], sorted_values[k]);
    }
}

void validate_config(const AsoConfig& config) {
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw DomainError("aso: alpha must lie in (0,1)");
    }
    if (config.num_bootstrap == 0) {
        throw DomainError("aso: num_bootstrap must be >= 1");
    }
    if (config.num_jobs == 0) {
        throw DomainError("aso: num_jobs must be >= 1");
    }
}

}  // namespace

ViolationRatio compute_violation_ratio(const ScoreSample& a, const ScoreSample& b,
                                       double dt) {
    const std::vector<double> t = ratio_grid(dt);
    const std::vector<std::size_t> ia = grid_indices(a.size(), t);
    const std::vector<std::size_t> ib = grid_indices(b.size(), t);
    return ratio_on_grid(a.values.data(), b.values.data(), ia, ib, dt);
}

double bootstrap_sigma(const ScoreSample& a, const ScoreSample& b,
                       double observed_ratio, const AsoConfig& config) {
    validate_config(config);
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::vector<double> t = ratio_grid(config.dt);
    const std::vector<std::size_t> ia = grid_indices(n, t);
    const std::vector<std::size_t> ib = grid_indices(m, t);
    const std::size_t B = config.num_bootstrap;

    std::vector<double> eps_star(B);
    for_each_chunk(B, kBootstrapChunk, config.num_jobs,
                   [&](std::size_t chunk, std::size_t begin, std::size_t end) {
                       RngStream rng = derive_stream(config.seed, chunk);
                       std::vector<std::size_t> counts;
                       std::vector<double> a_star, b_star;
                       a_star.reserve(n);
                       b_star.reserve(m);
                       for (std::size_t i = begin; i < end; ++i) {
                           resample_sorted_into(a.values, n, rng, counts, a_star);
                           resample_sorted_into(b.values, m, rng, counts, b_star);
                           eps_star[i] =
                               ratio_on_grid(a_star.data(), b_star.data(), ia, ib,
                                             config.dt).ratio;
                       }
                   });

    // Population variance (divide by B), computed serially in iteration order
    // so the result is independent of the chunk execution schedule.
    const double scale = std::sqrt(static_cast<double>(n) * static_cast<double>(m) /
                                   static_cast<double>(n + m));
    double mean = 0.0;
    for (double e : eps_star) mean += scale * (e - observed_ratio);
    mean /= static_cast<double>(B);
    double var = 0.0;
    for (double e : eps_star) {
        const double v = scale * (e - observed_ratio) - mean;
        var += v * v;
    }
    var /= static_cast<double>(B);
    return std::sqrt(var);
}

AsoResult aso(const ScoreSample& a, const ScoreSample& b, const AsoConfig& config) {
    validate_config(config);
    const ViolationRatio vr = compute_violation_ratio(a, b, config.dt);
    const double sigma = bootstrap_sigma(a, b, vr.ratio, config);
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const double rate = std::sqrt(static_cast<double>(n + m) /
                                  (static_cast<double>(n) * static_cast<double>(m)));
    const double eps = vr.ratio - rate * sigma * std_normal_quantile(config.alpha);
    AsoResult result;
    result.eps_min = std::clamp(eps, 0.0, 1.0);
    result.violation_ratio = vr.ratio;
    result.sigma_hat = sigma;
    result.n = n;
    result.m = m;
    result.config = config;
    return result;
}

ComparisonTable multi_aso(const NamedSamples& groups, const AsoConfig& config,
                          bool use_bonferroni) {
    validate_config(config);
    const std::size_t k = groups.size();
    if (k < 2) throw DomainError("multi_aso: need at least 2 groups");
    std::set<std::string> seen;
    for (const auto& [name, sample] : groups) {
        (void)sample;
        if (!seen.insert(name).second) {
            throw DuplicateName("multi_aso: duplicate group name '" + name + "'");
        }
    }

    ComparisonTable table;
    table.correction = use_bonferroni ? Correction::bonferroni : Correction::none;
    table.corrected_alpha =
        use_bonferroni ? config.alpha / static_cast<double>(k * (k - 1)) : config.alpha;
    table.names.reserve(k);
    for (const auto& [name, sample] : groups) {
        (void)sample;
        table.names.push_back(name);
    }
    table.eps_min.assign(k, std::vector<double>(k, 1.0));

    std::size_t pair_index = 0;
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (i == j) continue;
            AsoConfig pair_config = config;
            pair_config.alpha = table.corrected_alpha;
            pair_config.seed = derived_seed(config.seed, pair_index);
            table.eps_min[i][j] =
                aso(groups[i].second, groups[j].second, pair_config).eps_min;
            ++pair_index;
        }
    }
    return table;
}

std::vector<double> bonferroni_correction(const std::vector<double>& p_values) {
    const double k = static_cast<double>(p_values.size());
    std::vector<double> adjusted;
    adjusted.reserve(p_values.size());
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw DomainError("bonferroni_correction: p-values must lie in [0,1]");
        }
        adjusted.push_back(std::min(1.0, p * k));
    }
    return adjusted;
}

}  // namespace sigkit
