#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sigkit/sample.hpp"

namespace sigkit {

struct AsoConfig {
    double alpha = 0.05;
    std::size_t num_bootstrap = 1000;
    double dt = 0.005;
    std::uint64_t seed = 0;
    unsigned num_jobs = 1;
};

struct AsoResult {
    double eps_min;
    double violation_ratio;
    double sigma_hat;
    std::size_t n;
    std::size_t m;
    AsoConfig config;
};

enum class Correction { bonferroni, none };

struct ComparisonTable {
    std::vector<std::string> names;
    std::vector<std::vector<double>> eps_min;
    double corrected_alpha;
    Correction correction;
};

struct ViolationRatio {
    double ratio;
    double w2_squared;
};

// Violation ratio of "a better than b" and the squared quantile-difference
// mass, both evaluated on the grid t in {dt, 2dt, ...} below 1. diff(t) =
// G^-1(t) - F^-1(t) with F from a, G from b; w2_squared = sum diff^2 * dt;
// the numerator keeps only grid points where F^-1 < G^-1. Degenerate rule:
// if w2_squared <= 1e-12 the ratio is 0.5 (no evidence of order either way,
// and the unique value compatible with antisymmetry).
ViolationRatio compute_violation_ratio(const ScoreSample& a, const ScoreSample& b,
                                       double dt);

// Bootstrap estimate of the deviation scale of the violation ratio: B
// resamples of both samples, v_i = sqrt(nm/(n+m)) * (ratio_i - observed),
// sigma = population standard deviation of v. Iterations are chunked and
// chunk j draws from derive_stream(config.seed, j), so the result does not
// depend on config.num_jobs.
double bootstrap_sigma(const ScoreSample& a, const ScoreSample& b,
                       double observed_ratio, const AsoConfig& config);

// The almost-stochastic-order test for "a better than b". eps_min is the
// one-sided upper confidence bound on the violation ratio; callers reject
// the null (no almost stochastic dominance) when eps_min < tau.
AsoResult aso(const ScoreSample& a, const ScoreSample& b, const AsoConfig& config = {});

using NamedSamples = std::vector<std::pair<std::string, ScoreSample>>;

// All ordered pairwise comparisons. Entry (i,j) is aso(group_i, group_j) run
// at the corrected alpha; the diagonal is fixed at 1.0. Pair p (row-major,
// diagonal skipped) uses seed derived_seed(config.seed, p), so the table does
// not depend on evaluation order.
ComparisonTable multi_aso(const NamedSamples& groups, const AsoConfig& config = {},
                          bool use_bonferroni = true);

std::vector<double> bonferroni_correction(const std::vector<double>& p_values);

}  // namespace sigkit
