#pragma once

#include <cstdint>
#include <optional>

#include "sigkit/rng.hpp"
#include "sigkit/sample.hpp"

namespace sigkit {

// Every test here is one-sided: small p supports "a better than b"
// (stochastically larger scores in a).
struct PValueResult {
    double statistic;
    double p_value;
    std::size_t num_resamples = 0;           // 0 for analytic tests
    std::optional<std::uint64_t> seed;       // absent for analytic tests
};

// Resampling tests draw a child seed from rng and then run in fixed-size
// chunks seeded per chunk index, so p-values are identical for any num_jobs.
// Add-one smoothing keeps p off exact zero: p >= 1/(num_resamples+1).

// delta_obs = mean(a) - mean(b); resample both with replacement and count
// delta_star >= 2*delta_obs (the bootstrap null recenters delta_star on
// delta_obs, so this is "exceeds delta_obs when centered at zero").
PValueResult bootstrap_test(const ScoreSample& a, const ScoreSample& b,
                            std::size_t num_resamples, RngStream& rng,
                            unsigned num_jobs = 1);

// Pooled reshuffle into groups of sizes n and m, counting
// delta_perm >= delta_obs.
PValueResult permutation_test(const ScoreSample& a, const ScoreSample& b,
                              std::size_t num_resamples, RngStream& rng,
                              unsigned num_jobs = 1);

// Welch's unequal-variance t with Welch-Satterthwaite degrees of freedom.
PValueResult student_t_one_sided(const ScoreSample& a, const ScoreSample& b);

// U statistic from midranks; normal approximation with tie-corrected
// variance and 0.5 continuity correction.
PValueResult mann_whitney_u(const ScoreSample& a, const ScoreSample& b);

// Positionally paired: score i of a against score i of b in input order
// (samples keep their raw order for exactly this). Zero differences are
// dropped; ties in |d| midranked; normal approximation with tie correction.
PValueResult wilcoxon_signed_rank(const ScoreSample& a, const ScoreSample& b);

}  // namespace sigkit
