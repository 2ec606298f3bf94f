#pragma once

#include <cstdint>

#include "sigkit/sample.hpp"

namespace sigkit {

enum class PowerTest { bootstrap, permutation };

struct PowerConfig {
    double lift = 1.25;
    std::size_t num_bootstrap = 1000;
    double alpha = 0.05;
    PowerTest test = PowerTest::bootstrap;
    std::uint64_t seed = 0;
    // Resamples used by each inner significance test run.
    std::size_t num_inner_resamples = 1000;
    // Off by default: add (lift - 1) * mean|s| instead of multiplying.
    // Multiplicative lift on samples containing negatives does not uniformly
    // improve scores; this flag gives a shift that always does.
    bool additive_lift = false;
    unsigned num_jobs = 1;
};

// Estimates the power of detecting a `lift`-sized improvement on scores
// shaped like s: repeatedly resample s and its lifted copy, run the
// configured one-sided test (lifted vs original), and return the fraction of
// runs with p < alpha. High power means the sample is large/tight enough to
// notice an improvement of that size; low power means collect more scores.
double bootstrap_power_analysis(const ScoreSample& s, const PowerConfig& config = {});

// Factor by which the width of the eps_min confidence term shrinks when
// moving from (m_old, n_old) to (m_new, n_new) scores: the ratio of the
// effective-sample-size rates sqrt(nm/(n+m)).
double aso_uncertainty_reduction(long long m_old, long long n_old, long long m_new,
                                 long long n_new);

}  // namespace sigkit
