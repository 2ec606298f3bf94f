#include "sigkit/sample_size.hpp"

#include <atomic>
#include <cmath>

#include "sigkit/classic_tests.hpp"
#include "sigkit/errors.hpp"
#include "sigkit/parallel.hpp"

namespace sigkit {

namespace {

constexpr std::size_t kPowerChunk = 16;

}  // namespace

double bootstrap_power_analysis(const ScoreSample& s, const PowerConfig& config) {
    const std::size_t n = s.size();
    if (n < 2) throw DomainError("bootstrap_power_analysis: need at least 2 scores");
    if (!(config.lift > 0.0)) {
        throw DomainError("bootstrap_power_analysis: lift must be positive");
    }
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) {
        throw DomainError("bootstrap_power_analysis: alpha must lie in (0,1)");
    }
    if (config.num_bootstrap == 0) {
        throw DomainError("bootstrap_power_analysis: num_bootstrap must be >= 1");
    }

    ScoreSample lifted = s;
    if (config.additive_lift) {
        double mean_abs = 0.0;
        for (double v : s.values) mean_abs += std::fabs(v);
        mean_abs /= static_cast<double>(n);
        const double shift = (config.lift - 1.0) * mean_abs;
        for (double& v : lifted.values) v += shift;
        for (double& v : lifted.raw) v += shift;
    } else {
        // lift > 0 preserves order, so the values stay sorted.
        for (double& v : lifted.values) v *= config.lift;
        for (double& v : lifted.raw) v *= config.lift;
    }

    std::atomic<std::size_t> significant{0};
    for_each_chunk(
        config.num_bootstrap, kPowerChunk, config.num_jobs,
        [&](std::size_t chunk, std::size_t begin, std::size_t end) {
            RngStream st = derive_stream(config.seed, chunk);
            std::size_t local = 0;
            for (std::size_t i = begin; i < end; ++i) {
                const ScoreSample s_star = inverse_transform_resample(s, n, st);
                const ScoreSample l_star = inverse_transform_resample(lifted, n, st);
                RngStream inner = derive_stream(st.next_u64(), 0);
                const PValueResult r =
                    config.test == PowerTest::bootstrap
                        ? bootstrap_test(l_star, s_star, config.num_inner_resamples,
                                         inner)
                        : permutation_test(l_star, s_star, config.num_inner_resamples,
                                           inner);
                if (r.p_value < config.alpha) ++local;
            }
            significant += local;
        });

    return static_cast<double>(significant.load()) /
           static_cast<double>(config.num_bootstrap);
}

double aso_uncertainty_reduction(long long m_old, long long n_old, long long m_new,
                                 long long n_new) {
    if (m_old < 1 || n_old < 1 || m_new < 1 || n_new < 1) {
        throw DomainError("aso_uncertainty_reduction: all sizes must be >= 1");
    }
    const double old_rate = static_cast<double>(m_old) * static_cast<double>(n_old) /
                            static_cast<double>(m_old + n_old);
    const double new_rate = static_cast<double>(m_new) * static_cast<double>(n_new) /
                            static_cast<double>(m_new + n_new);
    return std::sqrt(new_rate / old_rate);
}

}  // namespace sigkit
