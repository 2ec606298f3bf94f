#include "sigkit/sample.hpp"

#include <algorithm>
#include <cmath>

#include "sigkit/errors.hpp"

namespace sigkit {

ScoreSample make_sample(std::span<const double> raw) {
    if (raw.empty()) throw EmptySample("make_sample: sample is empty");
    for (double v : raw) {
        if (!std::isfinite(v)) {
            throw NonFiniteScore("make_sample: sample contains a NaN or infinite score");
        }
    }
    ScoreSample s;
    s.raw.assign(raw.begin(), raw.end());
    s.values = s.raw;
    std::sort(s.values.begin(), s.values.end());
    return s;
}

std::size_t quantile_index(std::size_t n, double p) {
    const double idx = std::ceil(static_cast<double>(n) * p) - 1.0;
    if (idx < 0.0) return 0;
    if (idx >= static_cast<double>(n - 1)) return n - 1;
    return static_cast<std::size_t>(idx);
}

double empirical_quantile(const ScoreSample& s, double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("empirical_quantile: p must lie in [0,1]");
    }
    return s.values[quantile_index(s.size(), p)];
}

ScoreSample inverse_transform_resample(const ScoreSample& s, std::size_t size,
                                       RngStream& rng) {
    if (size == 0) throw DomainError("inverse_transform_resample: size must be >= 1");
    const std::size_t n = s.size();
    ScoreSample out;
    out.raw.reserve(size);
    std::vector<std::size_t> counts(n, 0);
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t k = quantile_index(n, rng.next_uniform());
        counts[k] += 1;
        out.raw.push_back(s.values[k]);
    }
    // s.values is sorted, so expanding the counts yields the sorted resample
    // without a comparison sort.
    out.values.reserve(size);
    for (std::size_t k = 0; k < n; ++k) {
        out.values.insert(out.values.end(), counts[k], s.values[k]);
    }
    return out;
}

}  // namespace sigkit
