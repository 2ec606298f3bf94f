#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sigkit/rng.hpp"

namespace sigkit {

// A score sample. `values` is sorted ascending and drives all quantile
// machinery; `raw` keeps the original input order, which positionally paired
// tests need (sorting would scramble the pairing).
struct ScoreSample {
    std::vector<double> values;
    std::vector<double> raw;

    std::size_t size() const { return values.size(); }
};

// Validates (non-empty, all finite) and sorts.
ScoreSample make_sample(std::span<const double> raw);

inline ScoreSample make_sample(std::initializer_list<double> raw) {
    return make_sample(std::span<const double>(raw.begin(), raw.size()));
}

// 0-based index into a sorted sample of size n for probability p:
// ceil(n*p) - 1 clamped to [0, n-1]. Left-continuous step rule, no
// interpolation.
std::size_t quantile_index(std::size_t n, double p);

double empirical_quantile(const ScoreSample& s, double p);

// Bootstrap resample by inverse transform sampling: draws `size` uniforms and
// maps each through the empirical quantile function. Consumes exactly `size`
// values from rng.
ScoreSample inverse_transform_resample(const ScoreSample& s, std::size_t size,
                                       RngStream& rng);

}  // namespace sigkit
