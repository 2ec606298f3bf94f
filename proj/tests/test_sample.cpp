#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "sigkit/errors.hpp"
#include "sigkit/rng.hpp"
#include "sigkit/sample.hpp"

using sigkit::empirical_quantile;
using sigkit::inverse_transform_resample;
using sigkit::make_sample;
using sigkit::quantile_index;
using sigkit::RngStream;
using sigkit::ScoreSample;

TEST_SUITE("make_sample") {
    TEST_CASE("sorts values and keeps the raw order") {
        const ScoreSample s = make_sample({3.0, 1.0, 2.0});
        CHECK(s.values == std::vector<double>{1.0, 2.0, 3.0});
        CHECK(s.raw == std::vector<double>{3.0, 1.0, 2.0});
        CHECK(s.size() == 3);
    }

    TEST_CASE("singleton sample works") {
        const ScoreSample s = make_sample({7.5});
        CHECK(s.values == std::vector<double>{7.5});
    }

    TEST_CASE("rejects empty input") {
        CHECK_THROWS_AS(make_sample({}), sigkit::EmptySample);
    }

    TEST_CASE("rejects non-finite scores") {
        CHECK_THROWS_AS(make_sample({1.0, NAN}), sigkit::NonFiniteScore);
        CHECK_THROWS_AS(make_sample({1.0, INFINITY}), sigkit::NonFiniteScore);
        CHECK_THROWS_AS(make_sample({-INFINITY}), sigkit::NonFiniteScore);
    }
}

TEST_SUITE("empirical_quantile") {
    TEST_CASE("worked examples") {
        const ScoreSample s = make_sample({1.0, 2.0, 3.0});
        CHECK(empirical_quantile(s, 0.5) == 2.0);
        CHECK(empirical_quantile(s, 0.0) == 1.0);
        CHECK(empirical_quantile(s, 1.0) == 3.0);
        const ScoreSample t = make_sample({10.0, 20.0, 30.0, 40.0});
        CHECK(empirical_quantile(t, 0.26) == 20.0);
        CHECK(empirical_quantile(t, 0.25) == 10.0);
    }

    TEST_CASE("index formula is ceil(n*p)-1, clamped") {
        CHECK(quantile_index(3, 0.5) == 1);
        CHECK(quantile_index(3, 0.0) == 0);
        CHECK(quantile_index(3, 1.0) == 2);
        CHECK(quantile_index(4, 0.26) == 1);
        CHECK(quantile_index(1, 0.999) == 0);
        CHECK(quantile_index(5, 0.2) == 0);
        CHECK(quantile_index(5, 0.2000001) == 1);
    }

    TEST_CASE("is monotone in p and always a sample member") {
        const ScoreSample s = make_sample({5.0, -1.0, 3.3, 3.3, 100.0, 0.0});
        double prev = empirical_quantile(s, 0.0);
        for (int i = 1; i <= 100; ++i) {
            const double q = empirical_quantile(s, i / 100.0);
            CHECK(q >= prev);
            CHECK(std::find(s.values.begin(), s.values.end(), q) != s.values.end());
            prev = q;
        }
    }

    TEST_CASE("every sorted element is reachable") {
        const ScoreSample s = make_sample({4.0, 2.0, 9.0, 7.0});
        for (std::size_t i = 0; i < s.size(); ++i) {
            // p chosen strictly inside the step for element i
            const double p = (i + 0.5) / static_cast<double>(s.size());
            CHECK(empirical_quantile(s, p) == s.values[i]);
        }
    }

    TEST_CASE("rejects p outside [0,1]") {
        const ScoreSample s = make_sample({1.0});
        CHECK_THROWS_AS(empirical_quantile(s, -0.01), sigkit::DomainError);
        CHECK_THROWS_AS(empirical_quantile(s, 1.01), sigkit::DomainError);
    }
}

TEST_SUITE("inverse_transform_resample") {
    TEST_CASE("is deterministic for a fixed stream") {
        const ScoreSample s = make_sample({1.0, 5.0, 2.0, 8.0, 3.0});
        RngStream a(11, 0);
        RngStream b(11, 0);
        const ScoreSample ra = inverse_transform_resample(s, 5, a);
        const ScoreSample rb = inverse_transform_resample(s, 5, b);
        CHECK(ra.values == rb.values);
        CHECK(ra.raw == rb.raw);
    }

    TEST_CASE("resampled values come from the source sample") {
        const ScoreSample s = make_sample({1.0, 5.0, 2.0});
        RngStream rng(12, 0);
        const ScoreSample r = inverse_transform_resample(s, 100, rng);
        CHECK(r.size() == 100);
        for (double v : r.raw) {
            CHECK(std::find(s.values.begin(), s.values.end(), v) != s.values.end());
        }
        CHECK(std::is_sorted(r.values.begin(), r.values.end()));
    }

    TEST_CASE("single-atom sample resamples to itself") {
        const ScoreSample s = make_sample({4.2});
        RngStream rng(13, 0);
        const ScoreSample r = inverse_transform_resample(s, 10, rng);
        for (double v : r.values) CHECK(v == 4.2);
    }

    TEST_CASE("two-atom sample splits roughly evenly") {
        const ScoreSample s = make_sample({0.0, 1.0});
        RngStream rng(14, 0);
        const ScoreSample r = inverse_transform_resample(s, 100000, rng);
        const double ones =
            static_cast<double>(std::count(r.values.begin(), r.values.end(), 1.0));
        const double frac = ones / 100000.0;
        CHECK(frac > 0.47);
        CHECK(frac < 0.53);
    }

    TEST_CASE("consumes exactly one uniform per draw") {
        const ScoreSample s = make_sample({1.0, 2.0, 3.0});
        RngStream a(15, 0);
        RngStream b(15, 0);
        inverse_transform_resample(s, 7, a);
        for (int i = 0; i < 7; ++i) b.next_uniform();
        CHECK(a.next_u64() == b.next_u64());
    }
}
