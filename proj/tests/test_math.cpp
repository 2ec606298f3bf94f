#include <doctest.h>

#include <cmath>

#include "sigkit/errors.hpp"
#include "sigkit/math.hpp"

using sigkit::normal_cdf;
using sigkit::normal_sf;
using sigkit::regularized_incomplete_beta;
using sigkit::std_normal_quantile;
using sigkit::student_t_sf;

TEST_SUITE("std_normal_quantile") {
    TEST_CASE("median is exactly zero") {
        CHECK(std_normal_quantile(0.5) == 0.0);
    }

    TEST_CASE("matches reference values to 1e-9") {
        // Reference: scipy.stats.norm.ppf
        struct Point {
            double p, z;
        };
        const Point points[] = {
            {0.05, -1.6448536269514729},
            {0.95, 1.6448536269514722},
            {0.025, -1.9599639845400545},
            {0.975, 1.959963984540054},
            {0.001, -3.090232306167813},
            {0.999, 3.090232306167813},
            {1e-9, -5.9978070150076865},
            {0.999999999, 5.997807019601637},
            {0.3, -0.5244005127080409},
            {0.7, 0.5244005127080407},
            {0.158655253931457, -1.0},
        };
        for (const auto& pt : points) {
            CHECK(std_normal_quantile(pt.p) == doctest::Approx(pt.z).epsilon(1e-9));
        }
    }

    TEST_CASE("is antisymmetric around 0.5") {
        for (double p : {0.01, 0.1, 0.2, 0.33, 0.49}) {
            CHECK(std_normal_quantile(p) ==
                  doctest::Approx(-std_normal_quantile(1.0 - p)).epsilon(1e-9));
        }
    }

    TEST_CASE("inverts the normal cdf") {
        for (double x : {-3.0, -1.5, -0.1, 0.0, 0.4, 2.2}) {
            CHECK(std_normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
        }
    }

    TEST_CASE("rejects probabilities outside (0,1)") {
        CHECK_THROWS_AS(std_normal_quantile(0.0), sigkit::DomainError);
        CHECK_THROWS_AS(std_normal_quantile(1.0), sigkit::DomainError);
        CHECK_THROWS_AS(std_normal_quantile(-0.1), sigkit::DomainError);
        CHECK_THROWS_AS(std_normal_quantile(1.1), sigkit::DomainError);
    }
}

TEST_SUITE("normal_cdf") {
    TEST_CASE("known values") {
        CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(normal_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-12));
        CHECK(normal_cdf(-1.96) == doctest::Approx(0.024997895148220435).epsilon(1e-12));
    }

    TEST_CASE("sf is the complement") {
        for (double x : {-2.0, -0.5, 0.0, 0.7, 3.1}) {
            CHECK(normal_sf(x) == doctest::Approx(1.0 - normal_cdf(x)).epsilon(1e-12));
        }
    }
}

TEST_SUITE("regularized_incomplete_beta") {
    TEST_CASE("boundary values") {
        CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
        CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    }

    TEST_CASE("uniform case I_x(1,1) = x") {
        for (double x : {0.1, 0.25, 0.5, 0.9}) {
            CHECK(regularized_incomplete_beta(1.0, 1.0, x) ==
                  doctest::Approx(x).epsilon(1e-12));
        }
    }

    TEST_CASE("matches reference values") {
        // Reference: scipy.special.betainc
        CHECK(regularized_incomplete_beta(2.0, 3.0, 0.4) ==
              doctest::Approx(0.5248).epsilon(1e-10));
        CHECK(regularized_incomplete_beta(0.5, 0.5, 0.3) ==
              doctest::Approx(0.36901011956554536).epsilon(1e-10));
        CHECK(regularized_incomplete_beta(5.0, 1.0, 0.8) ==
              doctest::Approx(0.32768).epsilon(1e-10));
    }

    TEST_CASE("symmetry I_x(a,b) = 1 - I_{1-x}(b,a)") {
        CHECK(regularized_incomplete_beta(2.5, 4.0, 0.35) ==
              doctest::Approx(1.0 - regularized_incomplete_beta(4.0, 2.5, 0.65))
                  .epsilon(1e-12));
    }
}

TEST_SUITE("student_t_sf") {
    TEST_CASE("t = 0 gives one half") {
        CHECK(student_t_sf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-12));
    }

    TEST_CASE("matches reference values") {
        // Reference: scipy.stats.t.sf
        CHECK(student_t_sf(1.0954451150103324, 6.0) ==
              doctest::Approx(0.1576667981006148).epsilon(1e-10));
        CHECK(student_t_sf(2.0, 10.0) ==
              doctest::Approx(0.036694017385370196).epsilon(1e-9));
        CHECK(student_t_sf(-2.0, 10.0) ==
              doctest::Approx(1.0 - 0.036694017385370196).epsilon(1e-9));
    }

    TEST_CASE("infinite statistics saturate") {
        CHECK(student_t_sf(INFINITY, 3.0) == 0.0);
        CHECK(student_t_sf(-INFINITY, 3.0) == 1.0);
    }

    TEST_CASE("large df approaches the normal tail") {
        CHECK(student_t_sf(1.6448536269514722, 1e7) ==
              doctest::Approx(0.05).epsilon(1e-5));
    }
}
