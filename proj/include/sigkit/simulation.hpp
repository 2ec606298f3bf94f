#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sigkit/rng.hpp"
#include "sigkit/sample.hpp"

namespace sigkit {

enum class DistFamily { normal, normal_mixture, laplace, rayleigh };

struct MixtureComponent {
    double mean;
    double std;
    double weight;

    bool operator==(const MixtureComponent&) const = default;
};

struct DistributionSpec {
    DistFamily family = DistFamily::normal;
    double mean = 0.0;   // normal
    double std = 1.0;    // normal
    std::vector<MixtureComponent> components;  // normal_mixture
    double location = 0.0;  // laplace
    double scale = 1.0;     // laplace / rayleigh

    static DistributionSpec make_normal(double mean, double std);
    static DistributionSpec make_mixture(std::vector<MixtureComponent> components);
    static DistributionSpec make_laplace(double location, double scale);
    static DistributionSpec make_rayleigh(double scale);

    // Throws ConfigError on non-positive scales or mixture weights that are
    // non-positive or do not sum to 1 within 1e-12.
    void validate() const;

    double mean_value() const;

    bool operator==(const DistributionSpec&) const = default;
};

// Returns spec with its mean moved up by gap. For mixtures only the second
// component's mean moves (the first stays the shared base); rayleigh has no
// location parameter and cannot be shifted.
DistributionSpec shifted(const DistributionSpec& spec, double gap);

enum class TestKind { aso, student_t, bootstrap, permutation, wilcoxon, mann_whitney };

// Canonical reporting order. Per-simulation substreams are indexed by
// position in this list, so the order is part of the seeding contract.
inline constexpr std::array<TestKind, 6> kCanonicalTests = {
    TestKind::aso,       TestKind::student_t, TestKind::bootstrap,
    TestKind::permutation, TestKind::wilcoxon,  TestKind::mann_whitney};

std::size_t canonical_index(TestKind test);
const char* test_name(TestKind test);
// Inverse of test_name; throws ConfigError for unknown names.
TestKind test_from_name(const std::string& name);

struct ExperimentConfig {
    DistributionSpec dist_a;
    DistributionSpec dist_b;
    std::vector<std::size_t> sample_sizes = {5, 10, 15, 20};
    std::size_t num_simulations_aso = 500;
    std::size_t num_simulations_other = 1000;
    std::vector<double> thresholds = {0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    double tau = 0.2;
    double alpha = 0.05;
    std::uint64_t seed = 0;
    std::vector<TestKind> tests{kCanonicalTests.begin(), kCanonicalTests.end()};
    // Inner-loop knobs. The reduced bootstrap count keeps a full four-size
    // sweep fast while staying well inside the Monte Carlo noise floor.
    std::size_t aso_inner_bootstrap = 500;
    double aso_dt = 0.005;
    std::size_t num_resamples = 1000;
    // Type II geometry: fixed gap when sweeping sizes, gap list and fixed
    // size when sweeping the mean difference.
    double mean_gap = 0.5;
    std::vector<double> mean_gaps = {0.25, 0.5, 0.75, 1.0};
    std::size_t mean_fixed_size = 5;
    unsigned num_jobs = 1;
};

enum class ErrorKind { type1, type2 };
enum class Type2Mode { by_size, by_mean_difference };

struct ErrorRateRow {
    double x;  // sample size or mean difference
    double threshold;
    TestKind test;
    double rate;

    bool operator==(const ErrorRateRow&) const = default;
};

// Per-simulation statistics (eps_min for ASO, p-values otherwise) for one
// (x, test) cell, in simulation-index order.
struct RawStatBlock {
    double x;
    TestKind test;
    std::vector<double> values;
};

struct ErrorRateTable {
    ErrorKind error_kind = ErrorKind::type1;
    std::string x_label;  // "sample_size" or "mean_difference"
    std::vector<ErrorRateRow> rows;
    ExperimentConfig config;
    std::vector<RawStatBlock> raw;
};

// n i.i.d. draws; raw order preserved (paired tests use it).
ScoreSample sample_distribution(const DistributionSpec& spec, std::size_t n,
                                RngStream& rng);

// Same-distribution sampling: per (size, simulation, test) draw two samples
// and record the test statistic; a rejection at threshold t means
// statistic < t (p-value or eps_min alike). Requires dist_a == dist_b.
ErrorRateTable run_type1_experiment(const ExperimentConfig& config);

// dist_a shifted above dist_b. by_size sweeps sample_sizes at mean_gap;
// by_mean_difference sweeps mean_gaps at mean_fixed_size. Rates are Type II:
// the fraction of simulations NOT rejecting.
ErrorRateTable run_type2_experiment(const ExperimentConfig& config, Type2Mode mode);

enum class TableFormat { csv, latex, json };

// Wide-format serialization: one row per (x, threshold), test columns in
// canonical order. The JSON layout is documented in docs/table-schema.md.
std::string emit_table(const ErrorRateTable& table, TableFormat format);

// Inverse of emit_table(csv): recovers x_label and the long-form rows.
ErrorRateTable parse_table_csv(const std::string& text);

// Plot-friendly projection: x,test,rate at the headline thresholds (tau for
// ASO, alpha for the p-value tests), computed from the raw statistics.
std::string emit_plot_csv(const ErrorRateTable& table);

// Raw per-simulation statistics: x,test,sim,value.
std::string emit_raw_stats_csv(const ErrorRateTable& table);

}  // namespace sigkit
