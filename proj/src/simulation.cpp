#include "sigkit/simulation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sigkit/aso.hpp"
#include "sigkit/classic_tests.hpp"
#include "sigkit/errors.hpp"
#include "sigkit/math.hpp"
#include "sigkit/parallel.hpp"

namespace sigkit {

namespace {

constexpr std::size_t kSimChunk = 16;

// Shortest decimal form that parses back to the same double; keeps the CSV
// round-trip exact.
std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double laplace_quantile(double location, double scale, double u) {
    if (u < 0.5) return location + scale * std::log(2.0 * u);
    return location - scale * std::log(2.0 * (1.0 - u));
}

}  // namespace

DistributionSpec DistributionSpec::make_normal(double mean, double std) {
    DistributionSpec s;
    s.family = DistFamily::normal;
    s.mean = mean;
    s.std = std;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::make_mixture(std::vector<MixtureComponent> components) {
    DistributionSpec s;
    s.family = DistFamily::normal_mixture;
    s.components = std::move(components);
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::make_laplace(double location, double scale) {
    DistributionSpec s;
    s.family = DistFamily::laplace;
    s.location = location;
    s.scale = scale;
    s.validate();
    return s;
}

DistributionSpec DistributionSpec::make_rayleigh(double scale) {
    DistributionSpec s;
    s.family = DistFamily::rayleigh;
    s.scale = scale;
    s.validate();
    return s;
}

void DistributionSpec::validate() const {
    switch (family) {
        case DistFamily::normal:
            if (!(std > 0.0)) throw ConfigError("normal: std must be > 0");
            break;
        case DistFamily::normal_mixture: {
            if (components.empty()) {
                throw ConfigError("normal_mixture: needs at least one component");
            }
            double weight_sum = 0.0;
            for (const auto& c : components) {
                if (!(c.std > 0.0)) throw ConfigError("normal_mixture: std must be > 0");
                if (!(c.weight > 0.0)) {
                    throw ConfigError("normal_mixture: weights must be > 0");
                }
                weight_sum += c.weight;
            }
            if (std::fabs(weight_sum - 1.0) > 1e-12) {
                throw ConfigError("normal_mixture: weights must sum to 1");
            }
            break;
        }
        case DistFamily::laplace:
            if (!(scale > 0.0)) throw ConfigError("laplace: scale must be > 0");
            break;
        case DistFamily::rayleigh:
            if (!(scale > 0.0)) throw ConfigError("rayleigh: scale must be > 0");
            break;
    }
}

double DistributionSpec::mean_value() const {
    switch (family) {
        case DistFamily::normal:
            return mean;
        case DistFamily::normal_mixture: {
            double acc = 0.0;
            for (const auto& c : components) acc += c.weight * c.mean;
            return acc;
        }
        case DistFamily::laplace:
            return location;
        case DistFamily::rayleigh:
            return scale * std::sqrt(std::acos(-1.0) / 2.0);
    }
    return 0.0;
}

DistributionSpec shifted(const DistributionSpec& spec, double gap) {
    DistributionSpec out = spec;
    switch (spec.family) {
        case DistFamily::normal:
            out.mean += gap;
            return out;
        case DistFamily::normal_mixture:
            if (out.components.size() >= 2) {
                out.components[1].mean += gap;
            } else {
                out.components[0].mean += gap;
            }
            return out;
        case DistFamily::laplace:
            out.location += gap;
            return out;
        case DistFamily::rayleigh:
            throw ConfigError("rayleigh has no location parameter to shift");
    }
    return out;
}

std::size_t canonical_index(TestKind test) {
    for (std::size_t i = 0; i < kCanonicalTests.size(); ++i) {
        if (kCanonicalTests[i] == test) return i;
    }
    throw ConfigError("unknown test kind");
}

const char* test_name(TestKind test) {
    switch (test) {
        case TestKind::aso: return "ASO";
        case TestKind::student_t: return "Student's t";
        case TestKind::bootstrap: return "Bootstrap";
        case TestKind::permutation: return "Permutation";
        case TestKind::wilcoxon: return "Wilcoxon";
        case TestKind::mann_whitney: return "Mann-Whitney U";
    }
    throw ConfigError("unknown test kind");
}

TestKind test_from_name(const std::string& name) {
    for (TestKind t : kCanonicalTests) {
        if (name == test_name(t)) return t;
    }
    throw ConfigError("unknown test name '" + name + "'");
}

ScoreSample sample_distribution(const DistributionSpec& spec, std::size_t n,
                                RngStream& rng) {
    if (n == 0) throw DomainError("sample_distribution: n must be >= 1");
    spec.validate();
    ScoreSample s;
    s.raw.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double v = 0.0;
        switch (spec.family) {
            case DistFamily::normal:
                v = spec.mean + spec.std * std_normal_quantile(rng.next_open_uniform());
                break;
            case DistFamily::normal_mixture: {
                const double u = rng.next_uniform();
                double cum = 0.0;
                const MixtureComponent* pick = &spec.components.back();
                for (const auto& c : spec.components) {
                    cum += c.weight;
                    if (u < cum) {
                        pick = &c;
                        break;
                    }
                }
                v = pick->mean + pick->std * std_normal_quantile(rng.next_open_uniform());
                break;
            }
            case DistFamily::laplace:
                v = laplace_quantile(spec.location, spec.scale, rng.next_open_uniform());
                break;
            case DistFamily::rayleigh:
                v = spec.scale * std::sqrt(-2.0 * std::log(rng.next_open_uniform()));
                break;
        }
        s.raw.push_back(v);
    }
    s.values = s.raw;
    std::sort(s.values.begin(), s.values.end());
    return s;
}

namespace {

// One experiment block: all simulations of all configured tests at a single
// x position (sample size or mean difference).
struct Block {
    double x;
    std::size_t size;
    DistributionSpec dist_a;
    DistributionSpec dist_b;
};

double run_single(TestKind test, const ScoreSample& a, const ScoreSample& b,
                  const ExperimentConfig& config, RngStream& stream) {
    switch (test) {
        case TestKind::aso: {
            AsoConfig aso_config;
            aso_config.alpha = config.alpha;
            aso_config.num_bootstrap = config.aso_inner_bootstrap;
            aso_config.dt = config.aso_dt;
            aso_config.seed = stream.next_u64();
            aso_config.num_jobs = 1;  // parallelism lives at the simulation level
            return aso(a, b, aso_config).eps_min;
        }
        case TestKind::student_t:
            return student_t_one_sided(a, b).p_value;
        case TestKind::bootstrap: {
            RngStream inner = derive_stream(stream.next_u64(), 0);
            return bootstrap_test(a, b, config.num_resamples, inner).p_value;
        }
        case TestKind::permutation: {
            RngStream inner = derive_stream(stream.next_u64(), 0);
            return permutation_test(a, b, config.num_resamples, inner).p_value;
        }
        case TestKind::wilcoxon:
            return wilcoxon_signed_rank(a, b).p_value;
        case TestKind::mann_whitney:
            return mann_whitney_u(a, b).p_value;
    }
    throw ConfigError("unknown test kind");
}

ErrorRateTable run_experiment(const ExperimentConfig& config,
                              const std::vector<Block>& blocks, ErrorKind kind,
                              const std::string& x_label) {
    if (config.tests.empty()) throw ConfigError("experiment: no tests configured");
    if (config.thresholds.empty()) throw ConfigError("experiment: no thresholds");

    ErrorRateTable table;
    table.error_kind = kind;
    table.x_label = x_label;
    table.config = config;

    for (std::size_t block_index = 0; block_index < blocks.size(); ++block_index) {
        const Block& block = blocks[block_index];
        block.dist_a.validate();
        block.dist_b.validate();
        // Each block gets its own derived master so streams never collide
        // across blocks; within a block, simulation sim of test t draws from
        // substream sim * 6 + canonical_index(t). Adding or removing a test
        // therefore never perturbs the other tests' draws.
        const std::uint64_t block_seed = derived_seed(config.seed, block_index);

        std::vector<RawStatBlock> block_raw(config.tests.size());
        for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
            const TestKind test = config.tests[ti];
            const std::size_t sims = test == TestKind::aso
                                         ? config.num_simulations_aso
                                         : config.num_simulations_other;
            if (sims == 0) throw ConfigError("experiment: simulation count is 0");
            block_raw[ti].x = block.x;
            block_raw[ti].test = test;
            block_raw[ti].values.assign(sims, 0.0);
            const std::size_t tindex = canonical_index(test);
            std::vector<double>& out = block_raw[ti].values;

            for_each_chunk(
                sims, kSimChunk, config.num_jobs,
                [&](std::size_t, std::size_t begin, std::size_t end) {
                    for (std::size_t sim = begin; sim < end; ++sim) {
                        RngStream stream = derive_stream(
                            block_seed, sim * kCanonicalTests.size() + tindex);
                        const ScoreSample a =
                            sample_distribution(block.dist_a, block.size, stream);
                        const ScoreSample b =
                            sample_distribution(block.dist_b, block.size, stream);
                        out[sim] = run_single(test, a, b, config, stream);
                    }
                });
        }

        for (double threshold : config.thresholds) {
            for (std::size_t ti = 0; ti < config.tests.size(); ++ti) {
                const std::vector<double>& values = block_raw[ti].values;
                std::size_t rejections = 0;
                for (double v : values) {
                    if (v < threshold) ++rejections;
                }
                double rate = static_cast<double>(rejections) /
                              static_cast<double>(values.size());
                if (kind == ErrorKind::type2) rate = 1.0 - rate;
                table.rows.push_back({block.x, threshold, config.tests[ti], rate});
            }
        }
        for (auto& rb : block_raw) table.raw.push_back(std::move(rb));
    }
    return table;
}

}  // namespace

ErrorRateTable run_type1_experiment(const ExperimentConfig& config) {
    if (!(config.dist_a == config.dist_b)) {
        throw ConfigError(
            "type I experiment samples under the null: dist_a must equal dist_b");
    }
    if (config.sample_sizes.empty()) throw ConfigError("experiment: no sample sizes");
    std::vector<Block> blocks;
    blocks.reserve(config.sample_sizes.size());
    for (std::size_t size : config.sample_sizes) {
        blocks.push_back(
            {static_cast<double>(size), size, config.dist_a, config.dist_b});
    }
    return run_experiment(config, blocks, ErrorKind::type1, "sample_size");
}

ErrorRateTable run_type2_experiment(const ExperimentConfig& config, Type2Mode mode) {
    std::vector<Block> blocks;
    if (mode == Type2Mode::by_size) {
        if (!(config.mean_gap > 0.0)) {
            throw ConfigError("type II experiment: mean gap must be positive");
        }
        if (config.sample_sizes.empty()) throw ConfigError("experiment: no sample sizes");
        const DistributionSpec expected = shifted(config.dist_b, config.mean_gap);
        if (!(config.dist_a == expected)) {
            throw ConfigError(
                "type II experiment: dist_a must be dist_b shifted by mean_gap");
        }
        for (std::size_t size : config.sample_sizes) {
            blocks.push_back(
                {static_cast<double>(size), size, config.dist_a, config.dist_b});
        }
        return run_experiment(config, blocks, ErrorKind::type2, "sample_size");
    }
    if (config.mean_gaps.empty()) throw ConfigError("experiment: no mean gaps");
    for (double gap : config.mean_gaps) {
        if (!(gap > 0.0)) {
            throw ConfigError("type II experiment: mean gap must be positive");
        }
        blocks.push_back(
            {gap, config.mean_fixed_size, shifted(config.dist_b, gap), config.dist_b});
    }
    return run_experiment(config, blocks, ErrorKind::type2, "mean_difference");
}

namespace {

std::vector<TestKind> tests_in_canonical_order(const ErrorRateTable& table) {
    std::vector<TestKind> tests;
    for (TestKind t : kCanonicalTests) {
        for (const auto& row : table.rows) {
            if (row.test == t) {
                tests.push_back(t);
                break;
            }
        }
    }
    return tests;
}

std::vector<double> x_positions(const ErrorRateTable& table) {
    std::vector<double> xs;
    for (const auto& row : table.rows) {
        if (std::find(xs.begin(), xs.end(), row.x) == xs.end()) xs.push_back(row.x);
    }
    return xs;
}

std::vector<double> thresholds_of(const ErrorRateTable& table) {
    std::vector<double> ts;
    for (const auto& row : table.rows) {
        if (std::find(ts.begin(), ts.end(), row.threshold) == ts.end()) {
            ts.push_back(row.threshold);
        }
    }
    return ts;
}

double rate_at(const ErrorRateTable& table, double x, double threshold, TestKind test) {
    for (const auto& row : table.rows) {
        if (row.x == x && row.threshold == threshold && row.test == test) {
            return row.rate;
        }
    }
    throw ConfigError("emit_table: missing cell");
}

std::string format_x(double x, const std::string& x_label) {
    if (x_label == "sample_size") {
        return std::to_string(static_cast<long long>(x));
    }
    return format_double(x);
}

nlohmann::ordered_json dist_to_json(const DistributionSpec& spec) {
    nlohmann::ordered_json j;
    switch (spec.family) {
        case DistFamily::normal:
            j["family"] = "normal";
            j["mean"] = spec.mean;
            j["std"] = spec.std;
            break;
        case DistFamily::normal_mixture: {
            j["family"] = "normal_mixture";
            nlohmann::ordered_json comps = nlohmann::ordered_json::array();
            for (const auto& c : spec.components) {
                comps.push_back({{"mean", c.mean}, {"std", c.std}, {"weight", c.weight}});
            }
            j["components"] = comps;
            break;
        }
        case DistFamily::laplace:
            j["family"] = "laplace";
            j["location"] = spec.location;
            j["scale"] = spec.scale;
            break;
        case DistFamily::rayleigh:
            j["family"] = "rayleigh";
            j["scale"] = spec.scale;
            break;
    }
    return j;
}

}  // namespace

std::string emit_table(const ErrorRateTable& table, TableFormat format) {
    if (table.rows.empty()) throw ConfigError("emit_table: empty table");
    const std::vector<TestKind> tests = tests_in_canonical_order(table);
    const std::vector<double> xs = x_positions(table);
    const std::vector<double> thresholds = thresholds_of(table);

    if (format == TableFormat::csv) {
        std::ostringstream out;
        out << table.x_label << ",threshold";
        for (TestKind t : tests) out << ',' << test_name(t);
        out << '\n';
        for (double x : xs) {
            for (double threshold : thresholds) {
                out << format_x(x, table.x_label) << ',' << format_double(threshold);
                for (TestKind t : tests) {
                    out << ',' << format_double(rate_at(table, x, threshold, t));
                }
                out << '\n';
            }
        }
        return out.str();
    }

    if (format == TableFormat::latex) {
        std::ostringstream out;
        const std::string x_title =
            table.x_label == "sample_size" ? "Sample Size" : "Mean Difference";
        out << "\\begin{tabular}{ll";
        for (std::size_t i = 0; i < tests.size(); ++i) out << 'r';
        out << "}\n\\toprule\n  " << x_title << " & Threshold";
        for (TestKind t : tests) out << " & " << test_name(t);
        out << " \\\\\n\\midrule\n";
        for (std::size_t xi = 0; xi < xs.size(); ++xi) {
            if (xi > 0) out << "\\midrule\n";
            for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
                out << (ti == 0 ? format_x(xs[xi], table.x_label) : std::string()) << " & "
                    << format_double(thresholds[ti]);
                for (TestKind t : tests) {
                    out << " & " << format_double(rate_at(table, xs[xi], thresholds[ti], t));
                }
                out << " \\\\\n";
            }
        }
        out << "\\bottomrule\n\\end{tabular}\n";
        return out.str();
    }

    nlohmann::ordered_json j;
    j["error_kind"] = table.error_kind == ErrorKind::type1 ? "type1" : "type2";
    j["x_label"] = table.x_label;
    j["thresholds"] = thresholds;
    nlohmann::ordered_json test_names = nlohmann::ordered_json::array();
    for (TestKind t : tests) test_names.push_back(test_name(t));
    j["tests"] = test_names;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (double x : xs) {
        for (double threshold : thresholds) {
            nlohmann::ordered_json row;
            row["x"] = x;
            row["threshold"] = threshold;
            nlohmann::ordered_json rates;
            for (TestKind t : tests) {
                rates[test_name(t)] = rate_at(table, x, threshold, t);
            }
            row["rates"] = rates;
            rows.push_back(row);
        }
    }
    j["rows"] = rows;

    const ExperimentConfig& c = table.config;
    nlohmann::ordered_json config;
    config["dist_a"] = dist_to_json(c.dist_a);
    config["dist_b"] = dist_to_json(c.dist_b);
    config["sample_sizes"] = c.sample_sizes;
    config["num_simulations_aso"] = c.num_simulations_aso;
    config["num_simulations_other"] = c.num_simulations_other;
    config["tau"] = c.tau;
    config["alpha"] = c.alpha;
    config["seed"] = c.seed;
    nlohmann::ordered_json config_tests = nlohmann::ordered_json::array();
    for (TestKind t : c.tests) config_tests.push_back(test_name(t));
    config["tests"] = config_tests;
    config["aso_inner_bootstrap"] = c.aso_inner_bootstrap;
    config["aso_dt"] = c.aso_dt;
    config["num_resamples"] = c.num_resamples;
    config["mean_gap"] = c.mean_gap;
    config["mean_gaps"] = c.mean_gaps;
    config["mean_fixed_size"] = c.mean_fixed_size;
    j["config"] = config;
    return j.dump(2) + "\n";
}

ErrorRateTable parse_table_csv(const std::string& text) {
    ErrorRateTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    std::vector<TestKind> tests;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!header_seen) {
            if (cells.size() < 3 || cells[1] != "threshold") {
                throw ParseError("expected header '<x>,threshold,<tests...>'", line_no, 1);
            }
            table.x_label = cells[0];
            for (std::size_t i = 2; i < cells.size(); ++i) {
                tests.push_back(test_from_name(cells[i]));
            }
            header_seen = true;
            continue;
        }
        if (cells.size() != tests.size() + 2) {
            throw ParseError("row width does not match header", line_no, 1);
        }
        const auto parse_cell = [&](const std::string& cell, std::size_t col) {
            double v = 0.0;
            const char* begin = cell.data();
            const char* end = begin + cell.size();
            const auto res = std::from_chars(begin, end, v);
            if (res.ec != std::errc() || res.ptr != end) {
                throw ParseError("expected a number, got '" + cell + "'", line_no, col);
            }
            return v;
        };
        const double x = parse_cell(cells[0], 1);
        const double threshold = parse_cell(cells[1], 2);
        for (std::size_t i = 0; i < tests.size(); ++i) {
            table.rows.push_back({x, threshold, tests[i], parse_cell(cells[i + 2], i + 3)});
        }
    }
    if (!header_seen) throw ParseError("empty table", 1, 1);
    return table;
}

std::string emit_plot_csv(const ErrorRateTable& table) {
    if (table.raw.empty()) throw ConfigError("emit_plot_csv: no raw statistics");
    std::ostringstream out;
    out << "x,test,rate\n";
    for (const auto& block : table.raw) {
        const double headline =
            block.test == TestKind::aso ? table.config.tau : table.config.alpha;
        std::size_t rejections = 0;
        for (double v : block.values) {
            if (v < headline) ++rejections;
        }
        double rate =
            static_cast<double>(rejections) / static_cast<double>(block.values.size());
        if (table.error_kind == ErrorKind::type2) rate = 1.0 - rate;
        out << format_x(block.x, table.x_label) << ',' << test_name(block.test) << ','
            << format_double(rate) << '\n';
    }
    return out.str();
}

std::string emit_raw_stats_csv(const ErrorRateTable& table) {
    if (table.raw.empty()) throw ConfigError("emit_raw_stats_csv: no raw statistics");
    std::ostringstream out;
    out << "x,test,sim,value\n";
    for (const auto& block : table.raw) {
        for (std::size_t sim = 0; sim < block.values.size(); ++sim) {
            out << format_x(block.x, table.x_label) << ',' << test_name(block.test) << ','
                << sim << ',' << format_double(block.values[sim]) << '\n';
        }
    }
    return out.str();
}

}  // namespace sigkit
