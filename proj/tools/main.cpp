#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sigkit/aso.hpp"
#include "sigkit/classic_tests.hpp"
#include "sigkit/errors.hpp"
#include "sigkit/sample_size.hpp"
#include "sigkit/score_file.hpp"
#include "sigkit/simulation.hpp"

namespace {

using nlohmann::ordered_json;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw sigkit::Error("cannot write output file '" + out_path + "'");
    out << text;
}

std::string format_number(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

// Two-column key/value rendering for the human-readable format.
std::string render_kv(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::size_t width = 0;
    for (const auto& [k, v] : kv) width = std::max(width, k.size());
    std::ostringstream out;
    for (const auto& [k, v] : kv) {
        out << k << std::string(width - k.size() + 2, ' ') << v << '\n';
    }
    return out.str();
}

// Pads the cells of already-serialized CSV into aligned text columns.
std::string render_csv_as_table(const std::string& csv) {
    std::vector<std::vector<std::string>> grid;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            cells.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        grid.push_back(std::move(cells));
    }
    std::vector<std::size_t> widths;
    for (const auto& row : grid) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) {
            widths[c] = std::max(widths[c], row[c].size());
        }
    }
    std::ostringstream out;
    for (const auto& row : grid) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) {
                out << std::string(widths[c] - row[c].size() + 2, ' ');
            }
        }
        out << '\n';
    }
    return out.str();
}

sigkit::ScoreSample pick_group(const sigkit::ScoreFile& file, const std::string& path,
                               const std::string& group_flag,
                               const std::string& group_name) {
    const std::vector<double>* values = nullptr;
    if (!group_name.empty()) {
        values = file.find(group_name);
        if (!values) {
            throw sigkit::Error("score file '" + path + "' has no group '" + group_name +
                                "' (" + group_flag + ")");
        }
    } else if (file.groups.size() == 1) {
        values = &file.groups.front().second;
    } else {
        throw sigkit::Error("score file '" + path + "' has " +
                            std::to_string(file.groups.size()) +
                            " groups; pick one with " + group_flag);
    }
    return sigkit::make_sample(*values);
}

struct FormatOption {
    std::string value = "table";
};

void add_format_option(CLI::App* cmd, FormatOption& fmt) {
    cmd->add_option("--format", fmt.value, "Output format")
        ->check(CLI::IsMember({"json", "csv", "latex", "table"}))
        ->capture_default_str();
}

std::string latex_kv(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream out;
    out << "\\begin{tabular}{lr}\n\\toprule\n";
    for (const auto& [k, v] : kv) out << k << " & " << v << " \\\\\n";
    out << "\\bottomrule\n\\end{tabular}\n";
    return out.str();
}

std::string csv_kv(const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ostringstream header;
    std::ostringstream row;
    for (std::size_t i = 0; i < kv.size(); ++i) {
        header << kv[i].first << (i + 1 < kv.size() ? "," : "\n");
        row << kv[i].second << (i + 1 < kv.size() ? "," : "\n");
    }
    return header.str() + row.str();
}

std::string render_result(const std::string& format, const ordered_json& j,
                          const std::vector<std::pair<std::string, std::string>>& kv) {
    if (format == "json") return j.dump(2) + "\n";
    if (format == "csv") return csv_kv(kv);
    if (format == "latex") return latex_kv(kv);
    return render_kv(kv);
}

// ---- aso ----------------------------------------------------------------

struct AsoArgs {
    std::string a_path, b_path, a_group, b_group;
    sigkit::AsoConfig config;
    double tau = 0.2;
    FormatOption format;
    std::string out;
};

void run_aso(const AsoArgs& args) {
    const sigkit::ScoreFile fa = sigkit::load_scores(args.a_path);
    const sigkit::ScoreFile fb = sigkit::load_scores(args.b_path);
    const sigkit::ScoreSample a = pick_group(fa, args.a_path, "--a-group", args.a_group);
    const sigkit::ScoreSample b = pick_group(fb, args.b_path, "--b-group", args.b_group);
    const sigkit::AsoResult r = sigkit::aso(a, b, args.config);
    const bool reject = r.eps_min < args.tau;

    ordered_json j;
    j["eps_min"] = r.eps_min;
    j["violation_ratio"] = r.violation_ratio;
    j["sigma_hat"] = r.sigma_hat;
    j["n"] = r.n;
    j["m"] = r.m;
    j["alpha"] = r.config.alpha;
    j["num_bootstrap"] = r.config.num_bootstrap;
    j["dt"] = r.config.dt;
    j["seed"] = r.config.seed;
    j["tau"] = args.tau;
    j["reject"] = reject;
    j["rule"] = "eps_min < tau means: A better than B";

    std::vector<std::pair<std::string, std::string>> kv = {
        {"eps_min", format_number(r.eps_min)},
        {"violation_ratio", format_number(r.violation_ratio)},
        {"sigma_hat", format_number(r.sigma_hat)},
        {"n", std::to_string(r.n)},
        {"m", std::to_string(r.m)},
        {"alpha", format_number(r.config.alpha)},
        {"num_bootstrap", std::to_string(r.config.num_bootstrap)},
        {"dt", format_number(r.config.dt)},
        {"seed", std::to_string(r.config.seed)},
        {"tau", format_number(args.tau)},
        {"verdict", reject ? "reject H0 (eps_min < tau): A better than B"
                           : "fail to reject H0 (eps_min >= tau)"},
        {"rule", "eps_min < tau means: A better than B"},
    };
    write_output(render_result(args.format.value, j, kv), args.out);
}

// ---- multi-aso ----------------------------------------------------------

struct MultiAsoArgs {
    std::string scores_path;
    sigkit::AsoConfig config;
    bool no_bonferroni = false;
    FormatOption format;
    std::string out;
};

void run_multi_aso(const MultiAsoArgs& args) {
    const sigkit::ScoreFile file = sigkit::load_scores(args.scores_path);
    sigkit::NamedSamples groups;
    for (const auto& [name, values] : file.groups) {
        groups.emplace_back(name, sigkit::make_sample(values));
    }
    const sigkit::ComparisonTable table =
        sigkit::multi_aso(groups, args.config, !args.no_bonferroni);

    if (args.format.value == "json") {
        ordered_json j;
        j["names"] = table.names;
        j["eps_min"] = table.eps_min;
        j["corrected_alpha"] = table.corrected_alpha;
        j["correction"] =
            table.correction == sigkit::Correction::bonferroni ? "bonferroni" : "none";
        write_output(j.dump(2) + "\n", args.out);
        return;
    }

    std::ostringstream csv;
    csv << "group";
    for (const auto& name : table.names) csv << ',' << name;
    csv << '\n';
    for (std::size_t i = 0; i < table.names.size(); ++i) {
        csv << table.names[i];
        for (std::size_t jx = 0; jx < table.names.size(); ++jx) {
            csv << ',' << format_number(table.eps_min[i][jx]);
        }
        csv << '\n';
    }

    if (args.format.value == "csv") {
        write_output(csv.str(), args.out);
        return;
    }
    if (args.format.value == "latex") {
        std::ostringstream out;
        out << "\\begin{tabular}{l";
        for (std::size_t i = 0; i < table.names.size(); ++i) out << 'r';
        out << "}\n\\toprule\n";
        for (const auto& name : table.names) out << " & " << name;
        out << " \\\\\n\\midrule\n";
        for (std::size_t i = 0; i < table.names.size(); ++i) {
            out << table.names[i];
            for (std::size_t jx = 0; jx < table.names.size(); ++jx) {
                out << " & " << format_number(table.eps_min[i][jx]);
            }
            out << " \\\\\n";
        }
        out << "\\bottomrule\n\\end{tabular}\n";
        write_output(out.str(), args.out);
        return;
    }
    std::ostringstream out;
    out << render_csv_as_table(csv.str());
    out << "corrected_alpha: " << format_number(table.corrected_alpha) << " ("
        << (table.correction == sigkit::Correction::bonferroni ? "bonferroni" : "none")
        << ")\n";
    out << "cell (row, col): eps_min of 'row better than col'\n";
    write_output(out.str(), args.out);
}

// ---- bootstrap / permutation --------------------------------------------

struct ResampleArgs {
    std::string a_path, b_path, a_group, b_group;
    std::size_t resamples = 1000;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    FormatOption format;
    std::string out;
};

void run_resample_test(const ResampleArgs& args, bool bootstrap) {
    const sigkit::ScoreFile fa = sigkit::load_scores(args.a_path);
    const sigkit::ScoreFile fb = sigkit::load_scores(args.b_path);
    const sigkit::ScoreSample a = pick_group(fa, args.a_path, "--a-group", args.a_group);
    const sigkit::ScoreSample b = pick_group(fb, args.b_path, "--b-group", args.b_group);
    sigkit::RngStream rng = sigkit::derive_stream(args.seed, 0);
    const sigkit::PValueResult r =
        bootstrap
            ? sigkit::bootstrap_test(a, b, args.resamples, rng, args.jobs)
            : sigkit::permutation_test(a, b, args.resamples, rng, args.jobs);

    ordered_json j;
    j["test"] = bootstrap ? "Bootstrap" : "Permutation";
    j["statistic"] = r.statistic;
    j["p_value"] = r.p_value;
    j["num_resamples"] = r.num_resamples;
    j["seed"] = args.seed;
    std::vector<std::pair<std::string, std::string>> kv = {
        {"test", bootstrap ? "Bootstrap" : "Permutation"},
        {"statistic", format_number(r.statistic)},
        {"p_value", format_number(r.p_value)},
        {"num_resamples", std::to_string(r.num_resamples)},
        {"seed", std::to_string(args.seed)},
    };
    write_output(render_result(args.format.value, j, kv), args.out);
}

// ---- power ---------------------------------------------------------------

struct PowerArgs {
    std::string scores_path, group;
    sigkit::PowerConfig config;
    std::string test = "bootstrap";
    FormatOption format;
    std::string out;
};

void run_power(const PowerArgs& args) {
    const sigkit::ScoreFile file = sigkit::load_scores(args.scores_path);
    const sigkit::ScoreSample s =
        pick_group(file, args.scores_path, "--group", args.group);
    sigkit::PowerConfig config = args.config;
    config.test = args.test == "permutation" ? sigkit::PowerTest::permutation
                                             : sigkit::PowerTest::bootstrap;
    const double power = sigkit::bootstrap_power_analysis(s, config);

    ordered_json j;
    j["power"] = power;
    j["lift"] = config.lift;
    j["num_bootstrap"] = config.num_bootstrap;
    j["alpha"] = config.alpha;
    j["test"] = args.test;
    j["num_inner_resamples"] = config.num_inner_resamples;
    j["additive_lift"] = config.additive_lift;
    j["seed"] = config.seed;
    j["n"] = s.size();
    std::vector<std::pair<std::string, std::string>> kv = {
        {"power", format_number(power)},
        {"lift", format_number(config.lift)},
        {"num_bootstrap", std::to_string(config.num_bootstrap)},
        {"alpha", format_number(config.alpha)},
        {"test", args.test},
        {"num_inner_resamples", std::to_string(config.num_inner_resamples)},
        {"additive_lift", config.additive_lift ? "true" : "false"},
        {"seed", std::to_string(config.seed)},
        {"n", std::to_string(s.size())},
    };
    write_output(render_result(args.format.value, j, kv), args.out);
}

// ---- uncertainty ----------------------------------------------------------

struct UncertaintyArgs {
    long long m_old = 0, n_old = 0, m_new = 0, n_new = 0;
    FormatOption format;
    std::string out;
};

void run_uncertainty(const UncertaintyArgs& args) {
    const double factor =
        sigkit::aso_uncertainty_reduction(args.m_old, args.n_old, args.m_new, args.n_new);
    char rounded[32];
    std::snprintf(rounded, sizeof(rounded), "%.3f", factor);

    ordered_json j;
    j["factor"] = factor;
    j["m_old"] = args.m_old;
    j["n_old"] = args.n_old;
    j["m_new"] = args.m_new;
    j["n_new"] = args.n_new;
    if (args.format.value == "table") {
        write_output(std::string(rounded) + "\n", args.out);
        return;
    }
    std::vector<std::pair<std::string, std::string>> kv = {
        {"factor", format_number(factor)},
        {"m_old", std::to_string(args.m_old)},
        {"n_old", std::to_string(args.n_old)},
        {"m_new", std::to_string(args.m_new)},
        {"n_new", std::to_string(args.n_new)},
    };
    write_output(render_result(args.format.value, j, kv), args.out);
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
    std::string preset;
    std::vector<std::size_t> sizes;
    std::vector<double> thresholds;
    std::vector<double> gaps;
    std::vector<std::string> tests;
    std::optional<std::size_t> sims_aso, sims_other, aso_inner_b, resamples, fixed_size;
    std::optional<double> tau, alpha, dt, gap;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    FormatOption format;
    std::string out, plot_out, raw_out;
};

const std::vector<std::string> kPresetNames = {
    "fig2-normal", "fig2-mixture", "fig2-laplace", "fig2-rayleigh",
    "fig5-size",   "fig5-mean",    "tables-2",     "tables-3",
    "tables-4",    "tables-5",     "tables-6",     "tables-7",
    "tables-8",    "tables-9"};

struct Preset {
    sigkit::ExperimentConfig config;
    sigkit::ErrorKind kind;
    sigkit::Type2Mode mode;
};

Preset make_preset(const std::string& name) {
    using sigkit::DistributionSpec;
    const DistributionSpec normal = DistributionSpec::make_normal(0.0, 1.5);
    const DistributionSpec mixture = DistributionSpec::make_mixture(
        {{0.0, 1.5, 0.75}, {-0.5, 0.25, 0.25}});
    const DistributionSpec laplace = DistributionSpec::make_laplace(0.0, 2.25);
    const DistributionSpec rayleigh = DistributionSpec::make_rayleigh(1.0);

    Preset p;
    p.kind = sigkit::ErrorKind::type1;
    p.mode = sigkit::Type2Mode::by_size;
    auto type1 = [&](const DistributionSpec& d) {
        p.config.dist_a = d;
        p.config.dist_b = d;
    };
    auto type2 = [&](const DistributionSpec& base, sigkit::Type2Mode mode) {
        p.kind = sigkit::ErrorKind::type2;
        p.mode = mode;
        p.config.dist_b = base;
        p.config.dist_a = sigkit::shifted(base, p.config.mean_gap);
    };

    if (name == "fig2-normal" || name == "tables-2") type1(normal);
    else if (name == "fig2-mixture" || name == "tables-4") type1(mixture);
    else if (name == "fig2-laplace" || name == "tables-8") type1(laplace);
    else if (name == "fig2-rayleigh" || name == "tables-9") type1(rayleigh);
    else if (name == "fig5-size" || name == "tables-3")
        type2(normal, sigkit::Type2Mode::by_size);
    else if (name == "fig5-mean" || name == "tables-5")
        type2(normal, sigkit::Type2Mode::by_mean_difference);
    else if (name == "tables-6") type2(mixture, sigkit::Type2Mode::by_size);
    else if (name == "tables-7") type2(mixture, sigkit::Type2Mode::by_mean_difference);
    else throw sigkit::ConfigError("unknown preset '" + name + "'");
    return p;
}

void run_simulate(const SimulateArgs& args) {
    Preset preset = make_preset(args.preset);
    sigkit::ExperimentConfig& config = preset.config;
    if (!args.sizes.empty()) config.sample_sizes = args.sizes;
    if (!args.thresholds.empty()) config.thresholds = args.thresholds;
    if (!args.gaps.empty()) config.mean_gaps = args.gaps;
    if (args.sims_aso) config.num_simulations_aso = *args.sims_aso;
    if (args.sims_other) config.num_simulations_other = *args.sims_other;
    if (args.aso_inner_b) config.aso_inner_bootstrap = *args.aso_inner_b;
    if (args.resamples) config.num_resamples = *args.resamples;
    if (args.fixed_size) config.mean_fixed_size = *args.fixed_size;
    if (args.tau) config.tau = *args.tau;
    if (args.alpha) config.alpha = *args.alpha;
    if (args.dt) config.aso_dt = *args.dt;
    if (args.gap) config.mean_gap = *args.gap;
    if (!args.tests.empty()) {
        config.tests.clear();
        for (const auto& name : args.tests) {
            config.tests.push_back(sigkit::test_from_name(name));
        }
    }
    config.seed = args.seed;
    config.num_jobs = args.jobs;
    if (preset.kind == sigkit::ErrorKind::type2 &&
        preset.mode == sigkit::Type2Mode::by_size) {
        // keep dist_a consistent if --gap changed it
        config.dist_a = sigkit::shifted(config.dist_b, config.mean_gap);
    }

    const sigkit::ErrorRateTable table =
        preset.kind == sigkit::ErrorKind::type1
            ? sigkit::run_type1_experiment(config)
            : sigkit::run_type2_experiment(config, preset.mode);

    std::string text;
    if (args.format.value == "json") {
        text = sigkit::emit_table(table, sigkit::TableFormat::json);
    } else if (args.format.value == "csv") {
        text = sigkit::emit_table(table, sigkit::TableFormat::csv);
    } else if (args.format.value == "latex") {
        text = sigkit::emit_table(table, sigkit::TableFormat::latex);
    } else {
        text = render_csv_as_table(sigkit::emit_table(table, sigkit::TableFormat::csv));
    }
    write_output(text, args.out);
    if (!args.plot_out.empty()) {
        write_output(sigkit::emit_plot_csv(table), args.plot_out);
    }
    if (!args.raw_out.empty()) {
        write_output(sigkit::emit_raw_stats_csv(table), args.raw_out);
    }
}

void add_group_options(CLI::App* cmd, ResampleArgs& args) {
    cmd->add_option("--a", args.a_path, "Score file for sample A (csv or json, '-' for stdin)")
        ->required();
    cmd->add_option("--b", args.b_path, "Score file for sample B")->required();
    cmd->add_option("--a-group", args.a_group, "Group name inside --a (needed when the file has several)");
    cmd->add_option("--b-group", args.b_group, "Group name inside --b");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Statistical significance testing toolkit: almost-stochastic-order "
                 "and classical one-sided tests, power utilities, and Monte Carlo "
                 "error-rate experiments"};
    app.require_subcommand(1);

    AsoArgs aso_args;
    MultiAsoArgs multi_args;
    ResampleArgs boot_args, perm_args;
    PowerArgs power_args;
    UncertaintyArgs unc_args;
    SimulateArgs sim_args;

    // aso
    CLI::App* aso_cmd = app.add_subcommand(
        "aso", "Almost-stochastic-order test: is sample A better than sample B?");
    aso_cmd->add_option("--a", aso_args.a_path, "Score file for sample A ('-' for stdin)")
        ->required();
    aso_cmd->add_option("--b", aso_args.b_path, "Score file for sample B")->required();
    aso_cmd->add_option("--a-group", aso_args.a_group,
                        "Group name inside --a (needed when the file has several)");
    aso_cmd->add_option("--b-group", aso_args.b_group, "Group name inside --b");
    aso_cmd->add_option("--alpha", aso_args.config.alpha, "Confidence level complement")
        ->capture_default_str();
    aso_cmd->add_option("--tau", aso_args.tau, "Rejection threshold on eps_min")
        ->capture_default_str();
    aso_cmd->add_option("--dt", aso_args.config.dt, "Quantile integration step")
        ->capture_default_str();
    aso_cmd
        ->add_option("--bootstrap-iters", aso_args.config.num_bootstrap,
                     "Bootstrap iterations for the variance estimate")
        ->capture_default_str();
    aso_cmd->add_option("--seed", aso_args.config.seed, "Master seed")
        ->capture_default_str();
    aso_cmd->add_option("--jobs", aso_args.config.num_jobs, "Worker threads")
        ->envname("SIGKIT_JOBS")
        ->capture_default_str();
    add_format_option(aso_cmd, aso_args.format);
    aso_cmd->add_option("--out", aso_args.out, "Write output to this file instead of stdout");
    aso_cmd->callback([&] { run_aso(aso_args); });

    // multi-aso
    CLI::App* multi_cmd = app.add_subcommand(
        "multi-aso", "Pairwise ASO over every group in one score file");
    multi_cmd->add_option("--scores", multi_args.scores_path, "Score file with all groups")
        ->required();
    multi_cmd->add_option("--alpha", multi_args.config.alpha, "Confidence level complement")
        ->capture_default_str();
    multi_cmd->add_option("--dt", multi_args.config.dt, "Quantile integration step")
        ->capture_default_str();
    multi_cmd
        ->add_option("--bootstrap-iters", multi_args.config.num_bootstrap,
                     "Bootstrap iterations for the variance estimate")
        ->capture_default_str();
    multi_cmd->add_option("--seed", multi_args.config.seed, "Master seed")
        ->capture_default_str();
    multi_cmd->add_option("--jobs", multi_args.config.num_jobs, "Worker threads")
        ->envname("SIGKIT_JOBS")
        ->capture_default_str();
    multi_cmd->add_flag("--no-bonferroni", multi_args.no_bonferroni,
                        "Skip the Bonferroni correction (default: corrected over k(k-1) pairs)");
    add_format_option(multi_cmd, multi_args.format);
    multi_cmd->add_option("--out", multi_args.out, "Write output to this file");
    multi_cmd->callback([&] { run_multi_aso(multi_args); });

    // bootstrap / permutation
    CLI::App* boot_cmd =
        app.add_subcommand("bootstrap", "One-sided bootstrap test (A better than B)");
    add_group_options(boot_cmd, boot_args);
    boot_cmd->add_option("--resamples", boot_args.resamples, "Bootstrap resamples")
        ->capture_default_str();
    boot_cmd->add_option("--seed", boot_args.seed, "Master seed")->capture_default_str();
    boot_cmd->add_option("--jobs", boot_args.jobs, "Worker threads")
        ->envname("SIGKIT_JOBS")
        ->capture_default_str();
    add_format_option(boot_cmd, boot_args.format);
    boot_cmd->add_option("--out", boot_args.out, "Write output to this file");
    boot_cmd->callback([&] { run_resample_test(boot_args, true); });

    CLI::App* perm_cmd = app.add_subcommand(
        "permutation", "One-sided permutation-randomization test (A better than B)");
    add_group_options(perm_cmd, perm_args);
    perm_cmd->add_option("--resamples", perm_args.resamples, "Pooled reshuffles")
        ->capture_default_str();
    perm_cmd->add_option("--seed", perm_args.seed, "Master seed")->capture_default_str();
    perm_cmd->add_option("--jobs", perm_args.jobs, "Worker threads")
        ->envname("SIGKIT_JOBS")
        ->capture_default_str();
    add_format_option(perm_cmd, perm_args.format);
    perm_cmd->add_option("--out", perm_args.out, "Write output to this file");
    perm_cmd->callback([&] { run_resample_test(perm_args, false); });

    // power
    CLI::App* power_cmd = app.add_subcommand(
        "power", "Bootstrap power analysis: can this sample expose a given lift?");
    power_cmd->add_option("--scores", power_args.scores_path, "Score file")->required();
    power_cmd->add_option("--group", power_args.group,
                          "Group name (needed when the file has several)");
    power_cmd->add_option("--lift", power_args.config.lift, "Multiplicative lift")
        ->capture_default_str();
    power_cmd
        ->add_option("--bootstrap-iters", power_args.config.num_bootstrap,
                     "Outer bootstrap iterations")
        ->capture_default_str();
    power_cmd
        ->add_option("--resamples", power_args.config.num_inner_resamples,
                     "Resamples inside each inner test")
        ->capture_default_str();
    power_cmd->add_option("--alpha", power_args.config.alpha, "Significance level")
        ->capture_default_str();
    power_cmd->add_option("--test", power_args.test, "Inner test")
        ->check(CLI::IsMember({"bootstrap", "permutation"}))
        ->capture_default_str();
    power_cmd->add_flag("--additive-lift", power_args.config.additive_lift,
                        "Add (lift-1)*mean|s| instead of multiplying (for samples with negatives)");
    power_cmd->add_option("--seed", power_args.config.seed, "Master seed")
        ->capture_default_str();
    power_cmd->add_option("--jobs", power_args.config.num_jobs, "Worker threads")
        ->envname("SIGKIT_JOBS")
        ->capture_default_str();
    add_format_option(power_cmd, power_args.format);
    power_cmd->add_option("--out", power_args.out, "Write output to this file");
    power_cmd->callback([&] { run_power(power_args); });

    // uncertainty
    CLI::App* unc_cmd = app.add_subcommand(
        "uncertainty",
        "Uncertainty-reduction factor of growing score samples (old -> new sizes)");
    unc_cmd->add_option("--m-old", unc_args.m_old, "Old size of sample A")->required();
    unc_cmd->add_option("--n-old", unc_args.n_old, "Old size of sample B")->required();
    unc_cmd->add_option("--m-new", unc_args.m_new, "New size of sample A")->required();
    unc_cmd->add_option("--n-new", unc_args.n_new, "New size of sample B")->required();
    add_format_option(unc_cmd, unc_args.format);
    unc_cmd->add_option("--out", unc_args.out, "Write output to this file");
    unc_cmd->callback([&] { run_uncertainty(unc_args); });

    // simulate
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "Monte Carlo Type I/II error-rate experiments over all tests");
    sim_cmd->add_option("--preset", sim_args.preset, "Experiment preset")
        ->check(CLI::IsMember(kPresetNames))
        ->required();
    sim_cmd->add_option("--sizes", sim_args.sizes, "Sample sizes (default 5,10,15,20)")
        ->delimiter(',');
    sim_cmd
        ->add_option("--thresholds", sim_args.thresholds,
                     "Rejection thresholds (default 0.05,0.1,0.2,0.3,0.4,0.5)")
        ->delimiter(',');
    sim_cmd->add_option("--gaps", sim_args.gaps, "Mean gaps for the by-mean sweep")
        ->delimiter(',');
    sim_cmd->add_option("--tests", sim_args.tests,
                        "Subset of tests, e.g. \"ASO,Student's t\"")
        ->delimiter(',');
    sim_cmd->add_option("--sims-aso", sim_args.sims_aso, "Simulations for ASO (default 500)");
    sim_cmd->add_option("--sims-other", sim_args.sims_other,
                        "Simulations for the p-value tests (default 1000)");
    sim_cmd->add_option("--aso-inner-b", sim_args.aso_inner_b,
                        "Bootstrap iterations inside each simulated ASO run (default 500)");
    sim_cmd->add_option("--resamples", sim_args.resamples,
                        "Resamples of the simulated bootstrap/permutation tests (default 1000)");
    sim_cmd->add_option("--fixed-size", sim_args.fixed_size,
                        "Sample size of the by-mean sweep (default 5)");
    sim_cmd->add_option("--tau", sim_args.tau, "Headline ASO threshold (default 0.2)");
    sim_cmd->add_option("--alpha", sim_args.alpha,
                        "Headline p-value threshold and inner ASO alpha (default 0.05)");
    sim_cmd->add_option("--dt", sim_args.dt, "ASO integration step (default 0.005)");
    sim_cmd->add_option("--gap", sim_args.gap, "Mean gap of the by-size sweep (default 0.5)");
    sim_cmd->add_option("--seed", sim_args.seed, "Master seed")->capture_default_str();
    sim_cmd->add_option("--jobs", sim_args.jobs, "Worker threads")
        ->envname("SIGKIT_JOBS")
        ->capture_default_str();
    add_format_option(sim_cmd, sim_args.format);
    sim_cmd->add_option("--out", sim_args.out, "Write the table to this file");
    sim_cmd->add_option("--plot-out", sim_args.plot_out,
                        "Also write plot data (x,test,rate at the headline thresholds)");
    sim_cmd->add_option("--raw-out", sim_args.raw_out,
                        "Also write raw per-simulation statistics (x,test,sim,value)");
    sim_cmd->callback([&] { run_simulate(sim_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const sigkit::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
