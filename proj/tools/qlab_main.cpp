#include "qlab/boson.hpp"
#include "qlab/distance.hpp"
#include "qlab/harness.hpp"
#include "qlab/rng.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

namespace {

// Exit codes: 0 success, 1 config error, 2 runtime error,
// 3 acceptance-threshold failure (for CI use).
constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitThreshold = 3;

std::vector<int> parse_int_list(const std::string& csv) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= csv.size()) {
        std::size_t comma = csv.find(',', pos);
        std::string token = csv.substr(pos, comma == std::string::npos ? comma : comma - pos);
        if (token.empty()) throw qlab::ConfigError("config error: empty entry in list '" + csv + "'");
        try {
            out.push_back(std::stoi(token));
        } catch (const std::exception&) {
            throw qlab::ConfigError("config error: '" + token + "' is not an integer");
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

void print_fit(const qlab::QhlExperiment& experiment) {
    std::printf("runs: %d, experiments per run: %d\n", experiment.config.runs,
                experiment.config.n_exp);
    std::printf("initial median loss: %.6g\n", experiment.median_loss.front());
    std::printf("final median loss:   %.6g\n", experiment.median_loss.back());
    if (experiment.fit.points_used > 0) {
        std::printf("decay exponent gamma: %.6g (R^2 = %.4f over %d points)\n",
                    experiment.fit.gamma, experiment.fit.r_squared, experiment.fit.points_used);
    } else {
        std::printf("decay exponent gamma: not fitted (too few points)\n");
    }
}

int cmd_qhl_run(const std::string& config_path, const std::string& out_dir, bool check_decay) {
    qlab::RunConfig config = qlab::RunConfig::from_json_file(config_path);
    qlab::QhlExperiment experiment = qlab::run_qhl_experiment(config);
    qlab::write_qhl_outputs(experiment, out_dir);
    print_fit(experiment);
    std::printf("wrote %s/records.csv, summary.csv, summary.json\n", out_dir.c_str());
    if (check_decay) {
        bool ok = experiment.fit.points_used > 0 && experiment.fit.gamma > 0.0 &&
                  experiment.fit.r_squared >= 0.9 &&
                  experiment.median_loss.back() <= 1e-3 * experiment.median_loss.front();
        if (!ok) {
            std::fprintf(stderr, "decay check failed\n");
            return kExitThreshold;
        }
        std::printf("decay check passed\n");
    }
    return kExitOk;
}

int cmd_qhl_sweep(const std::string& config_path, const std::string& qubits_csv,
                  const std::string& out_dir, double delta, double check_ratio_factor) {
    qlab::RunConfig base = qlab::RunConfig::from_json_file(config_path);
    std::vector<int> qubits = parse_int_list(qubits_csv);
    qlab::SweepResult sweep = qlab::sweep_gamma(base, qubits);

    std::filesystem::create_directories(out_dir);
    qlab::write_sweep_csv(sweep, (std::filesystem::path(out_dir) / "sweep.csv").string());
    for (const auto& [n, medians] : sweep.median_loss_by_n) {
        std::ofstream out(std::filesystem::path(out_dir) /
                          ("medians_n" + std::to_string(n) + ".csv"));
        out << "iteration,median_loss\n";
        char buf[64];
        for (std::size_t i = 0; i < medians.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.17g", medians[i]);
            out << i << "," << buf << "\n";
        }
    }
    for (const qlab::SweepRow& row : sweep.rows) {
        std::printf("n=%d dim_x=%lld gamma=%.6g R^2=%.4f%s\n", row.n_qubits,
                    static_cast<long long>(row.dim_x), row.gamma, row.r_squared,
                    row.reliable ? "" : " (unreliable fit)");
    }
    for (const qlab::GammaRatio& ratio : sweep.ratios) {
        std::printf("gamma(%d)/gamma(%d) = %.4g vs dim ratio %.4g\n", ratio.n_small,
                    ratio.n_large, ratio.gamma_ratio, ratio.dim_ratio);
    }

    if (delta > 0.0) {
        auto table = qlab::experiments_to_threshold(sweep.median_loss_by_n, delta);
        std::ofstream out(std::filesystem::path(out_dir) / "thresholds.csv");
        out << "n_qubits,delta,experiments,censored\n";
        for (const qlab::ThresholdCount& entry : table) {
            out << entry.n_qubits << "," << delta << "," << entry.experiments << ","
                << (entry.censored ? 1 : 0) << "\n";
            std::printf("n=%d reaches loss < %g after %d experiments%s\n", entry.n_qubits, delta,
                        entry.experiments, entry.censored ? " (censored)" : "");
        }
    }

    std::printf("wrote %s/sweep.csv\n", out_dir.c_str());
    if (check_ratio_factor > 0.0) {
        for (const qlab::GammaRatio& ratio : sweep.ratios) {
            double rel = ratio.gamma_ratio / ratio.dim_ratio;
            if (!(rel >= 1.0 / check_ratio_factor && rel <= check_ratio_factor)) {
                std::fprintf(stderr, "gamma ratio check failed for n=%d vs n=%d\n", ratio.n_small,
                             ratio.n_large);
                return kExitThreshold;
            }
        }
        std::printf("gamma ratio check passed\n");
    }
    return kExitOk;
}

int cmd_boson_dist(int modes, int photons, std::uint64_t seed, const std::string& out_path) {
    std::mt19937_64 rng = qlab::substream(seed, 0);
    qlab::Interferometer a = qlab::haar_random_interferometer(modes, photons, rng);
    qlab::DiscreteDistribution dist = qlab::full_distribution(a);
    qlab::write_distribution_csv(out_path, dist, "outcome");
    std::printf("wrote %zu outcome probabilities to %s\n", dist.size(), out_path.c_str());
    return kExitOk;
}

int cmd_boson_sample(int modes, int photons, std::uint64_t seed, std::size_t shots,
                     const std::string& out_path) {
    std::mt19937_64 rng = qlab::substream(seed, 0);
    qlab::Interferometer a = qlab::haar_random_interferometer(modes, photons, rng);
    std::vector<qlab::Outcome> outcomes = qlab::enumerate_outcomes(modes, photons);
    std::map<std::string, std::size_t> counts;
    for (const qlab::Outcome& o : outcomes) counts[o.label()] = 0;
    std::mt19937_64 sample_rng = qlab::substream(seed, 1);
    for (const qlab::Outcome& o : qlab::sample_outcome(a, shots, sample_rng)) ++counts[o.label()];

    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << "outcome,count,frequency\n";
    char buf[64];
    for (const qlab::Outcome& o : outcomes) { // enumeration order, not map order
        std::size_t c = counts[o.label()];
        std::snprintf(buf, sizeof(buf), "%.17g",
                      static_cast<double>(c) / static_cast<double>(shots));
        out << o.label() << "," << c << "," << buf << "\n";
    }
    std::printf("wrote %zu shots over %zu outcomes to %s\n", shots, outcomes.size(),
                out_path.c_str());
    return kExitOk;
}

int cmd_perm(const std::string& matrix_path, const std::string& method) {
    Eigen::MatrixXcd m;
    try {
        m = qlab::read_matrix_json(matrix_path);
    } catch (const std::invalid_argument& e) {
        throw qlab::ConfigError(std::string("config error: ") + e.what());
    }
    qlab::Amplitude per;
    if (method == "ryser") {
        per = qlab::permanent_ryser(m);
    } else if (method == "minors") {
        per = qlab::permanent_minors(m);
    } else {
        throw qlab::ConfigError("config error: method must be ryser|minors");
    }
    std::printf("%.17g %.17g\n", per.real(), per.imag());
    return kExitOk;
}

int cmd_dist_compare(const std::string& p_path, const std::string& q_path) {
    qlab::DiscreteDistribution p = qlab::read_distribution_csv(p_path);
    qlab::DiscreteDistribution q = qlab::read_distribution_csv(q_path);
    double p_dist = qlab::distinguish_probability(p, q);
    std::printf("tv_distance = %.17g\n", 2.0 * (p_dist - 0.5));
    std::printf("p_distinguish = %.17g\n", p_dist);
    if (p_dist > 0.5) {
        std::printf("repetitions_for_1pct_failure = %d\n",
                    qlab::repetitions_for_confidence(p_dist, 0.01));
    } else {
        std::printf("repetitions_for_1pct_failure = n/a (no bias)\n");
    }
    return kExitOk;
}

int cmd_dist_dice(const std::string& sides_csv, double variance, std::size_t budget,
                  std::size_t trials, std::uint64_t seed, const std::string& out_path) {
    std::vector<std::size_t> sides;
    for (int d : parse_int_list(sides_csv)) {
        if (d < 2) throw qlab::ConfigError("config error: dice need at least 2 sides");
        sides.push_back(static_cast<std::size_t>(d));
    }
    auto variance_rule = [variance](std::size_t d) {
        // Default matches the motivating construction: variance 1/D^2.
        return variance > 0.0 ? variance : 1.0 / (static_cast<double>(d) * static_cast<double>(d));
    };
    auto curve = qlab::dice_experiment(sides, variance_rule, budget, trials, seed);
    if (out_path.empty()) {
        qlab::write_dice_csv(curve, std::cout);
    } else {
        qlab::write_dice_csv(curve, out_path);
        std::printf("wrote %s\n", out_path.c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale quantum Hamiltonian learning and boson-sampling laboratory"};
    app.require_subcommand(1);

    // qhl run / qhl sweep
    CLI::App* qhl = app.add_subcommand("qhl", "Hamiltonian learning experiments");
    qhl->require_subcommand(1);

    std::string run_config, run_out = "qhl-out";
    bool run_check = false;
    CLI::App* qhl_run_cmd = qhl->add_subcommand("run", "Run seeded learning replicates");
    qhl_run_cmd->add_option("--config", run_config, "JSON run configuration")->required();
    qhl_run_cmd->add_option("--out", run_out, "Output directory");
    qhl_run_cmd->add_flag("--check-decay", run_check,
                          "Exit 3 unless the loss decays exponentially (R^2 >= 0.9, 1000x drop)");

    std::string sweep_config, sweep_qubits, sweep_out = "sweep-out";
    double sweep_delta = 0.0, sweep_check = 0.0;
    CLI::App* qhl_sweep_cmd = qhl->add_subcommand("sweep", "Decay-exponent sweep over qubit counts");
    qhl_sweep_cmd->add_option("--config", sweep_config, "JSON base configuration")->required();
    qhl_sweep_cmd->add_option("--qubits", sweep_qubits, "Comma-separated qubit counts, e.g. 3,5")
        ->required();
    qhl_sweep_cmd->add_option("--out", sweep_out, "Output directory");
    qhl_sweep_cmd->add_option("--delta", sweep_delta, "Also tabulate experiments to reach this loss");
    qhl_sweep_cmd->add_option("--check-ratio", sweep_check,
                              "Exit 3 unless gamma ratios track dim ratios within this factor");

    // boson dist / boson sample
    CLI::App* boson = app.add_subcommand("boson", "Boson-sampling distributions");
    boson->require_subcommand(1);

    int bd_modes = 0, bd_photons = 0;
    std::uint64_t bd_seed = 1;
    std::string bd_out = "boson-dist.csv";
    CLI::App* boson_dist_cmd = boson->add_subcommand("dist", "Exact outcome distribution");
    boson_dist_cmd->add_option("--modes", bd_modes, "Mode count m")->required();
    boson_dist_cmd->add_option("--photons", bd_photons, "Photon count n")->required();
    boson_dist_cmd->add_option("--seed", bd_seed, "Haar-interferometer seed");
    boson_dist_cmd->add_option("--out", bd_out, "Output CSV path");

    int bs_modes = 0, bs_photons = 0;
    std::uint64_t bs_seed = 1, bs_shots = 10000;
    std::string bs_out = "boson-sample.csv";
    CLI::App* boson_sample_cmd = boson->add_subcommand("sample", "Sampled outcome counts");
    boson_sample_cmd->add_option("--modes", bs_modes, "Mode count m")->required();
    boson_sample_cmd->add_option("--photons", bs_photons, "Photon count n")->required();
    boson_sample_cmd->add_option("--seed", bs_seed, "Seed for interferometer and shots");
    boson_sample_cmd->add_option("--shots", bs_shots, "Number of samples");
    boson_sample_cmd->add_option("--out", bs_out, "Output CSV path");

    // perm
    std::string perm_matrix, perm_method = "ryser";
    CLI::App* perm_cmd = app.add_subcommand("perm", "Matrix permanent");
    perm_cmd->add_option("--matrix", perm_matrix, "JSON matrix file {\"rows\": [[[re, im], ...]]}")
        ->required();
    perm_cmd->add_option("--method", perm_method, "ryser|minors");

    // dist compare / dist dice
    CLI::App* dist = app.add_subcommand("dist", "Distribution distinguishability");
    dist->require_subcommand(1);

    std::string cmp_p, cmp_q;
    CLI::App* dist_compare_cmd = dist->add_subcommand("compare", "Variational distance of two CSVs");
    dist_compare_cmd->add_option("p", cmp_p, "First distribution CSV")->required();
    dist_compare_cmd->add_option("q", cmp_q, "Second distribution CSV")->required();

    std::string dice_sides;
    double dice_variance = 0.0;
    std::uint64_t dice_budget = 4096, dice_trials = 400, dice_seed = 1;
    std::string dice_out;
    CLI::App* dist_dice_cmd = dist->add_subcommand("dice", "Random-dice sample-complexity curve");
    dist_dice_cmd->add_option("--sides", dice_sides, "Comma-separated dice sizes")->required();
    dist_dice_cmd->add_option("--variance", dice_variance,
                              "Ensemble variance (default 1/D^2 per size)");
    dist_dice_cmd->add_option("--samples", dice_budget, "Sample budget per trial");
    dist_dice_cmd->add_option("--trials", dice_trials, "Trials per accuracy estimate");
    dist_dice_cmd->add_option("--seed", dice_seed, "Seed");
    dist_dice_cmd->add_option("--out", dice_out, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (qhl_run_cmd->parsed()) return cmd_qhl_run(run_config, run_out, run_check);
        if (qhl_sweep_cmd->parsed())
            return cmd_qhl_sweep(sweep_config, sweep_qubits, sweep_out, sweep_delta, sweep_check);
        if (boson_dist_cmd->parsed()) return cmd_boson_dist(bd_modes, bd_photons, bd_seed, bd_out);
        if (boson_sample_cmd->parsed())
            return cmd_boson_sample(bs_modes, bs_photons, bs_seed, bs_shots, bs_out);
        if (perm_cmd->parsed()) return cmd_perm(perm_matrix, perm_method);
        if (dist_compare_cmd->parsed()) return cmd_dist_compare(cmp_p, cmp_q);
        if (dist_dice_cmd->parsed())
            return cmd_dist_dice(dice_sides, dice_variance, dice_budget, dice_trials, dice_seed,
                                 dice_out);
        std::fprintf(stderr, "no subcommand selected\n");
        return kExitConfig;
    } catch (const qlab::ConfigError& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
}
