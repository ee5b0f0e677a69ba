#pragma once

#include "qlab/distance.hpp"
#include "qlab/protocol.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlab {

/// Invalid configuration input (CLI exit code 1, as opposed to runtime
/// failures which map to 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One learning experiment: model family, prior, filter settings,
/// replicate count. Loaded from strict JSON (unknown keys rejected).
struct RunConfig {
    int n_qubits = 3;
    GraphKind graph_kind = GraphKind::complete;
    std::vector<std::pair<int, int>> custom_edges;
    std::optional<Eigen::VectorXd> x_true; // nullopt: drawn in the prior box per run
    double prior_low = -1.0;
    double prior_high = 1.0;
    int particles = 2000;
    double epsilon = 0.05;
    int k = 5;
    int n_exp = 200;
    double resample_threshold = 0.5;
    double liu_west_a = 0.98;
    ModelNorm norm = ModelNorm::rms;
    std::uint64_t seed = 1;
    int runs = 20;

    static RunConfig from_json_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text);

    void validate() const;
    CouplingGraph graph() const;
    std::string to_json_text() const;
};

struct DecayFit {
    double gamma = 0.0;
    double r_squared = 0.0;
    int points_used = 0;
};

/// Ordinary least squares of log(loss) against iteration index;
/// gamma is the negated slope. Non-positive losses are dropped with a
/// warning; fewer than 10 surviving points is an error.
DecayFit fit_decay(const std::vector<double>& median_losses);

struct ReplicateTrace {
    int run_id = 0;
    Eigen::VectorXd x_true;
    double initial_loss = 0.0; // prior-mean loss before any experiment
    std::vector<ExperimentRecord> records;
    bool terminated_early = false;
};

struct QhlExperiment {
    RunConfig config;
    std::vector<ReplicateTrace> replicates;
    // Indexed by iteration; entry 0 is the prior loss. Runs that stopped
    // early carry their final loss forward.
    std::vector<double> median_loss;
    std::vector<double> loss_q25;
    std::vector<double> loss_q75;
    DecayFit fit;
};

/// Seeded replicates of qhl_run with per-iteration median and
/// interquartile loss. Replicates execute in parallel on derived
/// substreams; output is identical to serial execution.
QhlExperiment run_qhl_experiment(const RunConfig& config);

/// Writes records.csv, summary.csv and summary.json under out_dir.
void write_qhl_outputs(const QhlExperiment& experiment, const std::string& out_dir);

struct SweepRow {
    int n_qubits = 0;
    Eigen::Index dim_x = 0;
    double gamma = 0.0;
    double r_squared = 0.0;
    bool reliable = false; // gamma reported only when the fit has R^2 >= 0.7
    int runs = 0;
};

struct GammaRatio {
    int n_small = 0;
    int n_large = 0;
    double gamma_ratio = 0.0; // gamma(n_small) / gamma(n_large)
    double dim_ratio = 0.0;   // dim_x(n_large) / dim_x(n_small)
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<GammaRatio> ratios;
    std::map<int, std::vector<double>> median_loss_by_n;
};

/// Decay-exponent sweep over qubit counts (x_true must be drawn in the
/// prior; complete or line graphs only). The ratio table compares
/// gamma(n_i)/gamma(n_j) against dim_x(n_j)/dim_x(n_i) for consecutive
/// pairs.
SweepResult sweep_gamma(const RunConfig& base, const std::vector<int>& qubit_counts);

void write_sweep_csv(const SweepResult& sweep, const std::string& path);

struct ThresholdCount {
    int n_qubits = 0;
    bool censored = false; // threshold never reached
    int experiments = 0;   // first iteration with median loss below delta
};

/// Experiments needed to push the median loss below delta, per qubit
/// count.
std::vector<ThresholdCount> experiments_to_threshold(
    const std::map<int, std::vector<double>>& medians_by_n, double delta);

struct DicePoint {
    std::size_t sides = 0;
    double variance = 0.0;
    bool censored = false;  // budget exhausted before reaching 2/3 accuracy
    std::size_t samples = 0;
    double accuracy = 0.0;  // empirical accuracy at `samples`
};

/// Minimal sample counts for distinguishing a randomly drawn dice from the
/// fair one at >= 2/3 accuracy, found by binary search up to
/// samples_budget. The decider sees the dice ensemble (sides and
/// variance), not the drawn distribution itself, and compares the
/// Dirichlet-multinomial marginal likelihood against the fair one.
std::vector<DicePoint> dice_experiment(const std::vector<std::size_t>& sides,
                                       const std::function<double(std::size_t)>& variance_rule,
                                       std::size_t samples_budget, std::size_t trials,
                                       std::uint64_t seed);

void write_dice_csv(const std::vector<DicePoint>& curve, std::ostream& out);
void write_dice_csv(const std::vector<DicePoint>& curve, const std::string& path);

} // namespace qlab
