#include "qlab/harness.hpp"

#include "qlab/rng.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <set>
#include <thread>
#include <unordered_map>

namespace qlab {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Substream tags for the harness layer (the protocol uses 0..4).
enum : std::uint64_t { kTagTruth = 101, kTagRun = 102, kTagSweep = 103, kTagDice = 104 };

constexpr int kCompleteGraphQubitCap = 9;
constexpr int kGeneralQubitCap = 12;
constexpr double kDiceTargetAccuracy = 2.0 / 3.0;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    double pos = p * static_cast<double>(values.size() - 1);
    std::size_t lo = static_cast<std::size_t>(pos);
    double frac = pos - static_cast<double>(lo);
    if (lo + 1 >= values.size()) return values.back();
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

void parallel_for_index(std::size_t count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

GraphKind parse_graph_kind(const std::string& kind) {
    if (kind == "complete") return GraphKind::complete;
    if (kind == "line") return GraphKind::line;
    if (kind == "custom") return GraphKind::custom;
    throw ConfigError("config error: graph must be one of complete|line|custom, got '" + kind + "'");
}

std::string graph_kind_name(GraphKind kind) {
    switch (kind) {
        case GraphKind::complete: return "complete";
        case GraphKind::line: return "line";
        case GraphKind::custom: return "custom";
    }
    return "complete";
}

template <typename T>
T get_field(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config error: field '" + key + "' has the wrong type");
    }
}

double loss_at(const ReplicateTrace& trace, std::size_t iteration) {
    if (iteration == 0 || trace.records.empty()) return trace.initial_loss;
    std::size_t idx = std::min(iteration, trace.records.size()) - 1;
    return trace.records[idx].loss;
}

ReplicateTrace run_replicate(const RunConfig& config, const CouplingGraph& graph, int run_id) {
    ReplicateTrace trace;
    trace.run_id = run_id;

    if (config.x_true) {
        trace.x_true = *config.x_true;
    } else {
        std::mt19937_64 truth_rng =
            substream(config.seed, kTagTruth, static_cast<std::uint64_t>(run_id));
        std::uniform_real_distribution<double> draw(config.prior_low, config.prior_high);
        trace.x_true.resize(graph.dim_x());
        for (Eigen::Index i = 0; i < graph.dim_x(); ++i) trace.x_true(i) = draw(truth_rng);
    }

    QhlConfig qhl;
    qhl.graph = graph;
    qhl.prior_low = config.prior_low;
    qhl.prior_high = config.prior_high;
    qhl.particles = config.particles;
    qhl.n_exp = config.n_exp;
    qhl.estimator.epsilon = config.epsilon;
    qhl.estimator.k = config.k;
    qhl.resample_threshold = config.resample_threshold;
    qhl.liu_west_a = config.liu_west_a;
    qhl.norm = config.norm;
    qhl.seed = substream(config.seed, kTagRun, static_cast<std::uint64_t>(run_id))();

    UntrustedSystem system(trace.x_true, graph);
    QhlResult result = qhl_run(qhl, system);
    trace.initial_loss = quadratic_loss(result.initial_estimate, trace.x_true);
    trace.records = std::move(result.records);
    trace.terminated_early = result.terminated_early;
    return trace;
}

// log Pr(counts | symmetric Dirichlet(alpha) dice) - log Pr(counts | fair),
// multinomial coefficients cancel.
double dice_log_bayes_factor(const std::unordered_map<std::size_t, int>& counts,
                             std::size_t n_samples, std::size_t sides, double alpha) {
    const double d = static_cast<double>(sides);
    const double n = static_cast<double>(n_samples);
    double log_dice = std::lgamma(d * alpha) - std::lgamma(d * alpha + n);
    for (const auto& [outcome, c] : counts)
        log_dice += std::lgamma(alpha + static_cast<double>(c)) - std::lgamma(alpha);
    double log_fair = -n * std::log(d);
    return log_dice - log_fair;
}

// Empirical accuracy of the ensemble-marginal decision rule at a fixed
// sample count.
double dice_accuracy(std::size_t sides, double variance, std::size_t n_samples,
                     std::size_t trials, std::uint64_t seed, std::uint64_t eval_key) {
    const double alpha = dice_concentration(sides, variance);
    std::mt19937_64 rng = substream(seed, kTagDice + sides, eval_key);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> fair_draw(0, sides - 1);
    std::size_t correct = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        bool truth_is_dice = coin(rng) < 0.5;
        std::unordered_map<std::size_t, int> counts;
        if (truth_is_dice) {
            DiscreteDistribution dice = random_dice_distribution(sides, variance, rng);
            InverseCdfSampler draw(dice.probs());
            for (std::size_t s = 0; s < n_samples; ++s) ++counts[draw(rng)];
        } else {
            for (std::size_t s = 0; s < n_samples; ++s) ++counts[fair_draw(rng)];
        }
        bool guess_is_dice = dice_log_bayes_factor(counts, n_samples, sides, alpha) > 0.0;
        if (guess_is_dice == truth_is_dice) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(trials);
}

} // namespace

RunConfig RunConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config error: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config error: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config error: top level must be a JSON object");

    static const std::set<std::string> known = {
        "n_qubits", "graph",    "edges",     "x_true",        "prior_low",
        "prior_high", "particles", "epsilon", "k",            "n_exp",
        "resample_threshold", "liu_west_a", "norm", "seed",   "runs"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (!known.count(key)) throw ConfigError("config error: unknown key '" + key + "'");
    }

    RunConfig cfg;
    cfg.n_qubits = get_field<int>(j, "n_qubits", cfg.n_qubits);
    cfg.graph_kind = parse_graph_kind(get_field<std::string>(j, "graph", "complete"));

    if (j.contains("edges")) {
        if (cfg.graph_kind != GraphKind::custom)
            throw ConfigError("config error: 'edges' is only valid with graph = custom");
        try {
            for (const auto& e : j.at("edges")) {
                if (!e.is_array() || e.size() != 2)
                    throw ConfigError("config error: each edge must be a pair [i, j]");
                cfg.custom_edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            }
        } catch (const json::exception&) {
            throw ConfigError("config error: field 'edges' has the wrong type");
        }
    } else if (cfg.graph_kind == GraphKind::custom) {
        throw ConfigError("config error: graph = custom requires 'edges'");
    }

    if (j.contains("x_true")) {
        const json& xt = j.at("x_true");
        if (xt.is_string()) {
            if (xt.get<std::string>() != "random-in-prior")
                throw ConfigError("config error: x_true must be an array or \"random-in-prior\"");
        } else if (xt.is_array()) {
            Eigen::VectorXd x(xt.size());
            for (std::size_t i = 0; i < xt.size(); ++i) {
                if (!xt.at(i).is_number())
                    throw ConfigError("config error: x_true entries must be numbers");
                x(static_cast<Eigen::Index>(i)) = xt.at(i).get<double>();
            }
            cfg.x_true = std::move(x);
        } else {
            throw ConfigError("config error: x_true must be an array or \"random-in-prior\"");
        }
    }

    cfg.prior_low = get_field<double>(j, "prior_low", cfg.prior_low);
    cfg.prior_high = get_field<double>(j, "prior_high", cfg.prior_high);
    cfg.particles = get_field<int>(j, "particles", cfg.particles);
    cfg.epsilon = get_field<double>(j, "epsilon", cfg.epsilon);
    cfg.k = get_field<int>(j, "k", cfg.k);
    cfg.n_exp = get_field<int>(j, "n_exp", cfg.n_exp);
    cfg.resample_threshold = get_field<double>(j, "resample_threshold", cfg.resample_threshold);
    cfg.liu_west_a = get_field<double>(j, "liu_west_a", cfg.liu_west_a);
    cfg.seed = get_field<std::uint64_t>(j, "seed", cfg.seed);
    cfg.runs = get_field<int>(j, "runs", cfg.runs);

    std::string norm = get_field<std::string>(j, "norm", "rms");
    if (norm == "rms") {
        cfg.norm = ModelNorm::rms;
    } else if (norm == "spectral") {
        cfg.norm = ModelNorm::spectral;
    } else if (norm == "frobenius") {
        cfg.norm = ModelNorm::frobenius;
    } else {
        throw ConfigError("config error: norm must be rms|spectral|frobenius, got '" + norm +
                          "'");
    }

    cfg.validate();
    return cfg;
}

void RunConfig::validate() const {
    if (n_qubits < 2) throw ConfigError("config error: n_qubits must be at least 2");
    if (graph_kind == GraphKind::complete && n_qubits > kCompleteGraphQubitCap)
        throw ConfigError("config error: complete-graph learning is capped at " +
                          std::to_string(kCompleteGraphQubitCap) + " qubits");
    if (n_qubits > kGeneralQubitCap)
        throw ConfigError("config error: learning runs are capped at " +
                          std::to_string(kGeneralQubitCap) + " qubits");
    if (!(prior_low < prior_high))
        throw ConfigError("config error: prior_low must be below prior_high");
    if (particles < 2) throw ConfigError("config error: particles must be at least 2");
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw ConfigError("config error: epsilon must lie in (0, 1)");
    if (k < 1) throw ConfigError("config error: k must be a positive integer");
    if (n_exp < 1) throw ConfigError("config error: n_exp must be at least 1");
    if (!(resample_threshold > 0.0 && resample_threshold < 1.0))
        throw ConfigError("config error: resample_threshold must lie in (0, 1)");
    if (!(liu_west_a > 0.0 && liu_west_a <= 1.0))
        throw ConfigError("config error: liu_west_a must lie in (0, 1]");
    if (runs < 1) throw ConfigError("config error: runs must be at least 1");

    CouplingGraph g = graph(); // validates edges as a side effect
    if (x_true && x_true->size() != g.dim_x())
        throw ConfigError("config error: x_true has " + std::to_string(x_true->size()) +
                          " entries, the graph needs " + std::to_string(g.dim_x()));
}

CouplingGraph RunConfig::graph() const {
    try {
        switch (graph_kind) {
            case GraphKind::complete: return CouplingGraph::complete(n_qubits);
            case GraphKind::line: return CouplingGraph::line(n_qubits);
            case GraphKind::custom: return CouplingGraph::custom(n_qubits, custom_edges);
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("config error: ") + e.what());
    }
    throw ConfigError("config error: unknown graph kind");
}

std::string RunConfig::to_json_text() const {
    ordered_json j;
    j["n_qubits"] = n_qubits;
    j["graph"] = graph_kind_name(graph_kind);
    if (graph_kind == GraphKind::custom) {
        json edges = json::array();
        for (const auto& [a, b] : custom_edges) edges.push_back({a, b});
        j["edges"] = edges;
    }
    if (x_true) {
        json x = json::array();
        for (Eigen::Index i = 0; i < x_true->size(); ++i) x.push_back((*x_true)(i));
        j["x_true"] = x;
    } else {
        j["x_true"] = "random-in-prior";
    }
    j["prior_low"] = prior_low;
    j["prior_high"] = prior_high;
    j["particles"] = particles;
    j["epsilon"] = epsilon;
    j["k"] = k;
    j["n_exp"] = n_exp;
    j["resample_threshold"] = resample_threshold;
    j["liu_west_a"] = liu_west_a;
    switch (norm) {
        case ModelNorm::rms: j["norm"] = "rms"; break;
        case ModelNorm::spectral: j["norm"] = "spectral"; break;
        case ModelNorm::frobenius: j["norm"] = "frobenius"; break;
    }
    j["seed"] = seed;
    j["runs"] = runs;
    return j.dump(2);
}

DecayFit fit_decay(const std::vector<double>& median_losses) {
    std::vector<double> xs;
    std::vector<double> ys;
    std::size_t dropped = 0;
    for (std::size_t i = 0; i < median_losses.size(); ++i) {
        double v = median_losses[i];
        if (v > 0.0 && std::isfinite(v)) {
            xs.push_back(static_cast<double>(i));
            ys.push_back(std::log(v));
        } else {
            ++dropped;
        }
    }
    if (dropped > 0)
        std::cerr << "qlab: warning: fit_decay dropped " << dropped << " non-positive losses\n";
    if (xs.size() < 10)
        throw std::invalid_argument("fit_decay: need at least 10 positive losses, have " +
                                    std::to_string(xs.size()));

    const double n = static_cast<double>(xs.size());
    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        x_mean += xs[i];
        y_mean += ys[i];
    }
    x_mean /= n;
    y_mean /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - x_mean) * (ys[i] - y_mean);
        sxx += (xs[i] - x_mean) * (xs[i] - x_mean);
    }
    const double slope = sxy / sxx;
    const double intercept = y_mean - slope * x_mean;
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double resid = ys[i] - (intercept + slope * xs[i]);
        ss_res += resid * resid;
        ss_tot += (ys[i] - y_mean) * (ys[i] - y_mean);
    }
    DecayFit fit;
    fit.gamma = -slope;
    fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    fit.points_used = static_cast<int>(xs.size());
    return fit;
}

QhlExperiment run_qhl_experiment(const RunConfig& config) {
    config.validate();
    const CouplingGraph graph = config.graph();

    QhlExperiment experiment;
    experiment.config = config;
    experiment.replicates.resize(static_cast<std::size_t>(config.runs));
    parallel_for_index(static_cast<std::size_t>(config.runs), [&](std::size_t r) {
        experiment.replicates[r] = run_replicate(config, graph, static_cast<int>(r));
    });

    const std::size_t horizon = static_cast<std::size_t>(config.n_exp);
    experiment.median_loss.resize(horizon + 1);
    experiment.loss_q25.resize(horizon + 1);
    experiment.loss_q75.resize(horizon + 1);
    std::vector<double> losses(experiment.replicates.size());
    for (std::size_t iter = 0; iter <= horizon; ++iter) {
        for (std::size_t r = 0; r < experiment.replicates.size(); ++r)
            losses[r] = loss_at(experiment.replicates[r], iter);
        experiment.median_loss[iter] = percentile(losses, 0.50);
        experiment.loss_q25[iter] = percentile(losses, 0.25);
        experiment.loss_q75[iter] = percentile(losses, 0.75);
    }

    try {
        experiment.fit = fit_decay(experiment.median_loss);
    } catch (const std::invalid_argument&) {
        experiment.fit = DecayFit{}; // too short to fit; points_used stays 0
    }
    return experiment;
}

void write_qhl_outputs(const QhlExperiment& experiment, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const Eigen::Index dim = experiment.config.graph().dim_x();

    std::ofstream records(fs::path(out_dir) / "records.csv");
    if (!records) throw std::runtime_error("cannot open records.csv under " + out_dir);
    records << "run_id,iteration,t,datum,loss,ess,resampled";
    for (Eigen::Index j = 0; j < dim; ++j) records << ",estimate_" << j;
    records << "\n";
    for (const ReplicateTrace& trace : experiment.replicates) {
        for (const ExperimentRecord& rec : trace.records) {
            records << trace.run_id << "," << rec.iteration << "," << format_double(rec.t) << ","
                    << rec.datum << "," << format_double(rec.loss) << "," << format_double(rec.ess)
                    << "," << (rec.resampled ? 1 : 0);
            for (Eigen::Index j = 0; j < dim; ++j) records << "," << format_double(rec.estimate(j));
            records << "\n";
        }
    }

    std::ofstream summary(fs::path(out_dir) / "summary.csv");
    if (!summary) throw std::runtime_error("cannot open summary.csv under " + out_dir);
    summary << "iteration,median_loss,loss_q25,loss_q75\n";
    for (std::size_t iter = 0; iter < experiment.median_loss.size(); ++iter) {
        summary << iter << "," << format_double(experiment.median_loss[iter]) << ","
                << format_double(experiment.loss_q25[iter]) << ","
                << format_double(experiment.loss_q75[iter]) << "\n";
    }

    ordered_json j;
    j["config"] = ordered_json::parse(experiment.config.to_json_text());
    j["initial_median_loss"] = experiment.median_loss.front();
    j["final_median_loss"] = experiment.median_loss.back();
    if (experiment.fit.points_used > 0) {
        j["gamma"] = experiment.fit.gamma;
        j["r_squared"] = experiment.fit.r_squared;
        j["fit_points"] = experiment.fit.points_used;
    } else {
        j["gamma"] = nullptr;
        j["r_squared"] = nullptr;
        j["fit_points"] = 0;
    }
    std::ofstream summary_json(fs::path(out_dir) / "summary.json");
    if (!summary_json) throw std::runtime_error("cannot open summary.json under " + out_dir);
    summary_json << j.dump(2) << "\n";
}

SweepResult sweep_gamma(const RunConfig& base, const std::vector<int>& qubit_counts) {
    if (base.x_true)
        throw ConfigError("config error: sweeps need x_true = \"random-in-prior\"");
    if (base.graph_kind == GraphKind::custom)
        throw ConfigError("config error: sweeps support complete or line graphs only");
    std::set<int> distinct(qubit_counts.begin(), qubit_counts.end());
    if (distinct.size() < 2)
        throw ConfigError("config error: sweep needs at least 2 distinct qubit counts");

    SweepResult sweep;
    for (int n : distinct) {
        RunConfig cfg = base;
        cfg.n_qubits = n;
        cfg.seed = substream(base.seed, kTagSweep, static_cast<std::uint64_t>(n))();
        cfg.validate();
        QhlExperiment experiment = run_qhl_experiment(cfg);
        SweepRow row;
        row.n_qubits = n;
        row.dim_x = cfg.graph().dim_x();
        row.gamma = experiment.fit.gamma;
        row.r_squared = experiment.fit.r_squared;
        row.reliable = experiment.fit.points_used > 0 && experiment.fit.r_squared >= 0.7;
        row.runs = cfg.runs;
        sweep.rows.push_back(row);
        sweep.median_loss_by_n[n] = experiment.median_loss;
    }

    for (std::size_t i = 0; i + 1 < sweep.rows.size(); ++i) {
        const SweepRow& small = sweep.rows[i];
        const SweepRow& large = sweep.rows[i + 1];
        GammaRatio ratio;
        ratio.n_small = small.n_qubits;
        ratio.n_large = large.n_qubits;
        ratio.gamma_ratio = large.gamma != 0.0 ? small.gamma / large.gamma
                                               : std::numeric_limits<double>::quiet_NaN();
        ratio.dim_ratio = static_cast<double>(large.dim_x) / static_cast<double>(small.dim_x);
        sweep.ratios.push_back(ratio);
    }
    return sweep;
}

void write_sweep_csv(const SweepResult& sweep, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "n_qubits,dim_x,gamma,r_squared,reliable,runs\n";
    for (const SweepRow& row : sweep.rows) {
        out << row.n_qubits << "," << row.dim_x << ",";
        if (row.reliable) out << format_double(row.gamma);
        out << "," << format_double(row.r_squared) << "," << (row.reliable ? 1 : 0) << ","
            << row.runs << "\n";
    }
}

std::vector<ThresholdCount> experiments_to_threshold(
    const std::map<int, std::vector<double>>& medians_by_n, double delta) {
    if (!(delta > 0.0)) throw ConfigError("config error: loss threshold must be positive");
    std::vector<ThresholdCount> table;
    for (const auto& [n, medians] : medians_by_n) {
        ThresholdCount entry;
        entry.n_qubits = n;
        entry.censored = true;
        entry.experiments = medians.empty() ? 0 : static_cast<int>(medians.size()) - 1;
        for (std::size_t i = 0; i < medians.size(); ++i) {
            if (medians[i] < delta) {
                entry.censored = false;
                entry.experiments = static_cast<int>(i);
                break;
            }
        }
        table.push_back(entry);
    }
    return table;
}

std::vector<DicePoint> dice_experiment(const std::vector<std::size_t>& sides,
                                       const std::function<double(std::size_t)>& variance_rule,
                                       std::size_t samples_budget, std::size_t trials,
                                       std::uint64_t seed) {
    if (sides.empty()) throw ConfigError("config error: need at least one dice size");
    if (samples_budget < 1) throw ConfigError("config error: sample budget must be positive");
    if (trials < 1) throw ConfigError("config error: trial count must be positive");

    std::vector<DicePoint> curve;
    for (std::size_t d : sides) {
        double variance = variance_rule(d);
        dice_concentration(d, variance); // feasibility check up front
        DicePoint point;
        point.sides = d;
        point.variance = variance;

        auto accuracy = [&](std::size_t samples) {
            return dice_accuracy(d, variance, samples, trials, seed,
                                 static_cast<std::uint64_t>(samples));
        };

        double at_budget = accuracy(samples_budget);
        if (at_budget < kDiceTargetAccuracy) {
            point.censored = true;
            point.samples = samples_budget;
            point.accuracy = at_budget;
        } else {
            std::size_t lo = 1, hi = samples_budget;
            while (lo < hi) {
                std::size_t mid = lo + (hi - lo) / 2;
                if (accuracy(mid) >= kDiceTargetAccuracy) {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            point.samples = lo;
            point.accuracy = accuracy(lo);
        }
        curve.push_back(point);
    }
    return curve;
}

void write_dice_csv(const std::vector<DicePoint>& curve, std::ostream& out) {
    out << "sides,variance,samples,accuracy,censored\n";
    for (const DicePoint& point : curve) {
        out << point.sides << "," << format_double(point.variance) << "," << point.samples << ","
            << format_double(point.accuracy) << "," << (point.censored ? 1 : 0) << "\n";
    }
}

void write_dice_csv(const std::vector<DicePoint>& curve, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_dice_csv(curve, out);
}

} // namespace qlab
