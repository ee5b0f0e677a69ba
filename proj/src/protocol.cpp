#include "qlab/protocol.hpp"

#include "qlab/distance.hpp"
#include "qlab/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double kDegenerateNorm = 1e-12;
constexpr int kGuessRetries = 10;

// Substream tags inside one qhl_run.
enum : std::uint64_t { kStreamPrior = 0, kStreamGuess, kStreamUntrusted, kStreamResample, kStreamLikelihood };

std::size_t draw_particle_index(const ParticleCloud& cloud, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    double cum = 0.0;
    for (std::size_t i = 0; i < cloud.count(); ++i) {
        cum += cloud[i].w;
        if (u < cum) return i;
    }
    return cloud.count() - 1;
}

} // namespace

void EstimatorConfig::validate() const {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("EstimatorConfig: epsilon must lie in (0, 1)");
    if (k < 1) throw std::invalid_argument("EstimatorConfig: k must be positive");
    if (!(success_prob > 0.0 && success_prob <= 1.0))
        throw std::invalid_argument("EstimatorConfig: success_prob must lie in (0, 1]");
}

UntrustedSystem::UntrustedSystem(IsingParameters x_true, CouplingGraph graph)
    : x_true_(std::move(x_true)), graph_(std::move(graph)),
      h_true_(ising_diagonal(x_true_, graph_)) {}

int UntrustedSystem::query(const IsingParameters& x_minus, double t, const StateVector& v0,
                           std::mt19937_64& rng) const {
    if (!(t > 0.0)) throw std::invalid_argument("UntrustedSystem::query: need t > 0");
    DiagonalHermitian h_minus = ising_diagonal(x_minus, graph_);
    double p = survival_probability(h_minus, h_true_, t, v0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    return unif(rng) < p ? 1 : 0;
}

GuessedExperiment guess_experiment(const ParticleCloud& cloud, const CouplingGraph& graph,
                                   std::mt19937_64& rng, ModelNorm norm) {
    if (cloud.dim_x() != graph.dim_x())
        throw std::invalid_argument("guess_experiment: cloud dimension does not match graph");
    // x_minus is drawn once so its marginal is exactly the posterior; only
    // the second draw is retried when the pair cannot set a finite time.
    const Eigen::VectorXd& x_minus = cloud[draw_particle_index(cloud, rng)].x;
    for (int attempt = 0; attempt < kGuessRetries; ++attempt) {
        const Eigen::VectorXd& x_prime = cloud[draw_particle_index(cloud, rng)].x;
        double diff = model_norm_diff(x_minus, x_prime, graph, norm);
        if (diff >= kDegenerateNorm) return GuessedExperiment{x_minus, x_prime, 1.0 / diff};
    }
    throw DegeneratePosteriorError(
        "guess_experiment: degenerate posterior, repeated draws are identical");
}

int run_untrusted(const UntrustedSystem& system, const IsingParameters& x_minus, double t,
                  const StateVector& v0, std::mt19937_64& rng) {
    return system.query(x_minus, t, v0, rng);
}

double median_voted_estimate(double p_datum, const EstimatorConfig& cfg, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int votes = 2 * cfg.k - 1;
    std::vector<double> estimates(static_cast<std::size_t>(votes));
    for (double& e : estimates) {
        if (unif(rng) < cfg.success_prob) {
            double noise = (2.0 * unif(rng) - 1.0) * cfg.epsilon;
            e = std::clamp(p_datum + noise, 0.0, 1.0);
        } else {
            e = unif(rng); // estimation failed outright
        }
    }
    std::nth_element(estimates.begin(), estimates.begin() + cfg.k - 1, estimates.end());
    return estimates[static_cast<std::size_t>(cfg.k - 1)];
}

double noisy_likelihood(const IsingParameters& x_j, const IsingParameters& x_minus,
                        const CouplingGraph& graph, double t, int datum,
                        const EstimatorConfig& cfg, std::mt19937_64& rng) {
    cfg.validate();
    if (datum != 0 && datum != 1) throw std::invalid_argument("noisy_likelihood: datum must be 0 or 1");
    StateVector v0 = uniform_superposition(graph.n_qubits());
    DiagonalHermitian h_minus = ising_diagonal(x_minus, graph);
    DiagonalHermitian h_model = ising_diagonal(x_j, graph);
    double p = survival_probability(h_minus, h_model, t, v0);
    double p_datum = datum == 1 ? p : 1.0 - p;
    return median_voted_estimate(p_datum, cfg, rng);
}

void QhlConfig::validate() const {
    estimator.validate();
    if (!(prior_low < prior_high))
        throw std::invalid_argument("QhlConfig: prior_low must be below prior_high");
    if (particles < 2) throw std::invalid_argument("QhlConfig: need at least 2 particles");
    if (n_exp < 1) throw std::invalid_argument("QhlConfig: need at least 1 experiment");
    if (!(resample_threshold > 0.0 && resample_threshold < 1.0))
        throw std::invalid_argument("QhlConfig: resample_threshold must lie in (0, 1)");
    if (!(liu_west_a > 0.0 && liu_west_a <= 1.0))
        throw std::invalid_argument("QhlConfig: liu_west_a must lie in (0, 1]");
}

QhlResult qhl_run(const QhlConfig& config, const UntrustedSystem& system) {
    config.validate();
    if (config.graph.dim_x() != system.graph().dim_x() ||
        config.graph.n_qubits() != system.graph().n_qubits())
        throw std::invalid_argument("qhl_run: config graph does not match system graph");

    const Eigen::Index dim = config.graph.dim_x();
    const std::size_t m = static_cast<std::size_t>(config.particles);

    // Uniform prior over the coupling box.
    std::mt19937_64 prior_rng = substream(config.seed, kStreamPrior);
    std::uniform_real_distribution<double> prior_draw(config.prior_low, config.prior_high);
    std::vector<Eigen::VectorXd> positions(m);
    for (Eigen::VectorXd& x : positions) {
        x.resize(dim);
        for (Eigen::Index j = 0; j < dim; ++j) x(j) = prior_draw(prior_rng);
    }
    ParticleCloud cloud = ParticleCloud::uniform_weights(std::move(positions));

    const StateVector v0 = uniform_superposition(config.graph.n_qubits());
    const double ess_floor = config.resample_threshold * static_cast<double>(m);

    QhlResult result;
    result.initial_estimate = mean_estimate(cloud);
    result.records.reserve(static_cast<std::size_t>(config.n_exp));

    for (int iter = 1; iter <= config.n_exp; ++iter) {
        std::mt19937_64 guess_rng = substream(config.seed, kStreamGuess, static_cast<std::uint64_t>(iter));
        GuessedExperiment guess;
        try {
            guess = guess_experiment(cloud, config.graph, guess_rng, config.norm);
        } catch (const DegeneratePosteriorError&) {
            result.terminated_early = true; // converged or collapsed; stop with records intact
            break;
        }

        std::mt19937_64 query_rng = substream(config.seed, kStreamUntrusted, static_cast<std::uint64_t>(iter));
        int datum = run_untrusted(system, guess.x_minus, guess.t, v0, query_rng);

        // Per-particle likelihoods on independent substreams; keyed by
        // (iteration, particle) so any parallel schedule reproduces the
        // serial draws.
        DiagonalHermitian h_minus = ising_diagonal(guess.x_minus, config.graph);
        std::vector<double> likelihoods(m);
        for (std::size_t j = 0; j < m; ++j) {
            std::mt19937_64 like_rng =
                substream(config.seed, kStreamLikelihood,
                          static_cast<std::uint64_t>(iter) * m + static_cast<std::uint64_t>(j));
            DiagonalHermitian h_model = ising_diagonal(cloud[j].x, config.graph);
            double p = survival_probability(h_minus, h_model, guess.t, v0);
            double p_datum = datum == 1 ? p : 1.0 - p;
            likelihoods[j] =
                std::max(median_voted_estimate(p_datum, config.estimator, like_rng), kLikelihoodFloor);
        }

        cloud = bayes_update(cloud, likelihoods);
        double ess = effective_sample_size(cloud);
        bool resampled = ess < ess_floor;
        if (resampled) {
            std::mt19937_64 resample_rng =
                substream(config.seed, kStreamResample, static_cast<std::uint64_t>(iter));
            cloud = liu_west_resample(cloud, config.liu_west_a, resample_rng);
        }

        ExperimentRecord rec;
        rec.iteration = iter;
        rec.x_minus = guess.x_minus;
        rec.x_prime = guess.x_prime;
        rec.t = guess.t;
        rec.datum = datum;
        rec.ess = ess;
        rec.resampled = resampled;
        rec.estimate = mean_estimate(cloud);
        rec.loss = quadratic_loss(rec.estimate, system.ground_truth());
        result.records.push_back(std::move(rec));
    }

    result.estimate = result.records.empty() ? mean_estimate(cloud) : result.records.back().estimate;
    return result;
}

ModelLabel distinguish_by_inversion(const UnitaryMatrix& u_a, const UnitaryMatrix& u_b,
                                    const std::function<StateVector(const StateVector&)>& black_box,
                                    const StateVector& v0, int shots, std::mt19937_64& rng) {
    if (u_a.dim() != u_b.dim() || u_a.dim() != v0.dim())
        throw std::invalid_argument("distinguish_by_inversion: dimension mismatch");
    if (shots < 1) throw std::invalid_argument("distinguish_by_inversion: need at least 1 shot");
    StateVector scrambled = black_box(v0);
    StateVector inverted = apply(u_a.adjoint(), scrambled);
    double p = std::clamp(std::norm(inner_product(v0, inverted)), 0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int shot = 0; shot < shots; ++shot) {
        if (!(unif(rng) < p)) return ModelLabel::B;
    }
    return ModelLabel::A;
}

int log_star(double n) {
    if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("log_star: need finite n > 0");
    int count = 0;
    double x = n;
    while (x > 1.0) {
        x = std::log2(x);
        ++count;
    }
    return count;
}

double cost_model(double dim_n, double sparsity_d, double entry_bound, double time,
                  double epsilon, double models) {
    for (double v : {dim_n, sparsity_d, entry_bound, time, epsilon, models})
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument("cost_model: all arguments must be positive and finite");
    return models * static_cast<double>(log_star(dim_n)) * sparsity_d * sparsity_d * sparsity_d *
           entry_bound * time / epsilon;
}

} // namespace qlab
