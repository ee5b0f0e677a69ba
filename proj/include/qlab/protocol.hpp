#pragma once

#include "qlab/ising.hpp"
#include "qlab/smc.hpp"
#include "qlab/statevector.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

namespace qlab {

/// Noise model of the amplitude-estimation subroutine: each estimate lands
/// within epsilon of the truth with probability success_prob and is
/// replaced by a uniform [0,1] draw otherwise; 2k-1 estimates are median
/// voted.
struct EstimatorConfig {
    double epsilon = 0.05;
    int k = 5;
    double success_prob = 0.81;

    void validate() const;
};

/// Simulated experimental system with planted couplings. Inference code
/// interacts with it only through the inversion-experiment query; the
/// planted truth accessor exists for benchmark scoring alone.
class UntrustedSystem {
  public:
    UntrustedSystem(IsingParameters x_true, CouplingGraph graph);

    const CouplingGraph& graph() const { return graph_; }

    /// Evolve v0 under the hidden model for time t, undo with the guess
    /// H(x_minus), measure survival of v0: 1 with the survival probability,
    /// else 0.
    int query(const IsingParameters& x_minus, double t, const StateVector& v0,
              std::mt19937_64& rng) const;

    /// Planted couplings; for scoring the audit trail only, never for
    /// inference decisions.
    const IsingParameters& ground_truth() const { return x_true_; }

  private:
    IsingParameters x_true_;
    CouplingGraph graph_;
    DiagonalHermitian h_true_;
};

/// Raised when posterior draws keep coinciding: the cloud has converged or
/// collapsed and no informative experiment can be guessed.
struct DegeneratePosteriorError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GuessedExperiment {
    IsingParameters x_minus;
    IsingParameters x_prime;
    double t = 0.0;
};

/// Two independent posterior draws and the evolution-time heuristic
/// t = 1 / ||H(x_minus) - H(x_prime)||. x_prime is redrawn up to 10 times
/// while the norm stays below 1e-12, then DegeneratePosteriorError is
/// thrown. The rms norm keeps the guessed experiment informative at every
/// qubit count.
GuessedExperiment guess_experiment(const ParticleCloud& cloud, const CouplingGraph& graph,
                                   std::mt19937_64& rng, ModelNorm norm = ModelNorm::rms);

/// One experiment on the untrusted system; returns the binary survival
/// datum.
int run_untrusted(const UntrustedSystem& system, const IsingParameters& x_minus, double t,
                  const StateVector& v0, std::mt19937_64& rng);

/// Median of 2k-1 amplitude-estimation draws for a true outcome
/// probability p_datum.
double median_voted_estimate(double p_datum, const EstimatorConfig& cfg, std::mt19937_64& rng);

/// Emulated amplitude estimation of the likelihood of `datum` under model
/// x_j: the survival probability of e^{iH(x_minus)t} e^{-iH(x_j)t} v0
/// (datum = 1) or its complement (datum = 0), median voted per cfg.
double noisy_likelihood(const IsingParameters& x_j, const IsingParameters& x_minus,
                        const CouplingGraph& graph, double t, int datum,
                        const EstimatorConfig& cfg, std::mt19937_64& rng);

struct QhlConfig {
    CouplingGraph graph = CouplingGraph::complete(3);
    double prior_low = -1.0;
    double prior_high = 1.0;
    int particles = 2000;
    int n_exp = 200;
    EstimatorConfig estimator;
    double resample_threshold = 0.5; // resample when ESS < threshold * M
    double liu_west_a = 0.98;
    ModelNorm norm = ModelNorm::rms;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Audit record of one learning iteration. ess is the post-update
/// effective sample size (the resampling trigger); estimate and loss
/// reflect the cloud after the optional resample.
struct ExperimentRecord {
    int iteration = 0; // 1-based
    Eigen::VectorXd x_minus;
    Eigen::VectorXd x_prime;
    double t = 0.0;
    int datum = 0;
    double loss = 0.0;
    double ess = 0.0;
    bool resampled = false;
    Eigen::VectorXd estimate;
};

struct QhlResult {
    Eigen::VectorXd estimate;
    Eigen::VectorXd initial_estimate; // prior-cloud mean before any update
    std::vector<ExperimentRecord> records;
    bool terminated_early = false; // degenerate posterior, treated as convergence
};

/// Adaptive inversion-experiment learning loop: guess an experiment from
/// the posterior, run it on the untrusted system, median-vote noisy
/// likelihoods per particle, Bayes update, resample below the ESS
/// threshold. Deterministic given (config, seed).
QhlResult qhl_run(const QhlConfig& config, const UntrustedSystem& system);

enum class ModelLabel { A, B };

/// Exact-inversion decision rule: apply U_a^dag after the black box and
/// check survival of v0 over `shots` repetitions; any non-survival selects
/// B. (Identical U_a = U_b degenerates to always A.)
ModelLabel distinguish_by_inversion(const UnitaryMatrix& u_a, const UnitaryMatrix& u_b,
                                    const std::function<StateVector(const StateVector&)>& black_box,
                                    const StateVector& v0, int shots, std::mt19937_64& rng);

/// Base-2 iterated logarithm: applications of log2 until the value is <= 1.
int log_star(double n);

/// Order-of-magnitude query-cost estimate for learning with an N-dim,
/// d-sparse model family with entry bound Lambda, evolution time t,
/// tolerance epsilon and M hypothetical models:
/// M log*(N) d^3 (Lambda t) / epsilon, all small-order exponents dropped.
/// A heuristic magnitude, not a bound.
double cost_model(double dim_n, double sparsity_d, double entry_bound, double time,
                  double epsilon, double models);

} // namespace qlab
