#include "qlab/protocol.hpp"

#include "doctest.h"
#include "qlab/rng.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace qlab;

namespace {

CouplingGraph pair_graph() {
    return CouplingGraph::complete(2); // one coupling
}

Eigen::VectorXd scalar(double v) {
    Eigen::VectorXd x(1);
    x << v;
    return x;
}

// Mixture law of a single amplitude-estimation draw for an interior
// p_datum: success_prob * Uniform[p - eps, p + eps] + (1 - success_prob) *
// Uniform[0, 1].
double mixture_cdf(double x, double p, double eps, double success) {
    double g = std::clamp((x - (p - eps)) / (2.0 * eps), 0.0, 1.0);
    return success * g + (1.0 - success) * std::clamp(x, 0.0, 1.0);
}

} // namespace

TEST_SUITE("protocol") {

TEST_CASE("a collapsed posterior cannot guess an experiment") {
    ParticleCloud cloud({Particle{scalar(0.3), 1.0}, Particle{scalar(0.9), 0.0}});
    std::mt19937_64 rng = substream(23, 0);
    CHECK_THROWS_AS(guess_experiment(cloud, pair_graph(), rng), DegeneratePosteriorError);
}

TEST_CASE("distinct draws set the inverse-norm time") {
    ParticleCloud cloud({Particle{scalar(0.0), 0.5}, Particle{scalar(1.0), 0.5}});
    std::mt19937_64 rng = substream(23, 1);
    GuessedExperiment guess = guess_experiment(cloud, pair_graph(), rng);
    CHECK(guess.t == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(guess.x_minus(0) - guess.x_prime(0)) == doctest::Approx(1.0));
}

TEST_CASE("experiment guesses follow the posterior frequencies") {
    ParticleCloud cloud({Particle{scalar(0.0), 0.2}, Particle{scalar(1.0), 0.3},
                         Particle{scalar(2.0), 0.5}});
    std::mt19937_64 rng = substream(23, 2);
    const int trials = 10000;
    int counts[3] = {0, 0, 0};
    int degenerate = 0; // ten coinciding redraws happen at rate ~w^10
    int accepted = 0;
    for (int trial = 0; trial < trials; ++trial) {
        try {
            GuessedExperiment guess = guess_experiment(cloud, pair_graph(), rng);
            counts[static_cast<int>(guess.x_minus(0) + 0.5)]++;
            ++accepted;
        } catch (const DegeneratePosteriorError&) {
            ++degenerate;
        }
    }
    CHECK(degenerate < 50);
    const double weights[3] = {0.2, 0.3, 0.5};
    for (int i = 0; i < 3; ++i) {
        double freq = static_cast<double>(counts[i]) / accepted;
        double sigma = std::sqrt(weights[i] * (1.0 - weights[i]) / accepted);
        CHECK(std::abs(freq - weights[i]) < 3.0 * sigma);
    }
}

TEST_CASE("querying with the true couplings always survives") {
    UntrustedSystem system(scalar(0.5), pair_graph());
    StateVector v0 = uniform_superposition(2);
    std::mt19937_64 rng = substream(23, 3);
    for (int shot = 0; shot < 200; ++shot)
        CHECK(run_untrusted(system, scalar(0.5), 1.7, v0, rng) == 1);
}

TEST_CASE("a quarter-period coupling error never survives") {
    UntrustedSystem system(scalar(0.0), pair_graph());
    StateVector v0 = uniform_superposition(2);
    const double delta = 0.5;
    const double t = std::numbers::pi / (2.0 * delta); // delta t = pi/2
    std::mt19937_64 rng = substream(23, 4);
    for (int shot = 0; shot < 200; ++shot)
        CHECK(run_untrusted(system, scalar(delta), t, v0, rng) == 0);
}

TEST_CASE("survival frequencies match the survival probability") {
    UntrustedSystem system(scalar(0.0), pair_graph());
    StateVector v0 = uniform_superposition(2);
    const double delta = 0.5, t = 0.9;
    const double expected = std::cos(delta * t) * std::cos(delta * t);
    std::mt19937_64 rng = substream(23, 5);
    const int shots = 100000;
    int survived = 0;
    for (int shot = 0; shot < shots; ++shot)
        survived += run_untrusted(system, scalar(delta), t, v0, rng);
    CHECK(static_cast<double>(survived) / shots == doctest::Approx(expected).epsilon(0.013));
}

TEST_CASE("noise-free estimation of a perfect inversion returns one") {
    EstimatorConfig cfg;
    cfg.epsilon = 1e-6;
    cfg.k = 3;
    cfg.success_prob = 1.0;
    std::mt19937_64 rng = substream(23, 6);
    double estimate = noisy_likelihood(scalar(0.4), scalar(0.4), pair_graph(), 1.3, 1, cfg, rng);
    CHECK(estimate == doctest::Approx(1.0).epsilon(2e-6));
}

TEST_CASE("median voting lands within epsilon almost always") {
    EstimatorConfig cfg;
    cfg.epsilon = 0.05;
    cfg.k = 13;
    const double p_datum = 0.37;
    std::mt19937_64 rng = substream(23, 7);
    const int trials = 10000;
    int within = 0;
    for (int trial = 0; trial < trials; ++trial)
        if (std::abs(median_voted_estimate(p_datum, cfg, rng) - p_datum) <= cfg.epsilon + 1e-12)
            ++within;
    CHECK(static_cast<double>(within) / trials >= 0.99);
}

TEST_CASE("estimates always stay inside the unit interval") {
    EstimatorConfig cfg;
    cfg.epsilon = 0.3;
    cfg.k = 2;
    std::mt19937_64 rng = substream(23, 8);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        double e = median_voted_estimate(unif(rng), cfg, rng);
        CHECK(e >= 0.0);
        CHECK(e <= 1.0);
    }
}

TEST_CASE("datum flip mirrors the estimate distribution") {
    EstimatorConfig cfg;
    cfg.epsilon = 0.2;
    cfg.k = 1;
    cfg.success_prob = 1.0;
    const double t = 1.1;
    std::mt19937_64 rng_one = substream(23, 9);
    std::mt19937_64 rng_zero = substream(23, 10);
    double mean_one = 0.0, mean_zero = 0.0;
    const int trials = 20000;
    for (int trial = 0; trial < trials; ++trial) {
        mean_one += noisy_likelihood(scalar(0.3), scalar(0.5), pair_graph(), t, 1, cfg, rng_one);
        mean_zero += noisy_likelihood(scalar(0.3), scalar(0.5), pair_graph(), t, 0, cfg, rng_zero);
    }
    mean_one /= trials;
    mean_zero /= trials;
    CHECK(mean_zero == doctest::Approx(1.0 - mean_one).epsilon(0.01));
}

TEST_CASE("single estimates follow the stated mixture law") {
    EstimatorConfig cfg;
    cfg.epsilon = 0.05;
    cfg.k = 1; // raw draws, no voting
    const double p_datum = 0.4;
    std::mt19937_64 rng = substream(23, 11);
    const int n = 10000;
    std::vector<double> draws(n);
    for (double& d : draws) d = median_voted_estimate(p_datum, cfg, rng);
    std::sort(draws.begin(), draws.end());
    double ks = 0.0;
    for (int i = 0; i < n; ++i) {
        double f = mixture_cdf(draws[static_cast<std::size_t>(i)], p_datum, cfg.epsilon,
                               cfg.success_prob);
        ks = std::max(ks, std::abs((i + 1.0) / n - f));
        ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    }
    CHECK(ks < 1.6276 / std::sqrt(static_cast<double>(n))); // KS critical value at 1%
}

TEST_CASE("the noiseless limit learns a single coupling") {
    QhlConfig config;
    config.graph = pair_graph();
    config.prior_low = 0.0;
    config.prior_high = 1.0;
    config.particles = 1000;
    config.n_exp = 50;
    config.estimator.epsilon = 1e-6;
    config.estimator.k = 1;
    config.estimator.success_prob = 1.0;
    UntrustedSystem system(scalar(0.5), pair_graph());

    int converged = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        config.seed = seed;
        QhlResult result = qhl_run(config, system);
        REQUIRE(!result.records.empty());
        if (result.records.back().loss < 1e-4) ++converged;
    }
    CHECK(converged >= 18); // >= 90% of seeded runs
}

TEST_CASE("truth outside the prior plateaus at the boundary") {
    QhlConfig config;
    config.graph = pair_graph();
    config.prior_low = 0.0;
    config.prior_high = 1.0;
    config.particles = 500;
    config.n_exp = 40;
    config.seed = 5;
    UntrustedSystem system(scalar(1.5), pair_graph());
    QhlResult result = qhl_run(config, system);
    REQUIRE(!result.records.empty());
    // The estimate is confined to the hull of the prior support, so the
    // loss cannot fall below the squared boundary distance.
    CHECK(result.estimate(0) < 1.1);
    CHECK(result.records.back().loss > 0.1);
    CHECK(result.records.back().loss < 1.0);
}

TEST_CASE("identical seeds reproduce identical records") {
    QhlConfig config;
    config.graph = pair_graph();
    config.particles = 200;
    config.n_exp = 15;
    config.seed = 99;
    UntrustedSystem system(scalar(0.3), pair_graph());
    QhlResult a = qhl_run(config, system);
    QhlResult b = qhl_run(config, system);
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
        CHECK(a.records[i].t == b.records[i].t);
        CHECK(a.records[i].datum == b.records[i].datum);
        CHECK(a.records[i].loss == b.records[i].loss);
        CHECK(a.records[i].ess == b.records[i].ess);
        CHECK(a.records[i].resampled == b.records[i].resampled);
        CHECK((a.records[i].estimate - b.records[i].estimate).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("the true model gains posterior weight under exact likelihoods") {
    CouplingGraph graph = pair_graph();
    StateVector v0 = uniform_superposition(2);
    const int true_index = 4;
    std::vector<Eigen::VectorXd> grid;
    for (int i = 0; i < 10; ++i) grid.push_back(scalar(0.05 + 0.1 * i));
    UntrustedSystem system(grid[true_index], graph);

    double total_final_weight = 0.0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run) {
        std::mt19937_64 rng = substream(23, 100 + static_cast<std::uint64_t>(run));
        ParticleCloud cloud = ParticleCloud::uniform_weights(std::vector(grid));
        for (int iter = 0; iter < 15; ++iter) {
            GuessedExperiment guess;
            try {
                guess = guess_experiment(cloud, graph, rng);
            } catch (const DegeneratePosteriorError&) {
                break; // posterior collapsed onto one grid point: converged
            }
            int datum = run_untrusted(system, guess.x_minus, guess.t, v0, rng);
            DiagonalHermitian h_minus = ising_diagonal(guess.x_minus, graph);
            std::vector<double> likelihoods(cloud.count());
            for (std::size_t j = 0; j < cloud.count(); ++j) {
                DiagonalHermitian h_j = ising_diagonal(cloud[j].x, graph);
                double p = survival_probability(h_minus, h_j, guess.t, v0);
                likelihoods[j] = std::max(datum == 1 ? p : 1.0 - p, kLikelihoodFloor);
            }
            cloud = bayes_update(cloud, likelihoods);
        }
        total_final_weight += cloud[true_index].w;
    }
    double average_final_weight = total_final_weight / runs;
    CHECK(average_final_weight > 0.1); // above the uniform prior weight
    CHECK(average_final_weight > 0.3);
}

TEST_CASE("inversion identifies the matching transformation") {
    std::mt19937_64 rng = substream(23, 12);
    UnitaryMatrix u_a = haar_random_unitary(16, rng);
    UnitaryMatrix u_b = haar_random_unitary(16, rng);
    StateVector v0 = StateVector::basis(16, 0);
    auto apply_a = [&](const StateVector& v) { return apply(u_a, v); };
    for (int trial = 0; trial < 20; ++trial)
        CHECK(distinguish_by_inversion(u_a, u_b, apply_a, v0, 20, rng) == ModelLabel::A);
    // Degenerate promise: identical alternatives resolve to A.
    CHECK(distinguish_by_inversion(u_a, u_a, apply_a, v0, 20, rng) == ModelLabel::A);
}

TEST_CASE("inversion distinguishes haar pairs with high accuracy") {
    std::mt19937_64 rng = substream(23, 13);
    StateVector v0 = StateVector::basis(16, 0);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    const int trials = 100;
    int correct = 0;
    for (int trial = 0; trial < trials; ++trial) {
        UnitaryMatrix u_a = haar_random_unitary(16, rng);
        UnitaryMatrix u_b = haar_random_unitary(16, rng);
        bool truth_is_a = coin(rng) < 0.5;
        const UnitaryMatrix& u = truth_is_a ? u_a : u_b;
        auto black_box = [&](const StateVector& v) { return apply(u, v); };
        ModelLabel label = distinguish_by_inversion(u_a, u_b, black_box, v0, 20, rng);
        if ((label == ModelLabel::A) == truth_is_a) ++correct;
    }
    CHECK(static_cast<double>(correct) / trials >= 0.9);
}

TEST_CASE("iterated logarithm hits the reference values") {
    CHECK(log_star(2.0) == 1);
    CHECK(log_star(16.0) == 3);
    CHECK(log_star(65536.0) == 4);
    CHECK(log_star(std::pow(2.0, 200)) == 5);
    CHECK_THROWS_AS(log_star(0.0), std::invalid_argument);
}

TEST_CASE("the cost model evaluates and scales monotonically") {
    const double n = std::pow(2.0, 200);
    double base = cost_model(n, 100.0, 1.0, 1.0, 0.05, 100.0);
    CHECK(base == doctest::Approx(1e10).epsilon(1e-12));
    CHECK(cost_model(n, 100.0, 1.0, 1.0, 0.10, 100.0) ==
          doctest::Approx(base / 2.0).epsilon(1e-12)); // doubling epsilon halves the cost
    CHECK(cost_model(n, 200.0, 1.0, 1.0, 0.05, 100.0) > base);
    CHECK(cost_model(n, 100.0, 2.0, 1.0, 0.05, 100.0) > base);
    CHECK(cost_model(n, 100.0, 1.0, 2.0, 0.05, 100.0) > base);
    CHECK(cost_model(n, 100.0, 1.0, 1.0, 0.05, 200.0) > base);
    CHECK_THROWS_AS(cost_model(-1.0, 1.0, 1.0, 1.0, 0.1, 1.0), std::invalid_argument);
}

} // TEST_SUITE
