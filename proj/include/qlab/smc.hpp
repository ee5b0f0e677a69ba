#pragma once

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

namespace qlab {

/// Weighted posterior hypothesis: coupling vector x with weight w.
struct Particle {
    Eigen::VectorXd x;
    double w = 0.0;
};

/// Weighted particle representation of the posterior. Weights are
/// non-negative and sum to 1 within 1e-9; at least 2 particles.
class ParticleCloud {
  public:
    explicit ParticleCloud(std::vector<Particle> particles);

    static ParticleCloud uniform_weights(std::vector<Eigen::VectorXd> positions);

    std::size_t count() const { return particles_.size(); }
    Eigen::Index dim_x() const { return particles_.front().x.size(); }
    const std::vector<Particle>& particles() const { return particles_; }
    const Particle& operator[](std::size_t i) const { return particles_[i]; }

  private:
    std::vector<Particle> particles_;
};

/// Floor applied to likelihood estimates before a Bayes update so that a
/// noisy estimator cannot annihilate a particle outright.
inline constexpr double kLikelihoodFloor = 1e-10;

/// w_i <- w_i p_i / sum_m w_m p_m. Throws when the normalizer is zero
/// (every model ruled out: likelihood-model bug or floor misconfiguration).
ParticleCloud bayes_update(const ParticleCloud& cloud, const std::vector<double>& likelihoods);

/// 1 / sum w_i^2: weight-degeneracy diagnostic in [1, M].
double effective_sample_size(const ParticleCloud& cloud);

/// Liu-West refresh: draw an ancestor x_i with probability w_i, then sample
/// from a normal centered at a x_i + (1-a) mu with covariance (1-a^2) Sigma,
/// where (mu, Sigma) are the cloud's weighted mean and covariance. Produces
/// uniform weights and preserves mean and covariance in expectation. a = 1
/// degenerates to plain multinomial resampling. A degenerate covariance
/// falls back to ancestor copies with isotropic jitter of 1e-8.
ParticleCloud liu_west_resample(const ParticleCloud& cloud, double a, std::mt19937_64& rng);

/// Posterior mean sum_i w_i x_i.
Eigen::VectorXd mean_estimate(const ParticleCloud& cloud);

/// Weighted covariance sum_i w_i (x_i - mu)(x_i - mu)^T.
Eigen::MatrixXd cloud_covariance(const ParticleCloud& cloud);

/// Squared Euclidean distance between estimate and truth.
double quadratic_loss(const Eigen::VectorXd& estimate, const Eigen::VectorXd& x_true);

/// Debug snapshot, columns: particle, weight, x_0..x_{dim-1}.
void write_cloud_csv(const std::string& path, const ParticleCloud& cloud);

} // namespace qlab
