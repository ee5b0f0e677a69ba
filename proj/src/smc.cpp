#include "qlab/smc.hpp"

#include "qlab/distance.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double kWeightSumTolerance = 1e-9;
constexpr double kFallbackJitter = 1e-8;

} // namespace

ParticleCloud::ParticleCloud(std::vector<Particle> particles) : particles_(std::move(particles)) {
    if (particles_.size() < 2) throw std::invalid_argument("ParticleCloud: need at least 2 particles");
    const Eigen::Index dim = particles_.front().x.size();
    double sum = 0.0;
    for (const Particle& p : particles_) {
        if (p.x.size() != dim) throw std::invalid_argument("ParticleCloud: mixed parameter dimensions");
        if (!p.x.allFinite()) throw std::invalid_argument("ParticleCloud: non-finite parameter");
        if (!(p.w >= 0.0) || !std::isfinite(p.w))
            throw std::invalid_argument("ParticleCloud: negative or non-finite weight");
        sum += p.w;
    }
    if (std::abs(sum - 1.0) > kWeightSumTolerance)
        throw std::invalid_argument("ParticleCloud: weights sum to " + std::to_string(sum));
}

ParticleCloud ParticleCloud::uniform_weights(std::vector<Eigen::VectorXd> positions) {
    std::vector<Particle> particles;
    particles.reserve(positions.size());
    const double w = 1.0 / static_cast<double>(positions.size());
    for (Eigen::VectorXd& x : positions) particles.push_back(Particle{std::move(x), w});
    return ParticleCloud(std::move(particles));
}

ParticleCloud bayes_update(const ParticleCloud& cloud, const std::vector<double>& likelihoods) {
    if (likelihoods.size() != cloud.count())
        throw std::invalid_argument("bayes_update: likelihood count mismatch");
    double z = 0.0;
    for (std::size_t i = 0; i < likelihoods.size(); ++i) {
        if (!(likelihoods[i] >= 0.0) || !std::isfinite(likelihoods[i]))
            throw std::invalid_argument("bayes_update: negative or non-finite likelihood");
        z += cloud[i].w * likelihoods[i];
    }
    if (z <= 0.0)
        throw std::runtime_error(
            "bayes_update: normalizer is zero, every model ruled out "
            "(likelihood-model bug or floor misconfiguration)");
    std::vector<Particle> updated(cloud.particles());
    for (std::size_t i = 0; i < updated.size(); ++i) updated[i].w = updated[i].w * likelihoods[i] / z;
    return ParticleCloud(std::move(updated));
}

double effective_sample_size(const ParticleCloud& cloud) {
    double sum_sq = 0.0;
    for (const Particle& p : cloud.particles()) sum_sq += p.w * p.w;
    return 1.0 / sum_sq;
}

Eigen::VectorXd mean_estimate(const ParticleCloud& cloud) {
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(cloud.dim_x());
    for (const Particle& p : cloud.particles()) mean += p.w * p.x;
    return mean;
}

Eigen::MatrixXd cloud_covariance(const ParticleCloud& cloud) {
    const Eigen::VectorXd mean = mean_estimate(cloud);
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(cloud.dim_x(), cloud.dim_x());
    for (const Particle& p : cloud.particles()) {
        Eigen::VectorXd d = p.x - mean;
        cov.noalias() += p.w * d * d.transpose();
    }
    return cov;
}

ParticleCloud liu_west_resample(const ParticleCloud& cloud, double a, std::mt19937_64& rng) {
    if (!(a > 0.0 && a <= 1.0))
        throw std::invalid_argument("liu_west_resample: mixing parameter a must lie in (0, 1]");

    std::vector<double> weights;
    weights.reserve(cloud.count());
    for (const Particle& p : cloud.particles()) weights.push_back(p.w);
    InverseCdfSampler pick(weights);

    const std::size_t m = cloud.count();
    const Eigen::Index dim = cloud.dim_x();
    const double w_new = 1.0 / static_cast<double>(m);
    std::vector<Particle> fresh;
    fresh.reserve(m);

    if (a == 1.0) {
        for (std::size_t i = 0; i < m; ++i) fresh.push_back(Particle{cloud[pick(rng)].x, w_new});
        return ParticleCloud(std::move(fresh));
    }

    const Eigen::VectorXd mean = mean_estimate(cloud);
    Eigen::MatrixXd jitter_cov = (1.0 - a * a) * cloud_covariance(cloud);
    Eigen::LLT<Eigen::MatrixXd> llt(jitter_cov);
    std::normal_distribution<double> gauss(0.0, 1.0);

    if (llt.info() != Eigen::Success || !jitter_cov.allFinite()) {
        std::cerr << "qlab: warning: degenerate posterior covariance, "
                     "resampling with isotropic jitter\n";
        for (std::size_t i = 0; i < m; ++i) {
            Eigen::VectorXd x = cloud[pick(rng)].x;
            for (Eigen::Index j = 0; j < dim; ++j) x(j) += kFallbackJitter * gauss(rng);
            fresh.push_back(Particle{std::move(x), w_new});
        }
        return ParticleCloud(std::move(fresh));
    }

    const Eigen::MatrixXd chol = llt.matrixL();
    for (std::size_t i = 0; i < m; ++i) {
        const Eigen::VectorXd& ancestor = cloud[pick(rng)].x;
        Eigen::VectorXd z(dim);
        for (Eigen::Index j = 0; j < dim; ++j) z(j) = gauss(rng);
        fresh.push_back(Particle{a * ancestor + (1.0 - a) * mean + chol * z, w_new});
    }
    return ParticleCloud(std::move(fresh));
}

double quadratic_loss(const Eigen::VectorXd& estimate, const Eigen::VectorXd& x_true) {
    if (estimate.size() != x_true.size())
        throw std::invalid_argument("quadratic_loss: dimension mismatch");
    return (estimate - x_true).squaredNorm();
}

void write_cloud_csv(const std::string& path, const ParticleCloud& cloud) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "particle,weight";
    for (Eigen::Index j = 0; j < cloud.dim_x(); ++j) out << ",x_" << j;
    out << "\n";
    char buf[64];
    for (std::size_t i = 0; i < cloud.count(); ++i) {
        out << i;
        std::snprintf(buf, sizeof(buf), "%.17g", cloud[i].w);
        out << "," << buf;
        for (Eigen::Index j = 0; j < cloud.dim_x(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", cloud[i].x(j));
            out << "," << buf;
        }
        out << "\n";
    }
}

} // namespace qlab
