#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qlab {

/// Finite discrete distribution: entries >= 0 summing to 1 within 1e-9.
class DiscreteDistribution {
  public:
    explicit DiscreteDistribution(std::vector<double> probs,
                                  std::optional<std::vector<std::string>> labels = std::nullopt);

    static DiscreteDistribution uniform(std::size_t size);

    std::size_t size() const { return probs_.size(); }
    const std::vector<double>& probs() const { return probs_; }
    double operator[](std::size_t i) const { return probs_[i]; }
    const std::optional<std::vector<std::string>>& labels() const { return labels_; }

  private:
    std::vector<double> probs_;
    std::optional<std::vector<std::string>> labels_;
};

/// Precomputed inverse-CDF sampler over a probability vector.
class InverseCdfSampler {
  public:
    explicit InverseCdfSampler(const std::vector<double>& probs);
    std::size_t operator()(std::mt19937_64& rng) const;

  private:
    std::vector<double> cumulative_;
};

/// Success probability of the best single-sample test between p and q:
/// 1/2 (1 + 1/2 sum_x |p(x) - q(x)|).
double distinguish_probability(const DiscreteDistribution& p, const DiscreteDistribution& q);

/// Majority-vote repetition count boosting a single-trial success
/// probability p_dist > 1/2 to failure probability `failure`
/// (Hoeffding bound): ceil(ln(1/failure) / (2 (p_dist - 1/2)^2)).
int repetitions_for_confidence(double p_dist, double failure);

/// Concentration of the symmetric Dirichlet whose per-entry variance over
/// `sides` outcomes equals `variance`. Throws unless
/// 0 < variance < (1/D)(1 - 1/D).
double dice_concentration(std::size_t sides, double variance);

/// Random distribution over `sides` outcomes with per-entry mean exactly
/// 1/sides and the requested ensemble variance, drawn from the symmetric
/// Dirichlet whose concentration matches those two moments.
DiscreteDistribution random_dice_distribution(std::size_t sides, double variance,
                                              std::mt19937_64& rng);

enum class DistLabel { P, Q };

/// Draws `samples` i.i.d. outcomes from the true distribution and returns
/// the maximum-likelihood label (log-likelihoods floored at 1e-12 per
/// outcome; ties resolve to P).
DistLabel empirical_distinguish(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                DistLabel truth, std::size_t samples, std::mt19937_64& rng);

/// CSV persistence, two columns: label, probability.
void write_distribution_csv(const std::string& path, const DiscreteDistribution& dist,
                            const std::string& label_column = "label");
DiscreteDistribution read_distribution_csv(const std::string& path);

} // namespace qlab
