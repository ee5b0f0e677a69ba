#include "qlab/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qlab {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kLikelihoodFloor = 1e-12;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

DiscreteDistribution::DiscreteDistribution(std::vector<double> probs,
                                           std::optional<std::vector<std::string>> labels)
    : probs_(std::move(probs)), labels_(std::move(labels)) {
    if (probs_.empty()) throw std::invalid_argument("DiscreteDistribution: empty support");
    double sum = 0.0;
    for (double p : probs_) {
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("DiscreteDistribution: negative or non-finite entry");
        sum += p;
    }
    if (std::abs(sum - 1.0) > kSumTolerance)
        throw std::invalid_argument("DiscreteDistribution: entries sum to " +
                                    std::to_string(sum));
    if (labels_ && labels_->size() != probs_.size())
        throw std::invalid_argument("DiscreteDistribution: label count mismatch");
}

DiscreteDistribution DiscreteDistribution::uniform(std::size_t size) {
    if (size == 0) throw std::invalid_argument("DiscreteDistribution::uniform: empty support");
    return DiscreteDistribution(std::vector<double>(size, 1.0 / static_cast<double>(size)));
}

InverseCdfSampler::InverseCdfSampler(const std::vector<double>& probs) {
    cumulative_.reserve(probs.size());
    double cum = 0.0;
    for (double p : probs) {
        cum += p;
        cumulative_.push_back(cum);
    }
    if (cumulative_.empty()) throw std::invalid_argument("InverseCdfSampler: empty support");
    cumulative_.back() = std::max(cumulative_.back(), 1.0);
}

std::size_t InverseCdfSampler::operator()(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

double distinguish_probability(const DiscreteDistribution& p, const DiscreteDistribution& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("distinguish_probability: length mismatch");
    double l1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) l1 += std::abs(p[i] - q[i]);
    return 0.5 * (1.0 + 0.5 * l1);
}

int repetitions_for_confidence(double p_dist, double failure) {
    if (!(p_dist > 0.5))
        throw std::invalid_argument("repetitions_for_confidence: no bias to amplify (p_dist <= 1/2)");
    if (p_dist > 1.0)
        throw std::invalid_argument("repetitions_for_confidence: p_dist above 1");
    if (!(failure > 0.0 && failure < 0.5))
        throw std::invalid_argument("repetitions_for_confidence: failure must lie in (0, 1/2)");
    double bias = p_dist - 0.5;
    double count = std::log(1.0 / failure) / (2.0 * bias * bias);
    return static_cast<int>(std::ceil(count));
}

double dice_concentration(std::size_t sides, double variance) {
    if (sides < 2) throw std::invalid_argument("dice_concentration: need at least 2 sides");
    const double d = static_cast<double>(sides);
    const double max_variance = (1.0 / d) * (1.0 - 1.0 / d);
    if (!(variance > 0.0 && variance < max_variance))
        throw std::invalid_argument("dice_concentration: variance must lie in (0, " +
                                    std::to_string(max_variance) + ")");
    // Symmetric Dirichlet moment match: V = (1/D)(1 - 1/D) / (D alpha + 1).
    const double alpha = (max_variance / variance - 1.0) / d;
    if (!(alpha >= 1e-12))
        throw std::invalid_argument(
            "dice_concentration: variance too close to the feasibility bound");
    return alpha;
}

DiscreteDistribution random_dice_distribution(std::size_t sides, double variance,
                                              std::mt19937_64& rng) {
    const double alpha = dice_concentration(sides, variance);
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> probs(sides);
    double sum = 0.0;
    for (double& p : probs) {
        p = gamma(rng);
        sum += p;
    }
    if (!(sum > 0.0))
        throw std::runtime_error("random_dice_distribution: degenerate Dirichlet draw");
    for (double& p : probs) p /= sum;
    return DiscreteDistribution(std::move(probs));
}

DistLabel empirical_distinguish(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                DistLabel truth, std::size_t samples, std::mt19937_64& rng) {
    if (p.size() != q.size())
        throw std::invalid_argument("empirical_distinguish: supports do not align");
    const DiscreteDistribution& source = (truth == DistLabel::P) ? p : q;
    InverseCdfSampler draw(source.probs());
    double log_ratio = 0.0; // log L(p) - log L(q), floored per outcome
    for (std::size_t s = 0; s < samples; ++s) {
        std::size_t x = draw(rng);
        log_ratio += std::log(std::max(p[x], kLikelihoodFloor));
        log_ratio -= std::log(std::max(q[x], kLikelihoodFloor));
    }
    return log_ratio >= 0.0 ? DistLabel::P : DistLabel::Q;
}

void write_distribution_csv(const std::string& path, const DiscreteDistribution& dist,
                            const std::string& label_column) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << label_column << ",probability\n";
    for (std::size_t i = 0; i < dist.size(); ++i) {
        std::string label = dist.labels() ? (*dist.labels())[i] : std::to_string(i);
        out << label << "," << format_double(dist[i]) << "\n";
    }
}

DiscreteDistribution read_distribution_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": missing header row");
    std::vector<double> probs;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.rfind(',');
        if (comma == std::string::npos)
            throw std::runtime_error(path + ": malformed row '" + line + "'");
        labels.push_back(line.substr(0, comma));
        probs.push_back(std::stod(line.substr(comma + 1)));
    }
    return DiscreteDistribution(std::move(probs), std::move(labels));
}

} // namespace qlab
