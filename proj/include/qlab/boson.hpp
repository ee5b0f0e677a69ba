#pragma once

#include "qlab/distance.hpp"
#include "qlab/statevector.hpp"

#include <Eigen/Dense>

#include <random>
#include <string>
#include <vector>

namespace qlab {

/// Photon counts per output mode; entries are non-negative and sum to the
/// photon number of the experiment they describe.
struct Outcome {
    std::vector<int> s;

    std::size_t modes() const { return s.size(); }
    int total_photons() const;
    /// Dash-separated counts, e.g. "1-0-2".
    std::string label() const;

    bool operator==(const Outcome&) const = default;
};

/// Transition matrix of an m-mode, n-photon linear-optical experiment:
/// n orthonormal columns of an m x m unitary.
class Interferometer {
  public:
    Interferometer(Eigen::Index modes, Eigen::Index photons, Eigen::MatrixXcd transition);

    Eigen::Index modes() const { return transition_.rows(); }
    Eigen::Index photons() const { return transition_.cols(); }
    const Eigen::MatrixXcd& transition() const { return transition_; }

  private:
    Eigen::MatrixXcd transition_;
};

/// Exact permanent by recursive expansion in minors (all cofactors
/// positive). Exponential-factorial cost; sizes up to 12 only.
Amplitude permanent_minors(const Eigen::MatrixXcd& m);

/// Permanent via Ryser's inclusion-exclusion formula with Gray-code
/// ordering, O(2^n n). Sizes up to 28.
Amplitude permanent_ryser(const Eigen::MatrixXcd& m);

/// Row-multiset matrix: s_i copies of row i of the transition matrix,
/// stacked in mode order. Throws unless sum(s) equals the photon number.
Eigen::MatrixXcd build_A_S(const Interferometer& a, const Outcome& s);

/// Pr(S|A) = |Per(A_S)|^2 / (s_1! ... s_m!).
double outcome_probability(const Interferometer& a, const Outcome& s);

/// All photon-count tuples for m modes and n photons, mode-0 count
/// descending, C(m+n-1, n) of them. Throws when that count exceeds 10^6.
std::vector<Outcome> enumerate_outcomes(int modes, int photons);

/// Exact outcome distribution, labeled with dash-separated counts.
DiscreteDistribution full_distribution(const Interferometer& a);

/// I.i.d. outcomes drawn by inverse CDF over the enumerated distribution.
std::vector<Outcome> sample_outcome(const Interferometer& a, std::size_t shots,
                                    std::mt19937_64& rng);

/// First n columns of a Haar-distributed m x m unitary.
Interferometer haar_random_interferometer(Eigen::Index modes, Eigen::Index photons,
                                          std::mt19937_64& rng);

/// Complex-matrix file format shared with the CLI:
/// {"rows": [[[re, im], ...], ...]}.
Eigen::MatrixXcd read_matrix_json(const std::string& path);
void write_matrix_json(const std::string& path, const Eigen::MatrixXcd& m);

} // namespace qlab
