#include "qlab/boson.hpp"

#include "json.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// C(m+n-1, n) without overflow at desk scale.
double multiset_count(int modes, int photons) {
    double c = 1.0;
    for (int i = 1; i <= photons; ++i)
        c = c * static_cast<double>(modes - 1 + i) / static_cast<double>(i);
    return c;
}

Amplitude minors_recurse(const Eigen::MatrixXcd& m, Eigen::Index row, std::uint32_t used_cols) {
    const Eigen::Index n = m.rows();
    if (row == n) return Amplitude(1.0, 0.0);
    Amplitude sum(0.0, 0.0);
    for (Eigen::Index j = 0; j < n; ++j) {
        if (used_cols & (std::uint32_t(1) << j)) continue;
        if (m(row, j) == Amplitude(0.0, 0.0)) continue;
        sum += m(row, j) * minors_recurse(m, row + 1, used_cols | (std::uint32_t(1) << j));
    }
    return sum;
}

void enumerate_recurse(int modes_left, int photons_left, std::vector<int>& prefix,
                       std::vector<Outcome>& out) {
    if (modes_left == 1) {
        prefix.push_back(photons_left);
        out.push_back(Outcome{prefix});
        prefix.pop_back();
        return;
    }
    for (int k = photons_left; k >= 0; --k) {
        prefix.push_back(k);
        enumerate_recurse(modes_left - 1, photons_left - k, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

int Outcome::total_photons() const {
    return std::accumulate(s.begin(), s.end(), 0);
}

std::string Outcome::label() const {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += '-';
        out += std::to_string(s[i]);
    }
    return out;
}

Interferometer::Interferometer(Eigen::Index modes, Eigen::Index photons,
                               Eigen::MatrixXcd transition)
    : transition_(std::move(transition)) {
    if (modes < 1 || photons < 1 || photons > modes)
        throw std::invalid_argument("Interferometer: need 1 <= photons <= modes");
    if (transition_.rows() != modes || transition_.cols() != photons)
        throw std::invalid_argument("Interferometer: transition matrix shape mismatch");
    Eigen::MatrixXcd gram = transition_.adjoint() * transition_;
    gram -= Eigen::MatrixXcd::Identity(photons, photons);
    if (gram.cwiseAbs().maxCoeff() > kUnitaryTolerance)
        throw std::invalid_argument("Interferometer: columns not orthonormal");
}

Amplitude permanent_minors(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("permanent_minors: matrix not square");
    if (m.rows() < 1 || m.rows() > 12)
        throw std::invalid_argument("permanent_minors: size must lie in [1, 12]");
    return minors_recurse(m, 0, 0);
}

Amplitude permanent_ryser(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("permanent_ryser: matrix not square");
    const int n = static_cast<int>(m.rows());
    if (n < 1 || n > 28) throw std::invalid_argument("permanent_ryser: size must lie in [1, 28]");

    std::vector<Amplitude> row_sums(n, Amplitude(0.0, 0.0));
    Amplitude total(0.0, 0.0);
    std::uint32_t prev_gray = 0;
    const std::uint64_t subsets = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < subsets; ++k) {
        std::uint32_t gray = static_cast<std::uint32_t>(k ^ (k >> 1));
        std::uint32_t changed = gray ^ prev_gray;
        int col = std::countr_zero(changed);
        if (gray & changed) {
            for (int i = 0; i < n; ++i) row_sums[i] += m(i, col);
        } else {
            for (int i = 0; i < n; ++i) row_sums[i] -= m(i, col);
        }
        prev_gray = gray;
        Amplitude prod(1.0, 0.0);
        for (int i = 0; i < n; ++i) prod *= row_sums[i];
        total += (std::popcount(gray) & 1) ? -prod : prod;
    }
    return (n & 1) ? -total : total;
}

Eigen::MatrixXcd build_A_S(const Interferometer& a, const Outcome& s) {
    if (static_cast<Eigen::Index>(s.modes()) != a.modes())
        throw std::invalid_argument("build_A_S: outcome mode count mismatch");
    for (int c : s.s)
        if (c < 0) throw std::invalid_argument("build_A_S: negative photon count");
    if (s.total_photons() != a.photons())
        throw std::invalid_argument("build_A_S: outcome photon total " +
                                    std::to_string(s.total_photons()) + " != " +
                                    std::to_string(a.photons()));
    const Eigen::Index n = a.photons();
    Eigen::MatrixXcd out(n, n);
    Eigen::Index row = 0;
    for (Eigen::Index mode = 0; mode < a.modes(); ++mode)
        for (int copy = 0; copy < s.s[static_cast<std::size_t>(mode)]; ++copy)
            out.row(row++) = a.transition().row(mode);
    return out;
}

double outcome_probability(const Interferometer& a, const Outcome& s) {
    Amplitude per = permanent_ryser(build_A_S(a, s));
    double denom = 1.0;
    for (int c : s.s) denom *= factorial(c);
    return std::norm(per) / denom;
}

std::vector<Outcome> enumerate_outcomes(int modes, int photons) {
    if (modes < 1 || photons < 0)
        throw std::invalid_argument("enumerate_outcomes: need modes >= 1, photons >= 0");
    if (multiset_count(modes, photons) > 1e6)
        throw std::invalid_argument("enumerate_outcomes: outcome count exceeds 10^6 budget");
    std::vector<Outcome> out;
    out.reserve(static_cast<std::size_t>(multiset_count(modes, photons)));
    std::vector<int> prefix;
    enumerate_recurse(modes, photons, prefix, out);
    return out;
}

DiscreteDistribution full_distribution(const Interferometer& a) {
    std::vector<Outcome> outcomes =
        enumerate_outcomes(static_cast<int>(a.modes()), static_cast<int>(a.photons()));
    std::vector<double> probs(outcomes.size());
    std::vector<std::string> labels(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        probs[i] = outcome_probability(a, outcomes[i]);
        labels[i] = outcomes[i].label();
    }
    return DiscreteDistribution(std::move(probs), std::move(labels));
}

std::vector<Outcome> sample_outcome(const Interferometer& a, std::size_t shots,
                                    std::mt19937_64& rng) {
    std::vector<Outcome> outcomes =
        enumerate_outcomes(static_cast<int>(a.modes()), static_cast<int>(a.photons()));
    std::vector<double> probs(outcomes.size());
    for (std::size_t i = 0; i < outcomes.size(); ++i) probs[i] = outcome_probability(a, outcomes[i]);
    InverseCdfSampler draw(probs);
    std::vector<Outcome> samples;
    samples.reserve(shots);
    for (std::size_t k = 0; k < shots; ++k) samples.push_back(outcomes[draw(rng)]);
    return samples;
}

Interferometer haar_random_interferometer(Eigen::Index modes, Eigen::Index photons,
                                          std::mt19937_64& rng) {
    if (photons > modes)
        throw std::invalid_argument("haar_random_interferometer: photons must not exceed modes");
    UnitaryMatrix u = haar_random_unitary(modes, rng);
    return Interferometer(modes, photons, u.entries().leftCols(photons));
}

Eigen::MatrixXcd read_matrix_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("read_matrix_json: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument("read_matrix_json: invalid JSON in " + path + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array() || j["rows"].empty())
        throw std::invalid_argument("read_matrix_json: expected {\"rows\": [[[re, im], ...], ...]}");
    const auto& rows = j["rows"];
    const Eigen::Index n_rows = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index n_cols = static_cast<Eigen::Index>(rows[0].size());
    Eigen::MatrixXcd m(n_rows, n_cols);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n_cols)
            throw std::invalid_argument("read_matrix_json: ragged rows in " + path);
        for (Eigen::Index k = 0; k < n_cols; ++k) {
            const auto& entry = row[static_cast<std::size_t>(k)];
            if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() ||
                !entry[1].is_number())
                throw std::invalid_argument("read_matrix_json: entries must be [re, im] pairs");
            m(i, k) = Amplitude(entry[0].get<double>(), entry[1].get<double>());
        }
    }
    return m;
}

void write_matrix_json(const std::string& path, const Eigen::MatrixXcd& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k)
            row.push_back({m(i, k).real(), m(i, k).imag()});
        rows.push_back(std::move(row));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_matrix_json: cannot open " + path);
    out << nlohmann::json{{"rows", std::move(rows)}}.dump() << "\n";
}

} // namespace qlab
