#include "qlab/boson.hpp"

#include "doctest.h"
#include "qlab/rng.hpp"
#include "test_helpers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>

using namespace qlab;
using qlab::testing::fock_outcome_probability;
using qlab::testing::random_complex_matrix;

namespace {

Interferometer hong_ou_mandel() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd a(2, 2);
    a << s, s, s, -s;
    return Interferometer(2, 2, a);
}

} // namespace

TEST_SUITE("boson") {

TEST_CASE("permanent by minors on small closed forms") {
    CHECK(std::abs(permanent_minors(Eigen::MatrixXcd::Identity(4, 4)) - Amplitude(1.0, 0.0)) <
          1e-14);
    Eigen::MatrixXcd m(2, 2);
    m << Amplitude(1.0, 2.0), Amplitude(0.0, -1.0), Amplitude(3.0, 0.0), Amplitude(2.0, 1.0);
    Amplitude expected = m(0, 0) * m(1, 1) + m(0, 1) * m(1, 0); // ad + bc
    CHECK(std::abs(permanent_minors(m) - expected) < 1e-14);
    CHECK(std::abs(permanent_minors(Eigen::MatrixXcd::Ones(4, 4)) - Amplitude(24.0, 0.0)) <
          1e-10); // Per(J_n) = n!
    CHECK_THROWS_AS(permanent_minors(Eigen::MatrixXcd::Ones(2, 3)), std::invalid_argument);
}

TEST_CASE("ryser matches the expansion-by-minors oracle") {
    std::mt19937_64 rng = substream(13, 0);
    CHECK(std::abs(permanent_ryser(Eigen::MatrixXcd::Identity(6, 6)) - Amplitude(1.0, 0.0)) <
          1e-12);
    for (Eigen::Index n = 1; n <= 8; ++n) {
        for (int trial = 0; trial < 4; ++trial) {
            Eigen::MatrixXcd m = random_complex_matrix(n, rng);
            Amplitude oracle = permanent_minors(m);
            Amplitude fast = permanent_ryser(m);
            CHECK(std::abs(fast - oracle) <= 1e-9 * std::max(1.0, std::abs(oracle)));
        }
    }
    CHECK_THROWS_AS(permanent_ryser(Eigen::MatrixXcd::Ones(3, 2)), std::invalid_argument);
}

TEST_CASE("a zero row kills the permanent") {
    std::mt19937_64 rng = substream(13, 1);
    Eigen::MatrixXcd m = random_complex_matrix(4, rng);
    m.row(2).setZero();
    CHECK(std::abs(permanent_ryser(m)) < 1e-12);
}

TEST_CASE("single-entry-per-row permanents multiply out") {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
    m(0, 2) = Amplitude(2.0, 0.0);
    m(1, 0) = Amplitude(0.0, 3.0);
    m(2, 3) = Amplitude(-1.0, 0.0);
    m(3, 1) = Amplitude(0.5, 0.5);
    Amplitude expected = m(0, 2) * m(1, 0) * m(2, 3) * m(3, 1);
    CHECK(std::abs(permanent_ryser(m) - expected) < 1e-12);
    CHECK(std::abs(permanent_minors(m) - expected) < 1e-12);
}

TEST_CASE("row-multiset matrix stacks the selected rows") {
    std::mt19937_64 rng = substream(13, 2);
    Interferometer a = haar_random_interferometer(3, 2, rng);

    Eigen::MatrixXcd distinct = build_A_S(a, Outcome{{1, 0, 1}});
    CHECK((distinct.row(0) - a.transition().row(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((distinct.row(1) - a.transition().row(2)).cwiseAbs().maxCoeff() == 0.0);

    Eigen::MatrixXcd bunched = build_A_S(a, Outcome{{2, 0, 0}});
    CHECK((bunched.row(0) - a.transition().row(0)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((bunched.row(1) - a.transition().row(0)).cwiseAbs().maxCoeff() == 0.0);

    CHECK_THROWS_AS(build_A_S(a, Outcome{{1, 1, 1}}), std::invalid_argument);
}

TEST_CASE("hong-ou-mandel coincidences are forbidden") {
    Interferometer hom = hong_ou_mandel();
    CHECK(outcome_probability(hom, Outcome{{1, 1}}) <= 1e-12);
    DiscreteDistribution dist = full_distribution(hom);
    // outcomes in order (2,0), (1,1), (0,2)
    CHECK(dist[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(dist[1] <= 1e-12);
    CHECK(dist[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("single photon exits mode i with probability |A_i0|^2") {
    std::mt19937_64 rng = substream(13, 3);
    Interferometer a = haar_random_interferometer(4, 1, rng);
    for (int mode = 0; mode < 4; ++mode) {
        Outcome s{{0, 0, 0, 0}};
        s.s[static_cast<std::size_t>(mode)] = 1;
        CHECK(outcome_probability(a, s) ==
              doctest::Approx(std::norm(a.transition()(mode, 0))).epsilon(1e-12));
    }
}

TEST_CASE("outcome probabilities match the fock-space oracle") {
    std::mt19937_64 rng = substream(13, 4);
    Interferometer a = haar_random_interferometer(5, 3, rng);
    for (const Outcome& s : enumerate_outcomes(5, 3)) {
        double oracle = fock_outcome_probability(a.transition(), s.s);
        CHECK(std::abs(outcome_probability(a, s) - oracle) <= 1e-8);
    }
}

TEST_CASE("outcome enumeration is ordered and counted") {
    std::vector<Outcome> two = enumerate_outcomes(2, 2);
    REQUIRE(two.size() == 3);
    CHECK(two[0] == Outcome{{2, 0}});
    CHECK(two[1] == Outcome{{1, 1}});
    CHECK(two[2] == Outcome{{0, 2}});
    CHECK(enumerate_outcomes(3, 1).size() == 3);
    CHECK(enumerate_outcomes(5, 3).size() == 35); // C(7,3)
    CHECK_THROWS_AS(enumerate_outcomes(100, 4), std::invalid_argument);
}

TEST_CASE("distributions normalize for random instances") {
    std::mt19937_64 rng = substream(13, 5);
    for (int trial = 0; trial < 3; ++trial) {
        Interferometer a = haar_random_interferometer(6, 3, rng);
        DiscreteDistribution dist = full_distribution(a);
        double sum = 0.0;
        for (std::size_t i = 0; i < dist.size(); ++i) sum += dist[i];
        CHECK(std::abs(sum - 1.0) <= 1e-8);
    }
}

TEST_CASE("point-mass instances sample a single outcome") {
    Eigen::MatrixXcd column(2, 1);
    column << 1.0, 0.0;
    Interferometer a(2, 1, column);
    DiscreteDistribution dist = full_distribution(a);
    CHECK(dist[0] == doctest::Approx(1.0).epsilon(1e-12));
    std::mt19937_64 rng = substream(13, 6);
    for (const Outcome& s : sample_outcome(a, 200, rng)) CHECK(s == Outcome{{1, 0}});
}

TEST_CASE("hong-ou-mandel sampling never shows a coincidence") {
    std::mt19937_64 rng = substream(13, 7);
    std::size_t coincidences = 0;
    for (const Outcome& s : sample_outcome(hong_ou_mandel(), 100000, rng))
        if (s == Outcome{{1, 1}}) ++coincidences;
    CHECK(static_cast<double>(coincidences) / 100000.0 < 0.001);
}

TEST_CASE("empirical sampling converges to the exact distribution") {
    std::mt19937_64 rng = substream(13, 8);
    Interferometer a = haar_random_interferometer(5, 3, rng);
    DiscreteDistribution exact = full_distribution(a);
    std::vector<Outcome> outcomes = enumerate_outcomes(5, 3);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < outcomes.size(); ++i) index[outcomes[i].label()] = i;
    const std::size_t shots = 100000;
    std::vector<double> freq(outcomes.size(), 0.0);
    for (const Outcome& s : sample_outcome(a, shots, rng))
        freq[index[s.label()]] += 1.0 / static_cast<double>(shots);
    double tv = 0.0;
    for (std::size_t i = 0; i < freq.size(); ++i) tv += std::abs(freq[i] - exact[i]);
    CHECK(tv / 2.0 < 0.02);
}

TEST_CASE("row permutations leave outcome probabilities unchanged") {
    std::mt19937_64 rng = substream(13, 9);
    Interferometer a = haar_random_interferometer(4, 3, rng);
    Outcome s{{1, 1, 1, 0}};
    Eigen::MatrixXcd a_s = build_A_S(a, s);
    double reference = std::norm(permanent_ryser(a_s));
    Eigen::MatrixXcd shuffled(3, 3);
    shuffled.row(0) = a_s.row(2);
    shuffled.row(1) = a_s.row(0);
    shuffled.row(2) = a_s.row(1);
    CHECK(std::norm(permanent_ryser(shuffled)) == doctest::Approx(reference).epsilon(1e-10));
}

TEST_CASE("haar interferometer columns are orthonormal") {
    std::mt19937_64 rng = substream(13, 10);
    Interferometer a = haar_random_interferometer(7, 4, rng);
    Eigen::MatrixXcd gram = a.transition().adjoint() * a.transition();
    CHECK((gram - Eigen::MatrixXcd::Identity(4, 4)).cwiseAbs().maxCoeff() <= 1e-9);

    Interferometer tiny = haar_random_interferometer(1, 1, rng);
    CHECK(std::abs(std::abs(tiny.transition()(0, 0)) - 1.0) <= 1e-12);
}

TEST_CASE("haar first-entry power averages to one over the dimension") {
    std::mt19937_64 rng = substream(13, 11);
    const int draws = 10000;
    const Eigen::Index m = 5;
    double mean = 0.0;
    for (int i = 0; i < draws; ++i) {
        Interferometer a = haar_random_interferometer(m, 1, rng);
        mean += std::norm(a.transition()(0, 0));
    }
    mean /= draws;
    // |A_00|^2 is Beta(1, m-1): variance (m-1)/(m^2 (m+1)).
    double sigma = std::sqrt((m - 1.0) / (double(m) * m * (m + 1.0)) / draws);
    CHECK(std::abs(mean - 1.0 / static_cast<double>(m)) < 3.0 * sigma);
}

TEST_CASE("matrix json files round-trip") {
    std::mt19937_64 rng = substream(13, 12);
    Eigen::MatrixXcd m = random_complex_matrix(3, rng);
    std::string path =
        (std::filesystem::temp_directory_path() / "qlab_test_matrix.json").string();
    write_matrix_json(path, m);
    Eigen::MatrixXcd back = read_matrix_json(path);
    CHECK((back - m).cwiseAbs().maxCoeff() < 1e-15);
    std::filesystem::remove(path);
}

} // TEST_SUITE
