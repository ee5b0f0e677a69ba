#pragma once

#include "qlab/statevector.hpp"

#include <Eigen/Dense>

#include <complex>
#include <map>
#include <random>
#include <utility>
#include <vector>

namespace qlab::testing {

inline Eigen::MatrixXcd random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Amplitude(gauss(rng), gauss(rng));
    return 0.5 * (g + g.adjoint().eval());
}

inline StateVector random_state(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXcd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Amplitude(gauss(rng), gauss(rng));
    return StateVector(v / v.norm());
}

inline Eigen::MatrixXcd random_complex_matrix(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Amplitude(gauss(rng), gauss(rng));
    return g;
}

inline Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

/// Dense two-body Ising Hamiltonian assembled from explicit Z and identity
/// tensor factors, qubit 0 leftmost. Independent of the production
/// bit-twiddling path.
inline Eigen::MatrixXcd dense_ising(const Eigen::VectorXd& x,
                                    const std::vector<std::pair<int, int>>& edges, int n_qubits) {
    Eigen::MatrixXcd z(2, 2);
    z << 1.0, 0.0, 0.0, -1.0;
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(2, 2);
    const Eigen::Index dim = Eigen::Index(1) << n_qubits;
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(1, 1);
        for (int q = 0; q < n_qubits; ++q)
            term = kron(term, (q == edges[e].first || q == edges[e].second) ? z : eye);
        h += x(static_cast<Eigen::Index>(e)) * term;
    }
    return h;
}

/// Multi-photon output amplitudes by iterated polynomial multiplication in
/// creation operators: photon i enters mode i and maps to the i-th column
/// of the transition matrix. Returns monomial coefficients c_S; the
/// outcome probability is |c_S|^2 prod_j s_j!. Independent of any
/// permanent computation.
inline std::map<std::vector<int>, Amplitude> fock_output_coefficients(const Eigen::MatrixXcd& a) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    std::map<std::vector<int>, Amplitude> poly;
    poly[std::vector<int>(static_cast<std::size_t>(m), 0)] = Amplitude(1.0, 0.0);
    for (Eigen::Index photon = 0; photon < n; ++photon) {
        std::map<std::vector<int>, Amplitude> next;
        for (const auto& [mono, coeff] : poly) {
            for (Eigen::Index mode = 0; mode < m; ++mode) {
                std::vector<int> key = mono;
                ++key[static_cast<std::size_t>(mode)];
                next[key] += coeff * a(mode, photon);
            }
        }
        poly = std::move(next);
    }
    return poly;
}

inline double fock_outcome_probability(const Eigen::MatrixXcd& a, const std::vector<int>& s) {
    auto poly = fock_output_coefficients(a);
    auto it = poly.find(s);
    if (it == poly.end()) return 0.0;
    double factorials = 1.0;
    for (int c : s)
        for (int i = 2; i <= c; ++i) factorials *= i;
    return std::norm(it->second) * factorials;
}

} // namespace qlab::testing
