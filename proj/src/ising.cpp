#include "qlab/ising.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

// Per-basis-state Ising energy for coupling vector x.
double edge_energy(const Eigen::VectorXd& x, const std::vector<std::pair<int, int>>& edges,
                   int n_qubits, std::uint64_t z) {
    double e = 0.0;
    for (std::size_t a = 0; a < edges.size(); ++a) {
        int bit_i = static_cast<int>((z >> (n_qubits - 1 - edges[a].first)) & 1u);
        int bit_j = static_cast<int>((z >> (n_qubits - 1 - edges[a].second)) & 1u);
        double sign = (bit_i == bit_j) ? 1.0 : -1.0;
        e += sign * x(static_cast<Eigen::Index>(a));
    }
    return e;
}

} // namespace

CouplingGraph::CouplingGraph(int n_qubits, std::vector<std::pair<int, int>> edges, GraphKind kind)
    : n_qubits_(n_qubits), edges_(std::move(edges)), kind_(kind) {
    if (n_qubits_ < 1) throw std::invalid_argument("CouplingGraph: need at least one qubit");
    if (n_qubits_ > 24) throw std::invalid_argument("CouplingGraph: n_qubits above desk scale (24)");
    std::set<std::pair<int, int>> seen;
    for (const auto& [i, j] : edges_) {
        if (!(0 <= i && i < j && j < n_qubits_))
            throw std::invalid_argument("CouplingGraph: edge (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") violates i < j < n_qubits");
        if (!seen.insert({i, j}).second)
            throw std::invalid_argument("CouplingGraph: duplicate edge (" + std::to_string(i) +
                                        "," + std::to_string(j) + ")");
    }
}

CouplingGraph CouplingGraph::complete(int n_qubits) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n_qubits; ++i)
        for (int j = i + 1; j < n_qubits; ++j) edges.emplace_back(i, j);
    return CouplingGraph(n_qubits, std::move(edges), GraphKind::complete);
}

CouplingGraph CouplingGraph::line(int n_qubits) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n_qubits; ++i) edges.emplace_back(i, i + 1);
    return CouplingGraph(n_qubits, std::move(edges), GraphKind::line);
}

CouplingGraph CouplingGraph::custom(int n_qubits, std::vector<std::pair<int, int>> edges) {
    return CouplingGraph(n_qubits, std::move(edges), GraphKind::custom);
}

DiagonalHermitian ising_diagonal(const IsingParameters& x, const CouplingGraph& g) {
    if (x.size() != g.dim_x())
        throw std::invalid_argument("ising_diagonal: expected " + std::to_string(g.dim_x()) +
                                    " couplings, got " + std::to_string(x.size()));
    const std::uint64_t n_states = std::uint64_t(1) << g.n_qubits();
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n_states));
    for (std::uint64_t z = 0; z < n_states; ++z)
        diag(static_cast<Eigen::Index>(z)) = edge_energy(x, g.edges(), g.n_qubits(), z);
    return DiagonalHermitian(std::move(diag));
}

double model_norm_diff(const IsingParameters& x, const IsingParameters& x_prime,
                       const CouplingGraph& g, ModelNorm norm) {
    if (x.size() != g.dim_x() || x_prime.size() != g.dim_x())
        throw std::invalid_argument("model_norm_diff: coupling count does not match graph");
    Eigen::VectorXd delta = x - x_prime;
    const std::uint64_t n_states = std::uint64_t(1) << g.n_qubits();
    double max_abs = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t z = 0; z < n_states; ++z) {
        double e = edge_energy(delta, g.edges(), g.n_qubits(), z);
        max_abs = std::max(max_abs, std::abs(e));
        sum_sq += e * e;
    }
    switch (norm) {
        case ModelNorm::spectral: return max_abs;
        case ModelNorm::frobenius: return std::sqrt(sum_sq);
        case ModelNorm::rms: return std::sqrt(sum_sq / static_cast<double>(n_states));
    }
    return max_abs;
}

StateVector uniform_superposition(int n_qubits) {
    if (n_qubits < 1) throw std::invalid_argument("uniform_superposition: need at least one qubit");
    if (n_qubits > 24)
        throw std::invalid_argument("uniform_superposition: n_qubits above desk scale (24)");
    const Eigen::Index n_states = Eigen::Index(1) << n_qubits;
    double amp = 1.0 / std::sqrt(static_cast<double>(n_states));
    return StateVector(Eigen::VectorXcd::Constant(n_states, Amplitude(amp, 0.0)));
}

} // namespace qlab
