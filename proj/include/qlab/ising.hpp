#pragma once

#include "qlab/statevector.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace qlab {

enum class GraphKind { complete, line, custom };

/// Interaction layout for the two-body Ising family: edges (i, j) with
/// i < j < n_qubits, no duplicates.
class CouplingGraph {
  public:
    static CouplingGraph complete(int n_qubits);
    static CouplingGraph line(int n_qubits);
    static CouplingGraph custom(int n_qubits, std::vector<std::pair<int, int>> edges);

    int n_qubits() const { return n_qubits_; }
    GraphKind kind() const { return kind_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    Eigen::Index dim_x() const { return static_cast<Eigen::Index>(edges_.size()); }

  private:
    CouplingGraph(int n_qubits, std::vector<std::pair<int, int>> edges, GraphKind kind);

    int n_qubits_;
    std::vector<std::pair<int, int>> edges_;
    GraphKind kind_;
};

/// Coupling strengths aligned with graph.edges().
using IsingParameters = Eigen::VectorXd;

/// rms is the dimension-normalized Hilbert-Schmidt norm sqrt(tr(H^2)/N),
/// i.e. the root-mean-square energy gap over basis states; for the Ising
/// family it equals the Euclidean distance between coupling vectors.
enum class ModelNorm { spectral, frobenius, rms };

/// Diagonal of H(x) = sum_{(i,j)} x_ij Z^(i) Z^(j) in the computational
/// basis: entry for basis state z is sum over edges of x_ij s_i(z) s_j(z),
/// where s_i(z) = +1 if bit i of z is 0 and -1 otherwise (qubit 0 is the
/// most significant bit).
DiagonalHermitian ising_diagonal(const IsingParameters& x, const CouplingGraph& g);

/// Norm of H(x) - H(x'), used by the evolution-time guess heuristic.
/// Spectral (the default here) is max_z |E_x(z) - E_x'(z)|, exact by
/// enumeration. The learning loop defaults to rms instead: it keeps the
/// phase spread of a guessed experiment at order one regardless of qubit
/// count, where the spectral gap overestimates the typical one by a factor
/// growing with n and leaves experiments uninformative.
double model_norm_diff(const IsingParameters& x, const IsingParameters& x_prime,
                       const CouplingGraph& g, ModelNorm norm = ModelNorm::spectral);

/// All 2^n amplitudes equal to 2^{-n/2}.
StateVector uniform_superposition(int n_qubits);

} // namespace qlab
