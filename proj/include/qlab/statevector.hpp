#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>

namespace qlab {

using Amplitude = std::complex<double>;

// Construction-time tolerances. Inputs outside tolerance are rejected, never
// silently renormalized.
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kUnitaryTolerance = 1e-9;

/// Unit vector in C^N. Basis index convention: index k's binary expansion
/// has qubit 0 as the most significant bit.
class StateVector {
  public:
    explicit StateVector(Eigen::VectorXcd amps);

    /// Computational basis vector e_k.
    static StateVector basis(Eigen::Index dim, Eigen::Index k);

    Eigen::Index dim() const { return amps_.size(); }
    const Eigen::VectorXcd& amps() const { return amps_; }
    Amplitude operator[](Eigen::Index k) const { return amps_(k); }

  private:
    Eigen::VectorXcd amps_;
};

/// Real diagonal of a Hamiltonian that is diagonal in the computational
/// basis (energy units, hbar = 1).
class DiagonalHermitian {
  public:
    explicit DiagonalHermitian(Eigen::VectorXd diag);

    Eigen::Index dim() const { return diag_.size(); }
    const Eigen::VectorXd& diag() const { return diag_; }

  private:
    Eigen::VectorXd diag_;
};

/// Dense Hermitian matrix; entries must equal their conjugate transpose
/// within kHermitianTolerance elementwise.
class HermitianOperator {
  public:
    explicit HermitianOperator(Eigen::MatrixXcd entries);

    static HermitianOperator from_diagonal(const DiagonalHermitian& d);

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXcd& entries() const { return entries_; }

    /// Largest entry magnitude (the sparse-simulation bound Lambda).
    double max_abs_entry() const;
    /// Largest count of nonzero entries in any row (the sparsity d).
    Eigen::Index max_nonzeros_per_row() const;

  private:
    Eigen::MatrixXcd entries_;
};

/// Square matrix with U U^dag = I within kUnitaryTolerance (max elementwise
/// deviation).
class UnitaryMatrix {
  public:
    explicit UnitaryMatrix(Eigen::MatrixXcd entries);

    Eigen::Index dim() const { return entries_.rows(); }
    const Eigen::MatrixXcd& entries() const { return entries_; }
    UnitaryMatrix adjoint() const;

  private:
    Eigen::MatrixXcd entries_;
};

/// <u|v> = sum_k conj(u_k) v_k. Throws on dimension mismatch.
Amplitude inner_product(const StateVector& u, const StateVector& v);

/// 2x2 Hadamard gate.
UnitaryMatrix hadamard_gate();

/// 8x8 Toffoli gate: swaps basis indices 6 (bits 110) and 7 (bits 111).
UnitaryMatrix toffoli_gate();

StateVector apply(const UnitaryMatrix& u, const StateVector& v);

/// Computational-basis measurement: returns k with probability |v_k|^2.
/// The outcome is classical; by convention the caller discards v afterward.
Eigen::Index measure(const StateVector& v, std::mt19937_64& rng);

/// v -> exp(-i H t) v via Hermitian eigendecomposition (exact up to
/// roundoff). Negative t gives the inverse map.
StateVector evolve(const HermitianOperator& h, double t, const StateVector& v);

/// Diagonal fast path: elementwise phases exp(-i diag_k t), O(N).
StateVector evolve(const DiagonalHermitian& h, double t, const StateVector& v);

/// |<v0| exp(+i H_minus t) exp(-i H_true t) |v0>|^2: probability that the
/// inversion experiment returns the initial state.
double survival_probability(const HermitianOperator& h_minus, const HermitianOperator& h_true,
                            double t, const StateVector& v0);
double survival_probability(const DiagonalHermitian& h_minus, const DiagonalHermitian& h_true,
                            double t, const StateVector& v0);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// triangular factor's diagonal phases normalized out.
UnitaryMatrix haar_random_unitary(Eigen::Index dim, std::mt19937_64& rng);

} // namespace qlab
