#include "qlab/statevector.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qlab {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

} // namespace

StateVector::StateVector(Eigen::VectorXcd amps) : amps_(std::move(amps)) {
    require(amps_.size() > 0, "StateVector: empty amplitude vector");
    require(amps_.allFinite(), "StateVector: non-finite amplitude");
    double norm2 = amps_.squaredNorm();
    require(std::abs(norm2 - 1.0) <= kNormTolerance,
            "StateVector: squared norm " + std::to_string(norm2) + " outside tolerance");
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index k) {
    require(dim > 0 && k >= 0 && k < dim, "StateVector::basis: index out of range");
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
    amps(k) = 1.0;
    return StateVector(std::move(amps));
}

DiagonalHermitian::DiagonalHermitian(Eigen::VectorXd diag) : diag_(std::move(diag)) {
    require(diag_.size() > 0, "DiagonalHermitian: empty diagonal");
    require(diag_.allFinite(), "DiagonalHermitian: non-finite entry");
}

HermitianOperator::HermitianOperator(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    require(entries_.rows() == entries_.cols(), "HermitianOperator: matrix not square");
    require(entries_.allFinite(), "HermitianOperator: non-finite entry");
    double dev = (entries_ - entries_.adjoint().eval()).cwiseAbs().maxCoeff();
    require(dev <= kHermitianTolerance,
            "HermitianOperator: deviation from conjugate transpose " + std::to_string(dev));
}

HermitianOperator HermitianOperator::from_diagonal(const DiagonalHermitian& d) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.dim(), d.dim());
    m.diagonal() = d.diag().cast<Amplitude>();
    return HermitianOperator(std::move(m));
}

double HermitianOperator::max_abs_entry() const {
    return entries_.cwiseAbs().maxCoeff();
}

Eigen::Index HermitianOperator::max_nonzeros_per_row() const {
    Eigen::Index worst = 0;
    for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
        Eigen::Index nz = 0;
        for (Eigen::Index j = 0; j < entries_.cols(); ++j) {
            if (entries_(i, j) != Amplitude(0.0, 0.0)) ++nz;
        }
        worst = std::max(worst, nz);
    }
    return worst;
}

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd entries) : entries_(std::move(entries)) {
    require(entries_.rows() == entries_.cols(), "UnitaryMatrix: matrix not square");
    require(entries_.allFinite(), "UnitaryMatrix: non-finite entry");
    Eigen::MatrixXcd gram = entries_ * entries_.adjoint();
    gram -= Eigen::MatrixXcd::Identity(entries_.rows(), entries_.cols());
    double dev = gram.cwiseAbs().maxCoeff();
    require(dev <= kUnitaryTolerance,
            "UnitaryMatrix: deviation from unitarity " + std::to_string(dev));
}

UnitaryMatrix UnitaryMatrix::adjoint() const {
    return UnitaryMatrix(entries_.adjoint());
}

Amplitude inner_product(const StateVector& u, const StateVector& v) {
    if (u.dim() != v.dim()) throw std::invalid_argument("inner_product: dimension mismatch");
    return u.amps().dot(v.amps()); // Eigen's dot conjugates the left argument
}

UnitaryMatrix hadamard_gate() {
    const double s = 1.0 / std::sqrt(2.0);
    Eigen::MatrixXcd h(2, 2);
    h << s, s, s, -s;
    return UnitaryMatrix(std::move(h));
}

UnitaryMatrix toffoli_gate() {
    Eigen::MatrixXcd t = Eigen::MatrixXcd::Identity(8, 8);
    t(6, 6) = 0.0;
    t(7, 7) = 0.0;
    t(6, 7) = 1.0;
    t(7, 6) = 1.0;
    return UnitaryMatrix(std::move(t));
}

StateVector apply(const UnitaryMatrix& u, const StateVector& v) {
    if (u.dim() != v.dim()) throw std::invalid_argument("apply: dimension mismatch");
    return StateVector(u.entries() * v.amps());
}

Eigen::Index measure(const StateVector& v, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    double u = unif(rng);
    double cum = 0.0;
    const Eigen::Index n = v.dim();
    for (Eigen::Index k = 0; k < n; ++k) {
        cum += std::norm(v[k]);
        if (u < cum) return k;
    }
    return n - 1; // roundoff: cum landed just short of 1
}

StateVector evolve(const HermitianOperator& h, double t, const StateVector& v) {
    if (h.dim() != v.dim()) throw std::invalid_argument("evolve: dimension mismatch");
    if (!std::isfinite(t)) throw std::invalid_argument("evolve: non-finite time");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.entries());
    if (es.info() != Eigen::Success) throw std::runtime_error("evolve: eigendecomposition failed");
    Eigen::VectorXcd phases =
        (Amplitude(0.0, -t) * es.eigenvalues().cast<Amplitude>().array()).exp();
    Eigen::VectorXcd coeffs = es.eigenvectors().adjoint() * v.amps();
    return StateVector(es.eigenvectors() * phases.cwiseProduct(coeffs));
}

StateVector evolve(const DiagonalHermitian& h, double t, const StateVector& v) {
    if (h.dim() != v.dim()) throw std::invalid_argument("evolve: dimension mismatch");
    if (!std::isfinite(t)) throw std::invalid_argument("evolve: non-finite time");
    Eigen::VectorXcd phases = (Amplitude(0.0, -t) * h.diag().cast<Amplitude>().array()).exp();
    return StateVector(phases.cwiseProduct(v.amps()));
}

double survival_probability(const HermitianOperator& h_minus, const HermitianOperator& h_true,
                            double t, const StateVector& v0) {
    StateVector forward = evolve(h_true, t, v0);
    StateVector inverted = evolve(h_minus, -t, forward);
    double p = std::norm(inner_product(v0, inverted));
    return std::clamp(p, 0.0, 1.0);
}

double survival_probability(const DiagonalHermitian& h_minus, const DiagonalHermitian& h_true,
                            double t, const StateVector& v0) {
    if (h_minus.dim() != h_true.dim() || h_minus.dim() != v0.dim())
        throw std::invalid_argument("survival_probability: dimension mismatch");
    // <v0| e^{+iH_- t} e^{-iH t} |v0> = sum_k |v0_k|^2 e^{i (d-_k - d_k) t}
    Amplitude amp(0.0, 0.0);
    for (Eigen::Index k = 0; k < v0.dim(); ++k) {
        double delta = h_minus.diag()(k) - h_true.diag()(k);
        amp += std::norm(v0[k]) * std::polar(1.0, delta * t);
    }
    return std::clamp(std::norm(amp), 0.0, 1.0);
}

UnitaryMatrix haar_random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    if (dim <= 0) throw std::invalid_argument("haar_random_unitary: dimension must be positive");
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd g(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) g(i, j) = Amplitude(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ();
    // Fix the diagonal phases of R so the distribution is Haar, not merely
    // right-invariant.
    Eigen::VectorXcd r_diag = qr.matrixQR().diagonal();
    for (Eigen::Index k = 0; k < dim; ++k) {
        double mag = std::abs(r_diag(k));
        Amplitude phase = mag > 0.0 ? r_diag(k) / mag : Amplitude(1.0, 0.0);
        q.col(k) *= phase;
    }
    return UnitaryMatrix(std::move(q));
}

} // namespace qlab
