#include "dephasim/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <unordered_set>

#include <unsupported/Eigen/KroneckerProduct>

namespace dephasim {

namespace {

void check_hermitian(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw ShapeError("density matrix must be square");
    }
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol::hermiticity) {
        throw ShapeError("matrix is not Hermitian (max deviation " + std::to_string(dev) + ")");
    }
}

}  // namespace

double wrap_phase(double radians) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(radians, two_pi);
    if (r < 0.0) {
        r += two_pi;
    }
    // fmod can land exactly on 2pi after the correction when radians is a
    // tiny negative number.
    if (r >= two_pi) {
        r = 0.0;
    }
    return r;
}

QubitRegister::QubitRegister(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) {
        throw ShapeError("register needs at least one qubit");
    }
    std::unordered_set<std::string> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) {
            throw DuplicateLabel("duplicate qubit label '" + l + "'");
        }
    }
}

QubitRegister QubitRegister::system_bath(int n_system, int n_bath) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n_system + n_bath));
    for (int i = 0; i < n_system; ++i) {
        labels.push_back("s" + std::to_string(i));
    }
    for (int i = 0; i < n_bath; ++i) {
        labels.push_back("b" + std::to_string(i));
    }
    return QubitRegister(std::move(labels));
}

QubitRegister QubitRegister::generic(int n, const std::string& prefix) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        labels.push_back(prefix + std::to_string(i));
    }
    return QubitRegister(std::move(labels));
}

bool QubitRegister::has(const std::string& label) const {
    return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

int QubitRegister::position(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        throw UnknownLabel("no qubit labelled '" + label + "' in register");
    }
    return static_cast<int>(it - labels_.begin());
}

StateVector::StateVector(QubitRegister reg, Vector amplitudes, bool normalized)
    : reg_(std::move(reg)), amps_(std::move(amplitudes)), normalized_(normalized) {
    if (reg_.size() > kMaxStateQubits) {
        throw TooLarge("state vector on " + std::to_string(reg_.size()) + " qubits exceeds the cap of " +
                       std::to_string(kMaxStateQubits));
    }
    if (amps_.size() != reg_.dim()) {
        throw ShapeError("amplitude count does not match register dimension");
    }
    if (normalized_ && std::abs(amps_.norm() - 1.0) > tol::norm) {
        throw ShapeError("state marked normalized has norm " + std::to_string(amps_.norm()));
    }
}

StateVector StateVector::basis_state(QubitRegister reg, Eigen::Index index) {
    Vector v = Vector::Zero(reg.dim());
    v(index) = 1.0;
    return StateVector(std::move(reg), std::move(v));
}

StateVector StateVector::plus_state(QubitRegister reg) {
    const Eigen::Index d = reg.dim();
    Vector v = Vector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0.0));
    return StateVector(std::move(reg), std::move(v));
}

Complex StateVector::inner(const StateVector& other) const {
    if (dim() != other.dim()) {
        throw ShapeError("inner product of states with different dimensions");
    }
    return amps_.dot(other.amps_);  // Eigen's dot conjugates the left argument
}

double StateVector::fidelity(const StateVector& other) const {
    return std::norm(inner(other));
}

DensityMatrix::DensityMatrix(QubitRegister reg, Matrix entries, bool normalized)
    : reg_(std::move(reg)), m_(std::move(entries)), normalized_(normalized) {
    if (reg_.size() > kMaxDensityQubits) {
        throw TooLarge("density matrix on " + std::to_string(reg_.size()) + " qubits exceeds the cap of " +
                       std::to_string(kMaxDensityQubits));
    }
    if (m_.rows() != reg_.dim() || m_.cols() != reg_.dim()) {
        throw ShapeError("matrix shape does not match register dimension");
    }
    check_hermitian(m_);
    if (normalized_ && std::abs(m_.trace().real() - 1.0) > tol::trace) {
        throw ShapeError("density matrix marked normalized has trace " + std::to_string(m_.trace().real()));
    }
}

DensityMatrix DensityMatrix::from_state(const StateVector& psi) {
    if (psi.n_qubits() > kMaxDensityQubits) {
        throw TooLarge("outer product would exceed the density-matrix qubit cap");
    }
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityMatrix(psi.reg(), std::move(m), psi.normalized());
}

DensityMatrix DensityMatrix::maximally_mixed(QubitRegister reg) {
    const Eigen::Index d = reg.dim();
    Matrix m = Matrix::Identity(d, d) / double(d);
    return DensityMatrix(std::move(reg), std::move(m));
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DiagonalUnitary::DiagonalUnitary(QubitRegister reg, Eigen::VectorXd phases)
    : reg_(std::move(reg)), phases_(std::move(phases)) {
    if (phases_.size() != reg_.dim()) {
        throw ShapeError("phase array length does not match register dimension");
    }
}

DiagonalUnitary DiagonalUnitary::identity(QubitRegister reg) {
    Eigen::VectorXd zero = Eigen::VectorXd::Zero(reg.dim());
    return DiagonalUnitary(std::move(reg), std::move(zero));
}

Vector DiagonalUnitary::diagonal() const {
    Vector d(phases_.size());
    for (Eigen::Index i = 0; i < phases_.size(); ++i) {
        d(i) = std::polar(1.0, phases_(i));
    }
    return d;
}

StateVector DiagonalUnitary::apply(const StateVector& psi) const {
    if (psi.dim() != phases_.size()) {
        throw ShapeError("diagonal unitary dimension mismatch");
    }
    Vector out = psi.amplitudes().cwiseProduct(diagonal());
    return StateVector(psi.reg(), std::move(out), psi.normalized());
}

DensityMatrix DiagonalUnitary::conjugate(const DensityMatrix& rho) const {
    if (rho.dim() != phases_.size()) {
        throw ShapeError("diagonal unitary dimension mismatch");
    }
    const Vector d = diagonal();
    Matrix out = d.asDiagonal() * rho.entries() * d.conjugate().asDiagonal();
    return DensityMatrix(rho.reg(), std::move(out), rho.normalized());
}

DiagonalUnitary DiagonalUnitary::compose(const DiagonalUnitary& other) const {
    if (reg_ != other.reg_) {
        throw ShapeError("composition of diagonal unitaries on different registers");
    }
    Eigen::VectorXd sum(phases_.size());
    for (Eigen::Index i = 0; i < phases_.size(); ++i) {
        sum(i) = wrap_phase(phases_(i) + other.phases_(i));
    }
    return DiagonalUnitary(reg_, std::move(sum));
}

DiagonalUnitary DiagonalUnitary::adjoint() const {
    Eigen::VectorXd neg(phases_.size());
    for (Eigen::Index i = 0; i < phases_.size(); ++i) {
        neg(i) = wrap_phase(-phases_(i));
    }
    return DiagonalUnitary(reg_, std::move(neg));
}

namespace {

QubitRegister concat_registers(const QubitRegister& a, const QubitRegister& b) {
    std::vector<std::string> labels = a.labels();
    for (const auto& l : b.labels()) {
        if (a.has(l)) {
            throw DuplicateLabel("label '" + l + "' appears in both registers");
        }
        labels.push_back(l);
    }
    return QubitRegister(std::move(labels));
}

}  // namespace

StateVector tensor_product(const StateVector& a, const StateVector& b) {
    QubitRegister reg = concat_registers(a.reg(), b.reg());
    Vector out = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes());
    return StateVector(std::move(reg), std::move(out), a.normalized() && b.normalized());
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
    QubitRegister reg = concat_registers(a.reg(), b.reg());
    Matrix out = Eigen::kroneckerProduct(a.entries(), b.entries());
    return DensityMatrix(std::move(reg), std::move(out), a.normalized() && b.normalized());
}

namespace {

struct SplitPositions {
    std::vector<int> keep;    // positions of kept labels, in register order
    std::vector<int> traced;  // the rest
};

SplitPositions split_positions(const QubitRegister& reg, const std::vector<std::string>& keep) {
    if (keep.empty()) {
        throw ShapeError("keep set must be nonempty");
    }
    std::unordered_set<int> kept;
    for (const auto& label : keep) {
        kept.insert(reg.position(label));  // throws UnknownLabel
    }
    SplitPositions out;
    for (int p = 0; p < reg.size(); ++p) {
        if (kept.count(p)) {
            out.keep.push_back(p);
        } else {
            out.traced.push_back(p);
        }
    }
    return out;
}

// Scatter the bits of `compact` (MSB-first over `positions`) into a full
// register index.
Eigen::Index scatter_bits(Eigen::Index compact, const std::vector<int>& positions, int n_total) {
    Eigen::Index out = 0;
    const int k = static_cast<int>(positions.size());
    for (int j = 0; j < k; ++j) {
        if ((compact >> (k - 1 - j)) & 1) {
            out |= Eigen::Index(1) << (n_total - 1 - positions[j]);
        }
    }
    return out;
}

QubitRegister subregister(const QubitRegister& reg, const std::vector<int>& positions) {
    std::vector<std::string> labels;
    labels.reserve(positions.size());
    for (int p : positions) {
        labels.push_back(reg.label(p));
    }
    return QubitRegister(std::move(labels));
}

}  // namespace

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep) {
    const auto split = split_positions(rho.reg(), keep);
    const int n = rho.n_qubits();
    if (split.traced.empty()) {
        return rho;
    }
    const Eigen::Index dk = Eigen::Index(1) << split.keep.size();
    const Eigen::Index dt = Eigen::Index(1) << split.traced.size();

    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) {
        const Eigen::Index ri = scatter_bits(r, split.keep, n);
        for (Eigen::Index c = 0; c < dk; ++c) {
            const Eigen::Index ci = scatter_bits(c, split.keep, n);
            Complex acc = 0.0;
            for (Eigen::Index t = 0; t < dt; ++t) {
                const Eigen::Index ti = scatter_bits(t, split.traced, n);
                acc += rho.entries()(ri | ti, ci | ti);
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix(subregister(rho.reg(), split.keep), std::move(out), rho.normalized());
}

DensityMatrix reduced_from_state(const StateVector& psi, const std::vector<std::string>& keep) {
    const auto split = split_positions(psi.reg(), keep);
    const int n = psi.n_qubits();
    if (static_cast<int>(split.keep.size()) > kMaxDensityQubits) {
        throw TooLarge("reduced state would exceed the density-matrix qubit cap");
    }
    const Eigen::Index dk = Eigen::Index(1) << split.keep.size();
    const Eigen::Index dt = Eigen::Index(1) << split.traced.size();

    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) {
        const Eigen::Index ri = scatter_bits(r, split.keep, n);
        for (Eigen::Index c = 0; c <= r; ++c) {
            const Eigen::Index ci = scatter_bits(c, split.keep, n);
            Complex acc = 0.0;
            for (Eigen::Index t = 0; t < dt; ++t) {
                const Eigen::Index ti = scatter_bits(t, split.traced, n);
                acc += psi.amplitudes()(ri | ti) * std::conj(psi.amplitudes()(ci | ti));
            }
            out(r, c) = acc;
            out(c, r) = std::conj(acc);
        }
    }
    return DensityMatrix(subregister(psi.reg(), split.keep), std::move(out), psi.normalized());
}

DensityMatrix hadamard_product(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw ShapeError("Hadamard product of matrices with different dimensions");
    }
    Matrix out = a.entries().cwiseProduct(b.entries());
    return DensityMatrix(a.reg(), std::move(out), false);
}

const Matrix& pauli(int i) {
    static const std::array<Matrix, 4> paulis = [] {
        std::array<Matrix, 4> p;
        p[0] = Matrix::Identity(2, 2);
        p[1] = (Matrix(2, 2) << 0, 1, 1, 0).finished();
        p[2] = (Matrix(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
        p[3] = (Matrix(2, 2) << 1, 0, 0, -1).finished();
        return p;
    }();
    return paulis.at(static_cast<size_t>(i));
}

QubitRegister choi_register(int n_pairs) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(2 * n_pairs));
    for (int k = 0; k < n_pairs; ++k) {
        labels.push_back("s" + std::to_string(k));
        labels.push_back("a" + std::to_string(k));
    }
    return QubitRegister(std::move(labels));
}

std::vector<StateVector> bell_basis(int n_pairs) {
    if (n_pairs < 1) {
        throw ShapeError("bell_basis needs at least one pair");
    }
    if (2 * n_pairs > kMaxStateQubits) {
        throw TooLarge("Bell basis register exceeds the state-vector qubit cap");
    }
    // Single-pair vectors |Psi_i> = (sigma_i ⊗ 1)|Phi+>.
    std::array<Vector, 4> pair;
    Vector phi_plus(4);
    phi_plus << 1, 0, 0, 1;
    phi_plus /= std::sqrt(2.0);
    for (int i = 0; i < 4; ++i) {
        Matrix op = Eigen::kroneckerProduct(pauli(i), Matrix::Identity(2, 2));
        pair[static_cast<size_t>(i)] = op * phi_plus;
    }

    const QubitRegister reg = choi_register(n_pairs);
    std::vector<StateVector> basis;
    const Eigen::Index count = Eigen::Index(1) << (2 * n_pairs);  // 4^n_pairs
    basis.reserve(static_cast<size_t>(count));
    for (Eigen::Index code = 0; code < count; ++code) {
        Vector v = Vector::Ones(1);
        for (int k = 0; k < n_pairs; ++k) {
            const int ik = static_cast<int>((code >> (2 * (n_pairs - 1 - k))) & 3);
            v = Eigen::kroneckerProduct(v, pair[static_cast<size_t>(ik)]).eval();
        }
        basis.emplace_back(reg, std::move(v));
    }
    return basis;
}

}  // namespace dephasim
