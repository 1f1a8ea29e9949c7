#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dephasim/errors.hpp"
#include "dephasim/tolerances.hpp"

namespace dephasim {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Hard size caps. Everything is dense; these keep memory honest and error
// messages clear instead of letting an allocation blow up.
inline constexpr int kMaxStateQubits = 14;
inline constexpr int kMaxDensityQubits = 12;

// An ordered collection of uniquely labelled qubits.
//
// Bit-order convention (fixed globally): the label at position 0 is the MOST
// significant bit of a computational-basis index. So for a register [q0, q1]
// the basis state |q0=1, q1=0> has index 0b10 = 2.
class QubitRegister {
  public:
    explicit QubitRegister(std::vector<std::string> labels);

    // [s0..s_{n_system-1}, b0..b_{n_bath-1}]
    static QubitRegister system_bath(int n_system, int n_bath);
    static QubitRegister generic(int n, const std::string& prefix = "q");

    int size() const { return static_cast<int>(labels_.size()); }
    Eigen::Index dim() const { return Eigen::Index(1) << labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int position) const { return labels_.at(position); }

    bool has(const std::string& label) const;
    int position(const std::string& label) const;  // throws UnknownLabel

    // Bit of `index` belonging to the qubit at `position` (MSB-first).
    bool bit(Eigen::Index index, int position) const {
        return (index >> (size() - 1 - position)) & 1;
    }

    bool operator==(const QubitRegister&) const = default;

  private:
    std::vector<std::string> labels_;
};

// Pure state on a qubit register. `normalized` marks whether the unit-norm
// invariant is enforced; unnormalized intermediates must be constructed with
// normalized=false.
class StateVector {
  public:
    StateVector(QubitRegister reg, Vector amplitudes, bool normalized = true);

    static StateVector basis_state(QubitRegister reg, Eigen::Index index);
    static StateVector plus_state(QubitRegister reg);

    const QubitRegister& reg() const { return reg_; }
    const Vector& amplitudes() const { return amps_; }
    Vector& amplitudes() { return amps_; }
    bool normalized() const { return normalized_; }
    int n_qubits() const { return reg_.size(); }
    Eigen::Index dim() const { return amps_.size(); }

    double norm() const { return amps_.norm(); }
    Complex inner(const StateVector& other) const;  // <this|other>
    double fidelity(const StateVector& other) const;

  private:
    QubitRegister reg_;
    Vector amps_;
    bool normalized_;
};

// Hermitian operator on a qubit register. Hermiticity is always validated;
// trace 1 only when `normalized` is set.
class DensityMatrix {
  public:
    DensityMatrix(QubitRegister reg, Matrix entries, bool normalized = true);

    static DensityMatrix from_state(const StateVector& psi);
    static DensityMatrix maximally_mixed(QubitRegister reg);

    const QubitRegister& reg() const { return reg_; }
    const Matrix& entries() const { return m_; }
    bool normalized() const { return normalized_; }
    int n_qubits() const { return reg_.size(); }
    Eigen::Index dim() const { return m_.rows(); }

    double trace_real() const { return m_.trace().real(); }
    double min_eigenvalue() const;
    bool is_psd(double tolerance = tol::psd) const { return min_eigenvalue() >= tolerance; }

  private:
    QubitRegister reg_;
    Matrix m_;
    bool normalized_;
};

// diag(exp(i * phases[index])) on a register. Composition of two diagonal
// unitaries adds the phase arrays elementwise mod 2pi, which makes it exactly
// commutative at the phase-array level.
class DiagonalUnitary {
  public:
    DiagonalUnitary(QubitRegister reg, Eigen::VectorXd phases);

    static DiagonalUnitary identity(QubitRegister reg);

    const QubitRegister& reg() const { return reg_; }
    const Eigen::VectorXd& phases() const { return phases_; }
    Vector diagonal() const;  // e^{i phases}

    StateVector apply(const StateVector& psi) const;
    DensityMatrix conjugate(const DensityMatrix& rho) const;  // U rho U†
    DiagonalUnitary compose(const DiagonalUnitary& other) const;
    DiagonalUnitary adjoint() const;

  private:
    QubitRegister reg_;
    Eigen::VectorXd phases_;
};

double wrap_phase(double radians);  // into [0, 2pi)

StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

// Trace over the complement of `keep`. The output register preserves the
// relative order of the kept labels.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<std::string>& keep);

// Reduced density matrix of a pure state without materializing |psi><psi|.
DensityMatrix reduced_from_state(const StateVector& psi, const std::vector<std::string>& keep);

// Entrywise (Hadamard) product. Result carries a.reg() and is flagged
// unnormalized; callers that know better rewrap.
DensityMatrix hadamard_product(const DensityMatrix& a, const DensityMatrix& b);

// The 4^n_pairs Bell vectors |Psi_{i_1},...,Psi_{i_n}> with
// |Psi_i> = (sigma_i ⊗ 1)|Phi+>, ordered lexicographically in (i_1..i_n) over
// {0,1,2,3}. Register layout is pair-interleaved: [s0,a0,s1,a1,...].
std::vector<StateVector> bell_basis(int n_pairs);

QubitRegister choi_register(int n_pairs);  // [s0,a0,s1,a1,...]

const Matrix& pauli(int i);  // sigma_0 .. sigma_3, 2x2

}  // namespace dephasim
