#include "dephasim/lme_prep.hpp"

#include <bit>
#include <cmath>

namespace dephasim {

namespace {

constexpr int kMaxPrepQubits = 6;

// H^{⊗n}: entries (-1)^{popcount(x & y)} / sqrt(2^n).
Matrix hadamard_transform(int n) {
    const Eigen::Index d = Eigen::Index(1) << n;
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Matrix h(d, d);
    for (Eigen::Index x = 0; x < d; ++x) {
        for (Eigen::Index y = 0; y < d; ++y) {
            h(x, y) = std::popcount(static_cast<uint64_t>(x & y)) % 2 == 0 ? scale : -scale;
        }
    }
    return h;
}

}  // namespace

GeneralizedStabilizer build_stabilizer(const InteractionPattern& lmes) {
    const int n = lmes.n_total();
    if (n > kMaxPrepQubits) {
        throw TooLarge("stabilizer construction supports at most " + std::to_string(kMaxPrepQubits) +
                       " qubits");
    }
    const Eigen::Index d = Eigen::Index(1) << n;
    DiagonalUnitary u_ph = pattern_unitary(lmes);
    const Vector diag = u_ph.diagonal();

    GeneralizedStabilizer stab{n, u_ph, {}, {}, Matrix()};

    // U_k = U_ph X_k U_ph†: X_k permutes the basis by flipping bit k, the
    // diagonals contribute a phase difference.
    for (int k = 0; k < n; ++k) {
        const Eigen::Index flip = Eigen::Index(1) << (n - 1 - k);
        Matrix u = Matrix::Zero(d, d);
        for (Eigen::Index x = 0; x < d; ++x) {
            u(x, x ^ flip) = diag(x) * std::conj(diag(x ^ flip));
        }
        stab.stabilizers.push_back(std::move(u));
    }

    stab.eigenbasis = diag.asDiagonal() * hadamard_transform(n);

    // V_k from the eigenbasis definition, then cross-checked against Z_k.
    for (int k = 0; k < n; ++k) {
        const Eigen::Index flip = Eigen::Index(1) << (n - 1 - k);
        Matrix v = Matrix::Zero(d, d);
        for (Eigen::Index i = 0; i < d; ++i) {
            v += stab.eigenbasis.col(i ^ flip) * stab.eigenbasis.col(i).adjoint();
        }
        Matrix z = Matrix::Identity(d, d);
        for (Eigen::Index x = 0; x < d; ++x) {
            if (x & flip) {
                z(x, x) = -1.0;
            }
        }
        if ((v - z).cwiseAbs().maxCoeff() > tol::equality) {
            throw Error("flip operator V_k deviates from Z_k; eigenbasis construction is inconsistent");
        }
        stab.flips.push_back(std::move(v));
    }
    return stab;
}

PreparationCircuit::PreparationCircuit(GeneralizedStabilizer stabilizer) : stab_(std::move(stabilizer)) {}

namespace {

QubitRegister prep_register(int n) {
    std::vector<std::string> labels;
    for (int i = 0; i < n; ++i) {
        labels.push_back("s" + std::to_string(i));
    }
    for (int i = 0; i < n; ++i) {
        labels.push_back("a" + std::to_string(i));
    }
    return QubitRegister(std::move(labels));
}

// Amplitudes are indexed (system << n) | aux with both halves MSB-first.
// Applies `op` to the system block on every basis state whose auxiliary bit k
// is 1.
void apply_controlled_on_system(Vector& amps, const Matrix& op, int n, int aux_bit) {
    const Eigen::Index ds = Eigen::Index(1) << n;
    const Eigen::Index flip = Eigen::Index(1) << (n - 1 - aux_bit);
    Vector column(ds);
    for (Eigen::Index a = 0; a < ds; ++a) {
        if (!(a & flip)) {
            continue;
        }
        for (Eigen::Index s = 0; s < ds; ++s) {
            column(s) = amps(s * ds + a);
        }
        column = (op * column).eval();
        for (Eigen::Index s = 0; s < ds; ++s) {
            amps(s * ds + a) = column(s);
        }
    }
}

// Hadamard on auxiliary qubit k.
void apply_hadamard_on_aux(Vector& amps, int n, int aux_bit) {
    const Eigen::Index ds = Eigen::Index(1) << n;
    const Eigen::Index flip = Eigen::Index(1) << (n - 1 - aux_bit);
    const double inv = 1.0 / std::sqrt(2.0);
    for (Eigen::Index s = 0; s < ds; ++s) {
        for (Eigen::Index a = 0; a < ds; ++a) {
            if (a & flip) {
                continue;
            }
            const Eigen::Index i0 = s * ds + a;
            const Eigen::Index i1 = s * ds + (a | flip);
            const Complex lo = amps(i0);
            const Complex hi = amps(i1);
            amps(i0) = inv * (lo + hi);
            amps(i1) = inv * (lo - hi);
        }
    }
}

}  // namespace

StateVector PreparationCircuit::run(const StateVector& input) const {
    const int n = stab_.n;
    if (input.n_qubits() != n) {
        throw ShapeError("input must live on the n system qubits");
    }
    const QubitRegister reg = prep_register(n);
    const Eigen::Index ds = Eigen::Index(1) << n;
    Vector amps(ds * ds);
    const double aux_amp = 1.0 / std::sqrt(static_cast<double>(ds));
    for (Eigen::Index s = 0; s < ds; ++s) {
        for (Eigen::Index a = 0; a < ds; ++a) {
            amps(s * ds + a) = input.amplitudes()(s) * aux_amp;  // |input> ⊗ |+>^n
        }
    }

    // U^c_1 U^c_2 ... U^c_n read right-to-left.
    for (int k = n - 1; k >= 0; --k) {
        apply_controlled_on_system(amps, stab_.stabilizers[static_cast<size_t>(k)], n, k);  // Utilde_k
        apply_hadamard_on_aux(amps, n, k);                                                  // Ubar_k
        apply_controlled_on_system(amps, stab_.flips[static_cast<size_t>(k)], n, k);
        apply_hadamard_on_aux(amps, n, k);
    }
    return StateVector(reg, std::move(amps));
}

StateVector PreparationCircuit::run_inverse(const StateVector& system_aux) const {
    const int n = stab_.n;
    if (system_aux.n_qubits() != 2 * n) {
        throw ShapeError("inverse circuit expects the 2n-qubit register");
    }
    Vector amps = system_aux.amplitudes();
    for (int k = 0; k < n; ++k) {
        // (Ubar_k Utilde_k)† = Utilde_k† Ubar_k†; V_k is Hermitian.
        apply_hadamard_on_aux(amps, n, k);
        apply_controlled_on_system(amps, stab_.flips[static_cast<size_t>(k)], n, k);
        apply_hadamard_on_aux(amps, n, k);
        apply_controlled_on_system(amps, stab_.stabilizers[static_cast<size_t>(k)].adjoint(), n, k);
    }
    return StateVector(system_aux.reg(), std::move(amps));
}

StateVector prepare(const PreparationCircuit& circuit, const StateVector& input) {
    return circuit.run(input);
}

StateVector project_system(const StateVector& output, const StateVector& system_state) {
    const int n = system_state.n_qubits();
    if (output.n_qubits() != 2 * n) {
        throw ShapeError("output must live on 2n qubits");
    }
    const Eigen::Index ds = Eigen::Index(1) << n;
    Vector aux = Vector::Zero(ds);
    for (Eigen::Index s = 0; s < ds; ++s) {
        const Complex weight = std::conj(system_state.amplitudes()(s));
        for (Eigen::Index a = 0; a < ds; ++a) {
            aux(a) += weight * output.amplitudes()(s * ds + a);
        }
    }
    return StateVector(QubitRegister::generic(n, "a"), std::move(aux), false);
}

StateVector double_copy(const InteractionPattern& lmes) {
    const PreparationCircuit circuit{build_stabilizer(lmes)};
    return circuit.run(StateVector::plus_state(QubitRegister::generic(circuit.n(), "s")));
}

StateVector invert_prepare(const InteractionPattern& lmes, const StateVector& target) {
    const GeneralizedStabilizer stab = build_stabilizer(lmes);
    const int n = stab.n;
    if (target.n_qubits() != n) {
        throw ShapeError("target must live on the n system qubits");
    }
    // |phi> = H^n U_Psi† |Phi> = U_ph† |Phi> for a diagonal phase gate.
    const StateVector phi = stab.phase_gate.adjoint().apply(
        StateVector(QubitRegister::generic(n, "a"), target.amplitudes()));

    // Verify: the adjoint circuit on |Psi>|phi> must return |Phi>|+>^n.
    const PreparationCircuit circuit{stab};
    const StateVector lme = lmes_state(lmes);
    const StateVector round_trip = circuit.run_inverse(
        tensor_product(StateVector(QubitRegister::generic(n, "s"), lme.amplitudes()), phi));
    const StateVector expected = tensor_product(
        StateVector(QubitRegister::generic(n, "s"), target.amplitudes()),
        StateVector::plus_state(QubitRegister::generic(n, "a")));
    if (std::abs(round_trip.fidelity(expected) - 1.0) > tol::equality) {
        throw Error("inverse preparation failed to reproduce the target state");
    }
    return phi;
}

}  // namespace dephasim
