#pragma once

#include <vector>

#include "dephasim/pattern.hpp"
#include "dephasim/tensor.hpp"

namespace dephasim {

// The generalized stabilizer of an LMES |Psi> = U_ph|+>^n:
//   U_k = U_ph X_k U_ph†     (commuting, Hermitian, eigenvalues ±1)
//   |Psi_i> = U_ph H^n |i>   (common eigenbasis, eigenvalue (-1)^{i_k} of U_k)
//   V_k = sum |Psi_{..k=0..}><Psi_{..k=1..}| + h.c.
// V_k is built from the eigenbasis and cross-checked against the identity
// V_k = Z_k that holds because U_ph is diagonal.
struct GeneralizedStabilizer {
    int n = 0;
    DiagonalUnitary phase_gate;
    std::vector<Matrix> stabilizers;  // U_k, 2^n x 2^n
    std::vector<Matrix> flips;        // V_k
    Matrix eigenbasis;                // columns |Psi_i>
};

// Dense construction; n <= 6.
GeneralizedStabilizer build_stabilizer(const InteractionPattern& lmes);

// Controlled-unitary preparation circuit on n system + n auxiliary qubits
// (register [s0..s_{n-1}, a0..a_{n-1}]). The product U^c_1 U^c_2 ... U^c_n is
// applied right-to-left (k = n down to 1), each U^c_k = Ubar_k Utilde_k with
//   Utilde_k = 1 ⊗ |0><0|_{a_k} + U_k ⊗ |1><1|_{a_k}
//   Ubar_k   = 1 ⊗ |+><+|_{a_k} + V_k ⊗ |-><-|_{a_k}.
class PreparationCircuit {
  public:
    explicit PreparationCircuit(GeneralizedStabilizer stabilizer);

    const GeneralizedStabilizer& stabilizer() const { return stab_; }
    int n() const { return stab_.n; }

    // |Psi>_s|phi>_a = U^c_1 ... U^c_n |input>_s |+>_a^n
    StateVector run(const StateVector& input) const;

    // The adjoint circuit (U^c_n ... U^c_1)† applied to a 2n-qubit state.
    StateVector run_inverse(const StateVector& system_aux) const;

  private:
    GeneralizedStabilizer stab_;
};

// Runs the preparation circuit of the LMES on the given system input.
StateVector prepare(const PreparationCircuit& circuit, const StateVector& input);

// Input |+>^n yields |Psi> ⊗ |Psi*>; for Hermitian phase gates (all phases in
// {0, pi}) the two copies coincide.
StateVector double_copy(const InteractionPattern& lmes);

// The auxiliary state |phi> = H^n U_Psi† |Phi> = U_ph† |Phi> required to turn
// |Psi> back into |Phi> with the adjoint circuit; verifies the round trip.
StateVector invert_prepare(const InteractionPattern& lmes, const StateVector& target);

// <system_state| contracted against the system block of a 2n-qubit output.
// Unit norm iff the output factorizes as |system_state> ⊗ (aux part).
StateVector project_system(const StateVector& output, const StateVector& system_state);

}  // namespace dephasim
