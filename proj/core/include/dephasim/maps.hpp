#pragma once

#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "dephasim/pattern.hpp"
#include "dephasim/reduced.hpp"
#include "dephasim/tensor.hpp"

namespace dephasim {

// One Kraus group: a product of single-qubit phase gates over the system
// register (one phase per system qubit) applied with the given weight. The
// per-qubit factorization doubles as the separability witness.
struct KrausTerm {
    double weight = 0.0;
    Eigen::VectorXd phases;  // length N_S, each in [0, 2pi)
};

struct KrausForm {
    int n_system = 0;
    double normalizer = 1.0;  // 2^{N_B}; weights sum to this
    std::vector<KrausTerm> terms;

    DensityMatrix apply(const DensityMatrix& rho) const;
    double weight_sum() const;
};

// E(rho) = 2^{N_S} (rho_sigma ⊙ rho) with rho_sigma stored trace-1; its
// diagonal is uniformly 2^{-N_S}, which is exactly the trace-preservation
// condition.
struct HadamardForm {
    DensityMatrix rho_sigma;

    int n_system() const { return rho_sigma.n_qubits(); }
    DensityMatrix apply(const DensityMatrix& rho) const;

    // (E ⊗ 1) applied to a state on a larger register; `system_positions`
    // locates the system qubits inside rho's register (in system order).
    DensityMatrix apply_embedded(const DensityMatrix& rho, const std::vector<int>& system_positions) const;
};

// (E ⊗ 1)(|Phi+><Phi+|^{⊗N_S}) on the pair-interleaved register
// [s0,a0,s1,a1,...], trace 1.
struct ChoiState {
    int n_system = 0;
    DensityMatrix matrix;
};

// Table of Pauli coefficients: indices are bitmasks over the
// system qubits (bit set = sigma_z, clear = identity; bit layout matches the
// computational-basis index), table(i,j) = <Psi_i|C|Psi_j> and
// E(rho) = sum_ij table(i,j) sigma_i rho sigma_j. Coefficients at any Bell
// index outside {0,3} vanish identically and are not stored.
struct PauliForm {
    int n_system = 0;
    Matrix table;  // 2^{N_S} x 2^{N_S}, Hermitian

    Complex coefficient(const std::string& bra, const std::string& ket) const;  // strings over {0,3}
    DensityMatrix apply(const DensityMatrix& rho) const;

    static Eigen::Index mask_of(const std::string& key, int n_system);
    static std::string key_of(Eigen::Index mask, int n_system);
};

// Ground truth: full-register evolution rho ⊗ |+><+|^{⊗N_B}, conjugation by
// U_SB, partial trace over the bath. Requires N_S + N_B <= 12.
DensityMatrix map_oracle(const InteractionPattern& p, const DensityMatrix& rho);

// Enumerates bath basis strings of a purely dephasing pattern; identical
// grouped unitaries are merged by exact phase-array equality.
KrausForm kraus_form(const InteractionPattern& p);

// rho_sigma via the virtual-qubit contraction for purely dephasing patterns,
// brute force on the LMES otherwise.
HadamardForm hadamard_form(const InteractionPattern& p);

ChoiState choi_state(const InteractionPattern& p);  // N_S <= 5

PauliForm pauli_form(const InteractionPattern& p);  // N_S <= 5

// Single system qubit coupled through 2-qubit gates only:
// lambda_0^0 = (1 + r cos gamma)/2, lambda_3^3 = (1 - r cos gamma)/2,
// lambda_0^3 = i r sin(gamma)/2 with r = prod cos(phi/2), gamma = sum phi/2.
// (The source formulas label the sigma_z index 1 where the Bell-basis
// construction uses 3; the table returned here uses the {0,3} convention.)
PauliForm two_qubit_gate_map_closed_form(const std::vector<double>& phis);

// Closed form for patterns satisfying conditions (a),(b) with core size m:
// E(rho) = [ (2^{N_B} - 2^{N_B-m}) rho + (E~_1 ⊗ ... ⊗ E~_{N_S})(rho) ] / 2^{N_B}.
// When m >= 1 the returned form keeps the identity shortcut as terms[0] with
// weight exactly 2^{N_B} - 2^{N_B-m}.
KrausForm shared_core_closed_form(const InteractionPattern& p);

// One system qubit hit by k gates whose bath supports share exactly the m
// core qubits: E = 2^{-m}[(2^m - 1) rho + (E_k ∘ ... ∘ E_1)(rho)] with
// E_i(rho) = 2^{-(n_i-m)}[(2^{n_i-m} - 1) rho + U_i rho U_i†].
// `bath_counts[i]` is the number of bath qubits of gate i.
KrausForm single_system_repeated_collisions(int m, const std::vector<int>& bath_counts,
                                            const std::vector<double>& phis);

// Facade holding a pattern and its representations. The Hadamard form is the
// canonical one; the others are derived on first use and cached (single-writer
// initialization, safe concurrent reads afterwards).
class DephasingMap {
  public:
    explicit DephasingMap(InteractionPattern pattern);

    const InteractionPattern& pattern() const { return pattern_; }
    const HadamardForm& hadamard() const;
    const KrausForm& kraus() const;
    const ChoiState& choi() const;
    const PauliForm& pauli_table() const;

    DensityMatrix apply(const DensityMatrix& rho) const;  // via the Hadamard form

  private:
    InteractionPattern pattern_;
    mutable std::once_flag hadamard_once_, kraus_once_, choi_once_, pauli_once_;
    mutable std::optional<HadamardForm> hadamard_;
    mutable std::optional<KrausForm> kraus_;
    mutable std::optional<ChoiState> choi_;
    mutable std::optional<PauliForm> pauli_;
};

}  // namespace dephasim
