#pragma once

#include <vector>

#include "dephasim/pattern.hpp"
#include "dephasim/tensor.hpp"

namespace dephasim {

// A reduced state of an LMES. Matrices are stored trace-normalized; the raw
// Kraus-sum normalization constant (2^{N_B} and projector prefactors) is
// dropped here and reintroduced where a map needs it.
struct ReducedState {
    std::vector<std::string> kept;
    DensityMatrix matrix;
    bool normalized = true;
};

// Exact partial trace of U|+>^n computed from the state vector. This is the
// oracle every closed form below is checked against.
ReducedState reduced_brute_force(const InteractionPattern& lmes, const std::vector<std::string>& keep);

// Single-qubit reduced state of a pure phase gate of the given order:
// diagonal 1/2, off-diagonal (2^{n-1} - 1 + e^{-i phi}) / 2^n.
ReducedState single_qubit_reduced_pure_gate(int order, double phi);

// Qubit 1 sits in several pure gates with otherwise disjoint supports; the
// off-diagonal is the product of the per-gate factors. `orders` are full gate
// orders (system qubit included).
ReducedState single_qubit_reduced_multi_gate(const std::vector<int>& orders,
                                             const std::vector<double>& phis);

// The product of per-gate coherence factors (2^{k-1} - 1 + e^{-i phi}) / 2^{k-1}.
Complex multi_gate_coherence(const std::vector<int>& orders, const std::vector<double>& phis);

// Reduced state of a weighted graph state, O(4^{|keep|} * N_B) instead of
// O(2^{N_B}). `keep` are positions into the graph's qubits.
ReducedState weighted_graph_reduced(const WeightedGraph& g, const std::vector<int>& keep);

// rho_Sigma of a purely dephasing pattern via the virtual-qubit picture: a sum
// over computational-basis assignments of the overlapping bath qubits only,
// each term a tensor product of per-system-qubit 2x2 blocks.
ReducedState reduced_via_peps(const InteractionPattern& p);

}  // namespace dephasim
