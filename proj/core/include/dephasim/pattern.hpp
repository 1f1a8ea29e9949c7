#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dephasim/tensor.hpp"

namespace dephasim {

// A qubit reference inside an interaction pattern: either a system qubit s<i>
// or a bath qubit b<i>. Ordering puts system qubits before bath qubits.
struct QubitId {
    enum class Kind { System = 0, Bath = 1 };
    Kind kind;
    int index;

    static QubitId system(int i) { return {Kind::System, i}; }
    static QubitId bath(int i) { return {Kind::Bath, i}; }

    std::string str() const { return (kind == Kind::System ? "s" : "b") + std::to_string(index); }

    auto operator<=>(const QubitId&) const = default;
};

// 1 + (e^{i phase} - 1)|1...1><1...1| on its support. The order of the gate is
// the support size.
struct PurePhaseGate {
    std::vector<QubitId> support;  // sorted, unique, nonempty
    double phase = 0.0;            // radians in [0, 2pi)

    int order() const { return static_cast<int>(support.size()); }
    std::vector<int> system_indices() const;
    std::vector<int> bath_indices() const;

    bool operator==(const PurePhaseGate&) const = default;
};

// Derived structure of a pattern. `conditions_ab` is the strict shared-core
// check: a fixed core of bath qubits contained in every gate such that gates
// of different system qubits intersect in exactly that core. Gates of the
// same system qubit may overlap beyond the core without breaking it; the
// per-system profile reports that separately.
struct Classification {
    bool purely_dephasing = false;
    bool markovian = false;
    bool conditions_ab = false;
    std::vector<int> core;  // bath indices; meaningful when conditions_ab
    std::vector<std::vector<int>> per_system_orders;  // bath count of each gate, per system qubit
    std::vector<std::optional<std::vector<int>>> per_system_core;  // nullopt if inconsistent

    int m() const { return static_cast<int>(core.size()); }
};

class InteractionPattern {
  public:
    // Validates ranges and supports, wraps phases into [0, 2pi), and puts
    // gates into canonical order (phase gates commute, so order carries no
    // meaning).
    InteractionPattern(int n_system, int n_bath, std::vector<PurePhaseGate> gates);

    int n_system() const { return n_system_; }
    int n_bath() const { return n_bath_; }
    int n_total() const { return n_system_ + n_bath_; }
    const std::vector<PurePhaseGate>& gates() const { return gates_; }

    QubitRegister full_register() const;    // [s0.., b0..]
    QubitRegister system_register() const;  // [s0..]
    std::vector<std::string> system_labels() const;
    int position(const QubitId& q) const;  // position on the full register

    const Classification& classification() const { return classification_; }

    bool operator==(const InteractionPattern& other) const {
        return n_system_ == other.n_system_ && n_bath_ == other.n_bath_ && gates_ == other.gates_;
    }

  private:
    Classification classify_impl() const;

    int n_system_;
    int n_bath_;
    std::vector<PurePhaseGate> gates_;
    Classification classification_;
};

// Pattern file grammar (UTF-8, line oriented, '#' starts a comment):
//   system <N_S>
//   bath <N_B>
//   gate phase=<float-radians> (s:<idx>|b:<idx>)+
// Byte-identical duplicate gate lines are rejected (copy-paste guard); gates
// that merely repeat a support with the same phase are fine as long as the
// lines differ somewhere, e.g. in a trailing comment.
InteractionPattern parse_pattern(std::string_view text);

// Canonical serialization; parse_pattern(serialize_pattern(p)) == p.
std::string serialize_pattern(const InteractionPattern& p);

Classification classify(const InteractionPattern& p);

// sqrt(2)^{k-1}(|0><0...0| + |1><1...1|): glues the k virtual copies of a
// physical qubit back together. Emitted only for qubits with >= 2 incident
// gates (k = 1 is the identity).
struct PepsProjector {
    QubitId physical;
    int virtual_count = 0;
    Matrix op;  // 2 x 2^k
};
std::vector<PepsProjector> build_peps_projectors(const InteractionPattern& p);

// alpha_i = i^T Gamma i over the full register (system block first).
struct WeightedGraph {
    int n = 0;
    Eigen::MatrixXd gamma;
};

// Requires every gate to have order <= 2 (throws NotAGraphState otherwise).
// A 2-qubit gate with phase phi contributes phi/2 to each of the two
// symmetric off-diagonal entries; a 1-qubit gate puts phi on the diagonal.
WeightedGraph graph_from_pattern(const InteractionPattern& p);

// U_SB of the pattern as a diagonal unitary on the full register.
DiagonalUnitary pattern_unitary(const InteractionPattern& p);

// The pattern's LMES U_SB |+>^(N_S+N_B).
StateVector lmes_state(const InteractionPattern& p);

}  // namespace dephasim
