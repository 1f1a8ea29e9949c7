#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "dephasim/maps.hpp"
#include "dephasim/pattern.hpp"

namespace dephasim {

// |<0|rho_sigma|1>| of the trace-preserving normalization of rho_sigma, i.e.
// the multiplier applied to the input coherence rho_01. Single system qubit
// only.
double coherence_factor(const HadamardForm& map);

// Coherence multiplier after k Markovian collisions through (n1+1)-qubit
// gates with equal phases: [ |2^{n1} - 1 + e^{i phi}| / 2^{n1} ]^k.
double markov_decay(int n1, int k, double phi);

// Extreme non-Markovian counterpart: the k phases add before the modulus,
// |2^{n1} - 1 + e^{i k phi}| / 2^{n1}.
double nonmarkov_decay(int n1, int k, double phi);

// Ratio of coherence times tau(n1_a)/tau(n1_b), obtained by least-squares
// fitting -ln(single-collision multiplier) against phi^2 on phi in (0, 0.2].
// Throws FitError if either fit's residual is out of line.
double coherence_time_ratio(int n1_a, int n1_b);

struct CoherenceScan {
    int m = 0;
    std::vector<double> phis;
    std::vector<double> factors;
};

// Two 5-qubit gates (n1 = 4) on one system qubit sharing an m-qubit core,
// phi_1 = phi_2 = phi over the grid.
CoherenceScan fig1_scan(int m, const std::vector<double>& phi_grid);

// Entanglement of formation of a 2-qubit state via the concurrence closed
// form.
double eof_two_qubit(const DensityMatrix& rho);

enum class Coupling { Independent, OverlapQubit, OverlapEdge };

// The three 2-system-qubit coupling scenarios with 3-qubit gates (n1 = 2).
InteractionPattern fig2_pattern(Coupling coupling, double phi1, double phi2);

struct EntanglementPoint {
    double phi1 = 0.0;
    double phi2 = 0.0;
    double eof = 0.0;
    Eigen::Matrix<double, 6, 1> input_angles;  // optimizer trace
    bool converged = true;
};

struct EntanglementScan {
    Coupling coupling = Coupling::Independent;
    std::vector<EntanglementPoint> points;
};

// For each grid point, maximizes eof(E(|psi><psi|)) over the maximally
// entangled inputs |psi> = (u ⊗ v)|Phi+>, u and v parameterized by three
// Euler angles each. Multi-start coordinate descent, deterministically seeded
// per point.
EntanglementScan fig2_scan(Coupling coupling, const std::vector<double>& phi1_grid,
                           const std::vector<double>& phi2_grid, uint64_t seed = 0, int n_starts = 20);

struct EofOptimum {
    double value = 0.0;
    Eigen::Matrix<double, 6, 1> angles;
    bool converged = true;
};

EofOptimum max_eof_over_entangled_inputs(const HadamardForm& map, uint64_t seed, int n_starts = 20);

// (u ⊗ v)|Phi+> from the six Euler angles (z-y-z per side).
StateVector entangled_input(const Eigen::Matrix<double, 6, 1>& angles);

// log2 of the trace norm of the partial transpose over `cut`.
double log_negativity(const DensityMatrix& rho, const std::vector<std::string>& cut);

// Closed-form log-negativities (cut: one system qubit vs the rest) of the
// evolved GHZ-type input sqrt(p)|0..0> + sqrt(1-p)|1..1> under independent
// baths and under one shared bath, all gates of order n1+1 with equal phases.
std::pair<double, double> e_indep_vs_e_dep(int n_system, int n1, double p, double phi);

// max-norm residual ||E(rho) - rho||_max; 0 certifies a decoherence-free
// state.
double dfs_check(const InteractionPattern& p, const DensityMatrix& rho);

// Experiment builders used by scans, the CLI and the oracle cross-checks.
InteractionPattern markovian_collisions_pattern(int n1, const std::vector<double>& phis);
InteractionPattern shared_core_collisions_pattern(int n1, int m, const std::vector<double>& phis);
InteractionPattern ghz_coupling_pattern(int n_system, int n1, bool shared_bath, double phi);
StateVector ghz_state(int n_system, double p);

}  // namespace dephasim
