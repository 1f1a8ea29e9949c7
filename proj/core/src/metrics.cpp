#include "dephasim/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace dephasim {

double coherence_factor(const HadamardForm& map) {
    if (map.n_system() != 1) {
        throw WrongArity("coherence factor is defined for a single system qubit");
    }
    const Matrix& rs = map.rho_sigma.entries();
    return std::abs(rs(0, 1)) / rs(0, 0).real();
}

namespace {

double single_collision_multiplier(int n1, double phi) {
    const double scale = std::pow(2.0, n1);
    return std::abs(scale - 1.0 + std::polar(1.0, phi)) / scale;
}

}  // namespace

double markov_decay(int n1, int k, double phi) {
    if (n1 < 1 || k < 0) {
        throw RangeError("need n1 >= 1 and k >= 0");
    }
    return std::pow(single_collision_multiplier(n1, phi), k);
}

double nonmarkov_decay(int n1, int k, double phi) {
    if (n1 < 1 || k < 0) {
        throw RangeError("need n1 >= 1 and k >= 0");
    }
    if (k == 0) {
        return 1.0;
    }
    return single_collision_multiplier(n1, k * phi);
}

namespace {

// Least-squares slope of -ln(multiplier) against phi^2 through the origin.
double decay_exponent(int n1) {
    constexpr int samples = 50;
    constexpr double phi_max = 0.2;
    double sxy = 0.0;
    double sxx = 0.0;
    std::vector<double> xs, ys;
    for (int i = 1; i <= samples; ++i) {
        const double phi = phi_max * i / samples;
        const double x = phi * phi;
        const double y = -std::log(markov_decay(n1, 1, phi));
        xs.push_back(x);
        ys.push_back(y);
        sxy += x * y;
        sxx += x * x;
    }
    const double slope = sxy / sxx;
    double max_residual = 0.0;
    double max_y = 0.0;
    for (size_t i = 0; i < xs.size(); ++i) {
        max_residual = std::max(max_residual, std::abs(ys[i] - slope * xs[i]));
        max_y = std::max(max_y, std::abs(ys[i]));
    }
    if (max_residual > 0.01 * max_y) {
        throw FitError("quadratic decay fit residual " + std::to_string(max_residual / max_y));
    }
    return slope;
}

}  // namespace

double coherence_time_ratio(int n1_a, int n1_b) {
    // tau ~ 1/slope, so tau_a/tau_b = slope_b/slope_a.
    return decay_exponent(n1_b) / decay_exponent(n1_a);
}

CoherenceScan fig1_scan(int m, const std::vector<double>& phi_grid) {
    CoherenceScan scan;
    scan.m = m;
    scan.phis = phi_grid;
    scan.factors.reserve(phi_grid.size());
    const QubitRegister sys = QubitRegister::system_bath(1, 0);
    const DensityMatrix plus = DensityMatrix::from_state(StateVector::plus_state(sys));
    for (double phi : phi_grid) {
        const KrausForm form = single_system_repeated_collisions(m, {4, 4}, {phi, phi});
        const HadamardForm h{form.apply(plus)};
        scan.factors.push_back(coherence_factor(h));
    }
    return scan;
}

double eof_two_qubit(const DensityMatrix& rho) {
    if (rho.n_qubits() != 2) {
        throw ShapeError("entanglement of formation needs a 2-qubit state");
    }
    static const Matrix yy = [] {
        Matrix m = Matrix::Zero(4, 4);
        // sigma_y ⊗ sigma_y
        m(0, 3) = -1;
        m(1, 2) = 1;
        m(2, 1) = 1;
        m(3, 0) = -1;
        return m;
    }();
    const Matrix r = rho.entries() * yy * rho.entries().conjugate() * yy;
    Eigen::ComplexEigenSolver<Matrix> solver(r, false);
    std::array<double, 4> mu{};
    for (int i = 0; i < 4; ++i) {
        mu[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, solver.eigenvalues()(i).real()));
    }
    std::sort(mu.begin(), mu.end(), std::greater<>());
    const double concurrence = std::max(0.0, mu[0] - mu[1] - mu[2] - mu[3]);
    if (concurrence <= 0.0) {
        return 0.0;
    }
    const double x = (1.0 + std::sqrt(1.0 - concurrence * concurrence)) / 2.0;
    auto h = [](double t) { return t <= 0.0 || t >= 1.0 ? 0.0 : -t * std::log2(t); };
    return h(x) + h(1.0 - x);
}

InteractionPattern fig2_pattern(Coupling coupling, double phi1, double phi2) {
    using Q = QubitId;
    switch (coupling) {
        case Coupling::Independent:
            return InteractionPattern(
                2, 4,
                {{{Q::system(0), Q::bath(0), Q::bath(1)}, phi1},
                 {{Q::system(1), Q::bath(2), Q::bath(3)}, phi2}});
        case Coupling::OverlapQubit:
            return InteractionPattern(
                2, 3,
                {{{Q::system(0), Q::bath(0), Q::bath(1)}, phi1},
                 {{Q::system(1), Q::bath(1), Q::bath(2)}, phi2}});
        case Coupling::OverlapEdge:
            return InteractionPattern(
                2, 2,
                {{{Q::system(0), Q::bath(0), Q::bath(1)}, phi1},
                 {{Q::system(1), Q::bath(0), Q::bath(1)}, phi2}});
    }
    throw RangeError("unknown coupling scenario");
}

namespace {

Matrix euler_unitary(double a, double b, double c) {
    // Rz(a) Ry(b) Rz(c)
    const Complex ea = std::polar(1.0, -a / 2.0);
    const Complex ec = std::polar(1.0, -c / 2.0);
    const double cb = std::cos(b / 2.0);
    const double sb = std::sin(b / 2.0);
    Matrix u(2, 2);
    u(0, 0) = ea * cb * ec;
    u(0, 1) = -ea * sb * std::conj(ec);
    u(1, 0) = std::conj(ea) * sb * ec;
    u(1, 1) = std::conj(ea) * cb * std::conj(ec);
    return u;
}

}  // namespace

StateVector entangled_input(const Eigen::Matrix<double, 6, 1>& angles) {
    const Matrix u = euler_unitary(angles(0), angles(1), angles(2));
    const Matrix v = euler_unitary(angles(3), angles(4), angles(5));
    // (u ⊗ v) |Phi+> with |Phi+> = (|00> + |11>)/sqrt(2)
    Vector psi(4);
    const double inv = 1.0 / std::sqrt(2.0);
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            psi(2 * x + y) = inv * (u(x, 0) * v(y, 0) + u(x, 1) * v(y, 1));
        }
    }
    return StateVector(QubitRegister::system_bath(2, 0), std::move(psi));
}

EofOptimum max_eof_over_entangled_inputs(const HadamardForm& map, uint64_t seed, int n_starts) {
    using Angles = Eigen::Matrix<double, 6, 1>;
    constexpr double two_pi = 2.0 * std::numbers::pi;

    auto objective = [&](const Angles& angles) {
        const DensityMatrix rho = DensityMatrix::from_state(entangled_input(angles));
        return eof_two_qubit(map.apply(rho));
    };

    // Canonical starts cover the Bell states exactly; the rest are random.
    std::vector<Angles> starts;
    for (double b1 : {0.0, std::numbers::pi}) {
        for (double b2 : {0.0, std::numbers::pi}) {
            Angles a = Angles::Zero();
            a(1) = b1;
            a(4) = b2;
            starts.push_back(a);
            a(0) = std::numbers::pi;  // adds a relative phase flip
            starts.push_back(a);
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, two_pi);
    while (static_cast<int>(starts.size()) < n_starts) {
        Angles a;
        for (int i = 0; i < 6; ++i) {
            a(i) = uniform(rng);
        }
        starts.push_back(a);
    }

    EofOptimum best;
    best.value = -1.0;
    for (const auto& start : starts) {
        Angles angles = start;
        double value = objective(angles);
        double step = 0.4;
        bool converged = false;
        for (int sweep = 0; sweep < 400; ++sweep) {
            bool improved = false;
            for (int i = 0; i < 6; ++i) {
                for (double direction : {1.0, -1.0}) {
                    Angles trial = angles;
                    trial(i) += direction * step;
                    const double trial_value = objective(trial);
                    if (trial_value > value + 1e-15) {
                        angles = trial;
                        value = trial_value;
                        improved = true;
                    }
                }
            }
            if (!improved) {
                step /= 2.0;
                if (step < 1e-6) {
                    converged = true;
                    break;
                }
            }
        }
        if (value > best.value) {
            best.value = value;
            best.angles = angles;
            best.converged = converged;
        }
    }
    return best;
}

EntanglementScan fig2_scan(Coupling coupling, const std::vector<double>& phi1_grid,
                           const std::vector<double>& phi2_grid, uint64_t seed, int n_starts) {
    EntanglementScan scan;
    scan.coupling = coupling;
    scan.points.reserve(phi1_grid.size() * phi2_grid.size());
    for (size_t i = 0; i < phi1_grid.size(); ++i) {
        for (size_t j = 0; j < phi2_grid.size(); ++j) {
            const double phi1 = phi1_grid[i];
            const double phi2 = phi2_grid[j];
            const HadamardForm map = hadamard_form(fig2_pattern(coupling, phi1, phi2));
            // Seed derived from the grid coordinates keeps every point
            // reproducible regardless of evaluation order.
            const uint64_t point_seed = seed ^ (0x9e3779b97f4a7c15ULL * (i + 1)) ^
                                        (0xc2b2ae3d27d4eb4fULL * (j + 1));
            const EofOptimum opt = max_eof_over_entangled_inputs(map, point_seed, n_starts);
            scan.points.push_back({phi1, phi2, opt.value, opt.angles, opt.converged});
        }
    }
    return scan;
}

double log_negativity(const DensityMatrix& rho, const std::vector<std::string>& cut) {
    const int n = rho.n_qubits();
    Eigen::Index mask = 0;
    for (const auto& label : cut) {
        mask |= Eigen::Index(1) << (n - 1 - rho.reg().position(label));
    }
    if (mask == 0 || mask == rho.dim() - 1) {
        throw ShapeError("partial transpose needs a proper bipartition");
    }
    const Eigen::Index d = rho.dim();
    Matrix pt(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            // Swap the cut bits of row and column.
            const Eigen::Index rr = (r & ~mask) | (c & mask);
            const Eigen::Index cc = (c & ~mask) | (r & mask);
            pt(rr, cc) = rho.entries()(r, c);
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(pt, Eigen::EigenvaluesOnly);
    return std::log2(solver.eigenvalues().cwiseAbs().sum());
}

std::pair<double, double> e_indep_vs_e_dep(int n_system, int n1, double p, double phi) {
    if (n_system < 1 || n1 < 1 || p < 0.0 || p > 1.0) {
        throw RangeError("invalid GHZ comparison parameters");
    }
    const double amp = 2.0 * std::sqrt(p * (1.0 - p));
    const double indep = std::log2(1.0 + amp * std::pow(single_collision_multiplier(n1, phi), n_system));
    const double dep = std::log2(1.0 + amp * single_collision_multiplier(n1, n_system * phi));
    return {indep, dep};
}

double dfs_check(const InteractionPattern& p, const DensityMatrix& rho) {
    const HadamardForm map = hadamard_form(p);
    return (map.apply(rho).entries() - rho.entries()).cwiseAbs().maxCoeff();
}

InteractionPattern markovian_collisions_pattern(int n1, const std::vector<double>& phis) {
    const int k = static_cast<int>(phis.size());
    std::vector<PurePhaseGate> gates;
    for (int i = 0; i < k; ++i) {
        PurePhaseGate g;
        g.support.push_back(QubitId::system(0));
        for (int b = 0; b < n1; ++b) {
            g.support.push_back(QubitId::bath(i * n1 + b));
        }
        g.phase = phis[static_cast<size_t>(i)];
        gates.push_back(std::move(g));
    }
    return InteractionPattern(1, k * n1, std::move(gates));
}

InteractionPattern shared_core_collisions_pattern(int n1, int m, const std::vector<double>& phis) {
    if (n1 < 1 || m < 0 || m > n1) {
        throw RangeError("core size must be between 0 and n1, n1 >= 1");
    }
    const int k = static_cast<int>(phis.size());
    const int n_bath = m + k * (n1 - m);
    std::vector<PurePhaseGate> gates;
    for (int i = 0; i < k; ++i) {
        PurePhaseGate g;
        g.support.push_back(QubitId::system(0));
        for (int b = 0; b < m; ++b) {
            g.support.push_back(QubitId::bath(b));
        }
        for (int b = 0; b < n1 - m; ++b) {
            g.support.push_back(QubitId::bath(m + i * (n1 - m) + b));
        }
        g.phase = phis[static_cast<size_t>(i)];
        gates.push_back(std::move(g));
    }
    return InteractionPattern(1, n_bath, std::move(gates));
}

InteractionPattern ghz_coupling_pattern(int n_system, int n1, bool shared_bath, double phi) {
    std::vector<PurePhaseGate> gates;
    const int n_bath = shared_bath ? n1 : n_system * n1;
    for (int l = 0; l < n_system; ++l) {
        PurePhaseGate g;
        g.support.push_back(QubitId::system(l));
        for (int b = 0; b < n1; ++b) {
            g.support.push_back(QubitId::bath(shared_bath ? b : l * n1 + b));
        }
        g.phase = phi;
        gates.push_back(std::move(g));
    }
    return InteractionPattern(n_system, n_bath, std::move(gates));
}

StateVector ghz_state(int n_system, double p) {
    const QubitRegister reg = QubitRegister::system_bath(n_system, 0);
    Vector amps = Vector::Zero(reg.dim());
    amps(0) = std::sqrt(p);
    amps(reg.dim() - 1) = std::sqrt(1.0 - p);
    return StateVector(reg, std::move(amps));
}

}  // namespace dephasim
