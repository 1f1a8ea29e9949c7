#include "cli.hpp"

#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dephasim/format.hpp"
#include "dephasim/lme_prep.hpp"
#include "dephasim/maps.hpp"
#include "dephasim/metrics.hpp"
#include "dephasim/pattern.hpp"
#include "dephasim/reduced.hpp"

namespace dephasim::cli {

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitTooLarge = 3;
constexpr int kExitNumerical = 4;

InteractionPattern load_pattern(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open pattern file '" + path + "'", 0, 0);
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_pattern(text.str());
}

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0.0;
    double stop = 0.0;
    int steps = 0;
    const auto first = spec.find(':');
    const auto second = spec.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw RangeError("grid spec must be <start>:<stop>:<steps>");
    }
    try {
        start = std::stod(spec.substr(0, first));
        stop = std::stod(spec.substr(first + 1, second - first - 1));
        steps = std::stoi(spec.substr(second + 1));
    } catch (const std::exception&) {
        throw RangeError("malformed grid spec '" + spec + "'");
    }
    if (steps < 1) {
        throw RangeError("grid needs at least one step");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<size_t>(steps));
    if (steps == 1) {
        grid.push_back(start);
    } else {
        for (int i = 0; i < steps; ++i) {
            grid.push_back(start + (stop - start) * i / (steps - 1));
        }
    }
    return grid;
}

// Named input states: plus | ghz:p=<float> | bell:{phip,phim,psip,psim} |
// file:<path> with dense "re,im" rows.
DensityMatrix parse_state(const std::string& spec, int n_system) {
    const QubitRegister reg = QubitRegister::system_bath(n_system, 0);
    if (spec == "plus") {
        return DensityMatrix::from_state(StateVector::plus_state(reg));
    }
    if (spec.starts_with("ghz:p=")) {
        const double p = std::stod(spec.substr(6));
        if (p < 0.0 || p > 1.0) {
            throw RangeError("ghz weight must be in [0,1]");
        }
        return DensityMatrix::from_state(ghz_state(n_system, p));
    }
    if (spec.starts_with("bell:")) {
        if (n_system != 2) {
            throw ShapeError("bell states need exactly 2 system qubits");
        }
        const std::string which = spec.substr(5);
        Vector amps = Vector::Zero(4);
        const double inv = 1.0 / std::sqrt(2.0);
        if (which == "phip") {
            amps(0) = inv;
            amps(3) = inv;
        } else if (which == "phim") {
            amps(0) = inv;
            amps(3) = -inv;
        } else if (which == "psip") {
            amps(1) = inv;
            amps(2) = inv;
        } else if (which == "psim") {
            amps(1) = inv;
            amps(2) = -inv;
        } else {
            throw RangeError("unknown bell state '" + which + "'");
        }
        return DensityMatrix::from_state(StateVector(reg, std::move(amps)));
    }
    if (spec.starts_with("file:")) {
        const std::string path = spec.substr(5);
        std::ifstream in(path);
        if (!in) {
            throw ParseError("cannot open state file '" + path + "'", 0, 0);
        }
        const Eigen::Index d = reg.dim();
        Matrix m(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            for (Eigen::Index c = 0; c < d; ++c) {
                std::string cell;
                if (!(in >> cell)) {
                    throw ParseError("state file ended early", 0, 0);
                }
                const auto comma = cell.find(',');
                if (comma == std::string::npos) {
                    throw ParseError("state entries must be 're,im'", 0, 0);
                }
                m(r, c) = Complex(std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1)));
            }
        }
        return DensityMatrix(reg, std::move(m));
    }
    throw RangeError("unknown state spec '" + spec + "'");
}

// Seeded Ginibre state: A A† / tr with i.i.d. complex Gaussian entries.
DensityMatrix random_density(const QubitRegister& reg, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss;
    const Eigen::Index d = reg.dim();
    Matrix a(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            a(r, c) = Complex(gauss(rng), gauss(rng));
        }
    }
    Matrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(reg, std::move(rho));
}

class OutputTarget {
  public:
    OutputTarget(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.emplace(path, std::ios::binary);
            if (!*file_) {
                throw RangeError("cannot open output file '" + path + "'");
            }
        }
    }
    std::ostream& stream() { return file_ ? *file_ : fallback_; }

  private:
    std::optional<std::ofstream> file_;
    std::ostream& fallback_;
};

std::string coupling_name(Coupling c) {
    switch (c) {
        case Coupling::Independent:
            return "independent";
        case Coupling::OverlapQubit:
            return "overlap_qubit";
        case Coupling::OverlapEdge:
            return "overlap_edge";
    }
    return "?";
}

Coupling coupling_from(const std::string& name) {
    if (name == "independent") {
        return Coupling::Independent;
    }
    if (name == "overlap_qubit") {
        return Coupling::OverlapQubit;
    }
    if (name == "overlap_edge") {
        return Coupling::OverlapEdge;
    }
    throw RangeError("unknown coupling '" + name + "'");
}

void cmd_validate(const std::string& path, std::ostream& out) {
    const InteractionPattern p = load_pattern(path);
    const Classification& cls = p.classification();

    out << "pattern: " << p.n_system() << " system, " << p.n_bath() << " bath, " << p.gates().size()
        << " gates\n";
    out << "purely_dephasing=" << (cls.purely_dephasing ? "true" : "false")
        << " markovian=" << (cls.markovian ? "true" : "false")
        << " conditions_ab=" << (cls.conditions_ab ? "true" : "false");
    if (cls.conditions_ab) {
        out << " m=" << cls.m() << " core=";
        if (cls.core.empty()) {
            out << "{}";
        }
        for (size_t i = 0; i < cls.core.size(); ++i) {
            out << (i ? "," : "") << "b" << cls.core[i];
        }
    }
    out << '\n';
    for (int l = 0; l < p.n_system(); ++l) {
        out << "s" << l << " orders=[";
        const auto& orders = cls.per_system_orders[static_cast<size_t>(l)];
        for (size_t i = 0; i < orders.size(); ++i) {
            out << (i ? "," : "") << orders[i];
        }
        out << "]\n";
    }

    nlohmann::json j;
    j["n_system"] = p.n_system();
    j["n_bath"] = p.n_bath();
    j["n_gates"] = p.gates().size();
    j["purely_dephasing"] = cls.purely_dephasing;
    j["markovian"] = cls.markovian;
    j["conditions_ab"] = cls.conditions_ab;
    if (cls.conditions_ab) {
        j["m"] = cls.m();
        j["core"] = cls.core;
    }
    j["per_system_orders"] = cls.per_system_orders;
    out << j.dump() << '\n';
}

void dump_kraus(std::ostream& out, const KrausForm& form) {
    out << "normalizer=" << format_real(form.normalizer) << '\n';
    for (const auto& term : form.terms) {
        out << "weight=" << format_real(term.weight) << " phases=";
        for (Eigen::Index i = 0; i < term.phases.size(); ++i) {
            out << (i ? " " : "") << format_real(term.phases(i));
        }
        out << '\n';
    }
}

void dump_pauli(std::ostream& out, const PauliForm& form) {
    const Eigen::Index d = form.table.rows();
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            out << PauliForm::key_of(i, form.n_system) << ' ' << PauliForm::key_of(j, form.n_system)
                << ' ' << format_complex(form.table(i, j)) << '\n';
        }
    }
}

void cmd_map(const std::string& path, const std::string& repr, const std::string& state_spec,
             std::ostream& out) {
    const InteractionPattern p = load_pattern(path);
    if (repr == "oracle") {
        if (state_spec.empty()) {
            throw RangeError("--repr oracle needs --state");
        }
        dump_matrix(out, map_oracle(p, parse_state(state_spec, p.n_system())).entries());
    } else if (repr == "kraus") {
        dump_kraus(out, kraus_form(p));
    } else if (repr == "hadamard") {
        dump_matrix(out, hadamard_form(p).rho_sigma.entries());
    } else if (repr == "pauli") {
        dump_pauli(out, pauli_form(p));
    } else if (repr == "choi") {
        dump_matrix(out, choi_state(p).matrix.entries());
    } else {
        throw RangeError("unknown representation '" + repr + "'");
    }
}

void cmd_apply(const std::string& path, const std::string& repr, const std::string& state_spec,
               std::ostream& out) {
    const InteractionPattern p = load_pattern(path);
    const DensityMatrix rho = parse_state(state_spec, p.n_system());
    DensityMatrix result = [&] {
        if (repr == "hadamard") {
            return hadamard_form(p).apply(rho);
        }
        if (repr == "kraus") {
            return kraus_form(p).apply(rho);
        }
        if (repr == "pauli") {
            return pauli_form(p).apply(rho);
        }
        if (repr == "closed-form") {
            return shared_core_closed_form(p).apply(rho);
        }
        if (repr == "oracle") {
            return map_oracle(p, rho);
        }
        throw RangeError("unknown representation '" + repr + "'");
    }();
    dump_matrix(out, result.entries());
}

int cmd_oracle_check(const std::string& path, int trials, uint64_t seed, double tolerance,
                     std::ostream& out) {
    const InteractionPattern p = load_pattern(path);
    const Classification& cls = p.classification();
    const QubitRegister sys = QubitRegister::system_bath(p.n_system(), 0);

    const HadamardForm hadamard = hadamard_form(p);
    std::optional<KrausForm> kraus;
    std::optional<PauliForm> pauli;
    std::optional<KrausForm> shared_core;
    if (cls.purely_dephasing) {
        kraus = kraus_form(p);
        if (cls.conditions_ab) {
            shared_core = shared_core_closed_form(p);
        }
    }
    if (p.n_system() <= 5) {
        pauli = pauli_form(p);
    }

    std::mt19937_64 rng(seed);
    double worst_hadamard = 0.0, worst_kraus = 0.0, worst_pauli = 0.0, worst_shared_core = 0.0;
    for (int t = 0; t < trials; ++t) {
        const DensityMatrix rho = random_density(sys, rng);
        const Matrix expected = map_oracle(p, rho).entries();
        auto deviation = [&](const DensityMatrix& got) {
            return (got.entries() - expected).cwiseAbs().maxCoeff();
        };
        worst_hadamard = std::max(worst_hadamard, deviation(hadamard.apply(rho)));
        if (kraus) {
            worst_kraus = std::max(worst_kraus, deviation(kraus->apply(rho)));
        }
        if (pauli) {
            worst_pauli = std::max(worst_pauli, deviation(pauli->apply(rho)));
        }
        if (shared_core) {
            worst_shared_core = std::max(worst_shared_core, deviation(shared_core->apply(rho)));
        }
    }

    bool ok = true;
    auto report = [&](const std::string& name, bool applicable, double worst) {
        if (!applicable) {
            out << name << ": not applicable\n";
            return;
        }
        const bool pass = worst <= tolerance;
        ok = ok && pass;
        out << name << ": max deviation " << format_real(worst, 3) << (pass ? " [ok]" : " [FAIL]")
            << '\n';
    };
    report("hadamard", true, worst_hadamard);
    report("kraus", kraus.has_value(), worst_kraus);
    report("pauli", pauli.has_value(), worst_pauli);
    report("closed-form", shared_core.has_value(), worst_shared_core);
    return ok ? kExitOk : kExitNumerical;
}

int cmd_prepare(const std::string& path, const std::string& state_spec, std::ostream& out) {
    const InteractionPattern lmes = load_pattern(path);
    const GeneralizedStabilizer stab = build_stabilizer(lmes);
    const int n = stab.n;
    const QubitRegister sys = QubitRegister::generic(n, "s");

    StateVector input = StateVector::plus_state(sys);
    if (!state_spec.empty() && state_spec != "plus") {
        // Reuse the density-matrix state specs restricted to pure inputs.
        if (state_spec.starts_with("ghz:p=")) {
            input = StateVector(sys, ghz_state(n, std::stod(state_spec.substr(6))).amplitudes());
        } else {
            throw RangeError("prepare-lme supports --state plus or ghz:p=<float>");
        }
    }

    const PreparationCircuit circuit{stab};
    const StateVector output = circuit.run(input);
    const StateVector lme = lmes_state(lmes);

    const DensityMatrix system_marginal = reduced_from_state(output, sys.labels());
    const double fidelity =
        (lme.amplitudes().adjoint() * system_marginal.entries() * lme.amplitudes())(0).real();
    const StateVector aux = project_system(output, StateVector(sys, lme.amplitudes()));
    const StateVector expected_aux =
        stab.phase_gate.adjoint().apply(StateVector(sys, input.amplitudes()));
    const double aux_fidelity = aux.fidelity(StateVector(sys, expected_aux.amplitudes()));

    out << "n=" << n << '\n';
    out << "system_fidelity=" << format_real(fidelity) << '\n';
    out << "aux_fidelity=" << format_real(aux_fidelity) << '\n';
    out << "aux_state:\n";
    for (Eigen::Index i = 0; i < aux.dim(); ++i) {
        out << format_complex(aux.amplitudes()(i)) << '\n';
    }
    const bool ok = std::abs(fidelity - 1.0) <= 1e-10 && std::abs(aux_fidelity - 1.0) <= 1e-10;
    return ok ? kExitOk : kExitNumerical;
}

int cmd_double_copy(const std::string& path, std::ostream& out) {
    const InteractionPattern lmes = load_pattern(path);
    const StateVector output = double_copy(lmes);
    const StateVector lme = lmes_state(lmes);
    const int n = lme.n_qubits();
    const Eigen::Index d = lme.dim();

    // Expected |Psi> ⊗ |Psi*|>.
    Vector expected(d * d);
    for (Eigen::Index s = 0; s < d; ++s) {
        for (Eigen::Index a = 0; a < d; ++a) {
            expected(s * d + a) = lme.amplitudes()(s) * std::conj(lme.amplitudes()(a));
        }
    }
    const double deviation = (output.amplitudes() - expected).cwiseAbs().maxCoeff();
    out << "n=" << n << '\n';
    out << "copy_deviation=" << format_real(deviation, 3) << '\n';
    out << "state:\n";
    for (Eigen::Index i = 0; i < output.dim(); ++i) {
        out << format_complex(output.amplitudes()(i)) << '\n';
    }
    return deviation <= 1e-10 ? kExitOk : kExitNumerical;
}

void scan_fig1(int m, const std::vector<double>& grid, std::ostream& out) {
    const CoherenceScan scan = fig1_scan(m, grid);
    out << "m,phi,factor\n";
    for (size_t i = 0; i < scan.phis.size(); ++i) {
        out << m << ',' << format_real(scan.phis[i]) << ',' << format_real(scan.factors[i]) << '\n';
    }
}

void scan_fig2(Coupling coupling, const std::vector<double>& grid1, const std::vector<double>& grid2,
               uint64_t seed, std::ostream& out) {
    const EntanglementScan scan = fig2_scan(coupling, grid1, grid2, seed);
    out << "coupling,phi1,phi2,eof\n";
    for (const auto& point : scan.points) {
        out << coupling_name(coupling) << ',' << format_real(point.phi1) << ','
            << format_real(point.phi2) << ',' << format_real(point.eof) << '\n';
    }
}

void scan_coherence(int n1, int k, const std::vector<double>& grid, std::ostream& out) {
    out << "n1,k,phi,markov,nonmarkov\n";
    for (double phi : grid) {
        out << n1 << ',' << k << ',' << format_real(phi) << ',' << format_real(markov_decay(n1, k, phi))
            << ',' << format_real(nonmarkov_decay(n1, k, phi)) << '\n';
    }
}

void scan_ghz(int ns, int n1, double p, const std::vector<double>& grid, std::ostream& out) {
    out << "NS,n1,p,phi,E_indep,E_dep\n";
    for (double phi : grid) {
        const auto [indep, dep] = e_indep_vs_e_dep(ns, n1, p, phi);
        out << ns << ',' << n1 << ',' << format_real(p) << ',' << format_real(phi) << ','
            << format_real(indep) << ',' << format_real(dep) << '\n';
    }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dephasing-map simulator for multi-qubit Ising collision patterns"};
    app.require_subcommand(1);

    std::string pattern_path;
    std::string repr = "hadamard";
    std::string state_spec;
    std::string out_path;
    std::string kind;
    std::string coupling_name_arg = "independent";
    std::string grid_spec = "0:6.283185307179586:33";
    std::string grid2_spec;
    int m = 0;
    int n1 = 1;
    int k_collisions = 1;
    int ns = 2;
    int trials = 10;
    double p_weight = 0.5;
    double tolerance = 1e-10;
    uint64_t seed = 0;

    auto* validate = app.add_subcommand("validate", "parse and classify a pattern file");
    validate->add_option("pattern", pattern_path)->required();

    auto* map_cmd = app.add_subcommand("map", "dump a map representation");
    map_cmd->add_option("pattern", pattern_path)->required();
    map_cmd->add_option("--repr", repr, "oracle|kraus|hadamard|pauli|choi");
    map_cmd->add_option("--state", state_spec);
    map_cmd->add_option("--out", out_path);

    auto* apply_cmd = app.add_subcommand("apply", "apply the map to a state");
    apply_cmd->add_option("pattern", pattern_path)->required();
    apply_cmd->add_option("--repr", repr, "hadamard|kraus|pauli|closed-form|oracle");
    apply_cmd->add_option("--state", state_spec)->required();
    apply_cmd->add_option("--out", out_path);

    auto* scan_cmd = app.add_subcommand("scan", "write CSV scan data");
    scan_cmd->add_option("--kind", kind, "fig1|fig2|coherence|ghz")->required();
    scan_cmd->add_option("--m", m);
    scan_cmd->add_option("--coupling", coupling_name_arg, "independent|overlap_qubit|overlap_edge");
    scan_cmd->add_option("--grid", grid_spec, "<start>:<stop>:<steps>");
    scan_cmd->add_option("--grid2", grid2_spec, "second axis for fig2 (defaults to --grid)");
    scan_cmd->add_option("--n1", n1);
    scan_cmd->add_option("--k", k_collisions);
    scan_cmd->add_option("--ns", ns);
    scan_cmd->add_option("--p", p_weight);
    scan_cmd->add_option("--seed", seed);
    scan_cmd->add_option("--out", out_path);

    auto* oracle_cmd = app.add_subcommand("oracle-check", "cross-check representations against the oracle");
    oracle_cmd->add_option("pattern", pattern_path)->required();
    oracle_cmd->add_option("--trials", trials);
    oracle_cmd->add_option("--seed", seed);
    oracle_cmd->add_option("--tol", tolerance);

    auto* prepare_cmd = app.add_subcommand("prepare-lme", "run the controlled-unitary preparation");
    prepare_cmd->add_option("pattern", pattern_path)->required();
    prepare_cmd->add_option("--state", state_spec);
    prepare_cmd->add_option("--out", out_path);

    auto* copy_cmd = app.add_subcommand("double-copy", "prepare |Psi> ⊗ |Psi*> in one pass");
    copy_cmd->add_option("pattern", pattern_path)->required();
    copy_cmd->add_option("--out", out_path);

    std::vector<const char*> argv;
    argv.push_back("dephasim");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (*validate) {
            cmd_validate(pattern_path, out);
            return kExitOk;
        }
        OutputTarget target(out_path, out);
        if (*map_cmd) {
            cmd_map(pattern_path, repr, state_spec, target.stream());
            return kExitOk;
        }
        if (*apply_cmd) {
            cmd_apply(pattern_path, repr, state_spec, target.stream());
            return kExitOk;
        }
        if (*scan_cmd) {
            const std::vector<double> grid = parse_grid(grid_spec);
            if (kind == "fig1") {
                scan_fig1(m, grid, target.stream());
            } else if (kind == "fig2") {
                const std::vector<double> grid2 =
                    grid2_spec.empty() ? grid : parse_grid(grid2_spec);
                scan_fig2(coupling_from(coupling_name_arg), grid, grid2, seed, target.stream());
            } else if (kind == "coherence") {
                scan_coherence(n1, k_collisions, grid, target.stream());
            } else if (kind == "ghz") {
                scan_ghz(ns, n1, p_weight, grid, target.stream());
            } else {
                err << "error: unknown scan kind '" << kind << "'\n";
                return kExitUsage;
            }
            return kExitOk;
        }
        if (*oracle_cmd) {
            return cmd_oracle_check(pattern_path, trials, seed, tolerance, out);
        }
        if (*prepare_cmd) {
            return cmd_prepare(pattern_path, state_spec, target.stream());
        }
        if (*copy_cmd) {
            return cmd_double_copy(pattern_path, target.stream());
        }
    } catch (const TooLarge& e) {
        err << "error: " << e.what() << '\n';
        return kExitTooLarge;
    } catch (const FitError& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitUsage;
}

}  // namespace dephasim::cli
