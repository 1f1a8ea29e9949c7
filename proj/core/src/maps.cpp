#include "dephasim/maps.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

namespace dephasim {

namespace {

// Diagonal of the product of single-qubit phase gates described by `phases`
// (one per system qubit, MSB-first register order).
Vector product_gate_diagonal(const Eigen::VectorXd& phases) {
    const int n = static_cast<int>(phases.size());
    const Eigen::Index d = Eigen::Index(1) << n;
    Vector diag(d);
    for (Eigen::Index x = 0; x < d; ++x) {
        double theta = 0.0;
        for (int q = 0; q < n; ++q) {
            if ((x >> (n - 1 - q)) & 1) {
                theta += phases(q);
            }
        }
        diag(x) = std::polar(1.0, theta);
    }
    return diag;
}

std::vector<double> canonical_phase_key(const Eigen::VectorXd& phases) {
    std::vector<double> key(phases.data(), phases.data() + phases.size());
    for (double& v : key) {
        v = wrap_phase(v);
        if (v == 0.0) {
            v = 0.0;  // collapse -0
        }
    }
    return key;
}

KrausForm kraus_from_groups(int n_system, double normalizer,
                            const std::map<std::vector<double>, double>& groups) {
    KrausForm form;
    form.n_system = n_system;
    form.normalizer = normalizer;
    form.terms.reserve(groups.size());
    for (const auto& [phases, weight] : groups) {
        KrausTerm term;
        term.weight = weight;
        term.phases = Eigen::Map<const Eigen::VectorXd>(phases.data(),
                                                        static_cast<Eigen::Index>(phases.size()));
        form.terms.push_back(std::move(term));
    }
    return form;
}

}  // namespace

DensityMatrix KrausForm::apply(const DensityMatrix& rho) const {
    if (rho.n_qubits() != n_system) {
        throw ShapeError("input state does not live on the system register");
    }
    const Eigen::Index d = rho.dim();
    Matrix out = Matrix::Zero(d, d);
    for (const auto& term : terms) {
        const Vector diag = product_gate_diagonal(term.phases);
        out.noalias() += term.weight * (diag.asDiagonal() * rho.entries() * diag.conjugate().asDiagonal());
    }
    out /= normalizer;
    return DensityMatrix(rho.reg(), std::move(out), rho.normalized());
}

double KrausForm::weight_sum() const {
    double sum = 0.0;
    for (const auto& t : terms) {
        sum += t.weight;
    }
    return sum;
}

DensityMatrix HadamardForm::apply(const DensityMatrix& rho) const {
    if (rho.dim() != rho_sigma.dim()) {
        throw ShapeError("input state does not live on the system register");
    }
    const double scale = static_cast<double>(rho_sigma.dim());
    Matrix out = scale * rho_sigma.entries().cwiseProduct(rho.entries());
    return DensityMatrix(rho.reg(), std::move(out), rho.normalized());
}

DensityMatrix HadamardForm::apply_embedded(const DensityMatrix& rho,
                                           const std::vector<int>& system_positions) const {
    const int ns = n_system();
    if (static_cast<int>(system_positions.size()) != ns) {
        throw ShapeError("need one register position per system qubit");
    }
    const int n = rho.n_qubits();
    const double scale = static_cast<double>(rho_sigma.dim());

    auto system_bits = [&](Eigen::Index index) {
        Eigen::Index s = 0;
        for (int q = 0; q < ns; ++q) {
            if ((index >> (n - 1 - system_positions[static_cast<size_t>(q)])) & 1) {
                s |= Eigen::Index(1) << (ns - 1 - q);
            }
        }
        return s;
    };

    const Eigen::Index d = rho.dim();
    Matrix out(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        const Eigen::Index rs = system_bits(r);
        for (Eigen::Index c = 0; c < d; ++c) {
            out(r, c) = scale * rho_sigma.entries()(rs, system_bits(c)) * rho.entries()(r, c);
        }
    }
    return DensityMatrix(rho.reg(), std::move(out), rho.normalized());
}

Eigen::Index PauliForm::mask_of(const std::string& key, int n_system) {
    if (static_cast<int>(key.size()) != n_system) {
        throw ShapeError("Pauli index string has the wrong length");
    }
    Eigen::Index mask = 0;
    for (int q = 0; q < n_system; ++q) {
        const char c = key[static_cast<size_t>(q)];
        if (c == '3') {
            mask |= Eigen::Index(1) << (n_system - 1 - q);
        } else if (c != '0') {
            throw ShapeError("Pauli index string must be over {0,3}");
        }
    }
    return mask;
}

std::string PauliForm::key_of(Eigen::Index mask, int n_system) {
    std::string key(static_cast<size_t>(n_system), '0');
    for (int q = 0; q < n_system; ++q) {
        if ((mask >> (n_system - 1 - q)) & 1) {
            key[static_cast<size_t>(q)] = '3';
        }
    }
    return key;
}

Complex PauliForm::coefficient(const std::string& bra, const std::string& ket) const {
    return table(mask_of(bra, n_system), mask_of(ket, n_system));
}

DensityMatrix PauliForm::apply(const DensityMatrix& rho) const {
    if (rho.n_qubits() != n_system) {
        throw ShapeError("input state does not live on the system register");
    }
    const Eigen::Index d = rho.dim();
    // sigma_i rho sigma_j for {0,3}-masks is an entrywise sign flip:
    // (sigma_i rho sigma_j)(x,y) = (-1)^{|i&x|} (-1)^{|j&y|} rho(x,y).
    auto sign = [](Eigen::Index mask, Eigen::Index x) {
        return std::popcount(static_cast<uint64_t>(mask & x)) % 2 == 0 ? 1.0 : -1.0;
    };
    Matrix out = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const Complex lambda = table(i, j);
            if (lambda == Complex(0.0)) {
                continue;
            }
            for (Eigen::Index x = 0; x < d; ++x) {
                for (Eigen::Index y = 0; y < d; ++y) {
                    out(x, y) += lambda * sign(i, x) * sign(j, y) * rho.entries()(x, y);
                }
            }
        }
    }
    return DensityMatrix(rho.reg(), std::move(out), rho.normalized());
}

DensityMatrix map_oracle(const InteractionPattern& p, const DensityMatrix& rho) {
    if (p.n_total() > kMaxDensityQubits) {
        throw TooLarge("oracle evolution on " + std::to_string(p.n_total()) + " qubits exceeds the cap of " +
                       std::to_string(kMaxDensityQubits));
    }
    if (rho.n_qubits() != p.n_system()) {
        throw ShapeError("input state does not live on the system register");
    }
    const DiagonalUnitary u = pattern_unitary(p);
    if (p.n_bath() == 0) {
        return u.conjugate(DensityMatrix(p.system_register(), rho.entries(), rho.normalized()));
    }
    const QubitRegister bath_reg = [&] {
        std::vector<std::string> labels;
        for (int i = 0; i < p.n_bath(); ++i) {
            labels.push_back("b" + std::to_string(i));
        }
        return QubitRegister(labels);
    }();
    const DensityMatrix bath = DensityMatrix::from_state(StateVector::plus_state(bath_reg));
    DensityMatrix full = tensor_product(DensityMatrix(p.system_register(), rho.entries(), rho.normalized()),
                                        bath);
    full = u.conjugate(full);
    return partial_trace(full, p.system_labels());
}

KrausForm kraus_form(const InteractionPattern& p) {
    if (!p.classification().purely_dephasing) {
        throw UnsupportedPattern("Kraus enumeration needs a purely dephasing pattern");
    }
    const int ns = p.n_system();
    if (ns < 1) {
        throw ShapeError("pattern has no system qubits");
    }

    // Only gates that couple a system qubit to the bath condition anything;
    // bath-only factors are dropped (they cancel between U and U†).
    struct CondGate {
        int system;
        std::vector<int> bath;
        double phase;
    };
    std::vector<CondGate> cond;
    std::set<int> touched;
    for (const auto& g : p.gates()) {
        const auto sys = g.system_indices();
        if (sys.empty()) {
            continue;
        }
        auto bath = g.bath_indices();
        touched.insert(bath.begin(), bath.end());
        cond.push_back({sys[0], std::move(bath), g.phase});
    }
    std::vector<int> touched_list(touched.begin(), touched.end());
    const int nt = static_cast<int>(touched_list.size());
    if (nt > 22) {
        throw TooLarge("Kraus enumeration over " + std::to_string(nt) + " conditioning bath qubits");
    }
    std::map<int, int> slot;
    for (int i = 0; i < nt; ++i) {
        slot[touched_list[static_cast<size_t>(i)]] = i;
    }

    const double untouched_weight = std::pow(2.0, p.n_bath() - nt);
    std::map<std::vector<double>, double> groups;
    const Eigen::Index count = Eigen::Index(1) << nt;
    for (Eigen::Index k = 0; k < count; ++k) {
        Eigen::VectorXd phases = Eigen::VectorXd::Zero(ns);
        for (const auto& g : cond) {
            bool fires = true;
            for (int b : g.bath) {
                if (((k >> slot[b]) & 1) == 0) {
                    fires = false;
                    break;
                }
            }
            if (fires) {
                phases(g.system) += g.phase;
            }
        }
        groups[canonical_phase_key(phases)] += untouched_weight;
    }
    return kraus_from_groups(ns, std::pow(2.0, p.n_bath()), groups);
}

HadamardForm hadamard_form(const InteractionPattern& p) {
    if (p.n_system() < 1) {
        throw ShapeError("pattern has no system qubits");
    }
    if (p.classification().purely_dephasing) {
        return HadamardForm{reduced_via_peps(p).matrix};
    }
    return HadamardForm{reduced_brute_force(p, p.system_labels()).matrix};
}

ChoiState choi_state(const InteractionPattern& p) {
    const int ns = p.n_system();
    if (ns > 5) {
        throw TooLarge("Choi construction supports at most 5 system qubits");
    }
    const HadamardForm h = hadamard_form(p);

    // ⊗_i |Phi+>_{s_i a_i} on the interleaved register.
    const QubitRegister reg = choi_register(ns);
    const int n = 2 * ns;
    const Eigen::Index d = Eigen::Index(1) << n;
    Vector pairs = Vector::Zero(d);
    const double amp = std::pow(0.5, ns / 2.0);
    for (Eigen::Index s = 0; s < (Eigen::Index(1) << ns); ++s) {
        Eigen::Index idx = 0;
        for (int q = 0; q < ns; ++q) {
            if ((s >> (ns - 1 - q)) & 1) {
                idx |= Eigen::Index(1) << (n - 1 - 2 * q);      // s_q
                idx |= Eigen::Index(1) << (n - 1 - (2 * q + 1));  // a_q
            }
        }
        pairs(idx) = amp;
    }
    DensityMatrix rho = DensityMatrix::from_state(StateVector(reg, std::move(pairs)));

    std::vector<int> system_positions;
    for (int q = 0; q < ns; ++q) {
        system_positions.push_back(2 * q);
    }
    return ChoiState{ns, h.apply_embedded(rho, system_positions)};
}

PauliForm pauli_form(const InteractionPattern& p) {
    const ChoiState choi = choi_state(p);
    const int ns = choi.n_system;
    const Eigen::Index d = Eigen::Index(1) << ns;

    // Bell vectors restricted to {0,3} codes; index by sigma_z mask.
    std::vector<Vector> vectors(static_cast<size_t>(d));
    const auto basis = bell_basis(ns);
    for (Eigen::Index mask = 0; mask < d; ++mask) {
        Eigen::Index code = 0;
        for (int q = 0; q < ns; ++q) {
            if ((mask >> (ns - 1 - q)) & 1) {
                code += Eigen::Index(3) << (2 * (ns - 1 - q));  // digit 3 in base 4
            }
        }
        vectors[static_cast<size_t>(mask)] = basis[static_cast<size_t>(code)].amplitudes();
    }

    PauliForm form;
    form.n_system = ns;
    form.table = Matrix(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            form.table(i, j) = vectors[static_cast<size_t>(i)].dot(
                choi.matrix.entries() * vectors[static_cast<size_t>(j)]);
        }
    }
    return form;
}

PauliForm two_qubit_gate_map_closed_form(const std::vector<double>& phis) {
    double r = 1.0;
    double gamma = 0.0;
    for (double phi : phis) {
        r *= std::cos(phi / 2.0);
        gamma += phi / 2.0;
    }
    PauliForm form;
    form.n_system = 1;
    form.table = Matrix(2, 2);
    form.table(0, 0) = (1.0 + r * std::cos(gamma)) / 2.0;
    form.table(1, 1) = (1.0 - r * std::cos(gamma)) / 2.0;
    form.table(0, 1) = Complex(0.0, r * std::sin(gamma) / 2.0);
    form.table(1, 0) = std::conj(form.table(0, 1));
    return form;
}

KrausForm shared_core_closed_form(const InteractionPattern& p) {
    const Classification& cls = p.classification();
    if (!cls.purely_dephasing || !cls.conditions_ab) {
        throw ClosedFormInapplicable("pattern does not satisfy conditions (a),(b)");
    }
    const int ns = p.n_system();
    if (ns < 1) {
        throw ShapeError("pattern has no system qubits");
    }
    const int m = cls.m();
    const std::set<int> core(cls.core.begin(), cls.core.end());

    // Conditioned part: sum over the basis of the non-core conditioning bits.
    struct CondGate {
        int system;
        std::vector<int> outside_core;
        double phase;
    };
    std::vector<CondGate> cond;
    std::set<int> conditioning;
    for (const auto& g : p.gates()) {
        const auto sys = g.system_indices();
        if (sys.empty()) {
            continue;
        }
        CondGate cg;
        cg.system = sys[0];
        cg.phase = g.phase;
        for (int b : g.bath_indices()) {
            if (!core.count(b)) {
                cg.outside_core.push_back(b);
                conditioning.insert(b);
            }
        }
        cond.push_back(std::move(cg));
    }
    std::vector<int> cond_list(conditioning.begin(), conditioning.end());
    const int nc = static_cast<int>(cond_list.size());
    if (nc > 22) {
        throw TooLarge("closed form would enumerate " + std::to_string(nc) + " conditioning bath qubits");
    }
    std::map<int, int> slot;
    for (int i = 0; i < nc; ++i) {
        slot[cond_list[static_cast<size_t>(i)]] = i;
    }

    const double normalizer = std::pow(2.0, p.n_bath());
    const double conditioned_total = std::pow(2.0, p.n_bath() - m);
    const double per_assignment = conditioned_total / std::pow(2.0, nc);

    std::map<std::vector<double>, double> groups;
    const Eigen::Index count = Eigen::Index(1) << nc;
    for (Eigen::Index k = 0; k < count; ++k) {
        Eigen::VectorXd phases = Eigen::VectorXd::Zero(ns);
        for (const auto& g : cond) {
            bool fires = true;
            for (int b : g.outside_core) {
                if (((k >> slot.at(b)) & 1) == 0) {
                    fires = false;
                    break;
                }
            }
            if (fires) {
                phases(g.system) += g.phase;
            }
        }
        groups[canonical_phase_key(phases)] += per_assignment;
    }

    KrausForm form = kraus_from_groups(ns, normalizer, groups);
    if (m >= 1) {
        // The identity shortcut stays a separate leading term: its weight is
        // the shared-core identity weight (1 - 2^{-m}) of the total.
        KrausTerm shortcut;
        shortcut.weight = normalizer - conditioned_total;
        shortcut.phases = Eigen::VectorXd::Zero(ns);
        form.terms.insert(form.terms.begin(), std::move(shortcut));
    }
    return form;
}

KrausForm single_system_repeated_collisions(int m, const std::vector<int>& bath_counts,
                                            const std::vector<double>& phis) {
    const size_t k = bath_counts.size();
    if (k == 0 || phis.size() != k) {
        throw ClosedFormInapplicable("need one phase per gate and at least one gate");
    }
    if (m < 0) {
        throw ClosedFormInapplicable("core size must be nonnegative");
    }
    int n_bath = m;
    for (int n : bath_counts) {
        if (n < m) {
            throw ClosedFormInapplicable("every gate must contain the full core");
        }
        n_bath += n - m;
    }

    const double normalizer = std::pow(2.0, n_bath);
    const double conditioned_total = std::pow(2.0, n_bath - m);

    // Composition of the conditioned local maps expands over the subsets of
    // gates that fire; the subset S carries weight prod_{i not in S}(2^{n_i-m}-1).
    std::map<std::vector<double>, double> groups;
    for (Eigen::Index subset = 0; subset < (Eigen::Index(1) << k); ++subset) {
        double weight = 1.0;
        double phase = 0.0;
        for (size_t i = 0; i < k; ++i) {
            if ((subset >> i) & 1) {
                phase += phis[i];
            } else {
                weight *= std::pow(2.0, bath_counts[i] - m) - 1.0;
            }
        }
        if (weight == 0.0) {
            continue;
        }
        Eigen::VectorXd phases(1);
        phases(0) = phase;
        groups[canonical_phase_key(phases)] += weight;
    }

    KrausForm form = kraus_from_groups(1, normalizer, groups);
    if (m >= 1) {
        KrausTerm shortcut;
        shortcut.weight = normalizer - conditioned_total;
        shortcut.phases = Eigen::VectorXd::Zero(1);
        form.terms.insert(form.terms.begin(), std::move(shortcut));
    }
    return form;
}

DephasingMap::DephasingMap(InteractionPattern pattern) : pattern_(std::move(pattern)) {}

const HadamardForm& DephasingMap::hadamard() const {
    std::call_once(hadamard_once_, [&] { hadamard_ = hadamard_form(pattern_); });
    return *hadamard_;
}

const KrausForm& DephasingMap::kraus() const {
    std::call_once(kraus_once_, [&] { kraus_ = kraus_form(pattern_); });
    return *kraus_;
}

const ChoiState& DephasingMap::choi() const {
    std::call_once(choi_once_, [&] { choi_ = choi_state(pattern_); });
    return *choi_;
}

const PauliForm& DephasingMap::pauli_table() const {
    std::call_once(pauli_once_, [&] { pauli_ = pauli_form(pattern_); });
    return *pauli_;
}

DensityMatrix DephasingMap::apply(const DensityMatrix& rho) const {
    return hadamard().apply(rho);
}

}  // namespace dephasim
