#include "dephasim/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <unsupported/Eigen/KroneckerProduct>

namespace dephasim {

ReducedState reduced_brute_force(const InteractionPattern& lmes, const std::vector<std::string>& keep) {
    const StateVector psi = lmes_state(lmes);  // enforces the state-vector cap
    DensityMatrix rho = reduced_from_state(psi, keep);
    return ReducedState{keep, std::move(rho), true};
}

ReducedState single_qubit_reduced_pure_gate(int order, double phi) {
    if (order < 1) {
        throw RangeError("gate order must be >= 1");
    }
    return single_qubit_reduced_multi_gate({order}, {phi});
}

Complex multi_gate_coherence(const std::vector<int>& orders, const std::vector<double>& phis) {
    if (orders.size() != phis.size()) {
        throw ShapeError("orders and phases must have the same length");
    }
    Complex factor = 1.0;
    for (size_t l = 0; l < orders.size(); ++l) {
        if (orders[l] < 1) {
            throw RangeError("gate order must be >= 1");
        }
        const double scale = std::pow(2.0, orders[l] - 1);
        factor *= (scale - 1.0 + std::polar(1.0, -phis[l])) / scale;
    }
    return factor;
}

ReducedState single_qubit_reduced_multi_gate(const std::vector<int>& orders,
                                             const std::vector<double>& phis) {
    const Complex off = 0.5 * multi_gate_coherence(orders, phis);
    Matrix m(2, 2);
    m << 0.5, off, std::conj(off), 0.5;
    QubitRegister reg = QubitRegister::system_bath(1, 0);
    return ReducedState{{"s0"}, DensityMatrix(std::move(reg), std::move(m)), true};
}

ReducedState weighted_graph_reduced(const WeightedGraph& g, const std::vector<int>& keep) {
    if (keep.empty()) {
        throw ShapeError("keep set must be nonempty");
    }
    std::set<int> kept_set(keep.begin(), keep.end());
    if (static_cast<int>(kept_set.size()) != static_cast<int>(keep.size())) {
        throw DuplicateLabel("keep set repeats a qubit");
    }
    for (int q : keep) {
        if (q < 0 || q >= g.n) {
            throw RangeError("kept qubit index out of range");
        }
    }
    std::vector<int> kept(kept_set.begin(), kept_set.end());
    std::vector<int> traced;
    for (int q = 0; q < g.n; ++q) {
        if (!kept_set.count(q)) {
            traced.push_back(q);
        }
    }
    const int na = static_cast<int>(kept.size());
    if (na > kMaxDensityQubits) {
        throw TooLarge("reduced state would exceed the density-matrix qubit cap");
    }
    const Eigen::Index dk = Eigen::Index(1) << na;

    auto bits_of = [&](Eigen::Index s) {
        std::vector<int> bits(static_cast<size_t>(na));
        for (int a = 0; a < na; ++a) {
            bits[static_cast<size_t>(a)] = static_cast<int>((s >> (na - 1 - a)) & 1);
        }
        return bits;
    };

    // alpha restricted to the kept block.
    auto alpha_kept = [&](const std::vector<int>& bits) {
        double acc = 0.0;
        for (int a = 0; a < na; ++a) {
            for (int b = 0; b < na; ++b) {
                acc += bits[static_cast<size_t>(a)] * g.gamma(kept[static_cast<size_t>(a)],
                                                              kept[static_cast<size_t>(b)]) *
                       bits[static_cast<size_t>(b)];
            }
        }
        return acc;
    };

    // c depends on the difference s - s' only; memoize per difference class.
    std::map<std::vector<int>, Complex> c_cache;
    auto coupling_factor = [&](const std::vector<int>& diff) {
        if (auto it = c_cache.find(diff); it != c_cache.end()) {
            return it->second;
        }
        Complex c = 1.0;
        for (int t : traced) {
            double w = 0.0;
            for (int a = 0; a < na; ++a) {
                w += 2.0 * g.gamma(kept[static_cast<size_t>(a)], t) * diff[static_cast<size_t>(a)];
            }
            c *= 1.0 + std::polar(1.0, w);
        }
        c_cache.emplace(diff, c);
        return c;
    };

    Matrix out(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) {
        const auto rb = bits_of(r);
        const double ar = alpha_kept(rb);
        for (Eigen::Index c = 0; c < dk; ++c) {
            const auto cb = bits_of(c);
            std::vector<int> diff(static_cast<size_t>(na));
            for (int a = 0; a < na; ++a) {
                diff[static_cast<size_t>(a)] = rb[static_cast<size_t>(a)] - cb[static_cast<size_t>(a)];
            }
            out(r, c) = std::polar(1.0, ar - alpha_kept(cb)) * coupling_factor(diff);
        }
    }
    out /= out.trace().real();

    std::vector<std::string> labels;
    labels.reserve(kept.size());
    for (int q : kept) {
        labels.push_back("q" + std::to_string(q));
    }
    QubitRegister reg{labels};
    return ReducedState{labels, DensityMatrix(std::move(reg), std::move(out)), true};
}

namespace {

// Per-gate 2x2 block of the virtual-qubit contraction: the gate's cluster
// state conditioned on its overlapping bath qubits being in |kappa> and traced
// over its fresh bath qubits. `n_bath_in_gate` counts the gate's bath qubits,
// `fresh` the non-overlapping ones among them.
Matrix conditioned_block(int n_bath_in_gate, int fresh, bool overlap_all_ones, double phi) {
    const double unit = std::pow(2.0, fresh) / std::pow(2.0, n_bath_in_gate + 1);
    Matrix m(2, 2);
    if (!overlap_all_ones) {
        m << unit, unit, unit, unit;
        return m;
    }
    const double scale = std::pow(2.0, n_bath_in_gate + 1);
    const Complex off = (std::pow(2.0, fresh) - 1.0 + std::polar(1.0, -phi)) / scale;
    m << unit, off, std::conj(off), unit;
    return m;
}

}  // namespace

ReducedState reduced_via_peps(const InteractionPattern& p) {
    if (!p.classification().purely_dephasing) {
        throw UnsupportedPattern("the virtual-qubit contraction needs a purely dephasing pattern");
    }
    if (p.n_system() < 1) {
        throw ShapeError("pattern has no system qubits");
    }

    // Bath-only gates never change the reduced state of the system block.
    std::vector<const PurePhaseGate*> gates;
    for (const auto& g : p.gates()) {
        if (!g.system_indices().empty()) {
            gates.push_back(&g);
        }
    }

    // Overlapping bath qubits: in >= 2 of the remaining gates.
    std::map<int, int> bath_incidence;
    for (const auto* g : gates) {
        for (int b : g->bath_indices()) {
            ++bath_incidence[b];
        }
    }
    std::vector<int> overlapping;
    for (const auto& [b, count] : bath_incidence) {
        if (count >= 2) {
            overlapping.push_back(b);
        }
    }
    const int n_overlap = static_cast<int>(overlapping.size());
    if (n_overlap > 20) {
        throw TooLarge("pattern has " + std::to_string(n_overlap) + " overlapping bath qubits");
    }
    std::map<int, int> overlap_slot;
    for (int i = 0; i < n_overlap; ++i) {
        overlap_slot[overlapping[static_cast<size_t>(i)]] = i;
    }

    struct GateInfo {
        int system = 0;
        int n_bath = 0;
        int fresh = 0;
        std::vector<int> overlap_slots;
        double phase = 0.0;
    };
    std::vector<GateInfo> infos;
    infos.reserve(gates.size());
    for (const auto* g : gates) {
        GateInfo info;
        info.system = g->system_indices()[0];
        const auto bath = g->bath_indices();
        info.n_bath = static_cast<int>(bath.size());
        for (int b : bath) {
            if (auto it = overlap_slot.find(b); it != overlap_slot.end()) {
                info.overlap_slots.push_back(it->second);
            }
        }
        info.fresh = info.n_bath - static_cast<int>(info.overlap_slots.size());
        info.phase = g->phase;
        infos.push_back(std::move(info));
    }

    const int ns = p.n_system();
    const Eigen::Index ds = Eigen::Index(1) << ns;
    Matrix sum = Matrix::Zero(ds, ds);
    const Eigen::Index assignments = Eigen::Index(1) << n_overlap;
    const Matrix plus_block = (Matrix(2, 2) << 0.5, 0.5, 0.5, 0.5).finished();

    for (Eigen::Index k = 0; k < assignments; ++k) {
        std::vector<Matrix> blocks(static_cast<size_t>(ns));
        std::vector<bool> touched(static_cast<size_t>(ns), false);
        for (const auto& info : infos) {
            bool all_ones = true;
            for (int slot : info.overlap_slots) {
                if (((k >> slot) & 1) == 0) {
                    all_ones = false;
                    break;
                }
            }
            Matrix block = conditioned_block(info.n_bath, info.fresh, all_ones, info.phase);
            auto& acc = blocks[static_cast<size_t>(info.system)];
            if (!touched[static_cast<size_t>(info.system)]) {
                acc = std::move(block);
                touched[static_cast<size_t>(info.system)] = true;
            } else {
                // Several gates on one physical system qubit: the projector
                // turns the virtual tensor product into an entrywise product.
                acc = acc.cwiseProduct(block).eval();
            }
        }
        Matrix term = Matrix::Ones(1, 1);
        for (int l = 0; l < ns; ++l) {
            const Matrix& block = touched[static_cast<size_t>(l)] ? blocks[static_cast<size_t>(l)]
                                                                  : plus_block;
            term = Eigen::kroneckerProduct(term, block).eval();
        }
        sum += term;
    }
    sum /= sum.trace().real();

    return ReducedState{p.system_labels(), DensityMatrix(p.system_register(), std::move(sum)), true};
}

}  // namespace dephasim
