#include "dephasim/pattern.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace dephasim {

std::vector<int> PurePhaseGate::system_indices() const {
    std::vector<int> out;
    for (const auto& q : support) {
        if (q.kind == QubitId::Kind::System) {
            out.push_back(q.index);
        }
    }
    return out;
}

std::vector<int> PurePhaseGate::bath_indices() const {
    std::vector<int> out;
    for (const auto& q : support) {
        if (q.kind == QubitId::Kind::Bath) {
            out.push_back(q.index);
        }
    }
    return out;
}

namespace {

bool gate_less(const PurePhaseGate& a, const PurePhaseGate& b) {
    if (a.support != b.support) {
        return a.support < b.support;
    }
    return a.phase < b.phase;
}

std::vector<int> sorted_intersection(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool contains_all(const std::vector<int>& haystack, const std::vector<int>& needles) {
    return std::includes(haystack.begin(), haystack.end(), needles.begin(), needles.end());
}

}  // namespace

InteractionPattern::InteractionPattern(int n_system, int n_bath, std::vector<PurePhaseGate> gates)
    : n_system_(n_system), n_bath_(n_bath), gates_(std::move(gates)) {
    if (n_system_ < 0 || n_bath_ < 0 || n_system_ + n_bath_ < 1) {
        throw RangeError("pattern needs nonnegative register sizes and at least one qubit");
    }
    for (auto& g : gates_) {
        if (g.support.empty()) {
            throw RangeError("gate with empty support");
        }
        std::sort(g.support.begin(), g.support.end());
        if (std::adjacent_find(g.support.begin(), g.support.end()) != g.support.end()) {
            throw RangeError("gate support repeats a qubit");
        }
        for (const auto& q : g.support) {
            const int limit = q.kind == QubitId::Kind::System ? n_system_ : n_bath_;
            if (q.index < 0 || q.index >= limit) {
                throw RangeError("qubit " + q.str() + " outside the declared registers");
            }
        }
        g.phase = wrap_phase(g.phase);
    }
    std::sort(gates_.begin(), gates_.end(), gate_less);
    classification_ = classify_impl();
}

QubitRegister InteractionPattern::full_register() const {
    return QubitRegister::system_bath(n_system_, n_bath_);
}

QubitRegister InteractionPattern::system_register() const {
    return QubitRegister::system_bath(n_system_, 0);
}

std::vector<std::string> InteractionPattern::system_labels() const {
    std::vector<std::string> labels;
    labels.reserve(static_cast<size_t>(n_system_));
    for (int i = 0; i < n_system_; ++i) {
        labels.push_back("s" + std::to_string(i));
    }
    return labels;
}

int InteractionPattern::position(const QubitId& q) const {
    return q.kind == QubitId::Kind::System ? q.index : n_system_ + q.index;
}

Classification classify(const InteractionPattern& p) {
    return p.classification();
}

}  // namespace dephasim

// classify_impl is a member so the pattern can populate its classification
// during construction.
namespace dephasim {

namespace {

Classification classify_pattern(int n_system, const std::vector<PurePhaseGate>& gates) {
    Classification cls;

    cls.purely_dephasing = std::ranges::all_of(
        gates, [](const PurePhaseGate& g) { return g.system_indices().size() <= 1; });

    // Markovian: no qubit takes part in two distinct collisions.
    std::map<QubitId, int> incidence;
    for (const auto& g : gates) {
        for (const auto& q : g.support) {
            ++incidence[q];
        }
    }
    cls.markovian = std::ranges::all_of(incidence, [](const auto& kv) { return kv.second <= 1; });

    // Coupling sets per system qubit: the bath indices of every gate that
    // couples that qubit to the bath. Gates acting on bath qubits alone never
    // enter the analysis.
    std::vector<std::vector<std::vector<int>>> coupling(static_cast<size_t>(n_system));
    cls.per_system_orders.resize(static_cast<size_t>(n_system));
    bool analysable = cls.purely_dephasing;
    for (const auto& g : gates) {
        const auto sys = g.system_indices();
        if (sys.empty()) {
            continue;
        }
        if (sys.size() > 1) {
            analysable = false;
            continue;
        }
        auto bath = g.bath_indices();  // sorted, since supports are canonical
        cls.per_system_orders[static_cast<size_t>(sys[0])].push_back(static_cast<int>(bath.size()));
        coupling[static_cast<size_t>(sys[0])].push_back(std::move(bath));
    }

    // Per-system overlap profile: the common pairwise intersection of that
    // qubit's gates, when all pairs agree.
    cls.per_system_core.resize(static_cast<size_t>(n_system));
    for (int l = 0; l < n_system; ++l) {
        const auto& sets = coupling[static_cast<size_t>(l)];
        if (sets.empty()) {
            cls.per_system_core[static_cast<size_t>(l)] = std::vector<int>{};
            continue;
        }
        if (sets.size() == 1) {
            cls.per_system_core[static_cast<size_t>(l)] = sets[0];
            continue;
        }
        std::optional<std::vector<int>> profile;
        bool consistent = true;
        for (size_t i = 0; i < sets.size() && consistent; ++i) {
            for (size_t j = i + 1; j < sets.size() && consistent; ++j) {
                auto inter = sorted_intersection(sets[i], sets[j]);
                if (!profile) {
                    profile = std::move(inter);
                } else if (*profile != inter) {
                    consistent = false;
                }
            }
        }
        cls.per_system_core[static_cast<size_t>(l)] = consistent ? profile : std::nullopt;
    }

    if (!analysable) {
        return cls;
    }

    // Strict shared-core conditions. With gates on >= 2 system qubits the core
    // is forced to equal every cross-system pairwise intersection; otherwise
    // it is the common intersection of all coupling sets.
    std::optional<std::vector<int>> core;
    bool consistent = true;
    for (int l = 0; l < n_system && consistent; ++l) {
        for (int lp = l + 1; lp < n_system && consistent; ++lp) {
            for (const auto& a : coupling[static_cast<size_t>(l)]) {
                for (const auto& b : coupling[static_cast<size_t>(lp)]) {
                    auto inter = sorted_intersection(a, b);
                    if (!core) {
                        core = std::move(inter);
                    } else if (*core != inter) {
                        consistent = false;
                    }
                }
            }
        }
    }
    if (!consistent) {
        return cls;  // conditions_ab stays false
    }
    if (!core) {
        // At most one system qubit interacts: condition (b) is vacuous and the
        // maximal admissible core is the intersection of all coupling sets.
        for (const auto& sets : coupling) {
            for (const auto& s : sets) {
                if (!core) {
                    core = s;
                } else {
                    *core = sorted_intersection(*core, s);
                }
            }
        }
        if (!core) {
            core = std::vector<int>{};  // no coupling at all
        }
    }
    // Condition (a): every coupling set contains the core.
    for (const auto& sets : coupling) {
        for (const auto& s : sets) {
            if (!contains_all(s, *core)) {
                return cls;
            }
        }
    }
    cls.conditions_ab = true;
    cls.core = *core;
    return cls;
}

}  // namespace

Classification InteractionPattern::classify_impl() const {
    return classify_pattern(n_system_, gates_);
}

std::vector<PepsProjector> build_peps_projectors(const InteractionPattern& p) {
    std::map<QubitId, int> incidence;
    for (const auto& g : p.gates()) {
        for (const auto& q : g.support) {
            ++incidence[q];
        }
    }
    std::vector<PepsProjector> projectors;
    for (const auto& [q, k] : incidence) {
        if (k < 2) {
            continue;
        }
        const Eigen::Index dv = Eigen::Index(1) << k;
        Matrix op = Matrix::Zero(2, dv);
        const double prefactor = std::pow(std::sqrt(2.0), k - 1);
        op(0, 0) = prefactor;
        op(1, dv - 1) = prefactor;
        projectors.push_back({q, k, std::move(op)});
    }
    return projectors;
}

WeightedGraph graph_from_pattern(const InteractionPattern& p) {
    const int n = p.n_total();
    WeightedGraph g{n, Eigen::MatrixXd::Zero(n, n)};
    for (const auto& gate : p.gates()) {
        if (gate.order() > 2) {
            throw NotAGraphState("pattern contains a gate of order " + std::to_string(gate.order()));
        }
        if (gate.order() == 1) {
            const int q = p.position(gate.support[0]);
            g.gamma(q, q) += gate.phase;
        } else {
            const int a = p.position(gate.support[0]);
            const int b = p.position(gate.support[1]);
            g.gamma(a, b) += gate.phase / 2.0;
            g.gamma(b, a) += gate.phase / 2.0;
        }
    }
    return g;
}

DiagonalUnitary pattern_unitary(const InteractionPattern& p) {
    QubitRegister reg = p.full_register();
    const int n = reg.size();
    const Eigen::Index d = reg.dim();
    Eigen::VectorXd phases = Eigen::VectorXd::Zero(d);
    for (const auto& g : p.gates()) {
        Eigen::Index mask = 0;
        for (const auto& q : g.support) {
            mask |= Eigen::Index(1) << (n - 1 - p.position(q));
        }
        for (Eigen::Index x = 0; x < d; ++x) {
            if ((x & mask) == mask) {
                phases(x) += g.phase;
            }
        }
    }
    for (Eigen::Index x = 0; x < d; ++x) {
        phases(x) = wrap_phase(phases(x));
    }
    return DiagonalUnitary(std::move(reg), std::move(phases));
}

StateVector lmes_state(const InteractionPattern& p) {
    const DiagonalUnitary u = pattern_unitary(p);
    return u.apply(StateVector::plus_state(u.reg()));
}

// ---------------------------------------------------------------------------
// Pattern file grammar
// ---------------------------------------------------------------------------

namespace {

struct Token {
    std::string text;
    int column;  // 1-based byte offset in the original line
};

std::vector<Token> tokenize(const std::string& line) {
    std::vector<Token> tokens;
    size_t i = 0;
    while (i < line.size()) {
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
        }
        tokens.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return tokens;
}

int parse_count(const Token& tok, int line_no, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), value);
    if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size() || value < 0) {
        throw ParseError(std::string("expected a nonnegative integer ") + what + ", got '" + tok.text + "'",
                         line_no, tok.column);
    }
    return value;
}

double parse_phase(const Token& tok, int line_no) {
    constexpr std::string_view prefix = "phase=";
    if (!tok.text.starts_with(prefix)) {
        throw ParseError("expected 'phase=<radians>' after 'gate', got '" + tok.text + "'", line_no,
                         tok.column);
    }
    const std::string value = tok.text.substr(prefix.size());
    if (value.empty()) {
        throw ParseError("empty phase value", line_no, tok.column);
    }
    char* end = nullptr;
    const double phase = std::strtod(value.c_str(), &end);
    if (end != value.c_str() + value.size()) {
        throw ParseError("malformed phase value '" + value + "'", line_no, tok.column);
    }
    return phase;
}

QubitId parse_qubit(const Token& tok, int line_no) {
    if (tok.text.size() < 3 || tok.text[1] != ':' || (tok.text[0] != 's' && tok.text[0] != 'b')) {
        throw ParseError("expected qubit token 's:<idx>' or 'b:<idx>', got '" + tok.text + "'", line_no,
                         tok.column);
    }
    int index = 0;
    const char* begin = tok.text.data() + 2;
    const char* finish = tok.text.data() + tok.text.size();
    const auto [ptr, ec] = std::from_chars(begin, finish, index);
    if (ec != std::errc{} || ptr != finish || index < 0) {
        throw ParseError("malformed qubit index in '" + tok.text + "'", line_no, tok.column);
    }
    return tok.text[0] == 's' ? QubitId::system(index) : QubitId::bath(index);
}

}  // namespace

InteractionPattern parse_pattern(std::string_view text) {
    std::istringstream stream{std::string(text)};
    std::string raw_line;
    int line_no = 0;
    int header_seen = 0;  // 0: expect system, 1: expect bath, 2: gates
    int n_system = 0;
    int n_bath = 0;
    std::vector<PurePhaseGate> gates;
    std::set<std::string> raw_gate_lines;

    while (std::getline(stream, raw_line)) {
        ++line_no;
        if (!raw_line.empty() && raw_line.back() == '\r') {
            raw_line.pop_back();
        }
        std::string line = raw_line;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        const auto tokens = tokenize(line);
        if (tokens.empty()) {
            continue;
        }

        if (header_seen == 0) {
            if (tokens[0].text != "system" || tokens.size() != 2) {
                throw ParseError("first statement must be 'system <N_S>'", line_no, tokens[0].column);
            }
            n_system = parse_count(tokens[1], line_no, "for the system register");
            header_seen = 1;
            continue;
        }
        if (header_seen == 1) {
            if (tokens[0].text != "bath" || tokens.size() != 2) {
                throw ParseError("second statement must be 'bath <N_B>'", line_no, tokens[0].column);
            }
            n_bath = parse_count(tokens[1], line_no, "for the bath register");
            header_seen = 2;
            continue;
        }

        if (tokens[0].text != "gate") {
            throw ParseError("expected a gate line, got '" + tokens[0].text + "'", line_no,
                             tokens[0].column);
        }
        if (tokens.size() < 2) {
            throw ParseError("gate line is missing its phase", line_no, tokens[0].column);
        }
        if (!raw_gate_lines.insert(raw_line).second) {
            throw DuplicateGate("line " + std::to_string(line_no) + ": byte-identical duplicate gate line");
        }
        PurePhaseGate gate;
        gate.phase = parse_phase(tokens[1], line_no);
        if (tokens.size() == 2) {
            throw ParseError("gate has empty support", line_no, tokens[1].column);
        }
        for (size_t t = 2; t < tokens.size(); ++t) {
            const QubitId q = parse_qubit(tokens[t], line_no);
            if (std::find(gate.support.begin(), gate.support.end(), q) != gate.support.end()) {
                throw ParseError("qubit " + q.str() + " repeated in gate support", line_no,
                                 tokens[t].column);
            }
            const int limit = q.kind == QubitId::Kind::System ? n_system : n_bath;
            if (q.index >= limit) {
                throw RangeError("line " + std::to_string(line_no) + ": qubit " + q.str() +
                                 " outside the declared registers");
            }
            gate.support.push_back(q);
        }
        gates.push_back(std::move(gate));
    }

    if (header_seen < 2) {
        throw ParseError("pattern must declare 'system <N_S>' and 'bath <N_B>'", line_no + 1, 1);
    }
    return InteractionPattern(n_system, n_bath, std::move(gates));
}

std::string serialize_pattern(const InteractionPattern& p) {
    std::ostringstream out;
    out << "system " << p.n_system() << '\n';
    out << "bath " << p.n_bath() << '\n';
    std::set<std::string> emitted;
    for (const auto& g : p.gates()) {
        char phase_buf[64];
        std::snprintf(phase_buf, sizeof(phase_buf), "%.17g", g.phase);
        std::string line = std::string("gate phase=") + phase_buf;
        for (const auto& q : g.support) {
            line += ' ';
            line += q.kind == QubitId::Kind::System ? "s:" : "b:";
            line += std::to_string(q.index);
        }
        // Repeated collisions on an identical support with an identical phase
        // are legal; disambiguate the raw lines so they survive re-parsing.
        int repeat = 1;
        std::string candidate = line;
        while (!emitted.insert(candidate).second) {
            ++repeat;
            candidate = line + " # repeat " + std::to_string(repeat);
        }
        out << candidate << '\n';
    }
    return out.str();
}

}  // namespace dephasim
