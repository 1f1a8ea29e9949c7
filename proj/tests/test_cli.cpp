#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.hpp"
#include "dephasim/format.hpp"
#include "dephasim/maps.hpp"
#include "dephasim/metrics.hpp"

using namespace dephasim;

namespace {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("dephasim_cli_test_" + std::to_string(std::rand()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::filesystem::path write(const std::string& name, const std::string& content) const {
        const auto file = path / name;
        std::ofstream out(file);
        out << content;
        return file;
    }
};

struct CliResult {
    int code = 0;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

const std::string kOverlapPattern =
    "system 2\nbath 3\n"
    "gate phase=1.0 s:0 b:0 b:1\n"
    "gate phase=1.0 s:1 b:1 b:2\n";

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("validate reports classification and exit codes") {
    TempDir dir;
    const auto file = dir.write("overlap.pat", kOverlapPattern);
    const CliResult ok = run_cli({"validate", file.string()});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("purely_dephasing=true") != std::string::npos);
    CHECK(ok.out.find("markovian=false") != std::string::npos);
    CHECK(ok.out.find("m=1") != std::string::npos);
    CHECK(ok.out.find("\"purely_dephasing\":true") != std::string::npos);

    // Empty gate list: valid identity channel.
    const auto empty = dir.write("empty.pat", "system 1\nbath 1\n");
    CHECK(run_cli({"validate", empty.string()}).code == 0);

    // Out-of-range index: exit 2 with a message on stderr.
    const auto bad = dir.write("bad.pat", "system 1\nbath 1\ngate phase=1.0 s:0 b:7\n");
    const CliResult fail = run_cli({"validate", bad.string()});
    CHECK(fail.code == 2);
    CHECK(!fail.err.empty());

    // Parse error with line number.
    const auto syntax = dir.write("syntax.pat", "system 1\nbath 1\nnope\n");
    const CliResult parse_fail = run_cli({"validate", syntax.string()});
    CHECK(parse_fail.code == 2);
    CHECK(parse_fail.err.find("line 3") != std::string::npos);
}

TEST_CASE("map dumps match library calls") {
    TempDir dir;
    const auto file = dir.write("overlap.pat", kOverlapPattern);

    // Hadamard dump equals the library matrix through the same formatter.
    const CliResult h = run_cli({"map", file.string(), "--repr", "hadamard"});
    CHECK(h.code == 0);
    std::ostringstream expected;
    dump_matrix(expected, hadamard_form(parse_pattern(kOverlapPattern)).rho_sigma.entries());
    CHECK(h.out == expected.str());

    // Pauli dump carries {0,3} keys.
    const CliResult pl = run_cli({"map", file.string(), "--repr", "pauli"});
    CHECK(pl.code == 0);
    CHECK(pl.out.find("00 00 ") != std::string::npos);
    CHECK(pl.out.find("33 33 ") != std::string::npos);

    // Oracle requires a state.
    CHECK(run_cli({"map", file.string(), "--repr", "oracle"}).code == 2);
    const CliResult oracle = run_cli({"map", file.string(), "--repr", "oracle", "--state",
                                      "ghz:p=0.5"});
    CHECK(oracle.code == 0);
    std::ostringstream oracle_expected;
    dump_matrix(oracle_expected,
                map_oracle(parse_pattern(kOverlapPattern),
                           DensityMatrix::from_state(ghz_state(2, 0.5)))
                    .entries());
    CHECK(oracle.out == oracle_expected.str());

    // Resource cap on the oracle route: exit 3. (The closed-form routes
    // handle 13 bath qubits without ever building the full space.)
    const auto big = dir.write("big.pat", "system 1\nbath 13\ngate phase=1.0 s:0 b:12\n");
    CHECK(run_cli({"map", big.string(), "--repr", "oracle", "--state", "plus"}).code == 3);
    CHECK(run_cli({"map", big.string(), "--repr", "hadamard"}).code == 0);
}

namespace {

// Parse a matrix dump back into numbers ("re,im" cells).
std::vector<Complex> parse_dump(const std::string& text) {
    std::vector<Complex> values;
    std::istringstream in(text);
    std::string cell;
    while (in >> cell) {
        const auto comma = cell.find(',');
        REQUIRE(comma != std::string::npos);
        values.emplace_back(std::stod(cell.substr(0, comma)), std::stod(cell.substr(comma + 1)));
    }
    return values;
}

}  // namespace

TEST_CASE("apply routes agree") {
    TempDir dir;
    const auto file = dir.write("overlap.pat", kOverlapPattern);
    const CliResult via_hadamard =
        run_cli({"apply", file.string(), "--state", "bell:phip", "--repr", "hadamard"});
    const CliResult via_kraus =
        run_cli({"apply", file.string(), "--state", "bell:phip", "--repr", "kraus"});
    const CliResult via_oracle =
        run_cli({"apply", file.string(), "--state", "bell:phip", "--repr", "oracle"});
    CHECK(via_hadamard.code == 0);
    CHECK(via_kraus.code == 0);
    CHECK(via_oracle.code == 0);

    // The routes agree numerically; identical invocations are byte-identical.
    const auto a = parse_dump(via_hadamard.out);
    const auto b = parse_dump(via_kraus.out);
    const auto c = parse_dump(via_oracle.out);
    REQUIRE(a.size() == 16);
    REQUIRE(b.size() == 16);
    REQUIRE(c.size() == 16);
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(std::abs(a[i] - b[i]) < 1e-10);
        CHECK(std::abs(a[i] - c[i]) < 1e-10);
    }
    const CliResult again =
        run_cli({"apply", file.string(), "--state", "bell:phip", "--repr", "hadamard"});
    CHECK(again.out == via_hadamard.out);
}

TEST_CASE("scan CSV output is deterministic and matches library values") {
    TempDir dir;
    const auto out1 = dir.path / "fig1_a.csv";
    const auto out2 = dir.path / "fig1_b.csv";
    CHECK(run_cli({"scan", "--kind", "fig1", "--m", "4", "--grid", "0:6.283185307179586:5", "--out",
                   out1.string()})
              .code == 0);
    CHECK(run_cli({"scan", "--kind", "fig1", "--m", "4", "--grid", "0:6.283185307179586:5", "--out",
                   out2.string()})
              .code == 0);
    const std::string csv = read_file(out1);
    CHECK(csv == read_file(out2));
    CHECK(csv.starts_with("m,phi,factor\n"));

    // The phi = pi row carries the revival value 1.
    CHECK(csv.find("4," + format_real(std::numbers::pi) + "," + format_real(1.0)) !=
          std::string::npos);

    // ghz scan columns and the inequality row.
    const CliResult ghz = run_cli({"scan", "--kind", "ghz", "--ns", "3", "--n1", "2", "--p", "0.5",
                                   "--grid", "1.0471975511965976:1.0471975511965976:1"});
    CHECK(ghz.code == 0);
    CHECK(ghz.out.starts_with("NS,n1,p,phi,E_indep,E_dep\n"));
    const auto [indep, dep] = e_indep_vs_e_dep(3, 2, 0.5, std::numbers::pi / 3.0);
    CHECK(indep > dep);
    CHECK(ghz.out.find(format_real(indep)) != std::string::npos);
    CHECK(ghz.out.find(format_real(dep)) != std::string::npos);

    // coherence scan.
    const CliResult coh =
        run_cli({"scan", "--kind", "coherence", "--n1", "2", "--k", "2", "--grid", "0:3:4"});
    CHECK(coh.code == 0);
    CHECK(coh.out.starts_with("n1,k,phi,markov,nonmarkov\n"));

    // Unknown kind: exit 2.
    CHECK(run_cli({"scan", "--kind", "nope", "--grid", "0:1:2"}).code == 2);
}

TEST_CASE("fig2 scan finds the fixed points on the diagonal") {
    const CliResult fig2 = run_cli({"scan", "--kind", "fig2", "--coupling", "overlap_edge", "--grid",
                                    "3.141592653589793:3.141592653589793:1", "--seed", "7"});
    CHECK(fig2.code == 0);
    CHECK(fig2.out.starts_with("coupling,phi1,phi2,eof\n"));
    // phi1 = phi2 = pi: EoF 1 at the fixed point.
    const auto line = fig2.out.substr(fig2.out.find('\n') + 1);
    CHECK(line.starts_with("overlap_edge,"));
    CHECK(line.find(format_real(1.0)) != std::string::npos);

    // The optimizer-bearing scan is byte-identical under a fixed seed.
    const CliResult again = run_cli({"scan", "--kind", "fig2", "--coupling", "overlap_edge", "--grid",
                                     "3.141592653589793:3.141592653589793:1", "--seed", "7"});
    CHECK(again.out == fig2.out);
    const CliResult qubit_a = run_cli({"scan", "--kind", "fig2", "--coupling", "overlap_qubit",
                                       "--grid", "1.1:2.2:2", "--seed", "11"});
    const CliResult qubit_b = run_cli({"scan", "--kind", "fig2", "--coupling", "overlap_qubit",
                                       "--grid", "1.1:2.2:2", "--seed", "11"});
    CHECK(qubit_a.code == 0);
    CHECK(qubit_a.out == qubit_b.out);
}

TEST_CASE("oracle-check passes on a well-formed pattern") {
    TempDir dir;
    const auto file = dir.write("overlap.pat", kOverlapPattern);
    const CliResult result = run_cli({"oracle-check", file.string(), "--trials", "4", "--seed", "3"});
    CHECK(result.code == 0);
    CHECK(result.out.find("hadamard") != std::string::npos);
    CHECK(result.out.find("[ok]") != std::string::npos);
    CHECK(result.out.find("FAIL") == std::string::npos);
}

TEST_CASE("prepare and double-copy subcommands") {
    TempDir dir;
    const auto lmes = dir.write("lmes.pat",
                                "system 3\nbath 0\n"
                                "gate phase=3.141592653589793 s:0 s:1\n"
                                "gate phase=3.141592653589793 s:1 s:2\n");
    const CliResult prep = run_cli({"prepare-lme", lmes.string()});
    CHECK(prep.code == 0);
    const auto pos = prep.out.find("system_fidelity=");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(prep.out.substr(pos + 16)) == doctest::Approx(1.0).epsilon(1e-10));

    const CliResult copy = run_cli({"double-copy", lmes.string()});
    CHECK(copy.code == 0);
    CHECK(copy.out.find("copy_deviation=") != std::string::npos);

    const CliResult prep_ghz = run_cli({"prepare-lme", lmes.string(), "--state", "ghz:p=0.3"});
    CHECK(prep_ghz.code == 0);
}

TEST_CASE("state file round trip") {
    TempDir dir;
    const auto file = dir.write("single.pat", "system 1\nbath 1\ngate phase=1.2 s:0 b:0\n");

    // Dump E(|+><+|) and feed it back as a file state.
    const CliResult first = run_cli({"apply", file.string(), "--state", "plus"});
    CHECK(first.code == 0);
    const auto state_file = dir.write("state.txt", first.out);
    const CliResult second =
        run_cli({"apply", file.string(), "--state", "file:" + state_file.string()});
    CHECK(second.code == 0);

    // Same as applying the map twice through the library, up to the 15-digit
    // precision lost in the file round trip.
    const InteractionPattern p = parse_pattern(read_file(file));
    const HadamardForm h = hadamard_form(p);
    const DensityMatrix once =
        h.apply(DensityMatrix::from_state(StateVector::plus_state(QubitRegister::system_bath(1, 0))));
    const Matrix twice = h.apply(once).entries();
    const auto got = parse_dump(second.out);
    REQUIRE(got.size() == 4);
    for (Eigen::Index r = 0; r < 2; ++r) {
        for (Eigen::Index c = 0; c < 2; ++c) {
            CHECK(std::abs(got[static_cast<size_t>(r * 2 + c)] - twice(r, c)) < 1e-13);
        }
    }
}

TEST_CASE("help exits cleanly") {
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({}).code == 2);
}

TEST_SUITE_END();
