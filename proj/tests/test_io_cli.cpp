#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "pnf/io.hpp"

using namespace pnf;
using pnf::testing::Rng;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kProblem = R"({
  "n": 2, "p": 1, "order": 4,
  "lambda": [["1", "3"]],
  "bracket": {
    "1,2": [ {"monomial": [1,1,0], "re": "1", "im": "0"},
             {"monomial": [1,1,1], "re": "1", "im": "0"} ]
  },
  "metadata": {"name": "sample"}
})";

}  // namespace

TEST_CASE("jet and polyvector serialization round trips") {
    Rng rng(2);
    JetRing R{2, 2, 4};
    for (int trial = 0; trial < 20; ++trial) {
        Jet f = rng.jet(R, 5);
        CHECK(jet_from_json(jet_to_json(f), R) == f);
        PolyVector t = rng.polyvector(R, rng.uniform(1, 2), 3);
        PolyVector back = polyvector_from_json(polyvector_to_json(t), R);
        CHECK(back == t);
    }
    DiffeoJet d = rng.diffeo(R);
    CHECK(diffeo_from_json(diffeo_to_json(d), R) == d);
}

TEST_CASE("problem files parse and round trip byte-identically") {
    ProblemFile pf = parse_problem(kProblem);
    CHECK(pf.n == 2);
    CHECK(pf.p == 1);
    CHECK(pf.order == 4);
    CHECK(pf.family.lam(0, 1) == Scalar(3));
    PoissonJet p = pf.to_poisson();
    CHECK(p.bracket(0, 1).coeff(MultiIndex({1, 1, 1})) == Scalar(1));

    std::string canon = serialize_problem(pf);
    ProblemFile again = parse_problem(canon);
    CHECK(serialize_problem(again) == canon);
}

TEST_CASE("parse failures carry the parse kind") {
    auto expect_parse_error = [](const std::string& text) {
        try {
            parse_problem(text);
            FAIL("expected parse error for: " << text);
        } catch (const Error& e) {
            CHECK(e.exit_code() == 2);
        }
    };
    expect_parse_error("{ not json");
    expect_parse_error(R"({"n": 2, "p": 1})");
    expect_parse_error(R"({"n": 2, "p": 1, "lambda": [["1"]]})");
    expect_parse_error(R"({"n": 2, "p": 1, "lambda": [["1","3"]],
                           "bracket": {"2,1": []}})");
    expect_parse_error(R"({"n": 2, "p": 1, "lambda": [["1","x"]]})");
}

TEST_CASE("order override persuasion: flag beats file") {
    ProblemFile pf = parse_problem(kProblem, 6);
    CHECK(pf.order == 6);
}

TEST_CASE("digest is stable") {
    CHECK(digest("abc") == digest("abc"));
    CHECK(digest("abc") != digest("abd"));
    CHECK(digest("") == "cbf29ce484222325");
}

#ifndef PNF_CLI_PATH
#define PNF_CLI_PATH ""
#endif

namespace {

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string bin = PNF_CLI_PATH;
    REQUIRE(!bin.empty());
    std::string out_file = "cli_test_stdout.tmp";
    std::string cmd = bin + " " + args + " > " + out_file + " 2> cli_test_stderr.tmp";
    int rc = std::system(cmd.c_str());
    return {WEXITSTATUS(rc), slurp(out_file)};
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    f << text;
}

}  // namespace

TEST_CASE("cli exit codes are a stable contract") {
    write_file("cli_ok.json", kProblem);
    CHECK(run_cli("analyze cli_ok.json --kmax 2").code == 0);
    CHECK(run_cli("normalize cli_ok.json").code == 0);

    // 2: parse
    write_file("cli_bad.json", "{ nope");
    CHECK(run_cli("analyze cli_bad.json").code == 2);

    // 3: constructor check (Jacobi fails for an x4-dependent coefficient
    // with linear hamiltonians)
    write_file("cli_jacobi.json", R"({
      "n": 3, "p": 1, "order": 4,
      "lambda": [["1", "3", "5"]],
      "bracket": {
        "2,3": [ {"monomial": [0,1,1,1], "re": "1", "im": "0"} ]
      }
    })");
    CHECK(run_cli("normalize cli_jacobi.json").code == 3);

    // 4: hypothesis failure without --force; forced runs pass through
    write_file("cli_h3.json", R"({
      "n": 2, "p": 1, "order": 4,
      "lambda": [["1", "-1"]],
      "bracket": {}
    })");
    CHECK(run_cli("normalize cli_h3.json").code == 4);
    CHECK(run_cli("normalize cli_h3.json --force").code == 0);
}

TEST_CASE("cli reports are byte-identical across runs") {
    write_file("cli_det.json", kProblem);
    auto a = run_cli("normalize cli_det.json");
    auto b = run_cli("normalize cli_det.json");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    auto c = run_cli("analyze cli_det.json --kmax 3");
    auto d = run_cli("analyze cli_det.json --kmax 3");
    CHECK(c.out == d.out);
}

TEST_CASE("cli env var sets the default order") {
    write_file("cli_env.json", kProblem);
    std::string bin = PNF_CLI_PATH;
    std::string cmd = "PNF_ORDER=5 " + bin + " analyze cli_env.json --kmax 1 > cli_env_out.tmp";
    REQUIRE(std::system(cmd.c_str()) == 0);
    Json rep = Json::parse(slurp("cli_env_out.tmp"));
    CHECK(rep["input"]["order"] == 5);
}

TEST_CASE("cli check verifies conjugacies") {
    // A = B via the identity
    write_file("cli_a.json", kProblem);
    write_file("cli_b.json", kProblem);
    CHECK(run_cli("check cli_a.json cli_b.json").code == 0);

    // perturbed B fails with a located coefficient
    ProblemFile pf = parse_problem(kProblem);
    PolyVector biv = pf.bivector;
    biv.add_term({0, 1}, Jet::monomial(biv.ring(), MultiIndex({1, 1, 2}), Scalar(1)));
    pf.bivector = biv;
    write_file("cli_b2.json", serialize_problem(pf));
    auto res = run_cli("check cli_a.json cli_b2.json");
    CHECK(res.code == 1);
    Json rep = Json::parse(res.out);
    CHECK(!rep["pass"].get<bool>());
    CHECK(rep["first_difference"]["monomial"] == Json::array({1, 1, 2}));

    // a recorded pipeline diffeo replays: normalize, save output + diffeo,
    // then check input -> output under the composite
    auto norm = run_cli("normalize cli_a.json --out cli_norm.json");
    REQUIRE(norm.code == 0);
    Json nrep = Json::parse(slurp("cli_norm.json"));
    // write the output structure as a problem file
    ProblemFile out_pf;
    out_pf.n = 2;
    out_pf.p = 1;
    out_pf.order = 4;
    out_pf.family = pf.family;
    out_pf.bivector = polyvector_from_json(nrep["output"]["bivector"], biv.ring());
    write_file("cli_out.json", serialize_problem(out_pf));
    write_file("cli_diffeo.json", nrep["composite_diffeo"].dump());
    CHECK(run_cli("check cli_a.json cli_out.json --diffeo cli_diffeo.json").code == 0);
}

TEST_CASE("cli batch mode") {
    namespace fs = std::filesystem;
    fs::create_directories("cli_batch_in");
    write_file("cli_batch_in/one.json", kProblem);
    write_file("cli_batch_in/two.json", kProblem);
    CHECK(run_cli("analyze --batch cli_batch_in --out-dir cli_batch_out --kmax 2").code == 0);
    CHECK(fs::exists("cli_batch_out/one.report.json"));
    CHECK(fs::exists("cli_batch_out/two.report.json"));
}
