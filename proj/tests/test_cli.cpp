#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "nahm/serialize.hpp"
#include "nahm/solver.hpp"

using namespace nahm;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(NAHM_CLI_PATH) + " " + args;
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("solution serialization round-trips bit-for-bit") {
    const NahmSolution s = random_init(MonopoleType({-6, -2}, {2, 1}), 37, 1.0);
    const NahmSolution back = solution_from_json(solution_to_json(s));
    for (const auto& [site, m] : s.beta) CHECK((m - back.beta.at(site)).norm() == 0.0);
    for (const auto& [site, m] : s.gamma) CHECK((m - back.gamma.at(site)).norm() == 0.0);
    for (const auto& [j, m] : s.avec) CHECK((m - back.avec.at(j)).norm() == 0.0);
    for (const auto& [j, m] : s.bvec) CHECK((m - back.bvec.at(j)).norm() == 0.0);

    write_solution("cli_roundtrip.json", s);
    const NahmSolution back2 = read_solution("cli_roundtrip.json");
    for (const auto& [site, m] : s.beta) CHECK((m - back2.beta.at(site)).norm() == 0.0);
}

TEST_CASE("type serialization round-trips") {
    const MonopoleType t({-3, -1, 1}, {1, 2, 1});
    CHECK(type_from_json(type_to_json(t)) == t);
    write_type("cli_type.json", t);
    CHECK(read_type("cli_type.json") == t);
}

TEST_CASE("corrupted documents raise the documented errors") {
    const NahmSolution s = su2_k1_oracle(1.5);
    nlohmann::json j = solution_to_json(s);

    nlohmann::json bad_schema = j;
    bad_schema["schema"] = "nahm-solution/9";
    CHECK_THROWS_AS(solution_from_json(bad_schema), SchemaMismatch);

    nlohmann::json bad_marker = j;
    bad_marker.erase("doubled_index");
    CHECK_THROWS_AS(solution_from_json(bad_marker), SchemaMismatch);

    nlohmann::json bad_shape = j;
    bad_shape["gamma"].begin().value()["rows"] = 5;
    try {
        solution_from_json(bad_shape);
        FAIL("expected ShapeMismatch");
    } catch (const ShapeMismatch& e) {
        CHECK(std::string(e.what()).find("gamma") != std::string::npos);
    }

    std::ofstream("cli_truncated.json") << j.dump().substr(0, 40);
    CHECK_THROWS_AS(read_solution("cli_truncated.json"), ParseError);
    CHECK_THROWS_AS(read_solution("cli_no_such_file.json"), IoError);
}

TEST_CASE("info prints the invariants of the SU(3) example") {
    REQUIRE(run("info --type '{\"N\":3,\"p2\":[-6,-2],\"k\":[1,1]}' --out cli_info.json") == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp("cli_info.json"));
    CHECK(doc.at("kappa") == 12);
    CHECK(doc.at("c2") == 12);
    CHECK(doc.at("kfrak").at("1") == 1);
    CHECK(doc.at("kfrak").at("2") == 23);
}

TEST_CASE("solve then verify round-trips through files") {
    REQUIRE(run("solve --type '{\"N\":2,\"p2\":[-3],\"k\":[1]}' --seed 4 "
                "--out cli_sol.json > cli_solve_report.json") == 0);
    const nlohmann::json rep = nlohmann::json::parse(slurp("cli_solve_report.json"));
    REQUIRE(rep.at("converged") == true);

    REQUIRE(run("verify --in cli_sol.json --out cli_verify.json") == 0);
    const nlohmann::json ver = nlohmann::json::parse(slurp("cli_verify.json"));
    const double solved = rep.at("final_residual").get<double>();
    const double verified = ver.at("total_residual").get<double>();
    CHECK(std::abs(solved - verified) < 1e-12);
    CHECK(ver.at("stability").at("ok") == true);
}

TEST_CASE("verify succeeds on an unsolved random solution") {
    write_solution("cli_random.json", random_init(MonopoleType({-6, -2}, {1, 1}), 3, 1.0));
    REQUIRE(run("verify --in cli_random.json --out cli_verify_rand.json 2> cli_err.txt") == 0);
    const nlohmann::json ver = nlohmann::json::parse(slurp("cli_verify_rand.json"));
    CHECK(ver.at("total_residual").get<double>() > 1e-4);
}

TEST_CASE("ratmap and boundary emit their artifacts") {
    REQUIRE(run("solve --type '{\"N\":2,\"p2\":[-1],\"k\":[1]}' --seed 2 "
                "--out cli_su2.json > /dev/null") == 0);
    REQUIRE(run("ratmap --in cli_su2.json --h-re 1 --samples 5 --out cli_flags.csv") == 0);
    std::ifstream csv("cli_flags.csv");
    int lines = 0;
    for (std::string line; std::getline(csv, line);)
        if (!line.empty()) ++lines;
    CHECK(lines == 5);

    REQUIRE(run("boundary --in cli_su2.json --grid 16 --out cli_boundary.json") == 0);
    const nlohmann::json doc = nlohmann::json::parse(slurp("cli_boundary.json"));
    CHECK(std::abs(std::abs(doc.at("chern").at("1").get<double>()) - 1.0) < 0.1);
}

TEST_CASE("failures map to the documented exit codes") {
    CHECK(run("info --type '{\"N\":2,\"p2\":[3],\"k\":[1]}' 2> /dev/null") == 2);   // p_2 < p_1
    CHECK(run("verify --in cli_missing.json 2> /dev/null") == 4);                   // no file
    std::ofstream("cli_garbage.json") << "{ not json";
    CHECK(run("verify --in cli_garbage.json 2> /dev/null") == 4);                   // parse error
    CHECK(run("frobnicate 2> /dev/null") != 0);
}

TEST_CASE("CLI output is deterministic for a fixed seed") {
    REQUIRE(run("solve --type '{\"N\":2,\"p2\":[-3],\"k\":[1]}' --seed 9 "
                "--out cli_det_a.json > /dev/null") == 0);
    REQUIRE(run("solve --type '{\"N\":2,\"p2\":[-3],\"k\":[1]}' --seed 9 "
                "--out cli_det_b.json > /dev/null") == 0);
    CHECK(slurp("cli_det_a.json") == slurp("cli_det_b.json"));
}
