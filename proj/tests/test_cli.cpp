#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

// End-to-end checks of the command-line tool: output schemas, determinism,
// and exit codes.

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

RunResult run_cli(const std::string& args) {
    const fs::path dir = fs::temp_directory_path() / "spinonsim_cli_test";
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const std::string cmd = std::string(SPINONSIM_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2>/dev/null";
    const int rc = std::system(cmd.c_str());
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WEXITSTATUS(rc), ss.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const fs::path kWork = fs::temp_directory_path() / "spinonsim_cli_out";

} // namespace

TEST_CASE("counts subcommand prints the cost table") {
    const RunResult r = run_cli("counts --L 8 --model heisenberg");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("\"norm_circuits\": 36") != std::string::npos);
    CHECK(r.stdout_text.find("\"energy_circuits\": 135") != std::string::npos);
    CHECK(r.stdout_text.find("\"fredkin_per_lcu_middle\": 20") != std::string::npos);
    CHECK(r.stdout_text.find("\"v_controlled_ops\": 13") != std::string::npos);
}

TEST_CASE("identical config and seed produce byte-identical outputs") {
    fs::remove_all(kWork);
    const std::string args = "--seed 11 spinon --method lcu --model heisenberg --L 4 --shots 2000";
    REQUIRE(run_cli("--out " + (kWork / "a").string() + " " + args).exit_code == 0);
    REQUIRE(run_cli("--out " + (kWork / "b").string() + " " + args).exit_code == 0);
    for (const std::string name : {"spinon_lcu_heisenberg_L4.csv", "lcu_heisenberg_L4.json"}) {
        const std::string a = slurp(kWork / "a" / name);
        const std::string b = slurp(kWork / "b" / name);
        CHECK(!a.empty());
        CHECK(a == b);
    }
}

TEST_CASE("spinon CSV carries the documented schema and provenance fields") {
    fs::remove_all(kWork);
    REQUIRE(run_cli("--out " + kWork.string() +
                    " --seed 2 spinon --method exact --model heisenberg --L 4")
                .exit_code == 0);
    const std::string csv = slurp(kWork / "spinon_exact_heisenberg_L4.csv");
    CHECK(csv.rfind("L,q,q_raw,norm,norm_sigma,h_expect,h_sigma,epsilon,epsilon_sigma,"
                    "e0_source,method,shots,seed,build",
                    0) == 0);
    CHECK(csv.find(",ed,exact,") != std::string::npos);
}

TEST_CASE("exit codes: config error 2, capacity error 3") {
    CHECK(run_cli("spinon --method bogus --L 4").exit_code == 2);
    CHECK(run_cli("gs-prep --route gutzwiller --model heisenberg --L 4").exit_code == 2);
    CHECK(run_cli("spinon --method lcu --model heisenberg --L 14").exit_code == 3);
    CHECK(run_cli("nonsense").exit_code == 2);
}

TEST_CASE("selftest subcommand runs clean") {
    const RunResult r = run_cli("--seed 5 selftest --seeds 5");
    CHECK(r.exit_code == 0);
    CHECK(r.stdout_text.find("[FAIL]") == std::string::npos);
}
