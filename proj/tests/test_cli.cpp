#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <sys/wait.h>

using nlohmann::json;

namespace {

std::string cli_path() {
    const char* p = std::getenv("DCFLOW_CLI");
    REQUIRE_MESSAGE(p != nullptr, "DCFLOW_CLI must point at the built binary");
    return p;
}

std::string cases_dir() {
    const char* p = std::getenv("DCFLOW_CASES");
    REQUIRE_MESSAGE(p != nullptr, "DCFLOW_CASES must point at the cases directory");
    return p;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult r;
    std::array<char, 4096> buf{};
    size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string case_file(const std::string& name) { return cases_dir() + "/" + name; }

} // namespace

TEST_CASE("check recommends the right solver per scenario") {
    const RunResult a = run_cli("check " + case_file("twobus_a.json"));
    CHECK(a.exit_code == 0);
    const json ja = json::parse(a.out);
    CHECK(ja.at("recommended").at("method") == "zbus");
    CHECK(ja.at("contraction").at("feasible") == true);

    const RunResult d = run_cli("check " + case_file("twobus_d.json"));
    CHECK(d.exit_code == 0);
    const json jd = json::parse(d.out);
    CHECK(jd.at("recommended").at("method") == "energy");
    CHECK(jd.at("contraction").at("feasible") == false);
    CHECK(jd.at("monotone_current").at("ok") == false);
}

TEST_CASE("missing and malformed cases exit 2, invalid networks exit 3") {
    CHECK(run_cli("check /no/such/file.json").exit_code == 2);

    const std::string bad = "/tmp/dcflow_cli_bad.json";
    {
        std::ofstream f(bad);
        f << "{ definitely not json";
    }
    CHECK(run_cli("check " + bad).exit_code == 2);

    const std::string disconnected = "/tmp/dcflow_cli_disconnected.json";
    {
        std::ofstream f(disconnected);
        f << R"({"buses":[{"id":0,"type":"V","v":1.0},{"id":1,"type":"P"}],"lines":[]})";
    }
    CHECK(run_cli("check " + disconnected).exit_code == 3);
    CHECK(run_cli("solve " + disconnected).exit_code == 3);
}

TEST_CASE("solve: fixed method and auto selection") {
    const RunResult b = run_cli("solve " + case_file("twobus_b.json") + " --method monotone");
    CHECK(b.exit_code == 0);
    const json jb = json::parse(b.out);
    CHECK(jb.at("status") == "converged");
    CHECK(std::abs(jb.at("v")[0].get<double>() - 1.0) < 1e-6);

    const RunResult a = run_cli("solve " + case_file("twobus_a.json") + " --method auto");
    CHECK(a.exit_code == 0);
    const json ja = json::parse(a.out);
    CHECK(ja.at("method") == "zbus");
    CHECK(std::abs(ja.at("v")[0].get<double>() - 0.91728818) < 1e-6);
}

TEST_CASE("a failed solve exits 4 and still reports the last iterate") {
    const RunResult d = run_cli("solve " + case_file("twobus_d.json") + " --method zbus");
    CHECK(d.exit_code == 4);
    const json jd = json::parse(d.out);
    CHECK(jd.at("status") == "diverged");
    CHECK(jd.at("v").is_array());
}

TEST_CASE("usage errors exit 1") {
    CHECK(run_cli("montecarlo " + case_file("twobus_a.json") + " --trials 0").exit_code == 1);
    CHECK(run_cli("solve " + case_file("twobus_a.json") + " --method bogus").exit_code == 1);
    CHECK(run_cli("").exit_code == 1);
}

TEST_CASE("monte carlo runs are reproducible byte for byte") {
    const std::string args = "montecarlo " + case_file("twobus_a.json") +
                             " --trials 25 --seed 1 --p-range -2 2 --iz-range 0 2";
    const RunResult r1 = run_cli(args);
    const RunResult r2 = run_cli(args);
    CHECK(r1.exit_code == 0);
    CHECK(r1.out == r2.out);
    const json j = json::parse(r1.out);
    CHECK(j.at("trials") == 25);
    CHECK(j.at("agree_count").get<int>() + j.at("fail_count").get<int>() == 25);
}

TEST_CASE("a deterministic single trial agrees") {
    const RunResult r = run_cli("montecarlo " + case_file("twobus_a.json") +
                                " --trials 1 --seed 3 --p-range 1 1 --iz-range 1 1");
    CHECK(r.exit_code == 0);
    CHECK(json::parse(r.out).at("agree_count") == 1);
}

TEST_CASE("trace exports per-iteration CSV") {
    const std::string path = "/tmp/dcflow_cli_trace.csv";
    const RunResult r =
        run_cli("trace " + case_file("twobus_a.json") + " --method zbus --out " + path);
    CHECK(r.exit_code == 0);
    std::ifstream f(path);
    REQUIRE(f.good());
    std::string header;
    std::getline(f, header);
    CHECK(header == "iter,inf_norm_diff");

    const RunResult e =
        run_cli("trace " + case_file("twobus_d.json") + " --method energy --out " + path);
    CHECK(e.exit_code == 0);
    std::ifstream fe(path);
    std::getline(fe, header);
    CHECK(header == "iter,energy,grad_inf");
}
