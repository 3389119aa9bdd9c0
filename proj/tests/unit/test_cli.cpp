#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunResult run(const std::string& args) {
    static int counter = 0;
    std::string out_path = "/tmp/zacr_cli_out_" + std::to_string(counter) + ".txt";
    std::string err_path = "/tmp/zacr_cli_err_" + std::to_string(counter) + ".txt";
    ++counter;
    std::string cmd =
        std::string(ZACR_CLI_PATH) + " " + args + " > " + out_path + " 2> " + err_path;
    int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    std::remove(out_path.c_str());
    std::remove(err_path.c_str());
    return r;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

const char* kSimMixture =
    "simulate --variant mixture --mu 2 --sigma 1 --p0 0.3 --p1 0.1 "
    "--n 800 --censoring uniform --cens-param 140 --seed 11";

}  // namespace

TEST_CASE("help and usage errors") {
    CHECK(run("--help").code == 0);
    CHECK(run("fit --help").code == 0);
    CHECK(run("").code == 2);                      // a subcommand is required
    CHECK(run("frobnicate").code == 2);            // unknown subcommand
    CHECK(run("fit --data x --bogus 1").code == 2);  // unknown flag
    RunResult r = run("fit --data /tmp/nope.csv --variant bogus");
    CHECK(r.code == 2);
    CHECK(r.err.find("\"error\"") != std::string::npos);
}

TEST_CASE("simulate then fit round-trips through files and JSON") {
    RunResult sim = run(std::string(kSimMixture) + " --out /tmp/zacr_cli_mix.csv");
    REQUIRE(sim.code == 0);
    std::string header = slurp("/tmp/zacr_cli_mix.csv").substr(0, 11);
    CHECK(header == "time,status");

    RunResult fit = run("fit --data /tmp/zacr_cli_mix.csv --variant mixture --seed 3 --json -");
    REQUIRE(fit.code == 0);
    CHECK(fit.out.find("\"variant\":") != std::string::npos);
    CHECK(fit.out.find("\"mixture\"") != std::string::npos);
    CHECK(fit.out.find("\"converged\": true") != std::string::npos);
    CHECK(fit.out.find("\"estimates\"") != std::string::npos);
    CHECK(fit.out.find("\"std_errors\"") != std::string::npos);
    CHECK(fit.out.find("\"log_lik\"") != std::string::npos);
    CHECK(fit.out.find("\"aic\"") != std::string::npos);
    // pure JSON on stdout: no text table mixed in
    CHECK(fit.out.find("std.error") == std::string::npos);
    CHECK(fit.out.substr(0, 1) == "{");

    RunResult text = run("fit --data /tmp/zacr_cli_mix.csv --variant mixture --seed 3");
    REQUIRE(text.code == 0);
    CHECK(text.out.find("variant: mixture") != std::string::npos);
    CHECK(text.out.find("log-likelihood:") != std::string::npos);

    RunResult tofile = run(
        "fit --data /tmp/zacr_cli_mix.csv --variant mixture --seed 3 --json /tmp/zacr_cli_fit.json");
    REQUIRE(tofile.code == 0);
    CHECK(tofile.out.find("variant: mixture") != std::string::npos);
    std::string json = slurp("/tmp/zacr_cli_fit.json");
    CHECK(json.find("\"eta\"") != std::string::npos);
    CHECK(json.find("\"ci_lower\"") != std::string::npos);
    std::remove("/tmp/zacr_cli_fit.json");
    std::remove("/tmp/zacr_cli_mix.csv");
}

TEST_CASE("simulate is deterministic and respects the stream split") {
    RunResult a = run(kSimMixture);
    RunResult b = run(kSimMixture);
    RunResult c = run(
        "simulate --variant mixture --mu 2 --sigma 1 --p0 0.3 --p1 0.1 "
        "--n 800 --censoring uniform --cens-param 140 --seed 12");
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out != c.out);
}

TEST_CASE("conflicting censoring flags are a usage error") {
    RunResult r = run(
        "simulate --variant mixture --mu 2 --sigma 1 --p0 0.3 --p1 0.1 --n 10 "
        "--censoring uniform --cens-param 5 --target-censoring 0.3");
    CHECK(r.code == 2);
    RunResult missing = run(
        "simulate --variant mixture --mu 2 --sigma 1 --p0 0.3 --p1 0.1 --n 10 "
        "--censoring uniform");
    CHECK(missing.code == 2);
    RunResult unreachable = run(
        "simulate --variant mixture --mu 2 --sigma 1 --p0 0.3 --p1 0.1 --n 10 "
        "--censoring uniform --target-censoring 0.95");
    CHECK(unreachable.code == 4);
    CHECK(unreachable.err.find("NumericalError") != std::string::npos);
}

TEST_CASE("km emits a nonincreasing step csv starting at time zero") {
    RunResult sim = run(
        "simulate --variant geo --mu 2 --sigma 1 --alpha0 12 --alpha1 20 --n 500 "
        "--censoring uniform --cens-param 60 --seed 5 --out /tmp/zacr_cli_geo.csv");
    REQUIRE(sim.code == 0);
    RunResult km = run("km --data /tmp/zacr_cli_geo.csv");
    REQUIRE(km.code == 0);
    std::vector<std::string> lines = lines_of(km.out);
    REQUIRE(lines.size() > 2);
    CHECK(lines[0] == "time,survival,at_risk,events");
    CHECK(lines[1].substr(0, 2) == "0,");
    double prev_surv = 2.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        double t, s;
        REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf", &t, &s) == 2);
        CHECK(s <= prev_surv);
        prev_surv = s;
    }
}

TEST_CASE("curves emits the full overlay grid") {
    RunResult r = run("curves --data /tmp/zacr_cli_geo.csv --seed 2 --points 41");
    REQUIRE(r.code == 0);
    std::vector<std::string> lines = lines_of(r.out);
    REQUIRE(lines.size() == 42);
    CHECK(lines[0] == "time,km,mixture,promotion,nb,geo");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        double t, km, v1, v2, v3, v4;
        REQUIRE(std::sscanf(lines[i].c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &t, &km, &v1, &v2,
                            &v3, &v4) == 6);
        for (double s : {km, v1, v2, v3, v4}) {
            CHECK(s >= 0.0);
            CHECK(s <= 1.0);
        }
    }
}

TEST_CASE("compare ranks the generating variant first on clean geo data") {
    RunResult sim = run(
        "simulate --variant geo --mu 2 --sigma 1 --alpha0 12 --alpha1 20 --n 4000 "
        "--censoring uniform --cens-param 60 --seed 29 --out /tmp/zacr_cli_geo_big.csv");
    REQUIRE(sim.code == 0);
    RunResult cmp = run(
        "compare --data /tmp/zacr_cli_geo_big.csv --seed 1 --times 0,6,12 "
        "--json /tmp/zacr_cli_bundle.json");
    REQUIRE(cmp.code == 0);
    CHECK(cmp.out.find("aic ranking: geo") != std::string::npos);
    CHECK(cmp.out.find("survival table (geo)") != std::string::npos);
    std::string bundle = slurp("/tmp/zacr_cli_bundle.json");
    CHECK(bundle.find("\"aic_ranking\"") != std::string::npos);
    CHECK(bundle.find("\"best\": \"geo\"") != std::string::npos);
    CHECK(bundle.find("\"curves\"") != std::string::npos);
    CHECK(bundle.find("\"survival_table\"") != std::string::npos);
    std::remove("/tmp/zacr_cli_bundle.json");
    std::remove("/tmp/zacr_cli_geo_big.csv");
    std::remove("/tmp/zacr_cli_geo.csv");
}

TEST_CASE("mc-study reports are byte-identical across runs") {
    const char* study =
        "mc-study --variant mixture --mu 2 --sigma 1 --p0 0.3 --p1 0.1 "
        "--n 60 --B 6 --censoring uniform --cens-param 140 --seed 7 --json -";
    RunResult a = run(study);
    RunResult b = run(study);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("\"bias\"") != std::string::npos);
    CHECK(a.out.find("\"rmse\"") != std::string::npos);
    CHECK(a.out.find("\"cp\"") != std::string::npos);
    CHECK(a.out.find("\"mean_censoring_rate\"") != std::string::npos);

    RunResult text = run(
        "mc-study --variant mixture --mu 2 --sigma 1 --p0 0.3 --p1 0.1 "
        "--n 60 --B 6 --censoring uniform --cens-param 140 --seed 7");
    REQUIRE(text.code == 0);
    CHECK(text.out.find("monte carlo study: variant=mixture") != std::string::npos);
    CHECK(text.out.find("coverage") != std::string::npos);
}
