#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef DCP_CLI_PATH
#error "DCP_CLI_PATH must be defined"
#endif

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string& args, const fs::path& dir) {
    fs::create_directories(dir);
    const fs::path out = dir / "stdout.txt";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(DCP_CLI_PATH) + " " + args + " >" + out.string() +
                            " 2>" + err.string();
    const int rc = std::system(cmd.c_str());
    CliResult res;
    res.exit_code = WEXITSTATUS(rc);
    std::ostringstream so, se;
    so << std::ifstream(out).rdbuf();
    se << std::ifstream(err).rdbuf();
    res.out = so.str();
    res.err = se.str();
    return res;
}

std::string slurp(const fs::path& p) {
    std::ostringstream ss;
    ss << std::ifstream(p, std::ios::binary).rdbuf();
    return ss.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "dcp_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("missing required option: exit 2 and a pointed message") {
    const auto dir = fresh_dir("missing");
    const auto res = run_cli("simulate --out " + dir.string(), dir);
    CHECK(res.exit_code == 2);
    CHECK(res.err.find("missing: lambda") != std::string::npos);
    const auto res2 = run_cli("phase --lambda-grid 1:2:1 --out " + dir.string(), dir);
    CHECK(res2.exit_code == 2);
    CHECK(res2.err.find("missing: a-grid") != std::string::npos);
}

TEST_CASE("bad grid syntax: exit 2") {
    const auto dir = fresh_dir("badgrid");
    const auto res =
        run_cli("phase --lambda-grid 1:2 --a-grid 0 --out " + dir.string(), dir);
    CHECK(res.exit_code == 2);
}

TEST_CASE("simulate with lambda 0 goes extinct; outcome embeds config") {
    const auto dir = fresh_dir("sim0");
    const auto res = run_cli(
        "simulate --lambda 0 --init single --side 16 --horizon 50 --seed 7 --out " +
            dir.string(),
        dir);
    REQUIRE(res.exit_code == 0);
    CHECK(res.out.find("seed = 7") != std::string::npos);
    const std::string outcome = slurp(dir / "outcome.json");
    CHECK(outcome.find("\"reason\": \"extinct\"") != std::string::npos);
    CHECK(outcome.find("\"subcommand\": \"simulate\"") != std::string::npos);
}

TEST_CASE("simulate d=2 writes raster and dump snapshots") {
    const auto dir = fresh_dir("sim2d");
    const auto res = run_cli(
        "simulate --lambda 4 --a -2 --d 2 --side 24 --init full --horizon 5 "
        "--snapshot 5 --seed 3 --out " +
            dir.string(),
        dir);
    REQUIRE(res.exit_code == 0);
    CHECK(fs::exists(dir / "snapshot_t5.txt"));
    CHECK(fs::exists(dir / "snapshot_t5.pgm"));
    const std::string pgm = slurp(dir / "snapshot_t5.pgm");
    CHECK(pgm.rfind("P5\n", 0) == 0);
    CHECK(pgm.find("24 24\n255\n") != std::string::npos);
    CHECK(pgm.size() > 24 * 24);
    const std::string dump = slurp(dir / "snapshot_t5.txt");
    CHECK(dump.rfind("# torus=24x24 t=5\n", 0) == 0);
}

TEST_CASE("artifacts regenerate byte-identically, independent of workers") {
    const auto dir = fresh_dir("regen");
    const std::string common =
        "survival --lambda 3 --a 0.5 --side 50 --horizon 40 --replicates 150 --seed 11 ";
    REQUIRE(run_cli(common + "--workers 1 --out " + (dir / "w1").string(), dir).exit_code == 0);
    REQUIRE(run_cli(common + "--workers 4 --out " + (dir / "w4").string(), dir).exit_code == 0);
    CHECK(slurp(dir / "w1" / "survival.csv") == slurp(dir / "w4" / "survival.csv"));

    const auto check = run_cli("regen " + (dir / "w1" / "survival.csv").string() + " --check",
                               dir);
    CHECK(check.exit_code == 0);
    CHECK(check.out.find("matches byte-for-byte") != std::string::npos);
}

TEST_CASE("regen covers json, trajectory, and raster artifacts") {
    const auto dir = fresh_dir("regen2");
    REQUIRE(run_cli("simulate --lambda 2.5 --a 1 --d 2 --side 20 --init box --horizon 8 "
                    "--snapshot 8 --seed 21 --out " +
                        (dir / "run").string(),
                    dir)
                .exit_code == 0);
    for (const char* artifact : {"outcome.json", "trajectory.csv", "snapshot_t8.pgm"}) {
        const auto res = run_cli("regen " + (dir / "run" / artifact).string() + " --check", dir);
        CHECK(res.exit_code == 0);
    }
    // bare dumps carry no embedded config
    const auto bare = run_cli("regen " + (dir / "run" / "snapshot_t8.txt").string() + " --check",
                              dir);
    CHECK(bare.exit_code == 2);
}

TEST_CASE("config file values with command-line overrides") {
    const auto dir = fresh_dir("configfile");
    {
        std::ofstream ini(dir / "run.ini");
        ini << "seed = 19\n\n[survival]\nlambda = 2.5\nside = 40\nhorizon = 30\n"
               "replicates = 80\n";
    }
    const auto res = run_cli("survival --config " + (dir / "run.ini").string() + " --out " +
                                 (dir / "a").string(),
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string csv = slurp(dir / "a" / "survival.csv");
    CHECK(csv.find("# seed = 19") != std::string::npos);
    CHECK(csv.find("# lambda = 2.5") != std::string::npos);
    CHECK(csv.find("# replicates = 80") != std::string::npos);

    // the command line beats the file
    const auto res2 = run_cli("survival --config " + (dir / "run.ini").string() +
                                  " --lambda 4 --out " + (dir / "b").string(),
                              dir);
    REQUIRE(res2.exit_code == 0);
    CHECK(slurp(dir / "b" / "survival.csv").find("# lambda = 4") != std::string::npos);
}

TEST_CASE("DCP_OUT provides the default output directory") {
    const auto dir = fresh_dir("envout");
    const std::string cmd = "DCP_OUT=" + (dir / "env").string() + " " + DCP_CLI_PATH +
                            " meanfield --lambda 2 --a 0 > /dev/null 2>&1";
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(dir / "env" / "meanfield.csv"));
}

TEST_CASE("tampered artifacts fail regen --check with exit 3") {
    const auto dir = fresh_dir("tamper");
    REQUIRE(run_cli("survival --lambda 2 --side 30 --horizon 10 --replicates 40 --seed 8 "
                    "--out " +
                        dir.string(),
                    dir)
                .exit_code == 0);
    auto bytes = slurp(dir / "survival.csv");
    bytes[bytes.size() - 2] = bytes[bytes.size() - 2] == '1' ? '2' : '1';
    {
        std::ofstream os(dir / "survival.csv", std::ios::binary);
        os << bytes;
    }
    const auto res = run_cli("regen " + (dir / "survival.csv").string() + " --check", dir);
    CHECK(res.exit_code == 3);
}

TEST_CASE("couple pair rejects inadmissible orderings with exit 2") {
    const auto dir = fresh_dir("couple_bad");
    const auto res = run_cli(
        "couple --pair --lambda1 2 --a1 1 --lambda2 2 --a2 -1 --side 20 --horizon 5 "
        "--runs 2 --out " +
            dir.string(),
        dir);
    CHECK(res.exit_code == 2);
}

TEST_CASE("phase scan emits one row per cell") {
    const auto dir = fresh_dir("phase");
    const auto res = run_cli(
        "phase --lambda-grid 1:3:1 --a-grid -1,1 --side 30 --horizon 10 --replicates 20 "
        "--seed 2 --out " +
            dir.string(),
        dir);
    REQUIRE(res.exit_code == 0);
    std::istringstream csv(slurp(dir / "phase.csv"));
    std::string line;
    int data_rows = 0;
    bool saw_header = false;
    while (std::getline(csv, line)) {
        if (line.rfind("# ", 0) == 0) continue;
        if (!saw_header) {
            CHECK(line == "i,j,lambda,a,estimate,ci_low,ci_high,replicates");
            saw_header = true;
            continue;
        }
        ++data_rows;
    }
    CHECK(data_rows == 6);
}
