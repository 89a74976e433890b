// SPDX-License-Identifier: Apache-2.0
//
// End-to-end checks of the command-line surface: subcommands, CSV outputs,
// the manifest, config files with CLI overrides, and reproducibility.
#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = 0;
    std::string stdout_text;
};

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("thzsim_cli_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CommandResult run_cli(const std::string& args, const fs::path& workdir) {
    const fs::path log = workdir / "stdout.txt";
    const std::string cmd =
        std::string(THZSIM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    CommandResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(log);
    std::stringstream buf;
    buf << is.rdbuf();
    result.stdout_text = buf.str();
    return result;
}

std::string read_file(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text) {
        if (c == '\n') {
            ++n;
        }
    }
    return n;
}

// keep the heavy defaults out of smoke tests
const std::string kTinyScenario =
    "--num-antennas 16 --oracle-samples 40 --blocks 40 --trials 30 --runs 2";

} // namespace

TEST_CASE("codebook subcommand exports the coefficient table") {
    const fs::path dir = fresh_dir("codebook");
    const auto res = run_cli("codebook --num-antennas 16 --out-dir " + dir.string(), dir);
    REQUIRE(res.exit_code == 0);
    const std::string csv = read_file(dir / "codebook.csv");
    REQUIRE(csv.rfind("level,index,antenna_element,real,imag\n", 0) == 0);
    REQUIRE(count_lines(csv) == 1 + (4 + 16) * 16);
    REQUIRE(fs::exists(dir / "manifest"));
}

TEST_CASE("oracle subcommand writes per-arm means") {
    const fs::path dir = fresh_dir("oracle");
    const auto res = run_cli("oracle " + kTinyScenario +
                                 " --snr-list 40 --out-dir " + dir.string(),
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string csv = read_file(dir / "oracle.csv");
    REQUIRE(csv.rfind("snr_db,arm,mean,stderr,best\n", 0) == 0);
    // N=16, s=4 gives two levels per hop, so 2*2 = 4 arms
    REQUIRE(count_lines(csv) == 1 + 4);
    REQUIRE(res.stdout_text.find("best arm") != std::string::npos);
}

TEST_CASE("learn subcommand writes the regret curve and arm statistics") {
    const fs::path dir = fresh_dir("learn");
    const auto res = run_cli("learn --snr 40 " + kTinyScenario + " --out-dir " +
                                 dir.string(),
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string regret = read_file(dir / "regret.csv");
    REQUIRE(regret.rfind("t,avg_regret\n", 0) == 0);
    REQUIRE(count_lines(regret) == 1 + 30);
    const std::string arms = read_file(dir / "arms.csv");
    REQUIRE(arms.rfind("arm,pulls,mean\n", 0) == 0);
    REQUIRE(count_lines(arms) == 1 + 4);
    REQUIRE(res.stdout_text.find("output arm") != std::string::npos);
}

TEST_CASE("learn requires the dynamic policy") {
    const fs::path dir = fresh_dir("learn_fixed");
    const auto res = run_cli("learn --policy fixed " + kTinyScenario + " --out-dir " +
                                 dir.string(),
                             dir);
    REQUIRE(res.exit_code != 0);
}

TEST_CASE("sweep subcommand writes rates, misses and the CDF") {
    const fs::path dir = fresh_dir("sweep");
    const auto res = run_cli("sweep --snr-list 40,60 --cdf-snr 60 " + kTinyScenario +
                                 " --out-dir " + dir.string(),
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string rates = read_file(dir / "rate_vs_snr.csv");
    REQUIRE(rates.rfind("snr_db,policy,mean_rate,stderr\n", 0) == 0);
    REQUIRE(count_lines(rates) == 1 + 6);
    const std::string miss = read_file(dir / "miss.csv");
    REQUIRE(miss.rfind("snr_db,policy,p_miss\n", 0) == 0);
    REQUIRE(count_lines(miss) == 1 + 6);
    const std::string cdf = read_file(dir / "rate_cdf.csv");
    REQUIRE(cdf.rfind("policy,rate,cdf\n", 0) == 0);
    REQUIRE(count_lines(cdf) == 1 + 3 * 40);
}

TEST_CASE("the same seed reproduces byte-identical outputs") {
    const fs::path dir1 = fresh_dir("repro1");
    const fs::path dir2 = fresh_dir("repro2");
    const std::string args = "learn --snr 40 --seed 7 " + kTinyScenario;
    REQUIRE(run_cli(args + " --out-dir " + dir1.string(), dir1).exit_code == 0);
    REQUIRE(run_cli(args + " --out-dir " + dir2.string(), dir2).exit_code == 0);
    REQUIRE(read_file(dir1 / "regret.csv") == read_file(dir2 / "regret.csv"));
    REQUIRE(read_file(dir1 / "arms.csv") == read_file(dir2 / "arms.csv"));

    const fs::path dir3 = fresh_dir("repro3");
    const std::string other = "learn --snr 40 --seed 8 " + kTinyScenario;
    REQUIRE(run_cli(other + " --out-dir " + dir3.string(), dir3).exit_code == 0);
    REQUIRE(read_file(dir1 / "regret.csv") != read_file(dir3 / "regret.csv"));
}

TEST_CASE("config files feed options and the command line overrides them") {
    const fs::path dir = fresh_dir("config");
    {
        std::ofstream ini(dir / "scenario.ini");
        ini << "num-antennas=16\n";
        ini << "mf-length=99999\n";
        ini << "oracle-samples=40\n";
        ini << "blocks=40\n";
        ini << "trials=20\n";
        ini << "runs=2\n";
        ini << "snr-list=40\n";
    }
    const auto res = run_cli("oracle --config " + (dir / "scenario.ini").string() +
                                 " --out-dir " + dir.string(),
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string manifest = read_file(dir / "manifest");
    REQUIRE(manifest.find("mf-length=99999") != std::string::npos);
    REQUIRE(manifest.find("num-antennas=16") != std::string::npos);

    const fs::path dir2 = fresh_dir("config_override");
    const auto res2 = run_cli("oracle --config " + (dir / "scenario.ini").string() +
                                  " --mf-length 88888 --out-dir " + dir2.string(),
                              dir2);
    REQUIRE(res2.exit_code == 0);
    const std::string manifest2 = read_file(dir2 / "manifest");
    REQUIRE(manifest2.find("mf-length=88888") != std::string::npos);
}

TEST_CASE("the trace flag writes per-level measurement rows") {
    const fs::path dir = fresh_dir("trace");
    const auto res = run_cli("codebook --trace --num-antennas 16 --out-dir " +
                                 dir.string(),
                             dir);
    REQUIRE(res.exit_code == 0);
    const std::string trace = read_file(dir / "trace.csv");
    REQUIRE(trace.rfind("side,level,candidate,power,winner,detected\n", 0) == 0);
    // one diagnostic block at full training: (4+4)*2 slots per hop, two hops
    REQUIRE(count_lines(trace) == 1 + 32);
}

TEST_CASE("invalid arguments fail with a nonzero exit code") {
    const fs::path dir = fresh_dir("invalid");
    REQUIRE(run_cli("oracle --policy thompson --out-dir " + dir.string(), dir)
                .exit_code != 0);
    REQUIRE(run_cli("oracle --num-antennas 48 --out-dir " + dir.string(), dir)
                .exit_code != 0);
    REQUIRE(run_cli("", dir).exit_code != 0); // a subcommand is required
}
