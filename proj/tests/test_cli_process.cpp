#include "nrfdr/csv.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CommandResult {
    int exit_code = -1;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    CommandResult result;
    FILE* pipe = popen((command + " 2>&1").c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 512> buffer;
    while (fgets(buffer.data(), buffer.size(), pipe) != nullptr) {
        result.output += buffer.data();
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

const char* cli_path() {
    const char* path = std::getenv("NRFDR_CLI");
    return path != nullptr ? path : "";
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

class TempDir {
  public:
    TempDir() : path_(fs::temp_directory_path() / "nrfdr_cli_test") {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    const fs::path& path() const { return path_; }

  private:
    fs::path path_;
};

}  // namespace

TEST_CASE("cli exit codes and end-to-end flows" * doctest::skip(false)) {
    const std::string cli = cli_path();
    REQUIRE_MESSAGE(!cli.empty(), "NRFDR_CLI environment variable not set");
    TempDir dir;

    SUBCASE("usage errors exit 2") {
        CHECK(run_command(cli + " analyze").exit_code == 2);
        CHECK(run_command(cli + " no-such-command").exit_code == 2);
        CHECK(run_command(cli + " experiment").exit_code == 2);
    }

    SUBCASE("data errors exit 3") {
        const fs::path bad = dir.path() / "bad.csv";
        std::ofstream(bad) << "1,2\n3\n";
        const auto result = run_command(cli + " analyze " + bad.string() +
                                        " --method fisher --out " +
                                        (dir.path() / "out").string());
        CHECK(result.exit_code == 3);
        CHECK(result.output.find("line 2") != std::string::npos);
        CHECK(run_command(cli + " analyze " + (dir.path() / "nope.csv").string() +
                          " --method fisher")
                  .exit_code == 3);
    }

    SUBCASE("numerical errors exit 4") {
        const fs::path collinear = dir.path() / "collinear.csv";
        {
            std::ofstream out(collinear);
            for (int i = 0; i < 8; ++i) {
                out << i - 3.5 << ',' << 2 * (i - 3.5) << '\n';
            }
        }
        const auto result = run_command(cli + " analyze " + collinear.string() +
                                        " --method fisher --whiten --out " +
                                        (dir.path() / "w").string());
        CHECK(result.exit_code == 4);
    }

    SUBCASE("analyze nr writes csv, trace, and manifest; plot runs on them") {
        const fs::path data = dir.path() / "data.csv";
        {
            std::ofstream out(data);
            // A tight null cloud plus a clear outlier cluster.
            for (int i = 0; i < 120; ++i) {
                const double a = 6.2831853 * i / 120.0;
                out << 0.8 * std::cos(a) << ',' << 0.8 * std::sin(a) << '\n';
            }
            for (int i = 0; i < 20; ++i) {
                out << 4.0 + 0.1 * i << ',' << 4.0 - 0.1 * i << '\n';
            }
        }
        const std::string prefix = (dir.path() / "run").string();
        const auto result = run_command(
            cli + " analyze " + data.string() +
            " --method nr --q 0.2 --q-prime 0.002 --pool-size 20000 --out " +
            prefix);
        CHECK(result.exit_code == 0);
        CHECK(fs::exists(prefix + ".csv"));
        CHECK(fs::exists(prefix + ".trace.txt"));
        CHECK(fs::exists(prefix + ".manifest.txt"));

        const auto plot = run_command(cli + " plot-regions --trace " + prefix +
                                      ".trace.txt --data " + data.string() +
                                      " --out " + prefix + ".svg");
        CHECK(plot.exit_code == 0);
        const std::string svg = read_file(prefix + ".svg");
        CHECK(svg.find("<svg") != std::string::npos);
    }

    SUBCASE("experiment reruns are byte-identical, also from the manifest") {
        const fs::path config = dir.path() / "exp.conf";
        std::ofstream(config) << "scenario = 1\n"
                                 "n_grid = 200\n"
                                 "d_grid = 2\n"
                                 "replicates = 5\n"
                                 "methods = fisher, sc\n"
                                 "seed = 5\n";
        const fs::path out1 = dir.path() / "run1";
        const fs::path out2 = dir.path() / "run2";
        const fs::path out3 = dir.path() / "run3";
        CHECK(run_command(cli + " experiment --config " + config.string() +
                          " --out-dir " + out1.string())
                  .exit_code == 0);
        CHECK(run_command(cli + " experiment --config " + config.string() +
                          " --out-dir " + out2.string())
                  .exit_code == 0);
        const std::string metrics1 = read_file(out1 / "metrics.csv");
        CHECK(metrics1 == read_file(out2 / "metrics.csv"));

        CHECK(run_command(cli + " experiment --from-manifest " +
                          (out1 / "manifest.txt").string() + " --out-dir " +
                          out3.string())
                  .exit_code == 0);
        CHECK(metrics1 == read_file(out3 / "metrics.csv"));

        // Unknown config keys are a data error.
        std::ofstream(config, std::ios::app) << "frobnicate = 1\n";
        CHECK(run_command(cli + " experiment --config " + config.string() +
                          " --out-dir " + (dir.path() / "run4").string())
                  .exit_code == 3);
    }

    SUBCASE("lemma1-check prints a mean and writes its csv") {
        const fs::path out = dir.path() / "lemma1.csv";
        const auto result = run_command(
            cli + " lemma1-check --n0 50 --q 0.1 --sims 2000 --seed 9 "
                  "--b-jumps 0.5:20 --out " +
            out.string());
        CHECK(result.exit_code == 0);
        CHECK(result.output.find("mean=") != std::string::npos);
        CHECK(fs::exists(out));
        CHECK(fs::exists(out.string() + ".manifest.txt"));
    }
}
