#include "nrfdr/analyze.hpp"
#include "nrfdr/config.hpp"
#include "nrfdr/csv.hpp"
#include "nrfdr/manifest.hpp"
#include "nrfdr/simulation.hpp"
#include "nrfdr/svg_plot.hpp"
#include "nrfdr/trace_io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace nrfdr;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitNumerical = 4;

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open for writing");
    out << text;
    if (!out) throw DataError(path + ": write failed");
}

StepFunction parse_b_jumps(const std::string& text) {
    StepFunction b;
    if (text.empty()) return b;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
            throw InputError("--b-jumps expects time:value pairs, got '" + item +
                             "'");
        }
        b.jumps.emplace_back(std::stod(item.substr(0, colon)),
                             std::stod(item.substr(colon + 1)));
    }
    b.validate();
    return b;
}

struct AnalyzeCli {
    std::string data_path;
    std::string method;
    std::string out_prefix = "analysis";
    double q = 0.1;
    bool whiten = false;
    std::string pi0;
    std::uint64_t seed = 0;
    std::size_t pool_size = 100000;
    double q_prime = 0.0;
    int column = -1;
};

int cmd_analyze(const AnalyzeCli& cli) {
    RunManifest manifest;
    manifest.command = "analyze";
    manifest.started_utc = utc_timestamp();

    AnalyzeOptions options;
    options.method = parse_analyze_method(cli.method);
    options.q = cli.q;
    options.whiten = cli.whiten;
    options.seed = cli.seed;
    options.pool_size = cli.pool_size;
    options.q_prime = cli.q_prime;
    options.column = cli.column;
    if (!cli.pi0.empty()) {
        if (cli.pi0 == "lowest-slope") {
            options.pi0_lowest_slope = true;
        } else {
            try {
                options.pi0 = std::stod(cli.pi0);
            } catch (const std::exception&) {
                throw InputError("--pi0 expects a number or 'lowest-slope'");
            }
        }
    }

    const ZMatrix z = ingest_csv(cli.data_path);
    const AnalyzeResult result = run_analyze(z, options);

    const std::string csv_path = cli.out_prefix + ".csv";
    {
        std::ofstream out(csv_path);
        if (!out) throw DataError(csv_path + ": cannot open for writing");
        write_rejections_csv(out, result.outcome, result.scores);
    }
    manifest.outputs.push_back(csv_path);

    if (result.trace.has_value()) {
        const std::string trace_path = cli.out_prefix + ".trace.txt";
        write_region_trace_file(trace_path, *result.trace, result.outcome);
        manifest.outputs.push_back(trace_path);
    }

    manifest.options = {
        {"data", cli.data_path},
        {"method", cli.method},
        {"q", format_double(cli.q)},
        {"whiten", cli.whiten ? "true" : "false"},
        {"pi0", cli.pi0.empty() ? "(unset)" : cli.pi0},
        {"seed", std::to_string(cli.seed)},
        {"pool_size", std::to_string(cli.pool_size)},
        {"q_prime", format_double(cli.q_prime)},
        {"column", std::to_string(cli.column)},
        {"rejections", std::to_string(result.outcome.rejection_count())},
    };
    if (options.method == AnalyzeMethod::Sc) {
        manifest.options.emplace_back("pi0_used", format_double(result.pi0_used));
    }
    manifest.finished_utc = utc_timestamp();
    write_manifest(cli.out_prefix + ".manifest.txt", manifest);

    std::cout << "method=" << cli.method
              << " n=" << z.n() << " d=" << z.d()
              << " rejections=" << result.outcome.rejection_count() << '\n';
    return 0;
}

int cmd_experiment(const std::string& config_path,
                   const std::string& manifest_path,
                   const std::string& out_dir, int threads) {
    RunManifest manifest;
    manifest.command = "experiment";
    manifest.started_utc = utc_timestamp();

    ExperimentConfig config;
    if (!manifest_path.empty()) {
        const std::string text = read_manifest_config(manifest_path);
        std::istringstream in(text);
        config = parse_experiment_config(in, manifest_path);
    } else {
        config = parse_experiment_config_file(config_path);
    }

    const std::vector<MetricsRow> rows = run_experiment(config, threads);

    fs::create_directories(out_dir);
    const std::string metrics_path = (fs::path(out_dir) / "metrics.csv").string();
    {
        std::ofstream out(metrics_path);
        if (!out) throw DataError(metrics_path + ": cannot open for writing");
        write_metrics_csv(out, rows);
    }

    std::size_t failures = 0;
    for (const MetricsRow& row : rows) failures += row.failures;
    if (failures > 0) {
        std::cerr << "warning: " << failures
                  << " replicate/method failures were excluded\n";
    }

    manifest.outputs.push_back(metrics_path);
    manifest.options = {{"threads", std::to_string(threads)},
                        {"failures", std::to_string(failures)}};
    manifest.config_text = render_experiment_config(config);
    manifest.finished_utc = utc_timestamp();
    write_manifest((fs::path(out_dir) / "manifest.txt").string(), manifest);

    std::cout << "wrote " << rows.size() << " rows to " << metrics_path << '\n';
    return 0;
}

int cmd_plot(const std::string& trace_path, const std::string& data_path,
             const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "plot-regions";
    manifest.started_utc = utc_timestamp();

    const RegionTraceFile trace = read_region_trace_file(trace_path);
    const ZMatrix data = ingest_csv(data_path);
    plot_regions_file(out_path, trace, data);

    manifest.options = {{"trace", trace_path}, {"data", data_path}};
    manifest.outputs.push_back(out_path);
    manifest.finished_utc = utc_timestamp();
    write_manifest(out_path + ".manifest.txt", manifest);

    std::cout << "wrote " << out_path << '\n';
    return 0;
}

int cmd_lemma1(std::size_t n0, double q, std::size_t sims, std::uint64_t seed,
               const std::string& b_jumps, const std::string& out_path) {
    RunManifest manifest;
    manifest.command = "lemma1-check";
    manifest.started_utc = utc_timestamp();

    const StepFunction b = parse_b_jumps(b_jumps);
    const Lemma1Result result = lemma1_harness(n0, q, b, sims, seed);

    std::ostringstream line;
    line << "mean=" << format_double(result.mean)
         << " se=" << format_double(result.se) << " sims=" << result.sims;
    std::cout << line.str() << '\n';

    manifest.options = {{"n0", std::to_string(n0)},
                        {"q", format_double(q)},
                        {"sims", std::to_string(sims)},
                        {"seed", std::to_string(seed)},
                        {"b_jumps", b_jumps.empty() ? "(none)" : b_jumps},
                        {"mean", format_double(result.mean)},
                        {"se", format_double(result.se)}};
    if (!out_path.empty()) {
        std::ostringstream csv;
        csv << "n0,q,sims,seed,mean,se\n"
            << n0 << ',' << format_double(q) << ',' << sims << ',' << seed
            << ',' << format_double(result.mean) << ','
            << format_double(result.se) << '\n';
        write_text_file(out_path, csv.str());
        manifest.outputs.push_back(out_path);
        manifest.finished_utc = utc_timestamp();
        write_manifest(out_path + ".manifest.txt", manifest);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FDR control for multivariate test statistics"};
    app.require_subcommand(1);

    AnalyzeCli analyze_cli;
    CLI::App* analyze = app.add_subcommand(
        "analyze", "Run one procedure on a CSV of z-values");
    analyze->add_option("data", analyze_cli.data_path, "numeric CSV, one row per hypothesis")
        ->required();
    analyze->add_option("--method", analyze_cli.method, "nr | sc | fisher | bh1d")
        ->required();
    analyze->add_option("--q", analyze_cli.q, "target FDR level");
    analyze->add_flag("--whiten", analyze_cli.whiten,
                      "decorrelate columns before testing");
    analyze->add_option("--pi0", analyze_cli.pi0,
                        "null proportion for sc: a number or 'lowest-slope'");
    analyze->add_option("--seed", analyze_cli.seed, "Monte-Carlo pool seed");
    analyze->add_option("--pool-size", analyze_cli.pool_size,
                        "Monte-Carlo pool size");
    analyze->add_option("--q-prime", analyze_cli.q_prime,
                        "initial tail mass for nr (default q/10)");
    analyze->add_option("--column", analyze_cli.column,
                        "column for bh1d on multi-column data");
    analyze->add_option("--out", analyze_cli.out_prefix, "output path prefix");

    std::string config_path;
    std::string from_manifest;
    std::string out_dir = ".";
    int threads = 0;
    CLI::App* experiment = app.add_subcommand(
        "experiment", "Run a simulation grid from a config file");
    experiment->add_option("--config", config_path, "experiment config file");
    experiment->add_option("--from-manifest", from_manifest,
                           "rerun from a previous manifest");
    experiment->add_option("--out-dir", out_dir, "output directory");
    experiment->add_option("--threads", threads,
                           "worker threads (0 = hardware)");

    std::string trace_path;
    std::string data_path;
    std::string svg_path = "regions.svg";
    CLI::App* plot = app.add_subcommand(
        "plot-regions", "Render a d=2 region trace as an SVG");
    plot->add_option("--trace", trace_path, "region trace file")->required();
    plot->add_option("--data", data_path, "z-value CSV")->required();
    plot->add_option("--out", svg_path, "output SVG path");

    std::size_t n0 = 100;
    double lemma_q = 0.1;
    std::size_t sims = 10000;
    std::uint64_t lemma_seed = 1;
    std::string b_jumps;
    std::string lemma_out;
    CLI::App* lemma = app.add_subcommand(
        "lemma1-check", "Monte-Carlo check of the stopped centered count");
    lemma->add_option("--n0", n0, "number of null p-values");
    lemma->add_option("--q", lemma_q, "level in the boundary n t / q");
    lemma->add_option("--sims", sims, "simulation count");
    lemma->add_option("--seed", lemma_seed, "RNG seed");
    lemma->add_option("--b-jumps", b_jumps,
                      "non-null count step function, e.g. 0.5:50,0.8:80");
    lemma->add_option("--out", lemma_out, "optional CSV output path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*analyze) return cmd_analyze(analyze_cli);
        if (*experiment) {
            if (config_path.empty() == from_manifest.empty()) {
                std::cerr << "experiment needs exactly one of --config / "
                             "--from-manifest\n";
                return kExitUsage;
            }
            return cmd_experiment(config_path, from_manifest, out_dir, threads);
        }
        if (*plot) return cmd_plot(trace_path, data_path, svg_path);
        if (*lemma) return cmd_lemma1(n0, lemma_q, sims, lemma_seed, b_jumps,
                                      lemma_out);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const NumericalError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
