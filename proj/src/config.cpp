#include "nrfdr/config.hpp"

#include "nrfdr/csv.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace nrfdr {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) {
        const std::string t = trim(item);
        if (!t.empty()) items.push_back(t);
    }
    return items;
}

double to_double(const std::string& key, const std::string& s) {
    double v;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw DataError("config: key '" + key + "': not a number: '" + s + "'");
    }
    return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& s) {
    std::uint64_t v;
    const char* end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end) {
        throw DataError("config: key '" + key + "': not a non-negative integer: '" +
                        s + "'");
    }
    return v;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (scenario != 1 && scenario != 2) {
        throw DataError("config: scenario must be 1 or 2");
    }
    if (n_grid.empty()) throw DataError("config: n_grid is empty");
    if (d_grid.empty()) throw DataError("config: d_grid is empty");
    if (methods.empty()) throw DataError("config: methods is empty");
    if (replicates < 1) throw DataError("config: replicates must be >= 1");
    if (!(pi0 > 0.0 && pi0 <= 1.0)) throw DataError("config: pi0 must lie in (0,1]");
    if (!(q > 0.0 && q < 1.0)) throw DataError("config: q must lie in (0,1)");
}

ExperimentConfig parse_experiment_config(std::istream& in,
                                         const std::string& name) {
    static const std::vector<std::string> known = {
        "scenario", "n_grid", "d_grid",     "pi0",  "q",        "q_prime",
        "mu_scale", "replicates", "methods", "seed", "pool_size"};
    static const std::vector<std::string> required = {
        "scenario", "n_grid", "d_grid", "replicates", "methods", "seed"};

    std::map<std::string, std::string> kv;
    std::vector<std::string> unknown;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw DataError(name + ": line " + std::to_string(line_no) +
                            ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            unknown.push_back(key);
            continue;
        }
        if (kv.count(key)) {
            throw DataError(name + ": duplicate key '" + key + "'");
        }
        kv[key] = value;
    }
    if (!unknown.empty()) {
        std::string msg = name + ": unknown keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw DataError(msg);
    }
    std::string missing;
    for (const auto& k : required) {
        if (!kv.count(k)) missing += " " + k;
    }
    if (!missing.empty()) {
        throw DataError(name + ": missing required keys:" + missing);
    }

    ExperimentConfig config;
    config.scenario = static_cast<int>(to_u64("scenario", kv["scenario"]));
    for (const auto& s : split_list(kv["n_grid"])) {
        config.n_grid.push_back(static_cast<std::size_t>(to_u64("n_grid", s)));
    }
    for (const auto& s : split_list(kv["d_grid"])) {
        config.d_grid.push_back(static_cast<int>(to_u64("d_grid", s)));
    }
    if (kv.count("pi0")) config.pi0 = to_double("pi0", kv["pi0"]);
    if (kv.count("q")) config.q = to_double("q", kv["q"]);
    if (kv.count("q_prime")) config.q_prime = to_double("q_prime", kv["q_prime"]);
    if (kv.count("mu_scale")) config.mu_scale = to_double("mu_scale", kv["mu_scale"]);
    config.replicates =
        static_cast<std::size_t>(to_u64("replicates", kv["replicates"]));
    for (const auto& s : split_list(kv["methods"])) {
        try {
            config.methods.push_back(parse_method(s));
        } catch (const InputError& e) {
            throw DataError(name + ": " + e.what());
        }
    }
    config.seed = to_u64("seed", kv["seed"]);
    if (kv.count("pool_size")) {
        config.pool_size = static_cast<std::size_t>(to_u64("pool_size", kv["pool_size"]));
    }
    config.validate();
    return config;
}

ExperimentConfig parse_experiment_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open file");
    return parse_experiment_config(in, path);
}

std::string render_experiment_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "scenario = " << config.scenario << '\n';
    out << "n_grid = ";
    for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
        out << (i ? ", " : "") << config.n_grid[i];
    }
    out << '\n' << "d_grid = ";
    for (std::size_t i = 0; i < config.d_grid.size(); ++i) {
        out << (i ? ", " : "") << config.d_grid[i];
    }
    out << '\n';
    out << "pi0 = " << format_double(config.pi0) << '\n';
    out << "q = " << format_double(config.q) << '\n';
    out << "q_prime = " << format_double(config.q_prime) << '\n';
    out << "mu_scale = " << format_double(config.mu_scale) << '\n';
    out << "replicates = " << config.replicates << '\n';
    out << "methods = ";
    for (std::size_t i = 0; i < config.methods.size(); ++i) {
        out << (i ? ", " : "") << method_name(config.methods[i]);
    }
    out << '\n';
    out << "seed = " << config.seed << '\n';
    out << "pool_size = " << config.pool_size << '\n';
    return out.str();
}

std::vector<MetricsRow> run_experiment(const ExperimentConfig& config,
                                       int threads) {
    config.validate();
    std::vector<MetricsRow> rows;
    for (std::size_t n : config.n_grid) {
        for (int d : config.d_grid) {
            ScenarioConfig cell;
            cell.scenario = config.scenario;
            cell.n = n;
            cell.d = d;
            cell.pi0 = config.pi0;
            cell.q = config.q;
            cell.q_prime = config.q_prime;
            cell.mu_scale = config.mu_scale;
            cell.replicates = config.replicates;
            cell.seed = config.seed;
            cell.pool_size = config.pool_size;
            cell.threads = threads;
            const std::vector<MetricsRow> cell_rows =
                run_replicates(cell, config.methods);
            rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
        }
    }
    return rows;
}

}  // namespace nrfdr
