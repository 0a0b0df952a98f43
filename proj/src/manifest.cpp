#include "nrfdr/manifest.hpp"

#include "nrfdr/core.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

namespace nrfdr {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
    std::ofstream out(path);
    if (!out) throw DataError(path + ": cannot open manifest for writing");
    out << "# nrfdr run manifest\n";
    out << "version: " << kVersion << '\n';
    out << "command: " << manifest.command << '\n';
    out << "started_utc: " << manifest.started_utc << '\n';
    out << "finished_utc: " << manifest.finished_utc << '\n';
    for (const auto& [key, value] : manifest.options) {
        out << "option " << key << ": " << value << '\n';
    }
    for (const auto& file : manifest.outputs) {
        out << "output: " << file << '\n';
    }
    if (!manifest.config_text.empty()) {
        out << "config-begin\n" << manifest.config_text;
        if (manifest.config_text.back() != '\n') out << '\n';
        out << "config-end\n";
    }
    if (!out) throw DataError(path + ": failed writing manifest");
}

std::string read_manifest_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError(path + ": cannot open manifest");
    std::string line;
    std::ostringstream config;
    bool inside = false;
    bool found = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line == "config-begin") {
            inside = true;
            found = true;
            continue;
        }
        if (line == "config-end") {
            inside = false;
            continue;
        }
        if (inside) config << line << '\n';
    }
    if (!found) {
        throw DataError(path + ": manifest has no embedded config block");
    }
    return config.str();
}

}  // namespace nrfdr
