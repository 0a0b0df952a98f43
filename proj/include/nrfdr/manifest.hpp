#pragma once

#include <string>
#include <utility>
#include <vector>

namespace nrfdr {

inline constexpr const char* kVersion = "0.1.0";

/// Record of one CLI run: command, options, config snapshot, outputs.
/// The embedded config block is parseable as-is, so a run can be redone
/// from the manifest alone.
struct RunManifest {
    std::string command;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::pair<std::string, std::string>> options;
    std::string config_text;  // optional embedded config block
    std::vector<std::string> outputs;
};

std::string utc_timestamp();

void write_manifest(const std::string& path, const RunManifest& manifest);

/// Extracts the embedded config block of a manifest file.
std::string read_manifest_config(const std::string& path);

}  // namespace nrfdr
