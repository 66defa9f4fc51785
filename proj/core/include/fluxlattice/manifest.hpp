#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace fluxlattice {

/// Written next to every command's outputs. Lists exactly the files the run
/// produced; all of them exist once the manifest lands (it is written last).
struct RunManifest {
    std::string command;
    std::string config_hash;
    std::string tool_version;
    std::string timestamp_utc;
    std::vector<std::string> outputs;
};

std::string tool_version();
std::string utc_timestamp();

/// Serializes the manifest to <out_dir>/manifest.json (atomic temp+rename).
/// Throws if a listed output does not exist.
void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest);

} // namespace fluxlattice
