#include "fluxlattice/manifest.hpp"
#include "fluxlattice/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <ctime>
#include <fstream>

namespace fluxlattice {

std::string tool_version() {
#ifdef FLUXLATTICE_VERSION
    return FLUXLATTICE_VERSION;
#else
    return "unknown";
#endif
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& manifest) {
    namespace fs = std::filesystem;
    for (const std::string& f : manifest.outputs)
        if (!fs::exists(out_dir / f))
            throw NumericError("manifest: listed output '" + f + "' does not exist");

    nlohmann::json j;
    j["schema"] = "1";
    j["command"] = manifest.command;
    j["config_hash"] = manifest.config_hash;
    j["tool_version"] = manifest.tool_version;
    j["timestamp_utc"] = manifest.timestamp_utc;
    j["outputs"] = manifest.outputs;

    fs::create_directories(out_dir);
    fs::path tmp = out_dir / "manifest.json.tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw InputError("manifest: cannot write '" + tmp.string() + "'");
        out << j.dump(2) << "\n";
    }
    fs::rename(tmp, out_dir / "manifest.json");
}

} // namespace fluxlattice
