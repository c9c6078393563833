#include "sgdkit/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

#include "sgdkit/corpus_io.hpp"
#include "sgdkit/rng.hpp"

namespace sgdkit {

std::string content_digest(std::string_view bytes) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buffer;
}

std::string file_digest(const std::filesystem::path& path) {
    return content_digest(read_text_file(path));
}

std::string iso8601_utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buffer;
}

ojson manifest_to_json(const RunManifest& manifest) {
    ojson out = ojson::object();
    out["argv"] = manifest.argv;
    out["command"] = manifest.command;
    out["config_hashes"] = ojson::object();
    for (const auto& [name, digest] : manifest.config_hashes) out["config_hashes"][name] = digest;
    out["extras"] = manifest.extras;
    out["finished_at"] = manifest.finished_at;
    out["input_digests"] = ojson::object();
    for (const auto& [label, digest] : manifest.input_digests) out["input_digests"][label] = digest;
    out["outputs"] = ojson::object();
    for (const auto& [name, digest] : manifest.outputs) out["outputs"][name] = digest;
    if (manifest.seed.has_value()) out["seed"] = *manifest.seed;
    out["started_at"] = manifest.started_at;
    out["tool"] = manifest.tool;
    out["tool_version"] = manifest.tool_version;
    return out;
}

std::filesystem::path write_run_manifest(const std::filesystem::path& directory,
                                         const RunManifest& manifest) {
    if (!directory.empty()) std::filesystem::create_directories(directory);
    const auto path = directory / "run_manifest.json";
    write_text_file(path, manifest_to_json(manifest).dump(2) + "\n");
    return path;
}

} // namespace sgdkit
