#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sgdkit/json_io.hpp"

namespace sgdkit {

// "fnv1a64:" + 16 hex digits over the raw bytes.
std::string content_digest(std::string_view bytes);
std::string file_digest(const std::filesystem::path& path);

std::string iso8601_utc_now();

// Reproducibility record written beside every CLI output: what ran, on
// which inputs (by digest), with which seed and configs, and what came
// out. Timestamps are the only non-deterministic fields; output files
// themselves stay byte-stable.
struct RunManifest {
    std::string tool;
    std::string tool_version;
    std::string command; // subcommand name
    std::vector<std::string> argv;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> config_hashes; // config name -> digest
    std::map<std::string, std::string> input_digests; // label -> digest
    std::map<std::string, std::string> outputs;       // file name -> digest
    std::string started_at;
    std::string finished_at;
    ojson extras = ojson::object(); // run-specific counters
};

ojson manifest_to_json(const RunManifest& manifest);

// Writes run_manifest.json under `directory`; returns the full path.
std::filesystem::path write_run_manifest(const std::filesystem::path& directory,
                                         const RunManifest& manifest);

} // namespace sgdkit
