#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sgdkit/dialogue.hpp"
#include "sgdkit/schema.hpp"

namespace sgdkit {

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view content);

// Accepts a schema file or a directory containing schema.json.
std::vector<ServiceSchema> load_schemas_from(const std::filesystem::path& path,
                                             const ParseOptions& options = {},
                                             ValidationReport* diagnostics = nullptr);

// Accepts a dialogue file or a directory of dialogues_*.json shards, which
// are loaded in lexicographic order. Diagnostics and parse errors are
// prefixed with the file name.
Corpus load_corpus_from(const std::filesystem::path& path, const ParseOptions& options = {},
                        ValidationReport* diagnostics = nullptr);

// Writes dialogues_NNN.json shards (NNN starting at 001) under `directory`,
// creating it if needed. Returns the shard file names in order.
std::vector<std::string> write_corpus_shards(const std::filesystem::path& directory,
                                             const Corpus& corpus,
                                             std::size_t dialogues_per_shard = 64);

} // namespace sgdkit
