#include "sgdkit/corpus_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace sgdkit {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw IoError("failed while reading " + path.string());
    return std::move(buffer).str();
}

void write_text_file(const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("failed while writing " + path.string());
}

namespace {

// Re-throws parse failures with the offending file named.
template <typename Parse>
auto parse_file(const fs::path& path, Parse&& parse) {
    try {
        return parse(read_text_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.filename().string() + ": " + e.what());
    }
}

} // namespace

std::vector<ServiceSchema> load_schemas_from(const fs::path& path, const ParseOptions& options,
                                             ValidationReport* diagnostics) {
    const fs::path file = fs::is_directory(path) ? path / "schema.json" : path;
    ValidationReport local;
    auto schemas = parse_file(file, [&](const std::string& text) {
        return parse_schemas(text, options, diagnostics ? &local : nullptr);
    });
    if (diagnostics) diagnostics->merge(local, file.filename().string() + ": ");
    return schemas;
}

Corpus load_corpus_from(const fs::path& path, const ParseOptions& options,
                        ValidationReport* diagnostics) {
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
            const std::string name = entry.path().filename().string();
            if (entry.is_regular_file() && name.starts_with("dialogues_") &&
                name.ends_with(".json"))
                files.push_back(entry.path());
        }
        if (files.empty())
            throw IoError("no dialogues_*.json files in " + path.string());
        std::sort(files.begin(), files.end());
    } else {
        files.push_back(path);
    }

    Corpus corpus;
    for (const fs::path& file : files) {
        ValidationReport local;
        Corpus part = parse_file(file, [&](const std::string& text) {
            return parse_dialogues(text, options, diagnostics ? &local : nullptr);
        });
        if (diagnostics) diagnostics->merge(local, file.filename().string() + ": ");
        corpus.insert(corpus.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
    }
    return corpus;
}

std::vector<std::string> write_corpus_shards(const fs::path& directory, const Corpus& corpus,
                                             std::size_t dialogues_per_shard) {
    if (dialogues_per_shard == 0)
        throw std::invalid_argument("dialogues_per_shard must be positive");
    fs::create_directories(directory);
    std::vector<std::string> names;
    for (std::size_t offset = 0; offset < corpus.size() || names.empty();
         offset += dialogues_per_shard) {
        const std::size_t end = std::min(corpus.size(), offset + dialogues_per_shard);
        const Corpus shard(corpus.begin() + static_cast<std::ptrdiff_t>(offset),
                           corpus.begin() + static_cast<std::ptrdiff_t>(end));
        char name[32];
        std::snprintf(name, sizeof name, "dialogues_%03zu.json", names.size() + 1);
        write_text_file(directory / name, serialize_dialogues(shard));
        names.emplace_back(name);
        if (end == corpus.size()) break;
    }
    return names;
}

} // namespace sgdkit
