#include <doctest.h>

#include <filesystem>

#include "sgdkit/corpus_io.hpp"

using namespace sgdkit;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SGDKIT_FIXTURE_DIR;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("sgdkit_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int n = 0;
        return n;
    }
};

} // namespace

TEST_CASE("schemas load from a file or its directory") {
    const auto dir = kFixtures / "released_format";
    const auto from_dir = load_schemas_from(dir);
    const auto from_file = load_schemas_from(dir / "schema.json");
    CHECK(from_dir == from_file);
    REQUIRE(from_dir.size() == 2);
    CHECK(from_dir[0].service_name == "Restaurants_1");
    CHECK(from_dir[1].service_name == "Events_1");
}

TEST_CASE("missing files raise IoError") {
    CHECK_THROWS_AS(load_schemas_from(kFixtures / "no_such_dir" / "schema.json"), IoError);
    CHECK_THROWS_AS(load_corpus_from(kFixtures / "no_such.json"), IoError);
    TempDir tmp;
    CHECK_THROWS_AS(load_corpus_from(tmp.path), IoError); // dir without shards
}

TEST_CASE("parse failures name the offending file") {
    TempDir tmp;
    write_text_file(tmp.path / "dialogues_001.json", "[{]");
    try {
        load_corpus_from(tmp.path);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("dialogues_001.json") != std::string::npos);
    }
}

TEST_CASE("corpus shards write and reload in order") {
    const auto corpus = load_corpus_from(kFixtures / "released_format");
    REQUIRE(corpus.size() == 3);

    TempDir tmp;
    const auto names = write_corpus_shards(tmp.path / "out", corpus, 2);
    CHECK(names == std::vector<std::string>{"dialogues_001.json", "dialogues_002.json"});
    const auto reloaded = load_corpus_from(tmp.path / "out");
    CHECK(reloaded == corpus);

    // Shard boundaries only affect grouping, not content or order.
    const auto one_per_shard = write_corpus_shards(tmp.path / "out2", corpus, 1);
    CHECK(one_per_shard.size() == 3);
    CHECK(load_corpus_from(tmp.path / "out2") == corpus);
}

TEST_CASE("an empty corpus still writes one (empty) shard") {
    TempDir tmp;
    const auto names = write_corpus_shards(tmp.path / "out", {}, 64);
    CHECK(names == std::vector<std::string>{"dialogues_001.json"});
    CHECK(load_corpus_from(tmp.path / "out").empty());
}
