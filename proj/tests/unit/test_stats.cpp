#include <doctest.h>

#include "sgdkit/corpus_io.hpp"
#include "sgdkit/stats.hpp"

using namespace sgdkit;

namespace {

const std::filesystem::path kFixtures = SGDKIT_FIXTURE_DIR;

struct StatsFixture {
    std::vector<ServiceSchema> schemas;
    Corpus corpus;
    ojson expected;
};

StatsFixture load_stats_fixture() {
    StatsFixture fx;
    fx.schemas = load_schemas_from(kFixtures / "stats");
    fx.corpus = load_corpus_from(kFixtures / "stats");
    fx.expected = parse_json_text(read_text_file(kFixtures / "stats" / "expected_stats.json"));
    return fx;
}

} // namespace

TEST_CASE("service domains strip numeric qualifiers unless mapped explicitly") {
    CHECK(domain_of("Restaurants_1") == "Restaurants");
    CHECK(domain_of("Hotels_12") == "Hotels");
    CHECK(domain_of("restaurants_alpha") == "restaurants_alpha"); // suffix is not numeric
    CHECK(domain_of("Weather") == "Weather");
    CHECK(domain_of("Trains_") == "Trains_"); // nothing after the underscore
    CHECK(domain_of("Media_2", {{"Media_2", "Entertainment"}}) == "Entertainment");
}

TEST_CASE("hand-tallied fixture statistics match exactly") {
    const StatsFixture fx = load_stats_fixture();
    const auto clean = validate_corpus(fx.corpus, fx.schemas, ActVocabulary::standard());
    REQUIRE(clean.ok());
    CHECK(clean.warnings.empty());

    StatsOptions options;
    options.seen_services = std::set<std::string>{"Restaurants_1"};
    const StatsReport stats = compute_stats(fx.corpus, fx.schemas, options);

    CHECK(stats.num_dialogues == fx.expected.at("num_dialogues").get<std::size_t>());
    CHECK(stats.num_domains == fx.expected.at("num_domains").get<std::size_t>());
    CHECK(stats.total_turns == fx.expected.at("total_turns").get<std::size_t>());
    CHECK(stats.num_slots == fx.expected.at("num_slots").get<std::size_t>());
    CHECK(stats.num_slot_values == fx.expected.at("num_slot_values").get<std::size_t>());
    CHECK(stats.total_unique_tokens ==
          fx.expected.at("total_unique_tokens").get<std::size_t>());
    CHECK(stats.avg_turns_per_dialogue ==
          doctest::Approx(fx.expected.at("avg_turns_per_dialogue").get<double>())
              .epsilon(1e-12));
    CHECK(stats.avg_tokens_per_turn ==
          doctest::Approx(fx.expected.at("avg_tokens_per_turn").get<double>()).epsilon(1e-12));
    REQUIRE(stats.unseen_turn_fraction.has_value());
    CHECK(*stats.unseen_turn_fraction ==
          doctest::Approx(fx.expected.at("unseen_turn_fraction").get<double>()).epsilon(1e-12));

    // Histograms, act counts, and the per-domain table, via the JSON view.
    const ojson json = stats_report_to_json(stats);
    CHECK(json.at("act_histogram") == fx.expected.at("act_histogram"));
    CHECK(json.at("length_histograms") == fx.expected.at("length_histograms"));
    CHECK(json.at("per_domain") == fx.expected.at("per_domain"));
}

TEST_CASE("a single two-turn dialogue yields the obvious counts") {
    const StatsFixture fx = load_stats_fixture();
    const Corpus one = {fx.corpus.at(0)};
    const StatsReport stats = compute_stats(one, fx.schemas);

    CHECK(stats.num_dialogues == 1);
    CHECK(stats.total_turns == 2);
    CHECK(stats.avg_turns_per_dialogue == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(stats.num_domains == 1);
    CHECK_FALSE(stats.unseen_turn_fraction.has_value());
    const ojson json = stats_report_to_json(stats);
    CHECK_FALSE(json.contains("unseen_turn_fraction"));
}

TEST_CASE("totals and fractions obey their defining identities") {
    const StatsFixture fx = load_stats_fixture();

    StatsOptions all_seen;
    all_seen.seen_services = std::set<std::string>{"Restaurants_1", "Weather_1"};
    StatsOptions none_seen;
    none_seen.seen_services = std::set<std::string>{};

    const StatsReport base = compute_stats(fx.corpus, fx.schemas);
    CHECK(base.avg_turns_per_dialogue * static_cast<double>(base.num_dialogues) ==
          doctest::Approx(static_cast<double>(base.total_turns)).epsilon(1e-12));

    CHECK(*compute_stats(fx.corpus, fx.schemas, all_seen).unseen_turn_fraction == 0.0);
    CHECK(*compute_stats(fx.corpus, fx.schemas, none_seen).unseen_turn_fraction == 1.0);
}

TEST_CASE("histogram tables are plot-ready and render deterministically") {
    const StatsFixture fx = load_stats_fixture();
    const StatsReport stats = compute_stats(fx.corpus, fx.schemas);
    const auto files = render_histograms(stats);

    REQUIRE(files.size() == 3);
    CHECK(files.at("dialogue_lengths_single_domain.csv") == "turns,dialogues\n2,3\n4,1\n");
    CHECK(files.at("dialogue_lengths_multi_domain.csv") == "turns,dialogues\n4,1\n");
    CHECK(files.at("dialogue_acts.csv") ==
          "act,count\nGOODBYE,1\nINFORM,10\nINFORM_INTENT,6\nOFFER,4\nSELECT,1\n");
    CHECK(render_histograms(stats) == files);
}

TEST_CASE("statistics refuse an empty corpus") {
    const StatsFixture fx = load_stats_fixture();
    CHECK_THROWS_AS(compute_stats({}, fx.schemas), ValidationRefused);
}
