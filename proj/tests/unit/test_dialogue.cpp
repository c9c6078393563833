#include <doctest.h>

#include "sgdkit/corpus_io.hpp"
#include "sgdkit/dialogue.hpp"

using namespace sgdkit;

namespace {

const std::filesystem::path kFixtures = SGDKIT_FIXTURE_DIR;

struct Loaded {
    std::vector<ServiceSchema> schemas;
    Corpus corpus;
};

Loaded load_fixture() {
    const auto dir = kFixtures / "released_format";
    return {load_schemas_from(dir), load_corpus_from(dir)};
}

} // namespace

TEST_CASE("fixture corpus loads and validates cleanly") {
    const auto [schemas, corpus] = load_fixture();
    CHECK(validate_schemas(schemas).ok());
    REQUIRE(corpus.size() == 3);

    const auto report = validate_corpus(corpus, schemas, ActVocabulary::standard());
    CHECK(report.ok());
    CHECK(report.warnings.empty());
}

TEST_CASE("span offsets are code points, verified against a hand count") {
    const auto [schemas, corpus] = load_fixture();
    const Dialogue& d = corpus[0];
    CHECK(d.dialogue_id == "fx_00001");

    // "I want to find a restaurant in San José." — 40 code points, 41 bytes.
    const Turn& turn = d.turns[0];
    CHECK(utf8::count(turn.utterance) == 40);
    CHECK(turn.utterance.size() == 41);
    REQUIRE(turn.frames.size() == 1);
    REQUIRE(turn.frames[0].slots.size() == 1);
    const SlotSpan& span = turn.frames[0].slots[0];
    CHECK(span.slot == "city");
    CHECK(span.start == 31);
    CHECK(span.exclusive_end == 39);
    CHECK(span_text(turn.utterance, span) == "San José");

    REQUIRE(turn.frames[0].state.has_value());
    CHECK(turn.frames[0].state->active_intent == "FindRestaurants");
    CHECK(turn.frames[0].state->slot_values.at("city") ==
          std::vector<std::string>{"San José"});
}

TEST_CASE("frames carry calls, results, and requested slots") {
    const auto [schemas, corpus] = load_fixture();
    const Dialogue& d = corpus[0];

    const Frame& offer = d.turns[1].frames[0];
    REQUIRE(offer.service_call.has_value());
    CHECK(offer.service_call->method == "FindRestaurants");
    CHECK(offer.service_call->parameters.at("city") == "San José");
    REQUIRE(offer.service_results.has_value());
    REQUIRE(offer.service_results->size() == 2);
    CHECK((*offer.service_results)[1].at("restaurant_name") == "Green Fork");

    const Frame& ask = d.turns[2].frames[0];
    REQUIRE(ask.state.has_value());
    CHECK(ask.state->requested_slots == std::set<std::string>{"price_range"});

    // The failed purchase in fx_00003 keeps the call but has no result rows.
    const Frame& failed = corpus[2].turns[5].frames[0];
    REQUIRE(failed.service_results.has_value());
    CHECK(failed.service_results->empty());
    CHECK(failed.actions[0].act == "NOTIFY_FAILURE");
}

TEST_CASE("multi-service turns keep one frame per service") {
    const auto [schemas, corpus] = load_fixture();
    const Turn& turn = corpus[1].turns[2];
    REQUIRE(turn.frames.size() == 2);
    CHECK(turn.frame_for("Restaurants_1") == &turn.frames[0]);
    CHECK(turn.frame_for("Events_1") == &turn.frames[1]);
    CHECK(turn.frame_for("Banks_1") == nullptr);
    CHECK(turn.frames[0].state->active_intent == "FindRestaurants");
    CHECK(turn.frames[1].state->active_intent == "FindEvents");
}

TEST_CASE("corpus serialization is canonical and stable") {
    const auto [schemas, corpus] = load_fixture();
    const std::string text = serialize_dialogues(corpus);
    CHECK(text.back() == '\n');
    const Corpus again = parse_dialogues(text);
    CHECK(again == corpus);
    CHECK(serialize_dialogues(again) == text);

    // The fixture file itself is in canonical form.
    const std::string original =
        read_text_file(kFixtures / "released_format" / "dialogues_001.json");
    CHECK(text == original);
}

TEST_CASE("parser rejects malformed dialogue documents") {
    CHECK_THROWS_AS(parse_dialogues("{}"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_dialogues(
            R"([{"dialogue_id": "d", "services": ["S"], "turns": [{"frames": [], "speaker": "ROBOT", "utterance": "hi"}]}])"),
        "dialogues[0].turns[0].speaker: speaker must be \"USER\" or \"SYSTEM\", got \"ROBOT\"",
        ParseError);
    CHECK_THROWS_WITH_AS(
        parse_dialogues(
            R"([{"dialogue_id": "d", "services": ["S"], "turns": [{"frames": [{"service": "S", "slots": [{"slot": "x", "start": -1, "exclusive_end": 2}]}], "speaker": "USER", "utterance": "hi"}]}])"),
        "dialogues[0].turns[0].frames[0].slots[0].start: expected a non-negative integer",
        ParseError);

    // Unknown fields: strict rejects, lenient warns.
    const char* extra =
        R"([{"dialogue_id": "d", "services": ["S"], "turns": [], "mood": "sunny"}])";
    CHECK_THROWS_WITH_AS(parse_dialogues(extra), "dialogues[0]: unknown field \"mood\"",
                         ParseError);
    ValidationReport report;
    parse_dialogues(extra, ParseOptions{.strict = false}, &report);
    REQUIRE(report.warnings.size() == 1);
    CHECK(report.warnings[0].message == "unknown field \"mood\" ignored");
}

TEST_CASE("semantic validation catches structural violations") {
    auto [schemas, corpus] = load_fixture();
    const ActVocabulary vocab = ActVocabulary::standard();
    Dialogue d = corpus[0];

    SUBCASE("broken speaker alternation") {
        d.turns[1].speaker = Speaker::User;
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[1].speaker");
    }

    SUBCASE("frame service must be declared by the dialogue") {
        d.turns[0].frames[0].service = "Events_1";
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE(report.errors.size() == 1);
        CHECK(report.errors[0].path == "turns[0].frames[0].service");
    }

    SUBCASE("duplicate frames for one service") {
        d.turns[0].frames.push_back(d.turns[0].frames[0]);
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[0].frames[1].service");
    }

    SUBCASE("user frame must carry a state, system frame must not") {
        d.turns[0].frames[0].state.reset();
        d.turns[1].frames[0].state = FrameState{};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE(report.errors.size() == 2);
        CHECK(report.errors[0].path == "turns[0].frames[0]");
        CHECK(report.errors[1].path == "turns[1].frames[0].state");
    }

    SUBCASE("span bounds and slot kind") {
        d.turns[0].frames[0].slots[0].exclusive_end = 99;
        d.turns[1].frames[0].slots.push_back({"price_range", 0, 2});
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE(report.errors.size() == 2);
        CHECK(report.errors[0].message ==
              "span [31, 99) is outside the utterance (40 code points)");
        CHECK(report.errors[1].path == "turns[1].frames[0].slots[2].slot");
    }

    SUBCASE("span text must match a value the frame mentions") {
        d.turns[0].frames[0].slots[0].start = 0;
        d.turns[0].frames[0].slots[0].exclusive_end = 6;
        const auto report = validate_dialogue(d, schemas, vocab);
        CHECK(report.ok());
        REQUIRE(report.warnings.size() == 1);
        CHECK(report.warnings[0].message.find("I want") != std::string::npos);
    }

    SUBCASE("acts outside the inventory") {
        d.turns[0].frames[0].actions[0].act = "MUMBLE";
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[0].frames[0].actions[0].act");
    }

    SUBCASE("system acts are not legal in user turns") {
        d.turns[0].frames[0].actions[0] = {"OFFER", "city", {"x"}, {}};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].message == "act 'OFFER' is not in the inventory");
    }

    SUBCASE("pseudo-slot misuse") {
        d.turns[0].frames[0].actions[1] = {"INFORM", "intent", {"FindRestaurants"}, {}};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].message == "pseudo-slot 'intent' is reserved for intent acts");
    }

    SUBCASE("intent act values must name intents") {
        d.turns[0].frames[0].actions[0].values = {"FlyToTheMoon"};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].message == "unknown intent 'FlyToTheMoon'");
    }

    SUBCASE("acts without a slot must not carry values") {
        d.turns[6].frames[0].actions[0].values = {"yes"};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[6].frames[0].actions[0].values");
    }

    SUBCASE("state values must satisfy categorical slots") {
        d.turns[4].frames[0].state->slot_values["party_size"] = {"40"};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[4].frames[0].state.slot_values.party_size");
    }

    SUBCASE("dontcare is always a legal state value") {
        d.turns[4].frames[0].state->slot_values["party_size"] = {"dontcare"};
        CHECK(validate_dialogue(d, schemas, vocab).ok());
    }

    SUBCASE("empty value lists are rejected") {
        d.turns[4].frames[0].state->slot_values["party_size"] = {};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].message == "value list must not be empty");
    }

    SUBCASE("unknown intent in state") {
        d.turns[0].frames[0].state->active_intent = "Ghost";
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[0].frames[0].state.active_intent");
    }

    SUBCASE("service call and results belong to system turns") {
        d.turns[0].frames[0].service_call = ServiceCall{"FindRestaurants", {}};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[0].frames[0].service_call");
    }

    SUBCASE("results without a call are refused") {
        d.turns[3].frames[0].service_results =
            std::vector<std::map<std::string, std::string>>{};
        const auto report = validate_dialogue(d, schemas, vocab);
        REQUIRE_FALSE(report.ok());
        CHECK(report.errors[0].path == "turns[3].frames[0].service_results");
    }
}

TEST_CASE("corpus validation reports duplicate dialogue ids") {
    auto [schemas, corpus] = load_fixture();
    corpus.push_back(corpus[0]);
    const auto report = validate_corpus(corpus, schemas, ActVocabulary::standard());
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].path == "dialogues[3].dialogue_id");
    CHECK(report.errors[0].message ==
          "duplicate dialogue_id 'fx_00001' (first used at dialogues[0])");
}

TEST_CASE("dialogue validation prefixes corpus paths with ids") {
    auto [schemas, corpus] = load_fixture();
    corpus[1].turns[0].frames[0].state->active_intent = "Ghost";
    const auto report = validate_corpus(corpus, schemas, ActVocabulary::standard());
    REQUIRE(report.errors.size() == 1);
    CHECK(report.errors[0].path ==
          "dialogues[1] (fx_00002).turns[0].frames[0].state.active_intent");
}
