#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sgdkit/dialogue.hpp"
#include "sgdkit/entity_table.hpp"
#include "sgdkit/rng.hpp"

namespace sgdkit {

// The dialogue automaton cannot make progress (typically a transition
// distribution whose every option is illegal in the current state).
class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Tunable behaviour of the two simulated agents. Distributions are
// value -> weight; weights are renormalized over the options legal in the
// moment, so they need not sum to one.
struct AutomatonConfig {
    std::size_t max_turns = 50;   // hard cap; exceeding it aborts the attempt
    std::size_t max_intents = 5;  // upper bound for scenario_length keys

    // How many goals (service/intent items) a scenario pursues.
    std::map<std::size_t, double> scenario_length{{1, 0.4}, {2, 0.35}, {3, 0.25}};
    // Required constraints volunteered in the opening turn.
    std::map<std::size_t, double> initial_informs{{0, 0.25}, {1, 0.5}, {2, 0.25}};
    // Slots the system asks for per request turn.
    std::map<std::size_t, double> requests_per_turn{{1, 0.75}, {2, 0.25}};
    // Result slots the user asks about per question turn.
    std::map<std::size_t, double> result_slots_requested{{1, 0.75}, {2, 0.25}};

    std::map<std::string, double> user_respond_to_offer{
        {"SELECT", 0.6}, {"REQUEST", 0.25}, {"REQUEST_ALTS", 0.15}};
    std::map<std::string, double> user_respond_to_confirm{{"AFFIRM", 0.85}, {"NEGATE", 0.15}};

    double inform_count_prob = 0.4;  // announce the match count with the first offer
    double optional_slot_prob = 0.35; // constrain each optional slot
    double dontcare_prob = 0.15;      // a constrained optional slot is "dontcare"
    double carryover_prob = 0.8;      // reuse an aliased value across services
    double offer_intent_prob = 0.3;   // propose the follow-up transactional intent

    std::size_t max_offer_alternatives = 2; // REQUEST_ALTS budget per goal
    std::size_t max_negations = 1;          // NEGATE budget per confirmation

    // Slot names treated as the same concept when carrying values across
    // services ("city" in one service, "location" in another).
    std::vector<std::vector<std::string>> carryover_aliases{{"city", "location"},
                                                            {"cuisine", "food_type"}};

    // Acts the agents may emit; acts outside it are never chosen.
    ActVocabulary vocabulary = ActVocabulary::standard();

    static AutomatonConfig defaults() { return {}; }

    bool operator==(const AutomatonConfig&) const = default;
};

AutomatonConfig parse_automaton_config(std::string_view text, const ParseOptions& options = {},
                                       ValidationReport* diagnostics = nullptr);
ValidationReport validate_automaton_config(const AutomatonConfig& config);
ojson automaton_config_to_json(const AutomatonConfig& config);

// One surface template per (speaker, act), optionally specialized per slot.
// Placeholders: {value}, {slot}, {intent}, {count}.
struct ActTemplate {
    std::string pattern;
    // Used instead of `pattern` when the value is "dontcare" (the token
    // itself should not surface verbatim). Empty means no special form.
    std::string dontcare;
    std::map<std::string, std::string> by_slot;

    const std::string& for_slot(const std::string& slot) const {
        const auto it = by_slot.find(slot);
        return it == by_slot.end() ? pattern : it->second;
    }

    bool operator==(const ActTemplate&) const = default;
};

struct TemplateSet {
    std::map<std::string, ActTemplate> user;
    std::map<std::string, ActTemplate> system;

    static TemplateSet standard();

    bool operator==(const TemplateSet&) const = default;
};

TemplateSet parse_templates(std::string_view text, const ParseOptions& options = {},
                            ValidationReport* diagnostics = nullptr);
// Checks placeholder use against each act's needs (value-bearing acts must
// surface {value}, requests {slot}, and so on) for the acts the given
// vocabulary admits.
ValidationReport validate_templates(const TemplateSet& templates,
                                    const ActVocabulary& vocabulary);
ojson templates_to_json(const TemplateSet& templates);

// One goal: pursue `intent` on `service` under the given constraints.
// Constraint values are sampled from a concrete entity row, so a
// conforming dialogue always finds at least one match.
struct ScenarioItem {
    std::string service;
    std::string intent;
    std::map<std::string, std::string> constraints;

    bool operator==(const ScenarioItem&) const = default;
};

using Scenario = std::vector<ScenarioItem>;

Scenario sample_scenario(Rng& rng, const ServiceEngine& engine, const AutomatonConfig& config);

// Checks that the schemas and tables can drive the automaton: searchable
// intents need result slots, and so on. generate_corpus refuses on errors.
ValidationReport simulation_preconditions(const ServiceEngine& engine);

// Plays one dialogue: alternating fully-annotated turns from the opening
// intent to the goodbye exchange. Deterministic given the rng state.
Dialogue simulate_dialogue(const ServiceEngine& engine, const AutomatonConfig& config,
                           const TemplateSet& templates, const Scenario& scenario, Rng& rng,
                           std::string dialogue_id);

// Canonical delexicalized act sequence: one segment per turn with speaker,
// service, and act:slot tokens (intent acts keep their intent values).
// Dialogues with equal signatures exercise the same conversational flow.
std::string flow_signature(const Dialogue& dialogue);

inline std::uint64_t flow_digest(const Dialogue& dialogue) {
    return fnv1a64(flow_signature(dialogue));
}

struct GenOptions {
    std::uint64_t seed = 0;
    std::size_t count = 1;
    // Keep at most this many dialogues per distinct flow signature.
    std::size_t flow_quota = 1;
    // Attempt budget = count * attempt_factor; generation stops early when
    // the budget runs out and reports the shortfall.
    std::size_t attempt_factor = 20;
    std::size_t jobs = 1;
};

struct GenResult {
    Corpus corpus;
    std::size_t attempts = 0;
    std::size_t duplicates = 0; // attempts discarded by the flow quota
    std::size_t shortfall = 0;  // requested dialogues the budget could not fill
};

// Generates dialogues sim_00001, sim_00002, ... Attempts draw independent
// sub-seeds, so the output is identical for any job count.
GenResult generate_corpus(const ServiceEngine& engine, const AutomatonConfig& config,
                          const TemplateSet& templates, const GenOptions& options);

} // namespace sgdkit
