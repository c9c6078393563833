#include "sgdkit/simulator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <future>
#include <sstream>
#include <utility>

#include "sgdkit/utf8.hpp"

namespace sgdkit {

namespace {

double expect_number(const ojson& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path + ": expected a number");
    return v.get<double>();
}

double expect_probability(const ojson& obj, const char* key, const std::string& path) {
    const double p = expect_number(expect_field(obj, key, path), path + "." + key);
    return p;
}

std::size_t expect_size(const ojson& v, const std::string& path) {
    if (!v.is_number_unsigned()) throw ParseError(path + ": expected a non-negative integer");
    return v.get<std::size_t>();
}

std::map<std::size_t, double> parse_size_dist(const ojson& v, const std::string& path) {
    expect_object(v, path);
    std::map<std::size_t, double> out;
    for (const auto& [key, weight] : v.items()) {
        std::size_t n = 0;
        try {
            std::size_t used = 0;
            n = std::stoul(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ParseError(path + ": key '" + key + "' is not a non-negative integer");
        }
        out[n] = expect_number(weight, path + "." + key);
    }
    return out;
}

std::map<std::string, double> parse_act_dist(const ojson& v, const std::string& path) {
    expect_object(v, path);
    std::map<std::string, double> out;
    for (const auto& [key, weight] : v.items())
        out[key] = expect_number(weight, path + "." + key);
    return out;
}

ojson size_dist_to_json(const std::map<std::size_t, double>& dist) {
    ojson out = ojson::object();
    for (const auto& [n, w] : dist) out[std::to_string(n)] = w;
    return out;
}

template <typename K>
K weighted_pick(Rng& rng, const std::map<K, double>& dist, const std::string& context) {
    double total = 0.0;
    for (const auto& [option, weight] : dist) total += weight;
    if (!(total > 0.0))
        throw SimulationError("automaton deadlock: no legal option while choosing " + context);
    double x = rng.unit() * total;
    for (const auto& [option, weight] : dist) {
        x -= weight;
        if (x < 0.0) return option;
    }
    return dist.rbegin()->first;
}

// "FindRestaurants" -> "find restaurants", "price_range" -> "price range".
std::string humanize(std::string_view name) {
    std::string out;
    for (std::size_t i = 0; i < name.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(name[i]);
        if (c == '_') {
            out += ' ';
        } else if (std::isupper(c)) {
            if (i > 0 && name[i - 1] != '_' &&
                !std::isupper(static_cast<unsigned char>(name[i - 1])))
                out += ' ';
            out += static_cast<char>(std::tolower(c));
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

struct RenderedAct {
    std::string text;
    bool has_value = false;
    std::size_t value_start = 0; // code points within `text`
    std::size_t value_end = 0;
};

RenderedAct render_pattern(const std::string& pattern,
                           const std::map<std::string, std::string>& subs) {
    RenderedAct out;
    std::size_t i = 0;
    while (i < pattern.size()) {
        const auto open = pattern.find('{', i);
        if (open == std::string::npos) {
            out.text.append(pattern, i, std::string::npos);
            break;
        }
        out.text.append(pattern, i, open - i);
        const auto close = pattern.find('}', open);
        if (close == std::string::npos) {
            out.text.append(pattern, open, std::string::npos);
            break;
        }
        const std::string key = pattern.substr(open, close - open + 1);
        const auto it = subs.find(key);
        if (it == subs.end()) {
            out.text += key; // unknown placeholder; validation rejects these
        } else {
            if (key == "{value}" && !out.has_value) {
                out.has_value = true;
                out.value_start = utf8::count(out.text);
                out.value_end = out.value_start + utf8::count(it->second);
            }
            out.text += it->second;
        }
        i = close + 1;
    }
    return out;
}

const std::set<std::string> kValueActs{"INFORM", "OFFER", "CONFIRM", "SELECT"};
const std::set<std::string> kIntentActs{"INFORM_INTENT", "OFFER_INTENT"};
const std::set<std::string> kKnownPlaceholders{"{value}", "{slot}", "{intent}", "{count}"};

void check_pattern(ValidationReport& report, const std::string& path, const std::string& act,
                   const std::string& pattern, bool value_required) {
    std::size_t i = 0;
    bool has_value = false;
    while ((i = pattern.find('{', i)) != std::string::npos) {
        const auto close = pattern.find('}', i);
        if (close == std::string::npos) {
            report.error(path, "unterminated placeholder");
            return;
        }
        const std::string key = pattern.substr(i, close - i + 1);
        if (!kKnownPlaceholders.count(key))
            report.error(path, "unknown placeholder " + key);
        if (key == "{value}") has_value = true;
        i = close + 1;
    }
    if (value_required && !has_value)
        report.error(path, act + " template must surface {value}");
    if (act == "REQUEST" && pattern.find("{slot}") == std::string::npos)
        report.error(path, "REQUEST template must surface {slot}");
    if (act == "INFORM_COUNT" && pattern.find("{count}") == std::string::npos)
        report.error(path, "INFORM_COUNT template must surface {count}");
    if (kIntentActs.count(act) && pattern.find("{intent}") == std::string::npos)
        report.error(path, act + " template must surface {intent}");
}

void check_template_side(ValidationReport& report, const std::string& side,
                         const std::map<std::string, ActTemplate>& templates,
                         const std::set<std::string>& acts) {
    for (const auto& act : acts)
        if (!templates.count(act))
            report.error(side, "no template for act " + act);
    for (const auto& [act, tpl] : templates) {
        const std::string path = side + "." + act;
        if (!acts.count(act)) report.warn(path, "template for an act outside the vocabulary");
        const bool needs_value = kValueActs.count(act) > 0;
        if (tpl.pattern.empty())
            report.error(path, "empty template");
        else
            check_pattern(report, path, act, tpl.pattern, needs_value);
        if (!tpl.dontcare.empty())
            check_pattern(report, path + ".dontcare", act, tpl.dontcare, false);
        for (const auto& [slot, pattern] : tpl.by_slot) {
            if (pattern.empty())
                report.error(path + ".by_slot." + slot, "empty template");
            else
                check_pattern(report, path + ".by_slot." + slot, act, pattern, needs_value);
        }
    }
}

ActTemplate parse_act_template(const ojson& v, const std::string& path) {
    ActTemplate out;
    if (v.is_string()) {
        out.pattern = v.get<std::string>();
        return out;
    }
    expect_object(v, path);
    check_fields(v, {"pattern", "dontcare", "by_slot"}, path, {}, nullptr);
    out.pattern = expect_string(v, "pattern", path);
    if (v.contains("dontcare")) out.dontcare = expect_string(v["dontcare"], path + ".dontcare");
    if (v.contains("by_slot")) {
        const ojson& by = expect_object(v["by_slot"], path + ".by_slot");
        for (const auto& [slot, pattern] : by.items())
            out.by_slot[slot] = expect_string(pattern, path + ".by_slot." + slot);
    }
    return out;
}

ojson act_template_to_json(const ActTemplate& tpl) {
    if (tpl.dontcare.empty() && tpl.by_slot.empty()) return tpl.pattern;
    ojson out = ojson::object();
    out["pattern"] = tpl.pattern;
    if (!tpl.dontcare.empty()) out["dontcare"] = tpl.dontcare;
    if (!tpl.by_slot.empty()) {
        ojson by = ojson::object();
        for (const auto& [slot, pattern] : tpl.by_slot) by[slot] = pattern;
        out["by_slot"] = by;
    }
    return out;
}

} // namespace

AutomatonConfig parse_automaton_config(std::string_view text, const ParseOptions& options,
                                       ValidationReport* diagnostics) {
    const ojson root = parse_json_text(text);
    const std::string path = "automaton";
    expect_object(root, path);
    check_fields(root,
                 {"max_turns", "max_intents", "scenario_length", "initial_informs",
                  "requests_per_turn", "result_slots_requested", "user_respond_to_offer",
                  "user_respond_to_confirm", "inform_count_prob", "optional_slot_prob",
                  "dontcare_prob", "carryover_prob", "offer_intent_prob",
                  "max_offer_alternatives", "max_negations", "carryover_aliases", "user_acts",
                  "system_acts"},
                 path, options, diagnostics);

    AutomatonConfig out;
    out.max_turns = expect_size(expect_field(root, "max_turns", path), path + ".max_turns");
    out.max_intents = expect_size(expect_field(root, "max_intents", path), path + ".max_intents");
    out.scenario_length =
        parse_size_dist(expect_field(root, "scenario_length", path), path + ".scenario_length");
    out.initial_informs =
        parse_size_dist(expect_field(root, "initial_informs", path), path + ".initial_informs");
    out.requests_per_turn = parse_size_dist(expect_field(root, "requests_per_turn", path),
                                            path + ".requests_per_turn");
    out.result_slots_requested = parse_size_dist(
        expect_field(root, "result_slots_requested", path), path + ".result_slots_requested");
    out.user_respond_to_offer = parse_act_dist(expect_field(root, "user_respond_to_offer", path),
                                               path + ".user_respond_to_offer");
    out.user_respond_to_confirm = parse_act_dist(
        expect_field(root, "user_respond_to_confirm", path), path + ".user_respond_to_confirm");
    out.inform_count_prob = expect_probability(root, "inform_count_prob", path);
    out.optional_slot_prob = expect_probability(root, "optional_slot_prob", path);
    out.dontcare_prob = expect_probability(root, "dontcare_prob", path);
    out.carryover_prob = expect_probability(root, "carryover_prob", path);
    out.offer_intent_prob = expect_probability(root, "offer_intent_prob", path);
    out.max_offer_alternatives = expect_size(expect_field(root, "max_offer_alternatives", path),
                                             path + ".max_offer_alternatives");
    out.max_negations =
        expect_size(expect_field(root, "max_negations", path), path + ".max_negations");

    out.carryover_aliases.clear();
    const ojson& aliases =
        expect_array(expect_field(root, "carryover_aliases", path), path + ".carryover_aliases");
    for (std::size_t i = 0; i < aliases.size(); ++i)
        out.carryover_aliases.push_back(expect_string_array(
            aliases[i], path + ".carryover_aliases[" + std::to_string(i) + "]"));

    if (root.contains("user_acts")) {
        const auto acts = expect_string_array(root["user_acts"], path + ".user_acts");
        out.vocabulary.user_acts = std::set<std::string>(acts.begin(), acts.end());
    }
    if (root.contains("system_acts")) {
        const auto acts = expect_string_array(root["system_acts"], path + ".system_acts");
        out.vocabulary.system_acts = std::set<std::string>(acts.begin(), acts.end());
    }
    return out;
}

ojson automaton_config_to_json(const AutomatonConfig& config) {
    ojson out = ojson::object();
    out["max_turns"] = config.max_turns;
    out["max_intents"] = config.max_intents;
    out["scenario_length"] = size_dist_to_json(config.scenario_length);
    out["initial_informs"] = size_dist_to_json(config.initial_informs);
    out["requests_per_turn"] = size_dist_to_json(config.requests_per_turn);
    out["result_slots_requested"] = size_dist_to_json(config.result_slots_requested);
    out["user_respond_to_offer"] = config.user_respond_to_offer;
    out["user_respond_to_confirm"] = config.user_respond_to_confirm;
    out["inform_count_prob"] = config.inform_count_prob;
    out["optional_slot_prob"] = config.optional_slot_prob;
    out["dontcare_prob"] = config.dontcare_prob;
    out["carryover_prob"] = config.carryover_prob;
    out["offer_intent_prob"] = config.offer_intent_prob;
    out["max_offer_alternatives"] = config.max_offer_alternatives;
    out["max_negations"] = config.max_negations;
    out["carryover_aliases"] = config.carryover_aliases;
    out["user_acts"] =
        std::vector<std::string>(config.vocabulary.user_acts.begin(),
                                 config.vocabulary.user_acts.end());
    out["system_acts"] =
        std::vector<std::string>(config.vocabulary.system_acts.begin(),
                                 config.vocabulary.system_acts.end());
    return out;
}

namespace {

void check_dist_weights(ValidationReport& report, const std::string& path,
                        const std::map<std::string, double>& dist) {
    double total = 0.0;
    for (const auto& [option, weight] : dist) {
        if (!(weight >= 0.0)) report.error(path + "." + option, "weight must be non-negative");
        total += weight;
    }
    if (dist.empty() || !(total > 0.0)) report.error(path, "distribution has no positive weight");
}

void check_dist_weights(ValidationReport& report, const std::string& path,
                        const std::map<std::size_t, double>& dist) {
    double total = 0.0;
    for (const auto& [option, weight] : dist) {
        if (!(weight >= 0.0))
            report.error(path + "." + std::to_string(option), "weight must be non-negative");
        total += weight;
    }
    if (dist.empty() || !(total > 0.0)) report.error(path, "distribution has no positive weight");
}

void check_probability(ValidationReport& report, const std::string& path, double p) {
    if (!(p >= 0.0 && p <= 1.0)) report.error(path, "probability must be within [0, 1]");
}

} // namespace

ValidationReport validate_automaton_config(const AutomatonConfig& config) {
    ValidationReport report;
    if (config.max_turns < 8)
        report.error("max_turns", "must be at least 8 to fit a minimal dialogue");
    if (config.max_intents < 1) report.error("max_intents", "must be at least 1");

    check_dist_weights(report, "scenario_length", config.scenario_length);
    for (const auto& [n, weight] : config.scenario_length) {
        if (n < 1)
            report.error("scenario_length", "a scenario needs at least one goal");
        else if (n > config.max_intents && weight > 0.0)
            report.error("scenario_length." + std::to_string(n), "exceeds max_intents");
    }
    check_dist_weights(report, "initial_informs", config.initial_informs);
    check_dist_weights(report, "requests_per_turn", config.requests_per_turn);
    for (const auto& [n, weight] : config.requests_per_turn)
        if (n < 1 && weight > 0.0)
            report.error("requests_per_turn.0", "a request turn must ask for at least one slot");
    check_dist_weights(report, "result_slots_requested", config.result_slots_requested);
    for (const auto& [n, weight] : config.result_slots_requested)
        if (n < 1 && weight > 0.0)
            report.error("result_slots_requested.0",
                         "a question turn must ask about at least one slot");

    check_dist_weights(report, "user_respond_to_offer", config.user_respond_to_offer);
    for (const auto& [act, weight] : config.user_respond_to_offer)
        if (act != "SELECT" && act != "REQUEST" && act != "REQUEST_ALTS")
            report.error("user_respond_to_offer." + act, "not a response to an offer");
    {
        const auto it = config.user_respond_to_offer.find("SELECT");
        if (it == config.user_respond_to_offer.end() || !(it->second > 0.0))
            report.error("user_respond_to_offer.SELECT",
                         "must have positive weight (the only always-legal response)");
    }
    check_dist_weights(report, "user_respond_to_confirm", config.user_respond_to_confirm);
    for (const auto& [act, weight] : config.user_respond_to_confirm)
        if (act != "AFFIRM" && act != "NEGATE")
            report.error("user_respond_to_confirm." + act, "not a response to a confirmation");
    {
        const auto it = config.user_respond_to_confirm.find("AFFIRM");
        if (it == config.user_respond_to_confirm.end() || !(it->second > 0.0))
            report.error("user_respond_to_confirm.AFFIRM",
                         "must have positive weight (the only always-legal response)");
    }

    check_probability(report, "inform_count_prob", config.inform_count_prob);
    check_probability(report, "optional_slot_prob", config.optional_slot_prob);
    check_probability(report, "dontcare_prob", config.dontcare_prob);
    check_probability(report, "carryover_prob", config.carryover_prob);
    check_probability(report, "offer_intent_prob", config.offer_intent_prob);

    std::set<std::string> alias_seen;
    for (std::size_t i = 0; i < config.carryover_aliases.size(); ++i) {
        const auto& group = config.carryover_aliases[i];
        const std::string path = "carryover_aliases[" + std::to_string(i) + "]";
        if (group.size() < 2) report.error(path, "an alias group needs at least two slot names");
        for (const auto& slot : group) {
            if (slot.empty()) report.error(path, "empty slot name");
            if (!alias_seen.insert(slot).second)
                report.error(path, "slot '" + slot + "' appears in more than one alias group");
        }
    }

    for (const char* act : {"INFORM_INTENT", "INFORM", "SELECT", "AFFIRM", "THANK_YOU"})
        if (!config.vocabulary.user_acts.count(act))
            report.error("user_acts", std::string("the automaton cannot run without ") + act);
    for (const char* act :
         {"REQUEST", "OFFER", "CONFIRM", "NOTIFY_SUCCESS", "NOTIFY_FAILURE", "REQ_MORE",
          "GOODBYE"})
        if (!config.vocabulary.system_acts.count(act))
            report.error("system_acts", std::string("the automaton cannot run without ") + act);
    return report;
}

TemplateSet TemplateSet::standard() {
    TemplateSet t;
    t.user["INFORM_INTENT"] = {"I would like to {intent}.", "", {}};
    t.user["AFFIRM_INTENT"] = {"Yes, please go ahead.", "", {}};
    t.user["NEGATE_INTENT"] = {"No, not right now.", "", {}};
    t.user["INFORM"] = {"I want the {slot} to be {value}.", "Any {slot} is fine.", {}};
    t.user["REQUEST"] = {"What is the {slot}?", "", {}};
    t.user["SELECT"] = {"{value} sounds perfect.", "", {}};
    t.user["REQUEST_ALTS"] = {"Could you show me something else?", "", {}};
    t.user["AFFIRM"] = {"Yes, that works for me.", "", {}};
    t.user["NEGATE"] = {"No, that is not quite right.", "", {}};
    t.user["THANK_YOU"] = {"Thank you, that will be all.", "", {}};
    t.user["GOODBYE"] = {"Goodbye!", "", {}};

    t.system["REQUEST"] = {"Which {slot} would you like?", "", {}};
    t.system["OFFER"] = {"How about {value} for the {slot}?",
                         "",
                         {{"restaurant_name", "I found a nice place called {value}."},
                          {"event_name", "There is {value} you might enjoy."}}};
    t.system["INFORM"] = {"The {slot} is {value}.", "", {}};
    t.system["INFORM_COUNT"] = {"I found {count} matching options.", "", {}};
    t.system["CONFIRM"] = {"Please confirm: the {slot} is {value}.", "", {}};
    t.system["OFFER_INTENT"] = {"Would you like to {intent}?", "", {}};
    t.system["NOTIFY_SUCCESS"] = {"All done, your request went through.", "", {}};
    t.system["NOTIFY_FAILURE"] = {"Sorry, I could not find anything that matches.", "", {}};
    t.system["REQ_MORE"] = {"Is there anything else I can help with?", "", {}};
    t.system["GOODBYE"] = {"Have a great day!", "", {}};
    return t;
}

TemplateSet parse_templates(std::string_view text, const ParseOptions& options,
                            ValidationReport* diagnostics) {
    const ojson root = parse_json_text(text);
    const std::string path = "templates";
    expect_object(root, path);
    check_fields(root, {"user", "system"}, path, options, diagnostics);
    TemplateSet out;
    const ojson& user = expect_object(expect_field(root, "user", path), path + ".user");
    for (const auto& [act, v] : user.items())
        out.user[act] = parse_act_template(v, path + ".user." + act);
    const ojson& system = expect_object(expect_field(root, "system", path), path + ".system");
    for (const auto& [act, v] : system.items())
        out.system[act] = parse_act_template(v, path + ".system." + act);
    return out;
}

ValidationReport validate_templates(const TemplateSet& templates,
                                    const ActVocabulary& vocabulary) {
    ValidationReport report;
    check_template_side(report, "user", templates.user, vocabulary.user_acts);
    check_template_side(report, "system", templates.system, vocabulary.system_acts);
    return report;
}

ojson templates_to_json(const TemplateSet& templates) {
    ojson out = ojson::object();
    ojson user = ojson::object();
    for (const auto& [act, tpl] : templates.user) user[act] = act_template_to_json(tpl);
    out["user"] = user;
    ojson system = ojson::object();
    for (const auto& [act, tpl] : templates.system) system[act] = act_template_to_json(tpl);
    out["system"] = system;
    return out;
}

ValidationReport simulation_preconditions(const ServiceEngine& engine) {
    ValidationReport report;
    for (const auto& schema : engine.schemas()) {
        const std::string path = schema.service_name;
        if (schema.intents.empty()) report.error(path, "service declares no intents");
        const EntityTable* table = nullptr;
        try {
            table = &engine.table(schema.service_name);
        } catch (const CallError&) {
            report.error(path, "no entity table loaded for this service");
            continue;
        }
        for (const auto& intent : schema.intents) {
            if (intent.is_transactional) continue;
            if (intent.result_slots.empty()) {
                report.error(path + "." + intent.name,
                             "searchable intent has no result slots to offer");
                continue;
            }
            for (const auto& slot : intent.result_slots)
                if (!table->column_index(slot))
                    report.error(path + "." + intent.name,
                                 "result slot '" + slot + "' is not an entity table column");
        }
    }
    return report;
}

namespace {

const std::vector<std::string>* alias_group_for(const AutomatonConfig& config,
                                                const std::string& slot) {
    for (const auto& group : config.carryover_aliases)
        for (const auto& name : group)
            if (name == slot) return &group;
    return nullptr;
}

} // namespace

Scenario sample_scenario(Rng& rng, const ServiceEngine& engine, const AutomatonConfig& config) {
    const auto& schemas = engine.schemas();
    if (schemas.empty()) throw SimulationError("no services available for scenario sampling");

    const std::size_t goals = weighted_pick(rng, config.scenario_length, "scenario_length");
    Scenario scenario;
    // Values already fixed earlier in the scenario, keyed by the first name
    // of their alias group.
    std::map<std::string, std::string> alias_values;

    for (std::size_t k = 0; k < goals; ++k) {
        const ServiceSchema* schema = nullptr;
        const IntentDef* intent = nullptr;
        for (int tries = 0; tries < 16; ++tries) {
            schema = &schemas[rng.below(schemas.size())];
            if (schema->intents.empty())
                throw SimulationError("service '" + schema->service_name +
                                      "' declares no intents");
            intent = &schema->intents[rng.below(schema->intents.size())];
            if (scenario.empty() || scenario.back().service != schema->service_name ||
                scenario.back().intent != intent->name)
                break;
        }
        const EntityTable& table = engine.table(schema->service_name);

        // When a transactional goal follows a search on the same service, its
        // column-backed slots resolve at runtime from the entity the user
        // picks; only the remaining (categorical, off-table) slots need
        // pre-sampled values.
        bool follows_search = false;
        if (intent->is_transactional && !scenario.empty() &&
            scenario.back().service == schema->service_name) {
            const IntentDef* prev = schema->find_intent(scenario.back().intent);
            follows_search = prev != nullptr && !prev->is_transactional;
        }

        std::vector<std::string> needed;
        for (const auto& slot : intent->required_slots)
            if (!(follows_search && table.column_index(slot))) needed.push_back(slot);

        // Carry aliased values over from earlier goals where the table allows.
        std::vector<std::size_t> candidates(table.rows.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i] = i;
        std::map<std::string, std::string> fixed;
        for (const auto& slot : needed) {
            const auto col = table.column_index(slot);
            if (!col) continue;
            const auto* group = alias_group_for(config, slot);
            if (!group) continue;
            const auto carried = alias_values.find(group->front());
            if (carried == alias_values.end()) continue;
            if (!rng.chance(config.carryover_prob)) continue;
            std::vector<std::size_t> narrowed;
            for (const std::size_t row : candidates)
                if (table.rows[row][*col] == carried->second) narrowed.push_back(row);
            if (!narrowed.empty()) {
                candidates = std::move(narrowed);
                fixed[slot] = carried->second;
            }
        }
        if (candidates.empty())
            throw SimulationError("entity table for '" + schema->service_name + "' is empty");
        const std::size_t target = candidates[rng.below(candidates.size())];

        ScenarioItem item;
        item.service = schema->service_name;
        item.intent = intent->name;
        auto sample_value = [&](const std::string& slot) -> std::string {
            if (const auto fixed_it = fixed.find(slot); fixed_it != fixed.end())
                return fixed_it->second;
            if (const std::string* cell = table.cell(target, slot)) return *cell;
            const SlotDef* def = schema->find_slot(slot);
            if (def != nullptr && def->is_categorical && !def->possible_values.empty())
                return def->possible_values[rng.below(def->possible_values.size())];
            throw SimulationError("no value source for slot '" + slot + "' of intent '" +
                                  intent->name + "'");
        };
        for (const auto& slot : needed) item.constraints[slot] = sample_value(slot);
        for (const auto& [slot, unused_default] : intent->optional_slots) {
            if (!rng.chance(config.optional_slot_prob)) continue;
            item.constraints[slot] =
                rng.chance(config.dontcare_prob) ? std::string(kDontCare) : sample_value(slot);
        }

        for (const auto& [slot, value] : item.constraints) {
            if (value == kDontCare) continue;
            if (const auto* group = alias_group_for(config, slot))
                alias_values[group->front()] = value;
        }
        scenario.push_back(std::move(item));
    }
    return scenario;
}

namespace {

// Everything the system has learned about one service: arguments the user
// committed to, the entity they picked, and the state snapshot fields.
struct ServiceMemory {
    std::map<std::string, std::string> informed;
    std::map<std::string, std::string> selected_row;
    std::map<std::string, std::vector<std::string>> values; // user state slot_values
    std::string active_intent = kNoneIntent;
};

// Progress on the current scenario goal.
struct GoalRun {
    const ScenarioItem* item = nullptr;
    const ServiceSchema* schema = nullptr;
    const IntentDef* intent = nullptr;
    std::vector<std::string> pending_request; // slots the system just asked for
    std::vector<std::string> asked_results;   // result slots the user just asked about
    std::set<std::string> results_seen;       // result slots already covered
    std::vector<std::map<std::string, std::string>> matches;
    std::string offer_slot;
    std::size_t offer_index = 0;
    std::size_t alts_used = 0;
    std::size_t negations = 0;
    bool called = false;
    bool offered = false;
    bool advance_offer = false; // REQUEST_ALTS pending
    bool fulfilled = false;     // search goal met (or failed)
    bool failed = false;
    bool confirm_pending = false;
    bool affirmed = false;
    bool renegotiated = false; // NEGATE received; re-confirm
    std::vector<std::pair<std::string, std::string>> confirm_args;
};

enum class UserCue { Start, Answer, Offer, Confirm, OfferIntent, Proceed };

class Simulation {
public:
    Simulation(const ServiceEngine& engine, const AutomatonConfig& config,
               const TemplateSet& templates, const Scenario& scenario, Rng& rng)
        : engine_(engine), cfg_(config), tpl_(templates), scenario_(scenario), rng_(rng) {}

    Dialogue run(std::string dialogue_id) {
        if (scenario_.empty()) throw SimulationError("cannot simulate an empty scenario");
        Dialogue d;
        d.dialogue_id = std::move(dialogue_id);
        std::set<std::string> services;
        for (const auto& item : scenario_) services.insert(item.service);
        d.services.assign(services.begin(), services.end());

        begin_goal(0);
        while (!ended_) {
            if (d.turns.size() >= cfg_.max_turns)
                throw SimulationError("dialogue exceeded max_turns=" +
                                      std::to_string(cfg_.max_turns));
            if (d.turns.size() % 2 == 0)
                d.turns.push_back(user_turn());
            else
                d.turns.push_back(system_turn());
        }
        return d;
    }

private:
    const ServiceEngine& engine_;
    const AutomatonConfig& cfg_;
    const TemplateSet& tpl_;
    const Scenario& scenario_;
    Rng& rng_;

    std::map<std::string, ServiceMemory> memory_;
    std::size_t cur_ = 0;
    GoalRun goal_;
    UserCue cue_ = UserCue::Start;
    bool user_closed_ = false;
    bool ended_ = false;

    ServiceMemory& mem() { return memory_[goal_.item->service]; }

    bool user_allows(const std::string& act) const {
        return cfg_.vocabulary.user_acts.count(act) > 0;
    }
    bool system_allows(const std::string& act) const {
        return cfg_.vocabulary.system_acts.count(act) > 0;
    }

    void begin_goal(std::size_t index) {
        cur_ = index;
        goal_ = GoalRun{};
        goal_.item = &scenario_[index];
        goal_.schema = find_service(engine_.schemas(), goal_.item->service);
        if (goal_.schema == nullptr)
            throw SimulationError("scenario names unknown service '" + goal_.item->service + "'");
        goal_.intent = goal_.schema->find_intent(goal_.item->intent);
        if (goal_.intent == nullptr)
            throw SimulationError("scenario names unknown intent '" + goal_.item->intent + "'");
        if (!goal_.intent->is_transactional) {
            for (const auto& slot : goal_.intent->result_slots)
                if (!goal_.item->constraints.count(slot)) {
                    goal_.offer_slot = slot;
                    break;
                }
            if (goal_.offer_slot.empty()) goal_.offer_slot = goal_.intent->result_slots.front();
        }
    }

    std::vector<std::string> missing_required() const {
        std::vector<std::string> out;
        const auto it = memory_.find(goal_.item->service);
        for (const auto& slot : goal_.intent->required_slots)
            if (it == memory_.end() || !it->second.informed.count(slot)) out.push_back(slot);
        return out;
    }

    // Whether every required slot of scenario goal `index` has some value
    // source left (an unfulfilled search leaves a dependent booking without
    // an entity to act on).
    bool can_pursue(std::size_t index) const {
        const ScenarioItem& item = scenario_[index];
        const ServiceSchema* schema = find_service(engine_.schemas(), item.service);
        if (schema == nullptr)
            throw SimulationError("scenario names unknown service '" + item.service + "'");
        const IntentDef* intent = schema->find_intent(item.intent);
        if (intent == nullptr)
            throw SimulationError("scenario names unknown intent '" + item.intent + "'");
        const auto it = memory_.find(item.service);
        for (const auto& slot : intent->required_slots) {
            if (item.constraints.count(slot)) continue;
            if (it != memory_.end() &&
                (it->second.informed.count(slot) || it->second.selected_row.count(slot)))
                continue;
            const SlotDef* def = schema->find_slot(slot);
            if (def != nullptr && def->is_categorical && !def->possible_values.empty()) continue;
            return false;
        }
        return true;
    }

    // The value the user gives when a slot comes up: the scenario constraint,
    // the picked entity's cell, or (for categorical slots) any legal value.
    std::string value_for(const std::string& slot) {
        if (const auto it = goal_.item->constraints.find(slot);
            it != goal_.item->constraints.end())
            return it->second;
        const auto& selected = mem().selected_row;
        if (const auto it = selected.find(slot); it != selected.end()) return it->second;
        const SlotDef* def = goal_.schema->find_slot(slot);
        if (def != nullptr && def->is_categorical && !def->possible_values.empty())
            return def->possible_values[rng_.below(def->possible_values.size())];
        throw SimulationError("no value available for slot '" + slot + "' of intent '" +
                              goal_.item->intent + "'");
    }

    void commit(const std::string& slot, const std::string& value) {
        auto& m = mem();
        m.informed[slot] = value;
        m.values[slot] = {value};
    }

    std::map<std::string, std::string> call_args() const {
        std::map<std::string, std::string> out;
        for (const auto& [slot, value] : memory_.at(goal_.item->service).informed)
            if (goal_.intent->allows_argument(slot)) out[slot] = value;
        return out;
    }

    DialogueAct intent_act(const std::string& act, const std::string& intent_name) const {
        return DialogueAct{act, kIntentSlot, {intent_name}, std::nullopt};
    }

    // --- user side ---

    Turn user_turn() {
        std::vector<DialogueAct> acts;
        std::set<std::string> requested;

        switch (cue_) {
        case UserCue::Start: {
            start_goal_acts(acts);
            break;
        }
        case UserCue::Answer: {
            for (const auto& slot : goal_.pending_request) {
                const std::string value = value_for(slot);
                acts.push_back(DialogueAct{"INFORM", slot, {value}, std::nullopt});
                commit(slot, value);
            }
            goal_.pending_request.clear();
            break;
        }
        case UserCue::Offer: {
            offer_response_acts(acts, requested);
            break;
        }
        case UserCue::Confirm: {
            confirm_response_acts(acts);
            break;
        }
        case UserCue::OfferIntent: {
            begin_goal(cur_ + 1);
            mem().active_intent = goal_.item->intent;
            acts.push_back(DialogueAct{"AFFIRM_INTENT", "", {}, std::nullopt});
            break;
        }
        case UserCue::Proceed: {
            std::size_t next = cur_ + 1;
            while (next < scenario_.size() && !can_pursue(next)) ++next;
            if (next < scenario_.size()) {
                begin_goal(next);
                start_goal_acts(acts);
            } else {
                acts.push_back(DialogueAct{"THANK_YOU", "", {}, std::nullopt});
                user_closed_ = true;
            }
            break;
        }
        }

        Turn turn = realize(Speaker::User, goal_.item->service, acts);
        FrameState state;
        state.active_intent = user_closed_ ? std::string(kNoneIntent) : mem().active_intent;
        state.requested_slots = requested;
        state.slot_values = mem().values;
        turn.frames[0].state = std::move(state);
        return turn;
    }

    void start_goal_acts(std::vector<DialogueAct>& acts) {
        mem().active_intent = goal_.item->intent;
        acts.push_back(intent_act("INFORM_INTENT", goal_.item->intent));

        std::vector<std::string> unsaid_required;
        for (const auto& slot : goal_.intent->required_slots)
            if (goal_.item->constraints.count(slot) && !mem().informed.count(slot))
                unsaid_required.push_back(slot);
        std::size_t volunteered =
            weighted_pick(rng_, cfg_.initial_informs, "initial_informs");
        volunteered = std::min(volunteered, unsaid_required.size());
        for (std::size_t i = 0; i < volunteered; ++i) {
            const std::string& slot = unsaid_required[i];
            const std::string& value = goal_.item->constraints.at(slot);
            acts.push_back(DialogueAct{"INFORM", slot, {value}, std::nullopt});
            commit(slot, value);
        }
        // Preferences over optional slots are volunteered up front.
        for (const auto& [slot, unused_default] : goal_.intent->optional_slots) {
            const auto it = goal_.item->constraints.find(slot);
            if (it == goal_.item->constraints.end() || mem().informed.count(slot)) continue;
            acts.push_back(DialogueAct{"INFORM", slot, {it->second}, std::nullopt});
            commit(slot, it->second);
        }
    }

    void offer_response_acts(std::vector<DialogueAct>& acts, std::set<std::string>& requested) {
        std::vector<std::string> askable;
        for (const auto& slot : goal_.intent->result_slots)
            if (slot != goal_.offer_slot && !goal_.item->constraints.count(slot) &&
                !goal_.results_seen.count(slot) && !mem().informed.count(slot))
                askable.push_back(slot);

        std::map<std::string, double> options;
        for (const auto& [act, weight] : cfg_.user_respond_to_offer) {
            if (act == "SELECT" && user_allows(act)) options[act] = weight;
            if (act == "REQUEST" && user_allows(act) && !askable.empty()) options[act] = weight;
            if (act == "REQUEST_ALTS" && user_allows(act) &&
                goal_.offer_index + 1 < goal_.matches.size() &&
                goal_.alts_used < cfg_.max_offer_alternatives)
                options[act] = weight;
        }
        const std::string choice = weighted_pick(rng_, options, "user_respond_to_offer");

        if (choice == "SELECT") {
            const std::string value = goal_.matches[goal_.offer_index].at(goal_.offer_slot);
            acts.push_back(DialogueAct{"SELECT", goal_.offer_slot, {value}, std::nullopt});
            commit(goal_.offer_slot, value);
            mem().selected_row = goal_.matches[goal_.offer_index];
            goal_.fulfilled = true;
        } else if (choice == "REQUEST") {
            std::size_t count =
                weighted_pick(rng_, cfg_.result_slots_requested, "result_slots_requested");
            count = std::min(count, askable.size());
            goal_.asked_results.assign(askable.begin(),
                                       askable.begin() + static_cast<std::ptrdiff_t>(count));
            for (const auto& slot : goal_.asked_results) {
                acts.push_back(DialogueAct{"REQUEST", slot, {}, std::nullopt});
                requested.insert(slot);
                goal_.results_seen.insert(slot);
            }
        } else { // REQUEST_ALTS
            acts.push_back(DialogueAct{"REQUEST_ALTS", "", {}, std::nullopt});
            ++goal_.alts_used;
            goal_.advance_offer = true;
        }
    }

    void confirm_response_acts(std::vector<DialogueAct>& acts) {
        // A negation picks a bookkeeping slot (not tied to the entity row)
        // whose value can change without losing the match.
        const EntityTable& table = engine_.table(goal_.item->service);
        std::vector<std::pair<std::string, std::string>> negatable;
        if (goal_.negations < cfg_.max_negations && user_allows("NEGATE")) {
            for (const auto& [slot, value] : goal_.confirm_args) {
                if (table.column_index(slot)) continue;
                const SlotDef* def = goal_.schema->find_slot(slot);
                if (def == nullptr || !def->is_categorical || def->possible_values.size() < 2)
                    continue;
                negatable.emplace_back(slot, value);
            }
        }

        std::map<std::string, double> options;
        for (const auto& [act, weight] : cfg_.user_respond_to_confirm) {
            if (act == "AFFIRM") options[act] = weight;
            if (act == "NEGATE" && !negatable.empty()) options[act] = weight;
        }
        const std::string choice = weighted_pick(rng_, options, "user_respond_to_confirm");

        if (choice == "AFFIRM") {
            acts.push_back(DialogueAct{"AFFIRM", "", {}, std::nullopt});
            for (const auto& [slot, value] : goal_.confirm_args) commit(slot, value);
            goal_.affirmed = true;
        } else {
            const auto& [slot, current] =
                negatable[static_cast<std::size_t>(rng_.below(negatable.size()))];
            const SlotDef* def = goal_.schema->find_slot(slot);
            std::vector<std::string> alternatives;
            for (const auto& v : def->possible_values)
                if (v != current) alternatives.push_back(v);
            const std::string value = rng_.pick(alternatives);
            acts.push_back(DialogueAct{"NEGATE", "", {}, std::nullopt});
            acts.push_back(DialogueAct{"INFORM", slot, {value}, std::nullopt});
            commit(slot, value);
            ++goal_.negations;
            goal_.renegotiated = true;
        }
    }

    // --- system side ---

    Turn system_turn() {
        std::vector<DialogueAct> acts;
        std::optional<ServiceCall> call;
        std::optional<std::vector<std::map<std::string, std::string>>> results;

        if (user_closed_) {
            acts.push_back(DialogueAct{"GOODBYE", "", {}, std::nullopt});
            ended_ = true;
            Turn turn = realize(Speaker::System, goal_.item->service, acts);
            return turn;
        }

        for (;;) {
            if (goal_.affirmed) {
                goal_.affirmed = false;
                ServiceCall sc;
                sc.method = goal_.item->intent;
                sc.parameters = call_args();
                auto rows = engine_.call(goal_.item->service, sc.method, sc.parameters);
                call = sc;
                results = rows;
                acts.push_back(DialogueAct{rows.empty() ? "NOTIFY_FAILURE" : "NOTIFY_SUCCESS",
                                           "",
                                           {},
                                           std::nullopt});
                goal_.fulfilled = true;
                goal_.failed = rows.empty();
                cue_ = UserCue::Proceed;
                break;
            }
            if (goal_.renegotiated) {
                goal_.renegotiated = false;
                build_confirm(acts);
                cue_ = UserCue::Confirm;
                break;
            }
            const auto missing = missing_required();
            if (!missing.empty()) {
                std::size_t count =
                    weighted_pick(rng_, cfg_.requests_per_turn, "requests_per_turn");
                count = std::min(count, missing.size());
                goal_.pending_request.assign(
                    missing.begin(), missing.begin() + static_cast<std::ptrdiff_t>(count));
                for (const auto& slot : goal_.pending_request)
                    acts.push_back(DialogueAct{"REQUEST", slot, {}, std::nullopt});
                cue_ = UserCue::Answer;
                break;
            }
            if (!goal_.intent->is_transactional) {
                if (!goal_.asked_results.empty()) {
                    for (const auto& slot : goal_.asked_results)
                        acts.push_back(DialogueAct{
                            "INFORM", slot, {goal_.matches[goal_.offer_index].at(slot)},
                            std::nullopt});
                    goal_.asked_results.clear();
                    cue_ = UserCue::Offer;
                    break;
                }
                if (!goal_.called || goal_.advance_offer) {
                    if (offer_next(acts, call, results)) {
                        cue_ = UserCue::Offer;
                    } else {
                        cue_ = UserCue::Proceed; // nothing matched
                    }
                    break;
                }
                // Search fulfilled: wrap up or move to the follow-up goal.
                if (cur_ + 1 < scenario_.size()) {
                    const ScenarioItem& next = scenario_[cur_ + 1];
                    const ServiceSchema* ns = find_service(engine_.schemas(), next.service);
                    const IntentDef* ni =
                        ns == nullptr ? nullptr : ns->find_intent(next.intent);
                    if (!goal_.failed && ni != nullptr && ni->is_transactional &&
                        next.service == goal_.item->service) {
                        if (system_allows("OFFER_INTENT") && user_allows("AFFIRM_INTENT") &&
                            rng_.chance(cfg_.offer_intent_prob)) {
                            acts.push_back(intent_act("OFFER_INTENT", next.intent));
                            cue_ = UserCue::OfferIntent;
                            break;
                        }
                        // Silent hand-off: the follow-up goal continues on the
                        // same entity without an explicit announcement.
                        begin_goal(cur_ + 1);
                        mem().active_intent = goal_.item->intent;
                        continue;
                    }
                    acts.push_back(DialogueAct{"REQ_MORE", "", {}, std::nullopt});
                    cue_ = UserCue::Proceed;
                    break;
                }
                acts.push_back(DialogueAct{"REQ_MORE", "", {}, std::nullopt});
                cue_ = UserCue::Proceed;
                break;
            }
            // Transactional goal with every required argument known.
            build_confirm(acts);
            cue_ = UserCue::Confirm;
            break;
        }

        Turn turn = realize(Speaker::System, goal_.item->service, acts);
        turn.frames[0].service_call = std::move(call);
        turn.frames[0].service_results = std::move(results);
        return turn;
    }

    // Runs the search (first time) and offers the current match. Returns
    // false when nothing matches.
    bool offer_next(std::vector<DialogueAct>& acts, std::optional<ServiceCall>& call,
                    std::optional<std::vector<std::map<std::string, std::string>>>& results) {
        if (!goal_.called) {
            ServiceCall sc;
            sc.method = goal_.item->intent;
            sc.parameters = call_args();
            goal_.matches = engine_.call(goal_.item->service, sc.method, sc.parameters);
            call = sc;
            results = goal_.matches;
            goal_.called = true;
            if (goal_.matches.empty()) {
                acts.push_back(DialogueAct{"NOTIFY_FAILURE", "", {}, std::nullopt});
                goal_.fulfilled = true;
                goal_.failed = true;
                return false;
            }
            if (system_allows("INFORM_COUNT") && rng_.chance(cfg_.inform_count_prob))
                acts.push_back(DialogueAct{"INFORM_COUNT",
                                           kCountSlot,
                                           {std::to_string(goal_.matches.size())},
                                           std::nullopt});
        } else if (goal_.advance_offer) {
            goal_.advance_offer = false;
            ++goal_.offer_index; // legality checked when REQUEST_ALTS was chosen
        }
        goal_.offered = true;
        acts.push_back(DialogueAct{"OFFER",
                                   goal_.offer_slot,
                                   {goal_.matches[goal_.offer_index].at(goal_.offer_slot)},
                                   std::nullopt});
        return true;
    }

    void build_confirm(std::vector<DialogueAct>& acts) {
        goal_.confirm_args.clear();
        const auto& informed = mem().informed;
        for (const auto& slot : goal_.intent->required_slots)
            goal_.confirm_args.emplace_back(slot, informed.at(slot));
        for (const auto& [slot, fallback] : goal_.intent->optional_slots) {
            const auto it = informed.find(slot);
            const std::string& value = it != informed.end() ? it->second : fallback;
            if (value != kDontCare) goal_.confirm_args.emplace_back(slot, value);
        }
        for (const auto& [slot, value] : goal_.confirm_args)
            acts.push_back(DialogueAct{"CONFIRM", slot, {value}, std::nullopt});
        goal_.confirm_pending = true;
    }

    // --- surface realization ---

    Turn realize(Speaker speaker, const std::string& service,
                 const std::vector<DialogueAct>& acts) {
        const auto& side = speaker == Speaker::User ? tpl_.user : tpl_.system;
        Turn turn;
        turn.speaker = speaker;
        Frame frame;
        frame.service = service;
        frame.actions = acts;

        std::size_t cp = 0;
        for (const auto& act : acts) {
            const auto it = side.find(act.act);
            if (it == side.end())
                throw SimulationError("no " + to_string(speaker) + " template for act " +
                                      act.act);
            const std::string& value = act.values.empty() ? std::string() : act.values.front();
            const ActTemplate& tpl = it->second;
            const std::string& pattern = (value == kDontCare && !tpl.dontcare.empty())
                                             ? tpl.dontcare
                                             : tpl.for_slot(act.slot);

            std::map<std::string, std::string> subs;
            if (!act.slot.empty() && act.slot != kIntentSlot && act.slot != kCountSlot)
                subs["{slot}"] = humanize(act.slot);
            if (act.slot == kIntentSlot && !act.values.empty())
                subs["{intent}"] = humanize(act.values.front());
            if (act.slot == kCountSlot && !act.values.empty())
                subs["{count}"] = act.values.front();
            if (!act.values.empty()) subs["{value}"] = act.values.front();

            const RenderedAct rendered = render_pattern(pattern, subs);
            if (!turn.utterance.empty()) {
                turn.utterance += ' ';
                cp += 1;
            }
            const SlotDef* def = goal_.schema == nullptr ? nullptr
                                                         : goal_.schema->find_slot(act.slot);
            // The schema of the frame's service, not the goal's, decides
            // span-worthiness; they coincide for generated turns.
            if (rendered.has_value && def != nullptr && !def->is_categorical &&
                value != kDontCare && kValueActs.count(act.act)) {
                SlotSpan span;
                span.slot = act.slot;
                span.start = cp + rendered.value_start;
                span.exclusive_end = cp + rendered.value_end;
                frame.slots.push_back(span);
            }
            turn.utterance += rendered.text;
            cp += utf8::count(rendered.text);
        }
        turn.frames.push_back(std::move(frame));
        return turn;
    }
};

} // namespace

Dialogue simulate_dialogue(const ServiceEngine& engine, const AutomatonConfig& config,
                           const TemplateSet& templates, const Scenario& scenario, Rng& rng,
                           std::string dialogue_id) {
    Simulation sim(engine, config, templates, scenario, rng);
    return sim.run(std::move(dialogue_id));
}

std::string flow_signature(const Dialogue& dialogue) {
    std::ostringstream out;
    for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
        const Turn& turn = dialogue.turns[t];
        if (t > 0) out << " | ";
        out << (turn.speaker == Speaker::User ? 'U' : 'S');
        for (std::size_t f = 0; f < turn.frames.size(); ++f) {
            const Frame& frame = turn.frames[f];
            out << (f > 0 ? "/" : " ") << frame.service << ' ';
            for (std::size_t a = 0; a < frame.actions.size(); ++a) {
                const DialogueAct& act = frame.actions[a];
                if (a > 0) out << '+';
                out << act.act;
                if (!act.slot.empty()) out << ':' << act.slot;
                if (act.slot == kIntentSlot)
                    for (const auto& v : act.values) out << '=' << v;
            }
        }
    }
    return out.str();
}

GenResult generate_corpus(const ServiceEngine& engine, const AutomatonConfig& config,
                          const TemplateSet& templates, const GenOptions& options) {
    {
        ValidationReport report = validate_automaton_config(config);
        report.merge(validate_templates(templates, config.vocabulary), "templates.");
        report.merge(simulation_preconditions(engine), "services.");
        if (!report.ok()) throw ValidationRefused(report, "simulator setup is invalid");
    }

    GenResult result;
    if (options.count == 0) return result;
    const std::size_t jobs = std::max<std::size_t>(options.jobs, 1);
    const std::size_t budget =
        options.count * std::max<std::size_t>(options.attempt_factor, 1);
    std::map<std::string, std::size_t> flows_kept;
    std::uint64_t next_attempt = 0;

    while (result.corpus.size() < options.count && next_attempt < budget) {
        const std::size_t batch = static_cast<std::size_t>(
            std::min<std::uint64_t>(budget - next_attempt, std::max<std::size_t>(jobs * 8, 16)));
        std::vector<Dialogue> made(batch);
        auto work = [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                Rng rng(Rng::derive(options.seed, next_attempt + i));
                const Scenario scenario = sample_scenario(rng, engine, config);
                made[i] = simulate_dialogue(engine, config, templates, scenario, rng, "pending");
            }
        };
        if (jobs == 1) {
            work(0, batch);
        } else {
            std::vector<std::future<void>> futures;
            const std::size_t chunk = (batch + jobs - 1) / jobs;
            for (std::size_t lo = 0; lo < batch; lo += chunk)
                futures.push_back(std::async(std::launch::async, work, lo,
                                             std::min(batch, lo + chunk)));
            for (auto& f : futures) f.get();
        }
        for (std::size_t i = 0; i < batch && result.corpus.size() < options.count; ++i) {
            ++result.attempts;
            const std::string signature = flow_signature(made[i]);
            std::size_t& kept = flows_kept[signature];
            if (kept >= options.flow_quota) {
                ++result.duplicates;
                continue;
            }
            ++kept;
            char id[16];
            std::snprintf(id, sizeof id, "sim_%05zu", result.corpus.size() + 1);
            made[i].dialogue_id = id;
            result.corpus.push_back(std::move(made[i]));
        }
        next_attempt += batch;
    }
    result.shortfall = options.count - result.corpus.size();
    return result;
}

} // namespace sgdkit
