#include "sgdkit/dialogue.hpp"

#include <unordered_map>
#include <unordered_set>

namespace sgdkit {

std::string to_string(Speaker speaker) {
    return speaker == Speaker::User ? "USER" : "SYSTEM";
}

Speaker speaker_from_string(std::string_view text, const std::string& path) {
    if (text == "USER") return Speaker::User;
    if (text == "SYSTEM") return Speaker::System;
    throw ParseError(path + ": speaker must be \"USER\" or \"SYSTEM\", got \"" +
                     std::string(text) + "\"");
}

ActVocabulary ActVocabulary::standard() {
    return {
        {"AFFIRM", "AFFIRM_INTENT", "GOODBYE", "INFORM", "INFORM_INTENT", "NEGATE",
         "NEGATE_INTENT", "REQUEST", "REQUEST_ALTS", "SELECT", "THANK_YOU"},
        {"CONFIRM", "GOODBYE", "INFORM", "INFORM_COUNT", "NOTIFY_FAILURE", "NOTIFY_SUCCESS",
         "OFFER", "OFFER_INTENT", "REQUEST", "REQ_MORE"},
    };
}

namespace {

DialogueAct parse_action(const ojson& node, const std::string& path, const ParseOptions& options,
                         ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"act", "canonical_values", "slot", "values"}, path, options, diagnostics);
    DialogueAct action;
    action.act = expect_string(node, "act", path);
    if (node.contains("slot")) action.slot = expect_string(node.at("slot"), path + ".slot");
    if (node.contains("values")) action.values = expect_string_array(node, "values", path);
    if (node.contains("canonical_values"))
        action.canonical_values = expect_string_array(node, "canonical_values", path);
    return action;
}

SlotSpan parse_span(const ojson& node, const std::string& path, const ParseOptions& options,
                    ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"exclusive_end", "slot", "start"}, path, options, diagnostics);
    SlotSpan span;
    span.slot = expect_string(node, "slot", path);
    const auto offset = [&](const char* key) -> std::size_t {
        const ojson& v = expect_field(node, key, path);
        if (!v.is_number_unsigned())
            throw ParseError(path + "." + key + ": expected a non-negative integer");
        return v.get<std::size_t>();
    };
    span.start = offset("start");
    span.exclusive_end = offset("exclusive_end");
    return span;
}

FrameState parse_state(const ojson& node, const std::string& path, const ParseOptions& options,
                       ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"active_intent", "requested_slots", "slot_values"}, path, options,
                 diagnostics);
    FrameState state;
    state.active_intent = expect_string(node, "active_intent", path);
    if (node.contains("requested_slots")) {
        for (const std::string& s : expect_string_array(node, "requested_slots", path))
            state.requested_slots.insert(s);
    }
    if (node.contains("slot_values")) {
        const ojson& sv = node.at("slot_values");
        if (!sv.is_object())
            throw ParseError(path + ".slot_values: expected an object of slot -> value list");
        for (const auto& [slot, values] : sv.items()) {
            state.slot_values[slot] =
                expect_string_array(values, path + ".slot_values." + slot);
        }
    }
    return state;
}

ServiceCall parse_service_call(const ojson& node, const std::string& path,
                               const ParseOptions& options, ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"method", "parameters"}, path, options, diagnostics);
    ServiceCall call;
    call.method = expect_string(node, "method", path);
    const ojson& params = expect_field(node, "parameters", path);
    if (!params.is_object())
        throw ParseError(path + ".parameters: expected an object of slot -> value");
    for (const auto& [slot, value] : params.items())
        call.parameters[slot] = expect_string(value, path + ".parameters." + slot);
    return call;
}

std::map<std::string, std::string> parse_result_row(const ojson& node, const std::string& path) {
    expect_object(node, path);
    std::map<std::string, std::string> row;
    for (const auto& [slot, value] : node.items())
        row[slot] = expect_string(value, path + "." + slot);
    return row;
}

Frame parse_frame(const ojson& node, const std::string& path, const ParseOptions& options,
                  ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"actions", "service", "service_call", "service_results", "slots", "state"},
                 path, options, diagnostics);
    Frame frame;
    frame.service = expect_string(node, "service", path);
    if (node.contains("actions")) {
        const ojson& actions = expect_array(node.at("actions"), path + ".actions");
        for (std::size_t i = 0; i < actions.size(); ++i)
            frame.actions.push_back(parse_action(
                actions[i], path + ".actions[" + std::to_string(i) + "]", options, diagnostics));
    }
    if (node.contains("slots")) {
        const ojson& slots = expect_array(node.at("slots"), path + ".slots");
        for (std::size_t i = 0; i < slots.size(); ++i)
            frame.slots.push_back(parse_span(slots[i], path + ".slots[" + std::to_string(i) + "]",
                                             options, diagnostics));
    }
    if (node.contains("state"))
        frame.state = parse_state(node.at("state"), path + ".state", options, diagnostics);
    if (node.contains("service_call"))
        frame.service_call =
            parse_service_call(node.at("service_call"), path + ".service_call", options,
                               diagnostics);
    if (node.contains("service_results")) {
        const ojson& results = expect_array(node.at("service_results"), path + ".service_results");
        std::vector<std::map<std::string, std::string>> rows;
        for (std::size_t i = 0; i < results.size(); ++i)
            rows.push_back(parse_result_row(results[i],
                                            path + ".service_results[" + std::to_string(i) + "]"));
        frame.service_results = std::move(rows);
    }
    return frame;
}

Turn parse_turn(const ojson& node, const std::string& path, const ParseOptions& options,
                ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"frames", "speaker", "utterance"}, path, options, diagnostics);
    Turn turn;
    turn.speaker = speaker_from_string(expect_string(node, "speaker", path), path + ".speaker");
    turn.utterance = expect_string(node, "utterance", path);
    const ojson& frames = expect_array(node, "frames", path);
    for (std::size_t i = 0; i < frames.size(); ++i)
        turn.frames.push_back(parse_frame(frames[i], path + ".frames[" + std::to_string(i) + "]",
                                          options, diagnostics));
    return turn;
}

Dialogue parse_dialogue(const ojson& node, const std::string& path, const ParseOptions& options,
                        ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"dialogue_id", "services", "turns"}, path, options, diagnostics);
    Dialogue dialogue;
    dialogue.dialogue_id = expect_string(node, "dialogue_id", path);
    dialogue.services = expect_string_array(node, "services", path);
    const ojson& turns = expect_array(node, "turns", path);
    for (std::size_t i = 0; i < turns.size(); ++i)
        dialogue.turns.push_back(parse_turn(turns[i], path + ".turns[" + std::to_string(i) + "]",
                                            options, diagnostics));
    return dialogue;
}

ojson action_to_json(const DialogueAct& action) {
    ojson node;
    node["act"] = action.act;
    if (action.canonical_values) node["canonical_values"] = *action.canonical_values;
    node["slot"] = action.slot;
    node["values"] = action.values;
    return node;
}

ojson frame_to_json(const Frame& frame) {
    ojson node;
    node["actions"] = ojson::array();
    for (const DialogueAct& a : frame.actions) node["actions"].push_back(action_to_json(a));
    node["service"] = frame.service;
    if (frame.service_call) {
        ojson call;
        call["method"] = frame.service_call->method;
        call["parameters"] = ojson::object();
        for (const auto& [slot, value] : frame.service_call->parameters)
            call["parameters"][slot] = value;
        node["service_call"] = std::move(call);
    }
    if (frame.service_results) {
        ojson rows = ojson::array();
        for (const auto& row : *frame.service_results) {
            ojson r = ojson::object();
            for (const auto& [slot, value] : row) r[slot] = value;
            rows.push_back(std::move(r));
        }
        node["service_results"] = std::move(rows);
    }
    node["slots"] = ojson::array();
    for (const SlotSpan& span : frame.slots) {
        ojson s;
        s["exclusive_end"] = span.exclusive_end;
        s["slot"] = span.slot;
        s["start"] = span.start;
        node["slots"].push_back(std::move(s));
    }
    if (frame.state) {
        ojson state;
        state["active_intent"] = frame.state->active_intent;
        state["requested_slots"] =
            std::vector<std::string>(frame.state->requested_slots.begin(),
                                     frame.state->requested_slots.end());
        state["slot_values"] = ojson::object();
        for (const auto& [slot, values] : frame.state->slot_values)
            state["slot_values"][slot] = values;
        node["state"] = std::move(state);
    }
    return node;
}

} // namespace

Corpus parse_dialogues(std::string_view text, const ParseOptions& options,
                       ValidationReport* diagnostics) {
    ojson doc = parse_json_text(text);
    if (!doc.is_array()) throw ParseError("$: expected a JSON array of dialogues");
    Corpus corpus;
    corpus.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i)
        corpus.push_back(
            parse_dialogue(doc[i], "dialogues[" + std::to_string(i) + "]", options, diagnostics));
    return corpus;
}

ojson dialogue_to_json(const Dialogue& dialogue) {
    ojson node;
    node["dialogue_id"] = dialogue.dialogue_id;
    node["services"] = dialogue.services;
    node["turns"] = ojson::array();
    for (const Turn& turn : dialogue.turns) {
        ojson t;
        t["frames"] = ojson::array();
        for (const Frame& frame : turn.frames) t["frames"].push_back(frame_to_json(frame));
        t["speaker"] = to_string(turn.speaker);
        t["utterance"] = turn.utterance;
        node["turns"].push_back(std::move(t));
    }
    return node;
}

std::string serialize_dialogues(const Corpus& corpus) {
    ojson doc = ojson::array();
    for (const Dialogue& dialogue : corpus) doc.push_back(dialogue_to_json(dialogue));
    return doc.dump(2) + "\n";
}

namespace {

void check_state(ValidationReport& report, const std::string& path, const FrameState& state,
                 const ServiceSchema& schema) {
    if (state.active_intent != kNoneIntent && !schema.find_intent(state.active_intent))
        report.error(path + ".active_intent",
                     "unknown intent '" + state.active_intent + "' in service '" +
                         schema.service_name + "'");
    for (const std::string& slot : state.requested_slots)
        if (!schema.find_slot(slot))
            report.error(path + ".requested_slots", "unknown slot '" + slot + "'");
    for (const auto& [slot, values] : state.slot_values) {
        const std::string spath = path + ".slot_values." + slot;
        const SlotDef* def = schema.find_slot(slot);
        if (!def) {
            report.error(spath, "unknown slot '" + slot + "'");
            continue;
        }
        if (values.empty()) {
            report.error(spath, "value list must not be empty");
            continue;
        }
        for (const std::string& value : values)
            if (!def->accepts_value(value))
                report.error(spath, "'" + value + "' is not a possible value of categorical slot '" +
                                        slot + "'");
    }
}

void check_action(ValidationReport& report, const std::string& path, const DialogueAct& action,
                  const ServiceSchema& schema, const std::set<std::string>& inventory) {
    if (!inventory.count(action.act)) {
        report.error(path + ".act", "act '" + action.act + "' is not in the inventory");
        return;
    }
    if (action.slot.empty()) {
        if (!action.values.empty())
            report.error(path + ".values", "act without a slot must not carry values");
        return;
    }
    if (action.slot == kIntentSlot) {
        static const std::set<std::string> kIntentActs{"INFORM_INTENT", "AFFIRM_INTENT",
                                                       "NEGATE_INTENT", "OFFER_INTENT"};
        if (!kIntentActs.count(action.act)) {
            report.error(path + ".slot", "pseudo-slot 'intent' is reserved for intent acts");
            return;
        }
        for (const std::string& value : action.values)
            if (value != kNoneIntent && !schema.find_intent(value))
                report.error(path + ".values", "unknown intent '" + value + "'");
        return;
    }
    if (action.slot == kCountSlot) {
        if (action.act != "INFORM_COUNT")
            report.error(path + ".slot", "pseudo-slot 'count' is reserved for INFORM_COUNT");
        return;
    }
    const SlotDef* def = schema.find_slot(action.slot);
    if (!def) {
        report.error(path + ".slot", "unknown slot '" + action.slot + "'");
        return;
    }
    for (const std::string& value : action.values)
        if (!def->accepts_value(value))
            report.error(path + ".values", "'" + value +
                                               "' is not a possible value of categorical slot '" +
                                               action.slot + "'");
}

void check_frame(ValidationReport& report, const std::string& path, const Turn& turn,
                 const Frame& frame, const ServiceSchema& schema,
                 const ActVocabulary& vocabulary) {
    const bool user = turn.speaker == Speaker::User;
    if (user && !frame.state)
        report.error(path, "user-turn frame must carry a dialogue state");
    if (!user && frame.state)
        report.error(path + ".state", "system-turn frame must not carry a dialogue state");
    if (!user && frame.actions.empty())
        report.error(path + ".actions", "system-turn frame must list its actions");
    if (user && frame.service_call)
        report.error(path + ".service_call", "service calls belong to system turns");
    if (user && frame.service_results)
        report.error(path + ".service_results", "service results belong to system turns");
    if (frame.service_results && !frame.service_call)
        report.error(path + ".service_results", "service results require a service call");
    if (frame.state) check_state(report, path + ".state", *frame.state, schema);

    const std::set<std::string>& inventory =
        user ? vocabulary.user_acts : vocabulary.system_acts;
    for (std::size_t i = 0; i < frame.actions.size(); ++i)
        check_action(report, path + ".actions[" + std::to_string(i) + "]", frame.actions[i],
                     schema, inventory);

    const std::size_t utterance_length = utf8::count(turn.utterance);
    for (std::size_t i = 0; i < frame.slots.size(); ++i) {
        const SlotSpan& span = frame.slots[i];
        const std::string spath = path + ".slots[" + std::to_string(i) + "]";
        const SlotDef* def = schema.find_slot(span.slot);
        if (!def)
            report.error(spath + ".slot", "unknown slot '" + span.slot + "'");
        else if (def->is_categorical)
            report.error(spath + ".slot",
                         "spans mark non-categorical mentions; '" + span.slot +
                             "' is categorical");
        if (span.start >= span.exclusive_end || span.exclusive_end > utterance_length) {
            report.error(spath, "span [" + std::to_string(span.start) + ", " +
                                    std::to_string(span.exclusive_end) +
                                    ") is outside the utterance (" +
                                    std::to_string(utterance_length) + " code points)");
            continue;
        }
        // The span must surface a value the frame actually talks about.
        const std::string text = span_text(turn.utterance, span);
        bool mentioned = false;
        for (const DialogueAct& a : frame.actions)
            if (a.slot == span.slot)
                for (const std::string& v : a.values)
                    if (v == text) mentioned = true;
        if (!mentioned && frame.state) {
            auto it = frame.state->slot_values.find(span.slot);
            if (it != frame.state->slot_values.end())
                for (const std::string& v : it->second)
                    if (v == text) mentioned = true;
        }
        if (!mentioned)
            report.warn(spath, "span text '" + text +
                                   "' does not match any act or state value for slot '" +
                                   span.slot + "'");
    }

    if (frame.service_call) {
        const std::string cpath = path + ".service_call";
        const IntentDef* intent = schema.find_intent(frame.service_call->method);
        if (!intent)
            report.error(cpath + ".method",
                         "unknown intent '" + frame.service_call->method + "'");
        for (const auto& [slot, value] : frame.service_call->parameters) {
            const SlotDef* def = schema.find_slot(slot);
            if (!def)
                report.error(cpath + ".parameters." + slot, "unknown slot '" + slot + "'");
            else if (!def->accepts_value(value))
                report.error(cpath + ".parameters." + slot,
                             "'" + value + "' is not a possible value");
        }
    }
    if (frame.service_results) {
        for (std::size_t r = 0; r < frame.service_results->size(); ++r)
            for (const auto& [slot, value] : (*frame.service_results)[r])
                if (!schema.find_slot(slot))
                    report.error(path + ".service_results[" + std::to_string(r) + "]",
                                 "unknown slot '" + slot + "'");
    }
}

} // namespace

ValidationReport validate_dialogue(const Dialogue& dialogue,
                                   const std::vector<ServiceSchema>& schemas,
                                   const ActVocabulary& vocabulary) {
    ValidationReport report;
    if (dialogue.dialogue_id.empty()) report.error("dialogue_id", "must not be empty");
    if (dialogue.services.empty()) report.error("services", "must list at least one service");
    std::unordered_set<std::string> declared;
    for (std::size_t i = 0; i < dialogue.services.size(); ++i) {
        const std::string& name = dialogue.services[i];
        const std::string path = "services[" + std::to_string(i) + "]";
        if (!find_service(schemas, name)) report.error(path, "unknown service '" + name + "'");
        if (!declared.insert(name).second) report.error(path, "duplicate service '" + name + "'");
    }
    if (dialogue.turns.empty()) report.error("turns", "must contain at least one turn");

    for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
        const Turn& turn = dialogue.turns[t];
        const std::string path = "turns[" + std::to_string(t) + "]";
        const Speaker expected = t % 2 == 0 ? Speaker::User : Speaker::System;
        if (turn.speaker != expected)
            report.error(path + ".speaker", "turns must alternate starting with USER");
        if (turn.frames.empty()) report.error(path + ".frames", "turn must carry a frame");
        std::unordered_set<std::string> seen;
        for (std::size_t f = 0; f < turn.frames.size(); ++f) {
            const Frame& frame = turn.frames[f];
            const std::string fpath = path + ".frames[" + std::to_string(f) + "]";
            if (!seen.insert(frame.service).second)
                report.error(fpath + ".service",
                             "duplicate frame for service '" + frame.service + "'");
            if (!declared.count(frame.service)) {
                report.error(fpath + ".service",
                             "service '" + frame.service + "' is not declared by the dialogue");
                continue;
            }
            const ServiceSchema* schema = find_service(schemas, frame.service);
            if (!schema) continue; // already reported at services[i]
            check_frame(report, fpath, turn, frame, *schema, vocabulary);
        }
    }
    return report;
}

ValidationReport validate_corpus(const Corpus& corpus, const std::vector<ServiceSchema>& schemas,
                                 const ActVocabulary& vocabulary) {
    ValidationReport report;
    std::unordered_map<std::string, std::size_t> id_at;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const std::string prefix =
            "dialogues[" + std::to_string(i) + "] (" + corpus[i].dialogue_id + ").";
        report.merge(validate_dialogue(corpus[i], schemas, vocabulary), prefix);
        auto [it, fresh] = id_at.emplace(corpus[i].dialogue_id, i);
        if (!fresh)
            report.error("dialogues[" + std::to_string(i) + "].dialogue_id",
                         "duplicate dialogue_id '" + corpus[i].dialogue_id +
                             "' (first used at dialogues[" + std::to_string(it->second) + "])");
    }
    return report;
}

} // namespace sgdkit
