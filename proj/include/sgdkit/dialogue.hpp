#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sgdkit/json_io.hpp"
#include "sgdkit/schema.hpp"
#include "sgdkit/utf8.hpp"
#include "sgdkit/validation.hpp"

namespace sgdkit {

// Pseudo-slots carried by dialogue acts that do not name a schema slot:
// intent announcements/offers use "intent", result counts use "count".
inline constexpr const char* kIntentSlot = "intent";
inline constexpr const char* kCountSlot = "count";

enum class Speaker { User, System };

std::string to_string(Speaker speaker);
Speaker speaker_from_string(std::string_view text, const std::string& path);

struct DialogueAct {
    std::string act;
    std::string slot;   // empty when the act carries no slot
    std::vector<std::string> values;
    // Canonical (schema-normalized) counterparts of `values`; optional
    // because hand-written corpora usually omit them.
    std::optional<std::vector<std::string>> canonical_values;

    bool operator==(const DialogueAct&) const = default;
};

// A mention of a non-categorical slot value in the utterance. Offsets are
// Unicode code points; the surface text is recovered from the utterance.
struct SlotSpan {
    std::string slot;
    std::size_t start = 0;
    std::size_t exclusive_end = 0;

    bool operator==(const SlotSpan&) const = default;
};

inline std::string span_text(std::string_view utterance, const SlotSpan& span) {
    return utf8::substr(utterance, span.start, span.exclusive_end);
}

struct FrameState {
    std::string active_intent = kNoneIntent;
    std::set<std::string> requested_slots;
    // Each slot maps to one or more acceptable surface variants; the first
    // entry is the one the speaker actually uttered.
    std::map<std::string, std::vector<std::string>> slot_values;

    bool operator==(const FrameState&) const = default;
};

struct ServiceCall {
    std::string method;
    std::map<std::string, std::string> parameters;

    bool operator==(const ServiceCall&) const = default;
};

struct Frame {
    std::string service;
    std::vector<DialogueAct> actions;
    std::vector<SlotSpan> slots;
    std::optional<FrameState> state;                                  // user turns only
    std::optional<ServiceCall> service_call;                          // system turns only
    std::optional<std::vector<std::map<std::string, std::string>>> service_results;

    bool operator==(const Frame&) const = default;
};

struct Turn {
    Speaker speaker = Speaker::User;
    std::string utterance;
    std::vector<Frame> frames;

    const Frame* frame_for(std::string_view service) const {
        for (const Frame& f : frames)
            if (f.service == service) return &f;
        return nullptr;
    }

    bool operator==(const Turn&) const = default;
};

struct Dialogue {
    std::string dialogue_id;
    std::vector<std::string> services;
    std::vector<Turn> turns;

    bool operator==(const Dialogue&) const = default;
};

using Corpus = std::vector<Dialogue>;

// The dialogue-act inventory; validation rejects acts outside it. The
// standard set matches the released dataset's annotation guidelines.
struct ActVocabulary {
    std::set<std::string> user_acts;
    std::set<std::string> system_acts;

    static ActVocabulary standard();

    bool operator==(const ActVocabulary&) const = default;
};

// Dialogue file format: a UTF-8 JSON array of dialogues, field names and
// layout matching the released dataset (see docs/formats.md).
Corpus parse_dialogues(std::string_view text, const ParseOptions& options = {},
                       ValidationReport* diagnostics = nullptr);

ojson dialogue_to_json(const Dialogue& dialogue);

// Canonical serialization: alphabetical field order (as in the released
// dataset), 2-space indent, trailing newline. Purely structural; run
// validate_corpus separately for semantic checks.
std::string serialize_dialogues(const Corpus& corpus);

// Semantic checks against schemas and the act inventory: speaker
// alternation, frame/service resolution, span bounds and slot kinds,
// state and act well-formedness. Paths are relative to the dialogue.
ValidationReport validate_dialogue(const Dialogue& dialogue,
                                   const std::vector<ServiceSchema>& schemas,
                                   const ActVocabulary& vocabulary);

// Per-dialogue checks plus corpus-wide dialogue_id uniqueness; paths are
// prefixed "dialogues[i] (<id>).".
ValidationReport validate_corpus(const Corpus& corpus, const std::vector<ServiceSchema>& schemas,
                                 const ActVocabulary& vocabulary);

} // namespace sgdkit
