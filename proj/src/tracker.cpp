#include "sgdkit/tracker.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace sgdkit {

namespace {

bool is_token_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;
}

const std::set<std::string> kNegationWords = {"no", "not", "never", "wrong"};
const std::set<std::string> kAffirmationWords = {"yes", "yeah", "sure", "correct", "absolutely"};
const std::set<std::string> kClosingWords = {"thank", "thanks", "goodbye", "bye"};
const std::set<std::string> kQuestionWords = {"what", "which", "how"};

// A slot value the tracker can recognize in an utterance.
struct Candidate {
    std::string slot;
    std::string value;
    std::vector<std::string> tokens;
};

// Everything the tracker precomputes about one service.
struct ServiceLexicon {
    const ServiceSchema* schema = nullptr;
    std::vector<std::pair<const IntentDef*, std::vector<std::string>>> intents;
    std::vector<Candidate> candidates; // longest token sequence first
    std::vector<std::pair<std::string, std::vector<std::string>>> slot_names;
    const IntentDef* sole_transactional = nullptr;
};

ServiceLexicon build_lexicon(const ServiceSchema& schema, const EntityTable& table) {
    ServiceLexicon lex;
    lex.schema = &schema;

    for (const IntentDef& intent : schema.intents) {
        lex.intents.emplace_back(&intent, tokenize(intent.name));
        if (intent.is_transactional)
            lex.sole_transactional = lex.sole_transactional ? nullptr : &intent;
    }

    std::set<std::pair<std::string, std::string>> seen;
    auto add = [&](const std::string& slot, const std::string& value) {
        if (value.empty() || value == kDontCare) return;
        if (!seen.insert({slot, value}).second) return;
        lex.candidates.push_back({slot, value, tokenize(value)});
    };
    for (const SlotDef& slot : schema.slots) {
        lex.slot_names.emplace_back(slot.name, tokenize(slot.name));
        if (slot.is_categorical) {
            for (const std::string& value : slot.possible_values) add(slot.name, value);
        } else if (const auto column = table.column_index(slot.name)) {
            for (const auto& row : table.rows) add(slot.name, row[*column]);
        }
    }
    std::sort(lex.candidates.begin(), lex.candidates.end(),
              [](const Candidate& a, const Candidate& b) {
                  if (a.tokens.size() != b.tokens.size()) return a.tokens.size() > b.tokens.size();
                  if (a.value.size() != b.value.size()) return a.value.size() > b.value.size();
                  if (a.value != b.value) return a.value < b.value;
                  return a.slot < b.slot;
              });
    return lex;
}

// True when `piece` appears as a contiguous run inside `tokens` starting at
// `at`, using only positions not yet claimed by an earlier (longer) match.
bool matches_at(const std::vector<std::string>& tokens, const std::vector<bool>& consumed,
                const std::vector<std::string>& piece, std::size_t at) {
    for (std::size_t i = 0; i < piece.size(); ++i)
        if (consumed[at + i] || tokens[at + i] != piece[i]) return false;
    return true;
}

} // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    unsigned char previous = 0;
    auto flush = [&] {
        if (!current.empty()) {
            tokens.push_back(current);
            current.clear();
        }
    };
    for (unsigned char c : text) {
        if (!is_token_byte(c)) {
            flush();
            previous = c;
            continue;
        }
        if (std::isupper(c) != 0 && (std::islower(previous) != 0 || std::isdigit(previous) != 0))
            flush(); // camelCase boundary
        current += static_cast<char>(std::tolower(c));
        previous = c;
    }
    flush();
    return tokens;
}

Corpus strip_user_annotations(const Corpus& corpus) {
    Corpus out = corpus;
    for (Dialogue& dialogue : out)
        for (Turn& turn : dialogue.turns) {
            if (turn.speaker != Speaker::User) continue;
            for (Frame& frame : turn.frames) {
                frame.actions.clear();
                frame.slots.clear();
                frame.state = FrameState{};
            }
        }
    return out;
}

Corpus oracle_track(const Corpus& reference) {
    Corpus out = strip_user_annotations(reference);
    for (std::size_t d = 0; d < out.size(); ++d)
        for (std::size_t t = 0; t < out[d].turns.size(); ++t) {
            Turn& turn = out[d].turns[t];
            if (turn.speaker != Speaker::User) continue;
            for (std::size_t f = 0; f < turn.frames.size(); ++f) {
                const auto& source = reference[d].turns[t].frames[f].state;
                if (!source.has_value()) continue;
                FrameState state;
                state.active_intent = source->active_intent;
                state.requested_slots = source->requested_slots;
                for (const auto& [slot, variants] : source->slot_values)
                    if (!variants.empty()) state.slot_values[slot] = {variants.front()};
                turn.frames[f].state = state;
            }
        }
    return out;
}

Corpus track_corpus(const Corpus& dialogues, const ServiceEngine& engine,
                    const TrackerOptions& options) {
    std::map<std::string, ServiceLexicon> lexicons;
    for (const ServiceSchema& schema : engine.schemas())
        lexicons.emplace(schema.service_name, build_lexicon(schema, engine.table(schema.service_name)));

    Corpus out = dialogues;
    for (Dialogue& dialogue : out) {
        struct ServiceMemory {
            std::string intent = kNoneIntent;
            std::map<std::string, std::vector<std::string>> values;
        };
        std::map<std::string, ServiceMemory> memory;

        for (std::size_t t = 0; t < dialogue.turns.size(); ++t) {
            Turn& turn = dialogue.turns[t];
            if (turn.speaker != Speaker::User) continue;
            const Turn* previous = t > 0 ? &dialogue.turns[t - 1] : nullptr;

            const std::vector<std::string> tokens = tokenize(turn.utterance);
            const std::set<std::string> token_set(tokens.begin(), tokens.end());
            auto contains_any = [&](const std::set<std::string>& words) {
                return std::any_of(words.begin(), words.end(),
                                   [&](const std::string& w) { return token_set.count(w) != 0; });
            };
            const bool negation = contains_any(kNegationWords);
            const bool affirmation = !negation && contains_any(kAffirmationWords);
            const bool closing = contains_any(kClosingWords);
            const bool interrogative =
                turn.utterance.find('?') != std::string::npos || contains_any(kQuestionWords);

            for (Frame& frame : turn.frames) {
                const auto lex_it = lexicons.find(frame.service);
                if (lex_it == lexicons.end()) continue;
                const ServiceLexicon& lex = lex_it->second;
                ServiceMemory& mem = memory[frame.service];

                // What the system just put on the table for this service.
                std::vector<std::pair<std::string, std::string>> pending;
                std::string offered_intent;
                bool confirming = false;
                if (previous != nullptr) {
                    if (const Frame* sys = previous->frame_for(frame.service)) {
                        for (const DialogueAct& act : sys->actions) {
                            if ((act.act == "OFFER" || act.act == "CONFIRM") && !act.slot.empty() &&
                                act.slot != kIntentSlot && act.values.size() == 1)
                                pending.emplace_back(act.slot, act.values.front());
                            if (act.act == "CONFIRM") confirming = true;
                            if (act.act == "OFFER_INTENT" && !act.values.empty())
                                offered_intent = act.values.front();
                        }
                    }
                }

                // Intent: name-token overlap, then offer/confirm context,
                // then closing, then carryover.
                double best_score = 0.0;
                const IntentDef* best_intent = nullptr;
                for (const auto& [intent, name_tokens] : lex.intents) {
                    if (name_tokens.empty()) continue;
                    std::size_t hit = 0;
                    for (const std::string& piece : name_tokens) hit += token_set.count(piece);
                    const double score = static_cast<double>(hit) / name_tokens.size();
                    if (score > best_score) {
                        best_score = score;
                        best_intent = intent;
                    }
                }
                if (best_intent != nullptr && best_score >= options.intent_match_threshold)
                    mem.intent = best_intent->name;
                else if (affirmation && !offered_intent.empty())
                    mem.intent = offered_intent;
                else if (confirming && lex.sole_transactional != nullptr)
                    mem.intent = lex.sole_transactional->name;
                else if (closing)
                    mem.intent = kNoneIntent;

                // Slot values mentioned outright, longest match first, each
                // utterance token serving at most one value.
                std::vector<bool> consumed(tokens.size(), false);
                for (const Candidate& candidate : lex.candidates) {
                    if (candidate.tokens.empty() || candidate.tokens.size() > tokens.size())
                        continue;
                    for (std::size_t at = 0; at + candidate.tokens.size() <= tokens.size(); ++at) {
                        if (!matches_at(tokens, consumed, candidate.tokens, at)) continue;
                        for (std::size_t i = 0; i < candidate.tokens.size(); ++i)
                            consumed[at + i] = true;
                        mem.values[candidate.slot] = {candidate.value};
                        break;
                    }
                }

                // "Any <slot> ..." marks an explicit no-preference.
                for (const auto& [slot, name_tokens] : lex.slot_names) {
                    if (name_tokens.empty() || name_tokens.size() + 1 > tokens.size()) continue;
                    for (std::size_t at = 0; at + name_tokens.size() < tokens.size(); ++at) {
                        if (tokens[at] != "any") continue;
                        if (!std::equal(name_tokens.begin(), name_tokens.end(),
                                        tokens.begin() + static_cast<std::ptrdiff_t>(at) + 1))
                            continue;
                        mem.values[slot] = {kDontCare};
                        break;
                    }
                }

                // An affirmation accepts whatever was offered or queued for
                // confirmation; a negation leaves it on the table.
                if (affirmation)
                    for (const auto& [slot, value] : pending) mem.values[slot] = {value};

                FrameState state;
                state.active_intent = mem.intent;
                state.slot_values = mem.values;
                if (interrogative)
                    for (const auto& [slot, name_tokens] : lex.slot_names) {
                        if (name_tokens.empty()) continue;
                        const bool all = std::all_of(
                            name_tokens.begin(), name_tokens.end(),
                            [&](const std::string& piece) { return token_set.count(piece) != 0; });
                        if (all) state.requested_slots.insert(slot);
                    }
                frame.state = state;
            }
        }
    }
    return out;
}

} // namespace sgdkit
