#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sgdkit/dialogue.hpp"
#include "sgdkit/entity_table.hpp"

namespace sgdkit {

// Lowercased word pieces: splits on non-alphanumeric bytes and camelCase
// boundaries ("FindRestaurants" -> {"find", "restaurants"}); multi-byte
// UTF-8 sequences stay inside their token.
std::vector<std::string> tokenize(std::string_view text);

// Removes everything a tracker must predict: user-frame actions, spans, and
// states (replaced by an empty scaffold state so the corpus stays
// structurally valid). System annotations and all utterances are kept.
Corpus strip_user_annotations(const Corpus& corpus);

// The ceiling hypothesis: a stripped copy with the reference states put
// back, keeping only the first variant of each slot-value list (the variant
// the speaker actually uttered). Scores 1.0 on every metric by construction.
Corpus oracle_track(const Corpus& reference);

struct TrackerOptions {
    // Minimum fraction of an intent's name tokens that must appear in the
    // utterance before the intent is adopted.
    double intent_match_threshold = 0.6;
};

// Keyword-and-lexicon baseline tracker. Per user turn it matches intent
// names by token overlap, fills slot values by longest-first matching
// against entity-table cells and categorical value lists, adopts values the
// system offered or asked to confirm when the user affirms, and reads
// requested slots off interrogative turns. States accumulate per service.
Corpus track_corpus(const Corpus& dialogues, const ServiceEngine& engine,
                    const TrackerOptions& options = {});

} // namespace sgdkit
