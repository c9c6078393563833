#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sgdkit/dialogue.hpp"
#include "sgdkit/json_io.hpp"
#include "sgdkit/schema.hpp"

namespace sgdkit {

// Lowercases ASCII, trims outer whitespace, collapses inner runs to one
// space. Non-ASCII bytes pass through untouched.
std::string normalize_value(std::string_view value);

// Similarity in [0, 1]: 1 - edit_distance / max_length over normalized
// code-point sequences. Both empty -> 1, exactly one empty -> 0.
double fuzzy_match(std::string_view reference, std::string_view hypothesis);

// --- Frame-level scores ---------------------------------------------------

// 1.0 when the hypothesis names the reference active intent, else 0.0. A
// missing hypothesis frame scores 0.0.
double intent_score(const FrameState& reference, const FrameState* hypothesis);

// Balanced F1 over requested-slot sets; empty when both sets are empty
// (such frames are skipped by the corpus aggregate). A missing hypothesis
// counts as an empty set.
std::optional<double> requested_slots_score(const FrameState& reference,
                                            const FrameState* hypothesis);

struct GoalScores {
    // One score per reference slot, in slot_values order: categorical slots
    // match exactly against any reference variant, non-categorical take the
    // best (optionally fuzzy) score across variants. The hypothesis value
    // is its first listed variant.
    std::vector<double> per_reference_slot;
    // Product over reference slots and hypothesis-only slots (which score
    // 0); 1.0 when neither side fills any slot.
    double joint = 1.0;
};

GoalScores goal_scores(const FrameState& reference, const FrameState* hypothesis,
                       const ServiceSchema& schema, bool use_fuzzy_match);

// --- Corpus-level evaluation ------------------------------------------------

struct MetricValues {
    double active_intent_accuracy = 1.0;
    double requested_slots_f1 = 1.0;
    double average_goal_accuracy = 1.0;
    double joint_goal_accuracy = 1.0;

    bool operator==(const MetricValues&) const = default;
};

struct BucketReport {
    MetricValues metrics;
    // Denominators. Metrics over an empty denominator report 1.0.
    std::size_t frames = 0;            // active intent and joint goal
    std::size_t requested_frames = 0;  // frames with a requested-slot score
    std::size_t slot_instances = 0;    // reference slot instances

    bool operator==(const BucketReport&) const = default;
};

struct EvalOptions {
    bool use_fuzzy_match = true;
    // When set, adds seen/unseen buckets: a frame is seen when its service
    // is in this set.
    std::optional<std::set<std::string>> seen_services;
};

struct EvalReport {
    BucketReport all;
    std::optional<BucketReport> seen;
    std::optional<BucketReport> unseen;
    std::map<std::string, BucketReport> per_service;
    // Non-fatal notes, e.g. reference dialogues absent from the hypothesis.
    ValidationReport diagnostics;
};

// Scores a hypothesis corpus against its reference over every user-turn
// frame, in the challenge's methodology: per-frame intent accuracy,
// macro-averaged requested-slot F1 (frames with no requests on either side
// are skipped), per-slot average goal accuracy, and product-rule joint goal
// accuracy. Frames align by dialogue_id, turn index, and service; reference
// dialogues missing from the hypothesis score zero (with a diagnostic).
// Structurally broken hypotheses (unknown dialogue_id, turn count mismatch,
// duplicate or extra frames, empty value lists) are refused.
EvalReport evaluate(const Corpus& reference, const Corpus& hypothesis,
                    const std::vector<ServiceSchema>& schemas, const EvalOptions& options = {});

ojson eval_report_to_json(const EvalReport& report);

} // namespace sgdkit
