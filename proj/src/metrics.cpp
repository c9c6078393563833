#include "sgdkit/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cctype>
#include <unordered_map>

#include "sgdkit/utf8.hpp"

namespace sgdkit {

std::string normalize_value(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    bool pending_space = false;
    for (const char c : value) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out += ' ';
            pending_space = false;
        }
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

namespace {

std::size_t levenshtein(const std::vector<char32_t>& a, const std::vector<char32_t>& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t previous = row[j];
            const std::size_t substitute = diagonal + (a[i - 1] == b[j - 1] ? 0 : 1);
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, substitute});
            diagonal = previous;
        }
    }
    return row[b.size()];
}

// Sums a score list deterministically regardless of accumulation order:
// sort first, then compensate (Neumaier).
double stable_sum(std::vector<double>& scores) {
    std::sort(scores.begin(), scores.end());
    double sum = 0.0;
    double compensation = 0.0;
    for (const double x : scores) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            compensation += (sum - t) + x;
        else
            compensation += (x - t) + sum;
        sum = t;
    }
    return sum + compensation;
}

double mean_or_one(std::vector<double>& scores) {
    if (scores.empty()) return 1.0;
    return stable_sum(scores) / static_cast<double>(scores.size());
}

} // namespace

double fuzzy_match(std::string_view reference, std::string_view hypothesis) {
    const auto ref = utf8::decode(normalize_value(reference));
    const auto hyp = utf8::decode(normalize_value(hypothesis));
    if (ref.empty() && hyp.empty()) return 1.0;
    if (ref.empty() || hyp.empty()) return 0.0;
    const double distance = static_cast<double>(levenshtein(ref, hyp));
    return 1.0 - distance / static_cast<double>(std::max(ref.size(), hyp.size()));
}

double intent_score(const FrameState& reference, const FrameState* hypothesis) {
    if (!hypothesis) return 0.0;
    return reference.active_intent == hypothesis->active_intent ? 1.0 : 0.0;
}

std::optional<double> requested_slots_score(const FrameState& reference,
                                            const FrameState* hypothesis) {
    static const std::set<std::string> kEmpty;
    const std::set<std::string>& ref = reference.requested_slots;
    const std::set<std::string>& hyp = hypothesis ? hypothesis->requested_slots : kEmpty;
    if (ref.empty() && hyp.empty()) return std::nullopt;
    if (ref.empty() || hyp.empty()) return 0.0;
    std::size_t hits = 0;
    for (const std::string& slot : ref) hits += hyp.count(slot);
    if (hits == 0) return 0.0;
    const double precision = static_cast<double>(hits) / static_cast<double>(hyp.size());
    const double recall = static_cast<double>(hits) / static_cast<double>(ref.size());
    return 2.0 * precision * recall / (precision + recall);
}

GoalScores goal_scores(const FrameState& reference, const FrameState* hypothesis,
                       const ServiceSchema& schema, bool use_fuzzy_match) {
    GoalScores scores;
    for (const auto& [slot, ref_values] : reference.slot_values) {
        double score = 0.0;
        if (hypothesis) {
            const auto it = hypothesis->slot_values.find(slot);
            if (it != hypothesis->slot_values.end() && !it->second.empty()) {
                const std::string& hyp_value = it->second.front();
                const SlotDef* def = schema.find_slot(slot);
                const bool categorical = def && def->is_categorical;
                for (const std::string& ref_value : ref_values) {
                    const double s = !categorical && use_fuzzy_match
                                         ? fuzzy_match(ref_value, hyp_value)
                                         : (ref_value == hyp_value ? 1.0 : 0.0);
                    score = std::max(score, s);
                }
            }
        }
        scores.per_reference_slot.push_back(score);
        scores.joint *= score;
    }
    if (hypothesis) {
        // Hallucinated slots void the joint score but are not reference
        // instances, so they leave the average untouched.
        for (const auto& [slot, values] : hypothesis->slot_values)
            if (!reference.slot_values.count(slot)) scores.joint = 0.0;
    }
    return scores;
}

namespace {

struct Accumulator {
    std::vector<double> intent;
    std::vector<double> requested;
    std::vector<double> goal;
    std::vector<double> joint;

    void add_frame(double intent_score, std::optional<double> requested_score,
                   const GoalScores& goals) {
        intent.push_back(intent_score);
        if (requested_score) requested.push_back(*requested_score);
        goal.insert(goal.end(), goals.per_reference_slot.begin(),
                    goals.per_reference_slot.end());
        joint.push_back(goals.joint);
    }

    BucketReport finalize() {
        BucketReport report;
        report.frames = intent.size();
        report.requested_frames = requested.size();
        report.slot_instances = goal.size();
        report.metrics.active_intent_accuracy = mean_or_one(intent);
        report.metrics.requested_slots_f1 = mean_or_one(requested);
        report.metrics.average_goal_accuracy = mean_or_one(goal);
        report.metrics.joint_goal_accuracy = mean_or_one(joint);
        return report;
    }
};

const FrameState* frame_state(const Frame* frame, const std::string& where,
                              ValidationReport& problems) {
    if (!frame) return nullptr;
    if (!frame->state) {
        problems.error(where, "hypothesis frame has no state");
        return nullptr;
    }
    for (const auto& [slot, values] : frame->state->slot_values)
        if (values.empty())
            problems.error(where + ".state.slot_values." + slot,
                           "hypothesis value list must not be empty");
    return &*frame->state;
}

} // namespace

EvalReport evaluate(const Corpus& reference, const Corpus& hypothesis,
                    const std::vector<ServiceSchema>& schemas, const EvalOptions& options) {
    // Index and structurally check the hypothesis before scoring anything.
    std::unordered_map<std::string, const Dialogue*> ref_by_id;
    for (const Dialogue& d : reference) ref_by_id.emplace(d.dialogue_id, &d);

    ValidationReport problems;
    std::unordered_map<std::string, const Dialogue*> hyp_by_id;
    for (const Dialogue& d : hypothesis) {
        const auto ref_it = ref_by_id.find(d.dialogue_id);
        if (ref_it == ref_by_id.end()) {
            problems.error(d.dialogue_id, "hypothesis dialogue has no reference counterpart");
            continue;
        }
        if (!hyp_by_id.emplace(d.dialogue_id, &d).second) {
            problems.error(d.dialogue_id, "duplicate hypothesis dialogue");
            continue;
        }
        if (d.turns.size() != ref_it->second->turns.size())
            problems.error(d.dialogue_id,
                           "hypothesis has " + std::to_string(d.turns.size()) +
                               " turns, reference has " +
                               std::to_string(ref_it->second->turns.size()));
    }
    if (!problems.ok()) throw ValidationRefused(problems, "hypothesis does not match reference");

    EvalReport report;
    Accumulator all;
    Accumulator seen, unseen;
    std::map<std::string, Accumulator> per_service;

    for (const Dialogue& ref_dialogue : reference) {
        const auto hyp_it = hyp_by_id.find(ref_dialogue.dialogue_id);
        const Dialogue* hyp_dialogue = hyp_it == hyp_by_id.end() ? nullptr : hyp_it->second;
        if (!hyp_dialogue)
            report.diagnostics.warn(ref_dialogue.dialogue_id,
                                    "missing from the hypothesis; its frames score zero");

        for (std::size_t t = 0; t < ref_dialogue.turns.size(); ++t) {
            const Turn& ref_turn = ref_dialogue.turns[t];
            if (ref_turn.speaker != Speaker::User) continue;
            const Turn* hyp_turn = hyp_dialogue ? &hyp_dialogue->turns[t] : nullptr;
            const std::string where =
                ref_dialogue.dialogue_id + ".turns[" + std::to_string(t) + "]";

            if (hyp_turn) {
                std::set<std::string> hyp_services;
                for (const Frame& frame : hyp_turn->frames) {
                    if (!hyp_services.insert(frame.service).second)
                        problems.error(where, "duplicate hypothesis frame for service '" +
                                                  frame.service + "'");
                    if (!ref_turn.frame_for(frame.service))
                        problems.error(where, "hypothesis frame for service '" + frame.service +
                                                  "' has no reference counterpart");
                }
            }

            for (const Frame& ref_frame : ref_turn.frames) {
                if (!ref_frame.state) {
                    report.diagnostics.warn(where + " (" + ref_frame.service + ")",
                                            "reference frame has no state; skipped");
                    continue;
                }
                const ServiceSchema* schema = find_service(schemas, ref_frame.service);
                if (!schema) {
                    problems.error(where, "unknown service '" + ref_frame.service + "'");
                    continue;
                }
                const Frame* hyp_frame =
                    hyp_turn ? hyp_turn->frame_for(ref_frame.service) : nullptr;
                const FrameState* hyp_state =
                    frame_state(hyp_frame, where + " (" + ref_frame.service + ")", problems);

                const double intent = intent_score(*ref_frame.state, hyp_state);
                const auto requested = requested_slots_score(*ref_frame.state, hyp_state);
                const GoalScores goals =
                    goal_scores(*ref_frame.state, hyp_state, *schema, options.use_fuzzy_match);

                all.add_frame(intent, requested, goals);
                per_service[ref_frame.service].add_frame(intent, requested, goals);
                if (options.seen_services) {
                    (options.seen_services->count(ref_frame.service) ? seen : unseen)
                        .add_frame(intent, requested, goals);
                }
            }
        }
    }
    if (!problems.ok()) throw ValidationRefused(problems, "hypothesis does not match reference");

    report.all = all.finalize();
    if (options.seen_services) {
        report.seen = seen.finalize();
        report.unseen = unseen.finalize();
    }
    for (auto& [service, accumulator] : per_service)
        report.per_service.emplace(service, accumulator.finalize());
    return report;
}

namespace {

ojson bucket_to_json(const BucketReport& bucket) {
    ojson node;
    node["active_intent_accuracy"] = bucket.metrics.active_intent_accuracy;
    node["average_goal_accuracy"] = bucket.metrics.average_goal_accuracy;
    node["joint_goal_accuracy"] = bucket.metrics.joint_goal_accuracy;
    node["requested_slots_f1"] = bucket.metrics.requested_slots_f1;
    node["frames"] = bucket.frames;
    node["requested_frames"] = bucket.requested_frames;
    node["slot_instances"] = bucket.slot_instances;
    return node;
}

} // namespace

ojson eval_report_to_json(const EvalReport& report) {
    ojson node;
    node["all"] = bucket_to_json(report.all);
    if (report.seen) node["seen"] = bucket_to_json(*report.seen);
    if (report.unseen) node["unseen"] = bucket_to_json(*report.unseen);
    node["per_service"] = ojson::object();
    for (const auto& [service, bucket] : report.per_service)
        node["per_service"][service] = bucket_to_json(bucket);
    if (!report.diagnostics.warnings.empty()) {
        ojson warnings = ojson::array();
        for (const auto& w : report.diagnostics.warnings)
            warnings.push_back(w.path + ": " + w.message);
        node["warnings"] = std::move(warnings);
    }
    return node;
}

} // namespace sgdkit
