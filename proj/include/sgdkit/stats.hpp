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

// Domain of a service: the explicit mapping wins, otherwise a trailing
// "_<digits>" qualifier is stripped ("Restaurants_2" -> "Restaurants").
std::string domain_of(std::string_view service,
                      const std::map<std::string, std::string>& domain_map = {});

struct DomainStats {
    std::set<std::string> services;
    std::size_t intents = 0;   // summed over the domain's schema services
    std::size_t dialogues = 0; // dialogues with at least one service in the domain

    bool operator==(const DomainStats&) const = default;
};

struct StatsReport {
    std::size_t num_dialogues = 0;
    std::size_t num_domains = 0; // distinct domains observed in the corpus
    std::size_t total_turns = 0;
    double avg_turns_per_dialogue = 0.0;
    double avg_tokens_per_turn = 0.0;
    std::size_t total_unique_tokens = 0;
    std::size_t num_slots = 0;       // summed over the supplied schemas
    std::size_t num_slot_values = 0; // distinct (slot, value) pairs in user states
    // Dialogue length in turns -> dialogue count, split by whether the
    // dialogue touches one domain or several.
    std::map<std::size_t, std::size_t> single_domain_lengths;
    std::map<std::size_t, std::size_t> multi_domain_lengths;
    std::map<std::string, std::size_t> act_histogram;
    std::map<std::string, DomainStats> per_domain;
    // Fraction of turns with at least one frame outside the seen-service
    // set; present (along with the echoed set) iff seen services were
    // supplied.
    std::optional<std::set<std::string>> seen_services;
    std::optional<double> unseen_turn_fraction;

    bool operator==(const StatsReport&) const = default;
};

struct StatsOptions {
    std::optional<std::set<std::string>> seen_services;
    std::map<std::string, std::string> domain_map;
};

// Single deterministic pass over the corpus. Utterance tokens are
// whitespace-delimited units; the unique-token count lowercases ASCII
// first. Throws ValidationRefused on an empty corpus.
StatsReport compute_stats(const Corpus& corpus, const std::vector<ServiceSchema>& schemas,
                          const StatsOptions& options = {});

ojson stats_report_to_json(const StatsReport& report);

// Plot-ready CSV tables keyed by file name: the two dialogue-length
// histograms and the dialogue-act distribution.
std::map<std::string, std::string> render_histograms(const StatsReport& report);

} // namespace sgdkit
