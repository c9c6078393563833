#include "sgdkit/stats.hpp"

#include <cctype>
#include <utility>

#include "sgdkit/validation.hpp"

namespace sgdkit {

namespace {

std::vector<std::string> whitespace_tokens(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) != 0) ++i;
        std::size_t start = i;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])) == 0) ++i;
        if (i > start) tokens.emplace_back(text.substr(start, i - start));
    }
    return tokens;
}

std::string ascii_lower(std::string text) {
    for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return text;
}

ojson size_histogram_json(const std::map<std::size_t, std::size_t>& histogram) {
    ojson out = ojson::object();
    for (const auto& [bin, count] : histogram) out[std::to_string(bin)] = count;
    return out;
}

} // namespace

std::string domain_of(std::string_view service,
                      const std::map<std::string, std::string>& domain_map) {
    if (const auto it = domain_map.find(std::string(service)); it != domain_map.end())
        return it->second;
    const auto underscore = service.rfind('_');
    if (underscore != std::string_view::npos && underscore + 1 < service.size()) {
        bool digits = true;
        for (std::size_t i = underscore + 1; i < service.size(); ++i)
            digits = digits && std::isdigit(static_cast<unsigned char>(service[i])) != 0;
        if (digits) return std::string(service.substr(0, underscore));
    }
    return std::string(service);
}

StatsReport compute_stats(const Corpus& corpus, const std::vector<ServiceSchema>& schemas,
                          const StatsOptions& options) {
    if (corpus.empty()) {
        ValidationReport report;
        report.error("corpus", "statistics need at least one dialogue");
        throw ValidationRefused(report, "compute_stats");
    }

    StatsReport stats;
    stats.num_dialogues = corpus.size();

    for (const ServiceSchema& schema : schemas) {
        stats.num_slots += schema.slots.size();
        DomainStats& domain = stats.per_domain[domain_of(schema.service_name, options.domain_map)];
        domain.services.insert(schema.service_name);
        domain.intents += schema.intents.size();
    }

    std::set<std::string> corpus_domains;
    std::set<std::string> unique_tokens;
    std::set<std::pair<std::string, std::string>> slot_values;
    std::size_t total_tokens = 0;
    std::size_t unseen_turns = 0;

    for (const Dialogue& dialogue : corpus) {
        stats.total_turns += dialogue.turns.size();

        std::set<std::string> domains;
        for (const std::string& service : dialogue.services)
            domains.insert(domain_of(service, options.domain_map));
        corpus_domains.insert(domains.begin(), domains.end());
        for (const std::string& domain : domains) {
            DomainStats& entry = stats.per_domain[domain];
            entry.dialogues += 1;
        }
        for (const std::string& service : dialogue.services)
            stats.per_domain[domain_of(service, options.domain_map)].services.insert(service);

        auto& lengths =
            domains.size() > 1 ? stats.multi_domain_lengths : stats.single_domain_lengths;
        lengths[dialogue.turns.size()] += 1;

        for (const Turn& turn : dialogue.turns) {
            const auto tokens = whitespace_tokens(turn.utterance);
            total_tokens += tokens.size();
            for (const std::string& token : tokens) unique_tokens.insert(ascii_lower(token));

            bool unseen = false;
            for (const Frame& frame : turn.frames) {
                for (const DialogueAct& act : frame.actions) stats.act_histogram[act.act] += 1;
                if (options.seen_services.has_value())
                    unseen = unseen || options.seen_services->count(frame.service) == 0;
                if (turn.speaker == Speaker::User && frame.state.has_value())
                    for (const auto& [slot, variants] : frame.state->slot_values)
                        for (const std::string& value : variants) slot_values.insert({slot, value});
            }
            if (unseen) ++unseen_turns;
        }
    }

    stats.num_domains = corpus_domains.size();
    stats.total_unique_tokens = unique_tokens.size();
    stats.num_slot_values = slot_values.size();
    stats.avg_turns_per_dialogue =
        static_cast<double>(stats.total_turns) / static_cast<double>(stats.num_dialogues);
    if (stats.total_turns > 0)
        stats.avg_tokens_per_turn =
            static_cast<double>(total_tokens) / static_cast<double>(stats.total_turns);
    if (options.seen_services.has_value()) {
        stats.seen_services = options.seen_services;
        stats.unseen_turn_fraction = stats.total_turns == 0
                                         ? 0.0
                                         : static_cast<double>(unseen_turns) /
                                               static_cast<double>(stats.total_turns);
    }
    return stats;
}

ojson stats_report_to_json(const StatsReport& report) {
    ojson out = ojson::object();
    out["act_histogram"] = ojson::object();
    for (const auto& [act, count] : report.act_histogram) out["act_histogram"][act] = count;
    out["avg_tokens_per_turn"] = report.avg_tokens_per_turn;
    out["avg_turns_per_dialogue"] = report.avg_turns_per_dialogue;
    out["length_histograms"] = ojson::object();
    out["length_histograms"]["multi_domain"] = size_histogram_json(report.multi_domain_lengths);
    out["length_histograms"]["single_domain"] = size_histogram_json(report.single_domain_lengths);
    out["num_dialogues"] = report.num_dialogues;
    out["num_domains"] = report.num_domains;
    out["num_slot_values"] = report.num_slot_values;
    out["num_slots"] = report.num_slots;
    out["per_domain"] = ojson::object();
    for (const auto& [domain, entry] : report.per_domain) {
        ojson node = ojson::object();
        node["dialogues"] = entry.dialogues;
        node["intents"] = entry.intents;
        node["services"] = entry.services;
        out["per_domain"][domain] = node;
    }
    if (report.seen_services.has_value()) out["seen_services"] = *report.seen_services;
    out["total_turns"] = report.total_turns;
    out["total_unique_tokens"] = report.total_unique_tokens;
    if (report.unseen_turn_fraction.has_value())
        out["unseen_turn_fraction"] = *report.unseen_turn_fraction;
    return out;
}

std::map<std::string, std::string> render_histograms(const StatsReport& report) {
    auto lengths_csv = [](const std::map<std::size_t, std::size_t>& histogram) {
        std::string out = "turns,dialogues\n";
        for (const auto& [bin, count] : histogram)
            out += std::to_string(bin) + "," + std::to_string(count) + "\n";
        return out;
    };
    std::string acts = "act,count\n";
    for (const auto& [act, count] : report.act_histogram)
        acts += act + "," + std::to_string(count) + "\n";
    return {
        {"dialogue_acts.csv", std::move(acts)},
        {"dialogue_lengths_multi_domain.csv", lengths_csv(report.multi_domain_lengths)},
        {"dialogue_lengths_single_domain.csv", lengths_csv(report.single_domain_lengths)},
    };
}

} // namespace sgdkit
