#include "sgdkit/entity_table.hpp"

#include <set>

#include "sgdkit/corpus_io.hpp"
#include "sgdkit/csv.hpp"

namespace sgdkit {

ValidationReport validate_entity_table(const EntityTable& table, const ServiceSchema& schema) {
    ValidationReport report;
    const std::string file = table.service + ".csv";
    if (table.columns.empty()) {
        report.error(file, "missing header row");
        return report;
    }
    std::set<std::string> seen;
    for (const std::string& column : table.columns) {
        if (!schema.find_slot(column))
            report.error(file, "header column '" + column + "' is not a slot of " +
                                   schema.service_name);
        if (!seen.insert(column).second)
            report.error(file, "duplicate header column '" + column + "'");
    }
    if (table.rows.empty()) report.error(file, "table must contain at least one row");

    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string where = file + " row " + std::to_string(r + 2); // 1-based, after header
        if (row.size() != table.columns.size()) {
            report.error(where, "expected " + std::to_string(table.columns.size()) +
                                    " fields, got " + std::to_string(row.size()));
            continue;
        }
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            const SlotDef* slot = schema.find_slot(table.columns[c]);
            if (!slot || !slot->is_categorical) continue;
            bool listed = false;
            for (const auto& v : slot->possible_values) listed = listed || v == row[c];
            if (!listed)
                report.error(where, "column '" + table.columns[c] + "': '" + row[c] +
                                        "' is not a possible value");
        }
    }

    // Intents answer from table rows, so every non-categorical slot they
    // touch needs a column; categorical slots can be drawn from the schema.
    for (const IntentDef& intent : schema.intents) {
        const auto need_column = [&](const std::string& slot_name) {
            const SlotDef* slot = schema.find_slot(slot_name);
            if (!slot || slot->is_categorical) return;
            if (!table.column_index(slot_name))
                report.error(file, "intent '" + intent.name +
                                       "' uses non-categorical slot '" + slot_name +
                                       "' which has no column");
        };
        for (const auto& s : intent.required_slots) need_column(s);
        for (const auto& [s, d] : intent.optional_slots) need_column(s);
        for (const auto& s : intent.result_slots) need_column(s);
    }
    return report;
}

std::map<std::string, EntityTable> load_entities(const std::filesystem::path& directory,
                                                 const std::vector<ServiceSchema>& schemas) {
    std::map<std::string, EntityTable> tables;
    ValidationReport report;
    for (const ServiceSchema& schema : schemas) {
        const auto path = directory / (schema.service_name + ".csv");
        EntityTable table;
        table.service = schema.service_name;
        auto records = csv::parse(read_text_file(path));
        if (!records.empty()) {
            table.columns = std::move(records.front());
            table.rows.assign(std::make_move_iterator(records.begin() + 1),
                              std::make_move_iterator(records.end()));
        }
        report.merge(validate_entity_table(table, schema));
        tables.emplace(schema.service_name, std::move(table));
    }
    if (!report.ok()) throw ValidationRefused(report, "invalid entity tables");
    return tables;
}

ServiceEngine::ServiceEngine(std::vector<ServiceSchema> schemas,
                             std::map<std::string, EntityTable> tables)
    : schemas_(std::move(schemas)), tables_(std::move(tables)) {}

ServiceEngine ServiceEngine::load(std::vector<ServiceSchema> schemas,
                                  const std::filesystem::path& entity_directory) {
    auto tables = load_entities(entity_directory, schemas);
    return ServiceEngine(std::move(schemas), std::move(tables));
}

const EntityTable& ServiceEngine::table(std::string_view service) const {
    const auto it = tables_.find(std::string(service));
    if (it == tables_.end())
        throw CallError("no entity table for service '" + std::string(service) + "'");
    return it->second;
}

std::vector<std::map<std::string, std::string>> ServiceEngine::call(
    std::string_view service, std::string_view method,
    const std::map<std::string, std::string>& parameters) const {
    const ServiceSchema* schema = find_service(schemas_, service);
    if (!schema) throw CallError("unknown service '" + std::string(service) + "'");
    const IntentDef* intent = schema->find_intent(method);
    if (!intent)
        throw CallError("service '" + schema->service_name + "' has no method '" +
                        std::string(method) + "'");

    for (const auto& [slot, value] : parameters) {
        const SlotDef* def = schema->find_slot(slot);
        if (!def || !intent->allows_argument(slot))
            throw CallError("method '" + intent->name + "' takes no argument '" + slot + "'");
        if (!def->accepts_value(value))
            throw CallError("argument '" + slot + "': '" + value +
                            "' is not a possible value");
    }
    for (const std::string& slot : intent->required_slots)
        if (!parameters.count(slot))
            throw CallError("method '" + intent->name + "' requires argument '" + slot + "'");

    // Effective constraints: arguments plus defaults, with no-preference
    // values dropping out entirely.
    std::map<std::string, std::string> constraints;
    for (const auto& [slot, value] : parameters)
        if (value != kDontCare) constraints.emplace(slot, value);
    for (const auto& [slot, value] : intent->optional_slots)
        if (!parameters.count(slot) && value != kDontCare) constraints.emplace(slot, value);

    const EntityTable& entities = table(service);
    std::vector<std::map<std::string, std::string>> results;
    for (std::size_t r = 0; r < entities.rows.size(); ++r) {
        bool match = true;
        for (const auto& [slot, value] : constraints) {
            const std::string* cell = entities.cell(r, slot);
            if (cell && *cell != value) match = false;
        }
        if (!match) continue;
        if (intent->is_transactional) {
            // The booked entity plus the transaction's own arguments.
            auto row = entities.row_map(r);
            for (const auto& [slot, value] : parameters)
                if (value != kDontCare) row.emplace(slot, value);
            return {std::move(row)};
        }
        results.push_back(entities.row_map(r));
    }
    return results;
}

} // namespace sgdkit
