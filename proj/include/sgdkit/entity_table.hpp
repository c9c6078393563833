#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "sgdkit/schema.hpp"

namespace sgdkit {

// A malformed or illegal backend invocation (unknown method, missing or
// illegal arguments). An empty result set is not an error.
class CallError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One service's entity inventory: a header of slot names plus rows of
// values. Loaded from <service_name>.csv.
struct EntityTable {
    std::string service;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    std::optional<std::size_t> column_index(std::string_view name) const {
        for (std::size_t i = 0; i < columns.size(); ++i)
            if (columns[i] == name) return i;
        return std::nullopt;
    }

    const std::string* cell(std::size_t row, std::string_view column) const {
        const auto i = column_index(column);
        return i ? &rows[row][*i] : nullptr;
    }

    std::map<std::string, std::string> row_map(std::size_t row) const {
        std::map<std::string, std::string> out;
        for (std::size_t i = 0; i < columns.size(); ++i) out[columns[i]] = rows[row][i];
        return out;
    }

    bool operator==(const EntityTable&) const = default;
};

// Checks a table against its schema: columns resolve to slots, categorical
// cells take listed values, every non-categorical slot an intent touches is
// backed by a column (categorical ones can fall back to possible_values).
ValidationReport validate_entity_table(const EntityTable& table, const ServiceSchema& schema);

// Loads and validates <service_name>.csv for every schema; throws IoError
// for missing files and ValidationRefused for invalid tables.
std::map<std::string, EntityTable> load_entities(const std::filesystem::path& directory,
                                                 const std::vector<ServiceSchema>& schemas);

// Deterministic exact-match backend over entity tables.
class ServiceEngine {
public:
    ServiceEngine(std::vector<ServiceSchema> schemas, std::map<std::string, EntityTable> tables);

    static ServiceEngine load(std::vector<ServiceSchema> schemas,
                              const std::filesystem::path& entity_directory);

    const std::vector<ServiceSchema>& schemas() const { return schemas_; }
    const EntityTable& table(std::string_view service) const;

    // Executes `method` with the given arguments. Missing optional slots take
    // their declared defaults; "dontcare" (explicit or defaulted) applies no
    // filter. Rows match on exact string equality over argument slots that
    // are table columns. Search intents return every matching row; a
    // transactional intent returns the first match merged with the
    // arguments, or nothing when no entity matches.
    std::vector<std::map<std::string, std::string>> call(
        std::string_view service, std::string_view method,
        const std::map<std::string, std::string>& parameters) const;

private:
    std::vector<ServiceSchema> schemas_;
    std::map<std::string, EntityTable> tables_;
};

} // namespace sgdkit
