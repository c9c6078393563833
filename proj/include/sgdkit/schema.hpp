#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sgdkit/json_io.hpp"
#include "sgdkit/validation.hpp"

namespace sgdkit {

// Distinguished tokens shared across the toolkit. "dontcare" marks an
// explicit no-preference value and is accepted wherever a categorical value
// is expected; "NONE" is the no-active-intent marker.
inline constexpr const char* kDontCare = "dontcare";
inline constexpr const char* kNoneIntent = "NONE";

struct SlotDef {
    std::string name;
    std::string description;
    bool is_categorical = false;
    std::vector<std::string> possible_values; // non-empty iff categorical

    bool accepts_value(std::string_view v) const {
        if (!is_categorical || v == kDontCare) return true;
        for (const auto& pv : possible_values)
            if (pv == v) return true;
        return false;
    }

    bool operator==(const SlotDef&) const = default;
};

struct IntentDef {
    std::string name;
    std::string description;
    bool is_transactional = false;
    std::vector<std::string> required_slots;
    // Declaration order preserved so schema files round-trip byte-stably.
    std::vector<std::pair<std::string, std::string>> optional_slots;
    std::vector<std::string> result_slots;

    const std::string* default_for(std::string_view slot) const {
        for (const auto& [name, value] : optional_slots)
            if (name == slot) return &value;
        return nullptr;
    }

    bool is_required(std::string_view slot) const {
        for (const auto& s : required_slots)
            if (s == slot) return true;
        return false;
    }

    bool allows_argument(std::string_view slot) const {
        return is_required(slot) || default_for(slot) != nullptr;
    }

    bool operator==(const IntentDef&) const = default;
};

struct ServiceSchema {
    std::string service_name;
    std::string description;
    std::vector<SlotDef> slots;
    std::vector<IntentDef> intents;

    const SlotDef* find_slot(std::string_view name) const {
        for (const auto& s : slots)
            if (s.name == name) return &s;
        return nullptr;
    }

    const IntentDef* find_intent(std::string_view name) const {
        for (const auto& i : intents)
            if (i.name == name) return &i;
        return nullptr;
    }

    bool operator==(const ServiceSchema&) const = default;
};

inline const ServiceSchema* find_service(const std::vector<ServiceSchema>& schemas,
                                         std::string_view name) {
    for (const auto& s : schemas)
        if (s.service_name == name) return &s;
    return nullptr;
}

// Schema file format: a UTF-8 JSON array of service objects, field names
// matching the released dataset layout (see docs/formats.md). Declaration
// order is preserved.
std::vector<ServiceSchema> parse_schemas(std::string_view text, const ParseOptions& options = {},
                                         ValidationReport* diagnostics = nullptr);

// Every structural invariant violation, in document order, with a stable
// location path. Violations are data, not errors.
ValidationReport validate_schema(const ServiceSchema& schema);

// Per-service checks plus cross-service name uniqueness; paths are prefixed
// "services[i].".
ValidationReport validate_schemas(const std::vector<ServiceSchema>& schemas);

// Canonical serialization: 2-space indent, fixed field order, trailing
// newline. Refuses invalid collections by throwing ValidationRefused.
std::string serialize_schemas(const std::vector<ServiceSchema>& schemas);

ojson schema_to_json(const ServiceSchema& schema);

} // namespace sgdkit
