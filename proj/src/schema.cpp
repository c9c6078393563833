#include "sgdkit/schema.hpp"

#include <set>
#include <unordered_map>

namespace sgdkit {

namespace {

SlotDef parse_slot(const ojson& node, const std::string& path, const ParseOptions& options,
                   ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"name", "description", "is_categorical", "possible_values"}, path, options,
                 diagnostics);
    SlotDef slot;
    slot.name = expect_string(node, "name", path);
    slot.description = expect_string(node, "description", path);
    slot.is_categorical = expect_bool(node, "is_categorical", path);
    if (node.contains("possible_values"))
        slot.possible_values = expect_string_array(node, "possible_values", path);
    return slot;
}

IntentDef parse_intent(const ojson& node, const std::string& path, const ParseOptions& options,
                       ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node,
                 {"name", "description", "is_transactional", "required_slots", "optional_slots",
                  "result_slots"},
                 path, options, diagnostics);
    IntentDef intent;
    intent.name = expect_string(node, "name", path);
    intent.description = expect_string(node, "description", path);
    intent.is_transactional = expect_bool(node, "is_transactional", path);
    if (node.contains("required_slots"))
        intent.required_slots = expect_string_array(node, "required_slots", path);
    if (node.contains("optional_slots")) {
        const ojson& opt = node.at("optional_slots");
        if (!opt.is_object())
            throw ParseError(path + ".optional_slots: expected an object of slot -> default");
        for (const auto& [slot, value] : opt.items()) {
            if (!value.is_string())
                throw ParseError(path + ".optional_slots." + slot + ": default must be a string");
            intent.optional_slots.emplace_back(slot, value.get<std::string>());
        }
    }
    if (node.contains("result_slots"))
        intent.result_slots = expect_string_array(node, "result_slots", path);
    return intent;
}

ServiceSchema parse_service(const ojson& node, const std::string& path, const ParseOptions& options,
                            ValidationReport* diagnostics) {
    expect_object(node, path);
    check_fields(node, {"service_name", "description", "slots", "intents"}, path, options,
                 diagnostics);
    ServiceSchema schema;
    schema.service_name = expect_string(node, "service_name", path);
    schema.description = expect_string(node, "description", path);
    const ojson& slots = expect_array(node, "slots", path);
    for (std::size_t i = 0; i < slots.size(); ++i)
        schema.slots.push_back(
            parse_slot(slots[i], path + ".slots[" + std::to_string(i) + "]", options, diagnostics));
    const ojson& intents = expect_array(node, "intents", path);
    for (std::size_t i = 0; i < intents.size(); ++i)
        schema.intents.push_back(parse_intent(
            intents[i], path + ".intents[" + std::to_string(i) + "]", options, diagnostics));
    return schema;
}

void check_identifier(ValidationReport& report, const std::string& path, const std::string& name,
                      const char* kind) {
    if (name.empty()) report.error(path, std::string(kind) + " name must not be empty");
}

void check_slot_list(ValidationReport& report, const ServiceSchema& schema,
                     const std::string& path, const std::vector<std::string>& names) {
    std::set<std::string> seen;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const std::string el = path + "[" + std::to_string(i) + "]";
        if (!schema.find_slot(names[i]))
            report.error(el, "references undefined slot '" + names[i] + "'");
        if (!seen.insert(names[i]).second) report.error(el, "duplicate slot '" + names[i] + "'");
    }
}

} // namespace

std::vector<ServiceSchema> parse_schemas(std::string_view text, const ParseOptions& options,
                                         ValidationReport* diagnostics) {
    ojson doc = parse_json_text(text);
    if (!doc.is_array()) throw ParseError("$: expected a JSON array of services");
    std::vector<ServiceSchema> schemas;
    schemas.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i)
        schemas.push_back(
            parse_service(doc[i], "services[" + std::to_string(i) + "]", options, diagnostics));
    return schemas;
}

ValidationReport validate_schema(const ServiceSchema& schema) {
    ValidationReport report;
    check_identifier(report, "service_name", schema.service_name, "service");

    std::unordered_map<std::string, std::size_t> slot_at;
    for (std::size_t i = 0; i < schema.slots.size(); ++i) {
        const SlotDef& slot = schema.slots[i];
        const std::string path = "slots[" + std::to_string(i) + "]";
        check_identifier(report, path + ".name", slot.name, "slot");
        auto [it, fresh] = slot_at.emplace(slot.name, i);
        if (!fresh)
            report.error(path + ".name", "duplicate slot name '" + slot.name +
                                             "' (first defined at slots[" +
                                             std::to_string(it->second) + "])");
        if (slot.is_categorical) {
            if (slot.possible_values.empty())
                report.error(path + ".possible_values",
                             "categorical slot must list at least one possible value");
            std::set<std::string> seen;
            for (std::size_t v = 0; v < slot.possible_values.size(); ++v) {
                const std::string& value = slot.possible_values[v];
                const std::string vpath = path + ".possible_values[" + std::to_string(v) + "]";
                if (value.empty()) report.error(vpath, "possible value must not be empty");
                if (value == kDontCare)
                    report.error(vpath, "'dontcare' is implicit and must not be listed");
                if (!seen.insert(value).second)
                    report.error(vpath, "duplicate possible value '" + value + "'");
            }
        } else if (!slot.possible_values.empty()) {
            report.error(path + ".possible_values",
                         "non-categorical slot must not list possible values");
        }
    }

    std::unordered_map<std::string, std::size_t> intent_at;
    for (std::size_t i = 0; i < schema.intents.size(); ++i) {
        const IntentDef& intent = schema.intents[i];
        const std::string path = "intents[" + std::to_string(i) + "]";
        check_identifier(report, path + ".name", intent.name, "intent");
        if (intent.name == kNoneIntent)
            report.error(path + ".name",
                         "'NONE' is reserved for the no-active-intent marker");
        auto [it, fresh] = intent_at.emplace(intent.name, i);
        if (!fresh)
            report.error(path + ".name", "duplicate intent name '" + intent.name +
                                             "' (first defined at intents[" +
                                             std::to_string(it->second) + "])");
        check_slot_list(report, schema, path + ".required_slots", intent.required_slots);
        check_slot_list(report, schema, path + ".result_slots", intent.result_slots);
        std::set<std::string> seen_optional;
        for (std::size_t o = 0; o < intent.optional_slots.size(); ++o) {
            const auto& [slot_name, default_value] = intent.optional_slots[o];
            const std::string opath = path + ".optional_slots." + slot_name;
            const SlotDef* slot = schema.find_slot(slot_name);
            if (!slot) report.error(opath, "references undefined slot '" + slot_name + "'");
            if (!seen_optional.insert(slot_name).second)
                report.error(opath, "duplicate optional slot '" + slot_name + "'");
            if (intent.is_required(slot_name))
                report.error(opath, "slot '" + slot_name + "' is already required");
            if (slot && !slot->accepts_value(default_value))
                report.error(opath, "default '" + default_value +
                                        "' is not a possible value of categorical slot '" +
                                        slot_name + "'");
        }
    }
    return report;
}

ValidationReport validate_schemas(const std::vector<ServiceSchema>& schemas) {
    ValidationReport report;
    std::unordered_map<std::string, std::size_t> service_at;
    for (std::size_t i = 0; i < schemas.size(); ++i) {
        const std::string path = "services[" + std::to_string(i) + "]";
        report.merge(validate_schema(schemas[i]), path + ".");
        auto [it, fresh] = service_at.emplace(schemas[i].service_name, i);
        if (!fresh)
            report.error(path + ".service_name",
                         "duplicate service name '" + schemas[i].service_name +
                             "' (first defined at services[" + std::to_string(it->second) + "])");
    }
    return report;
}

ojson schema_to_json(const ServiceSchema& schema) {
    ojson node;
    node["service_name"] = schema.service_name;
    node["description"] = schema.description;
    node["slots"] = ojson::array();
    for (const SlotDef& slot : schema.slots) {
        ojson s;
        s["name"] = slot.name;
        s["description"] = slot.description;
        s["is_categorical"] = slot.is_categorical;
        s["possible_values"] = slot.possible_values;
        node["slots"].push_back(std::move(s));
    }
    node["intents"] = ojson::array();
    for (const IntentDef& intent : schema.intents) {
        ojson i;
        i["name"] = intent.name;
        i["description"] = intent.description;
        i["is_transactional"] = intent.is_transactional;
        i["required_slots"] = intent.required_slots;
        ojson optional = ojson::object();
        for (const auto& [slot, value] : intent.optional_slots) optional[slot] = value;
        i["optional_slots"] = std::move(optional);
        i["result_slots"] = intent.result_slots;
        node["intents"].push_back(std::move(i));
    }
    return node;
}

std::string serialize_schemas(const std::vector<ServiceSchema>& schemas) {
    ValidationReport report = validate_schemas(schemas);
    if (!report.ok()) throw ValidationRefused(report, "cannot serialize invalid schemas");
    ojson doc = ojson::array();
    for (const ServiceSchema& schema : schemas) doc.push_back(schema_to_json(schema));
    return doc.dump(2) + "\n";
}

} // namespace sgdkit
