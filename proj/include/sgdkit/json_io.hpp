#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

#include "sgdkit/error.hpp"
#include "sgdkit/validation.hpp"

namespace sgdkit {

// All document I/O uses ordered JSON so field order survives a
// parse/serialize round trip byte-for-byte (modulo whitespace).
using ojson = nlohmann::ordered_json;

struct ParseOptions {
    // Strict mode rejects unknown fields; lenient mode downgrades them to
    // warnings so future dataset revisions still load.
    bool strict = true;
};

namespace detail {

inline void offset_to_line_column(std::string_view text, std::size_t byte,
                                  std::size_t& line, std::size_t& column) {
    line = 1;
    column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
}

} // namespace detail

inline ojson parse_json_text(std::string_view text) {
    try {
        return ojson::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // nlohmann reports a byte offset; translate it for diagnostics.
        std::size_t line = 0, column = 0;
        if (e.byte > 0) detail::offset_to_line_column(text, e.byte - 1, line, column);
        throw ParseError(e.what(), line, column);
    }
}

inline const ojson& expect_field(const ojson& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing required field \"" + key + "\"");
    return *it;
}

inline std::string expect_string(const ojson& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path + ": expected a string");
    return v.get<std::string>();
}

inline bool expect_bool(const ojson& v, const std::string& path) {
    if (!v.is_boolean()) throw ParseError(path + ": expected a boolean");
    return v.get<bool>();
}

inline const ojson& expect_array(const ojson& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected an array");
    return v;
}

inline const ojson& expect_object(const ojson& v, const std::string& path) {
    if (!v.is_object()) throw ParseError(path + ": expected an object");
    return v;
}

inline std::vector<std::string> expect_string_array(const ojson& v, const std::string& path) {
    expect_array(v, path);
    std::vector<std::string> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(expect_string(v[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

// Field-access forms: look up `key` in `obj`, then check the value's type.
inline std::string expect_string(const ojson& obj, const char* key, const std::string& path) {
    return expect_string(expect_field(obj, key, path), path + "." + key);
}

inline bool expect_bool(const ojson& obj, const char* key, const std::string& path) {
    return expect_bool(expect_field(obj, key, path), path + "." + key);
}

inline const ojson& expect_array(const ojson& obj, const char* key, const std::string& path) {
    return expect_array(expect_field(obj, key, path), path + "." + key);
}

inline std::vector<std::string> expect_string_array(const ojson& obj, const char* key,
                                                    const std::string& path) {
    return expect_string_array(expect_field(obj, key, path), path + "." + key);
}

inline ojson validation_report_to_json(const ValidationReport& report) {
    ojson out = ojson::object();
    auto findings = [](const std::vector<Finding>& list) {
        ojson rows = ojson::array();
        for (const Finding& f : list) rows.push_back({{"message", f.message}, {"path", f.path}});
        return rows;
    };
    out["errors"] = findings(report.errors);
    out["warnings"] = findings(report.warnings);
    return out;
}

// Unknown-field policy: error in strict mode, warning otherwise.
inline void check_fields(const ojson& obj, std::initializer_list<const char*> allowed,
                         const std::string& path, const ParseOptions& options,
                         ValidationReport* diagnostics) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* k : allowed) {
            if (it.key() == k) {
                known = true;
                break;
            }
        }
        if (known) continue;
        if (options.strict) throw ParseError(path + ": unknown field \"" + it.key() + "\"");
        if (diagnostics) diagnostics->warn(path, "unknown field \"" + it.key() + "\" ignored");
    }
}

} // namespace sgdkit
