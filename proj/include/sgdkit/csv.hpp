#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "sgdkit/error.hpp"

// Minimal RFC 4180 reader/writer: comma-separated, double-quote quoting
// with "" escapes, LF or CRLF record ends. Blank lines are skipped.
namespace sgdkit::csv {

inline std::vector<std::vector<std::string>> parse(std::string_view text) {
    std::vector<std::vector<std::string>> records;
    std::size_t i = 0;
    std::size_t line = 1;

    const auto at_record_end = [&] {
        return i >= text.size() || text[i] == '\n' || text[i] == '\r';
    };

    while (i < text.size()) {
        if (text[i] == '\n' || text[i] == '\r') { // blank line
            if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            ++i;
            ++line;
            continue;
        }
        std::vector<std::string> record;
        while (true) {
            std::string field;
            if (i < text.size() && text[i] == '"') {
                const std::size_t opened_at = line;
                ++i;
                bool closed = false;
                while (i < text.size()) {
                    const char c = text[i];
                    if (c == '"') {
                        if (i + 1 < text.size() && text[i + 1] == '"') {
                            field += '"';
                            i += 2;
                        } else {
                            ++i;
                            closed = true;
                            break;
                        }
                    } else {
                        if (c == '\n') ++line;
                        field += c;
                        ++i;
                    }
                }
                if (!closed) throw ParseError("unterminated quoted field", opened_at, 0);
            }
            while (!at_record_end() && text[i] != ',') field += text[i++];
            record.push_back(std::move(field));
            if (!at_record_end() && text[i] == ',') {
                ++i;
                continue;
            }
            break;
        }
        if (i < text.size()) {
            if (text[i] == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            ++i;
            ++line;
        }
        records.push_back(std::move(record));
    }
    return records;
}

inline std::string quote_field(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string write(const std::vector<std::vector<std::string>>& records) {
    std::string out;
    for (const auto& record : records) {
        for (std::size_t i = 0; i < record.size(); ++i) {
            if (i) out += ',';
            out += quote_field(record[i]);
        }
        out += '\n';
    }
    return out;
}

} // namespace sgdkit::csv
