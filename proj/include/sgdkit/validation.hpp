#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sgdkit {

// One validation finding, anchored to a location path such as
// "services[2].slots[0].possible_values".
struct Finding {
    std::string path;
    std::string message;

    bool operator==(const Finding&) const = default;
};

struct ValidationReport {
    std::vector<Finding> errors;
    std::vector<Finding> warnings;

    bool ok() const { return errors.empty(); }

    void error(std::string path, std::string message) {
        errors.push_back({std::move(path), std::move(message)});
    }
    void warn(std::string path, std::string message) {
        warnings.push_back({std::move(path), std::move(message)});
    }
    void merge(const ValidationReport& other, const std::string& prefix = "") {
        for (const auto& f : other.errors) errors.push_back({prefix + f.path, f.message});
        for (const auto& f : other.warnings) warnings.push_back({prefix + f.path, f.message});
    }

    std::string to_text() const {
        std::string out;
        for (const auto& f : errors) out += "error: " + f.path + ": " + f.message + "\n";
        for (const auto& f : warnings) out += "warning: " + f.path + ": " + f.message + "\n";
        return out;
    }
};

// Thrown when an operation refuses to proceed on invalid data.
class ValidationRefused : public std::runtime_error {
public:
    explicit ValidationRefused(ValidationReport report, const std::string& context = "invalid input")
        : std::runtime_error(context + "\n" + report.to_text()), report_(std::move(report)) {}

    const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

} // namespace sgdkit
