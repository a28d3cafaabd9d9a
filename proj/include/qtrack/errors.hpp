#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qtrack {

// Raised when a domain invariant is violated. `code` names the invariant
// (e.g. "NonAscendingThresholds") and is stable across releases; the detail
// text is free-form.
class ValidationError : public std::runtime_error {
public:
    ValidationError(std::string code, const std::string& detail)
        : std::runtime_error(code + ": " + detail), code_(std::move(code)) {}

    const std::string& code() const { return code_; }

private:
    std::string code_;
};

// Raised for malformed configuration input (bad JSON, missing required
// fields, wrong types). Distinct from ValidationError so the CLI can map
// parse problems and semantic problems to different exit codes.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qtrack
