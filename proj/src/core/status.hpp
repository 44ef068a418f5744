#pragma once

#include <stdexcept>
#include <string>

namespace kcgml {

// Error classes shared by the core library and the C API. Values are stable;
// the C header mirrors them one-to-one.
enum class Status : int {
    Ok = 0,
    ConfigError = 1,     // invalid configuration value or argument
    InputError = 2,      // unreadable or malformed input data
    NotFound = 3,        // unknown node, key, or file
    SelfLoop = 4,        // contact between a node and itself
    FormatVersion = 5,   // archive written by an incompatible version
    Truncated = 6,       // archive ends before the declared content
    DependencyError = 7, // a required upstream artifact is missing
    InternalError = 8,
};

const char* status_name(Status s) noexcept;

class Error : public std::runtime_error {
public:
    Error(Status status, const std::string& message)
        : std::runtime_error(message), status_(status) {}

    Status status() const noexcept { return status_; }

private:
    Status status_;
};

inline const char* status_name(Status s) noexcept {
    switch (s) {
    case Status::Ok: return "ok";
    case Status::ConfigError: return "config_error";
    case Status::InputError: return "input_error";
    case Status::NotFound: return "not_found";
    case Status::SelfLoop: return "self_loop";
    case Status::FormatVersion: return "format_version";
    case Status::Truncated: return "truncated";
    case Status::DependencyError: return "dependency_error";
    case Status::InternalError: return "internal_error";
    }
    return "unknown";
}

} // namespace kcgml
