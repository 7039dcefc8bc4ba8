#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace typdiv {

enum class ErrorKind {
    Io,
    Parse,
    DuplicateLanguage,
    DuplicateFeature,
    Conflict,
    Config,
    Metadata,
    UnknownFeature,
    NoSharedCoverage,
    Degenerate,
    Validation,
    Size,
    Argument,
    Coverage,
};

// Stable, greppable tag for each kind ("duplicate-language", ...).
std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace typdiv
