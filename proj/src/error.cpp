#include "typdiv/error.hpp"

namespace typdiv {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::Io: return "io";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::DuplicateLanguage: return "duplicate-language";
    case ErrorKind::DuplicateFeature: return "duplicate-feature";
    case ErrorKind::Conflict: return "conflict";
    case ErrorKind::Config: return "config";
    case ErrorKind::Metadata: return "metadata";
    case ErrorKind::UnknownFeature: return "unknown-feature";
    case ErrorKind::NoSharedCoverage: return "no-shared-coverage";
    case ErrorKind::Degenerate: return "degenerate-distances";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Size: return "size";
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Coverage: return "coverage";
    }
    return "unknown";
}

}  // namespace typdiv
