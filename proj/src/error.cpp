#include "dpde/error.hpp"

namespace dpde {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::IncommensurateDelay: return "IncommensurateDelay";
        case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::UnknownVariable: return "UnknownVariable";
        case ErrorKind::EvalDomainError: return "EvalDomainError";
        case ErrorKind::StrictCflViolation: return "StrictCflViolation";
        case ErrorKind::BlowUp: return "BlowUp";
        case ErrorKind::Unstable: return "Unstable";
        case ErrorKind::MeshMismatch: return "MeshMismatch";
        case ErrorKind::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

}  // namespace dpde
