#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dpde {

enum class ErrorKind {
    InvalidArgument,
    IncommensurateDelay,
    IndexOutOfRange,
    ParseError,
    UnknownVariable,
    EvalDomainError,
    StrictCflViolation,
    BlowUp,
    Unstable,
    MeshMismatch,
    ConfigError,
};

std::string_view to_string(ErrorKind kind) noexcept;

/// Base of every error raised by the library. The kind is the stable,
/// machine-readable part; what() carries the human diagnostic.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Expression syntax error at a byte offset of the source text.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error(ErrorKind::ParseError,
                "parse error at offset " + std::to_string(offset) + ": " + message),
          offset_(offset), detail_(message) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t offset_;
    std::string detail_;
};

/// Config file error with enough location to find the offending line.
class ConfigError : public Error {
public:
    ConfigError(std::string section, std::string key, int line, const std::string& message)
        : Error(ErrorKind::ConfigError, format(section, key, line, message)),
          section_(std::move(section)), key_(std::move(key)), line_(line) {}

    const std::string& section() const noexcept { return section_; }
    const std::string& key() const noexcept { return key_; }
    int line() const noexcept { return line_; }

private:
    static std::string format(const std::string& section, const std::string& key, int line,
                              const std::string& message) {
        std::string out = "config error";
        if (line > 0) out += " (line " + std::to_string(line) + ")";
        if (!section.empty()) {
            out += " [" + section + "]";
            if (!key.empty()) out += " " + key;
        }
        return out + ": " + message;
    }

    std::string section_;
    std::string key_;
    int line_;
};

}  // namespace dpde
