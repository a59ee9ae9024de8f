#pragma once

#include <stdexcept>
#include <string>

namespace obench {

enum class ErrorKind {
    Domain,  // invalid data or arguments to an operation
    Parse,   // malformed file or config contents
    Usage,   // bad command line
    Io,      // filesystem failure
};

/// Exception carrying a category and, for parse errors, the offending field.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message, std::string field = {});

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& field() const noexcept { return field_; }

private:
    ErrorKind kind_;
    std::string field_;
};

[[noreturn]] void fail(const std::string& message);
[[noreturn]] void fail_parse(const std::string& field, const std::string& message);
[[noreturn]] void fail_io(const std::string& message);

}  // namespace obench
