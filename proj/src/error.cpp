#include "obench/error.hpp"

namespace obench {

Error::Error(ErrorKind kind, std::string message, std::string field)
    : std::runtime_error(std::move(message)), kind_(kind), field_(std::move(field)) {}

void fail(const std::string& message) { throw Error(ErrorKind::Domain, message); }

void fail_parse(const std::string& field, const std::string& message) {
    throw Error(ErrorKind::Parse, field + ": " + message, field);
}

void fail_io(const std::string& message) { throw Error(ErrorKind::Io, message); }

}  // namespace obench
