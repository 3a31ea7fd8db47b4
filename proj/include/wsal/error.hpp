#pragma once

#include <stdexcept>
#include <string>

namespace wsal {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorKind {
    InvalidArgument,
    VacuousBound,
    InsufficientItems,
    InsufficientClassInstances,
    NonFiniteLoss,
    DimensionMismatch,
    MissingColumn,
    NonNumericCell,
    EmptyFile,
    MalformedRow,
    Io,
    Config,
    Runtime,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool cond, const std::string& what) {
    if (!cond) fail(ErrorKind::InvalidArgument, what);
}

} // namespace wsal
