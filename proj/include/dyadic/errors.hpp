#pragma once

#include <stdexcept>
#include <string>

namespace dyadic {

enum class ErrorKind { Usage, Data, Infeasible };

/// Base of every error thrown by the library. The kind maps onto the CLI
/// exit codes (usage 2, data 3, infeasible size 4).
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// A parameter violates an operation's precondition.
class UsageError : public Error {
public:
    explicit UsageError(const std::string& what) : Error(ErrorKind::Usage, what) {}
};

/// Input data is malformed: non-finite samples, shape mismatch, parse failure.
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

/// The requested enumeration or grid exceeds the desk-scale limits.
class InfeasibleError : public Error {
public:
    explicit InfeasibleError(const std::string& what) : Error(ErrorKind::Infeasible, what) {}
};

} // namespace dyadic
