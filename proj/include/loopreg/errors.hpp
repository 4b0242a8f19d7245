#pragma once

#include <stdexcept>
#include <string>

namespace loopreg {

/// Raised when an input violates an operation's precondition.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numeric procedure cannot meet its tolerance or hits a pole.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw DomainError(message);
}

}  // namespace detail
}  // namespace loopreg
