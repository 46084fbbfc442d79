#pragma once

#include <stdexcept>
#include <string>

namespace krein {

// Argument outside a function's domain, or spectrum leaving it.
class DomainError : public std::domain_error {
public:
    DomainError(const std::string& what, double value) : std::domain_error(what), value_(value) {}
    double value() const noexcept { return value_; }

private:
    double value_;
};

class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace krein
