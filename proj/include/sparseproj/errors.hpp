#pragma once

#include <stdexcept>
#include <string>

namespace sparseproj {

/// Input outside the domain of an operation (zero vector, n < 2, bad range).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Inconsistent solver or command configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Root finder ran out of iterations. The last bracket is kept for callers.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double mu_lo, double mu_hi)
        : std::runtime_error(what), mu_lo_(mu_lo), mu_hi_(mu_hi) {}
    double mu_lo() const noexcept { return mu_lo_; }
    double mu_hi() const noexcept { return mu_hi_; }

private:
    double mu_lo_;
    double mu_hi_;
};

}  // namespace sparseproj
