#ifndef MIXEDSCORE_ERRORS_HPP
#define MIXEDSCORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mixedscore {

// Bad input values or violated preconditions.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed text input. line() is one-based; 0 when not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Eigensolver failure or a degenerate spectrum.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Membership reconstruction could not proceed (singular vertex Gram matrix).
class ReconstructionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// DCMM parameters that do not define a valid edge-probability matrix.
class ModelError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace mixedscore

#endif  // MIXEDSCORE_ERRORS_HPP
