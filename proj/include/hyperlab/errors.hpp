#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hyperlab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Validation family: bad inputs that the caller can fix (CLI exit code 2).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class GridMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class GeometryError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

/// A requested frequency or length scale is not representable on the grid.
class ResolutionError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class ParseError : public InvalidArgument {
public:
    ParseError(std::size_t line, const std::string& what)
        : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class UnknownKey : public InvalidArgument {
public:
    explicit UnknownKey(const std::string& key)
        : InvalidArgument("unknown key '" + key + "'"), key_(key) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// Numerical family: the computation ran but its result cannot be trusted
// (CLI exit code 3).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

class BlowupError : public NumericalFailure {
public:
    BlowupError(std::size_t step, const std::string& what)
        : NumericalFailure("step " + std::to_string(step) + ": " + what), step_(step) {}
    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// Mass has reached the outer shell of the grid, where the Dirichlet wall
/// starts to reflect it back.
class WallContamination : public NumericalFailure {
public:
    WallContamination(double time, double tail_fraction);
    double time() const noexcept { return time_; }
    double tail_fraction() const noexcept { return tail_; }

private:
    double time_;
    double tail_;
};

}  // namespace hyperlab
