#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace metrikit {

/// Base class for all library errors. `kind()` is a stable machine-readable
/// tag; the CLI maps it to an exit status and embeds it in error reports.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

/// Malformed containers: non-square matrices, size mismatches, invalid
/// indices, non-bijective correspondences.
class StructuralError : public Error {
public:
    explicit StructuralError(const std::string& what) : Error("structural", what) {}
};

/// A parameter outside its mathematical domain (q <= 0, alpha <= 1, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error("domain", what) {}
};

/// Non-finite or otherwise meaningless numeric data.
class InvalidDataError : public Error {
public:
    explicit InvalidDataError(const std::string& what) : Error("invalid_data", what) {}
};

/// A documented operation precondition does not hold for the given inputs.
class PreconditionError : public Error {
public:
    explicit PreconditionError(const std::string& what) : Error("precondition", what) {}
};

/// Inputs that are structurally fine but too small to be meaningful.
class DegenerateInputError : public Error {
public:
    explicit DegenerateInputError(const std::string& what) : Error("degenerate_input", what) {}
};

/// A scale request finer than the grid can certify.
class ResolutionError : public Error {
public:
    explicit ResolutionError(const std::string& what) : Error("resolution", what) {}
};

/// A request beyond desk scale (memory or cell-count blowup).
class ResourceError : public Error {
public:
    explicit ResourceError(const std::string& what) : Error("resource", what) {}
};

/// Input file syntax error; message carries path and 1-based line number.
class ParseError : public Error {
public:
    ParseError(std::string path, std::size_t line, const std::string& what)
        : Error("parse", path + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

}  // namespace metrikit
