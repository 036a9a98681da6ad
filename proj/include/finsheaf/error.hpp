#pragma once

#include <stdexcept>
#include <string>

namespace finsheaf {

// Every failure surfaced by the library carries one of these kinds, so the
// CLI can map it to an exit code and a machine-readable error object.
enum class ErrorKind {
    IllFormedHom,
    AmbientMismatch,
    NotAComplex,
    ChainMismatch,
    NotAntisymmetric,
    UnknownPoint,
    TooManyOpens,
    FunctorialityViolation,
    MissingRestriction,
    NotOpen,
    NotACover,
    NaturalityViolation,
    NotExactInput,
    SignViolation,
    NotStabilized,
    NotAResolution,
    ParseError,
    SchemaError,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what),
          kind_(kind) {}

    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
    throw Error(kind, what);
}

} // namespace finsheaf
