#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wvlab {

enum class ErrorKind {
    InvalidArgument,
    DimensionMismatch,
    NonHermitianInput,
    NoConvergence,
    InvalidState,
    InvalidMeasurement,
    NotUnitary,
    NotProjective,
    UndefinedOutcome,
    UndefinedPostselection,
    DegenerateDecomposition,
    LengthMismatch,
    InvalidWeights,
    ConfigError,
    IoError,
    UnknownExample,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string &what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {
    }

    ErrorKind kind() const noexcept {
        return kind_;
    }

  private:
    ErrorKind kind_;
};

}  // namespace wvlab
