#pragma once

#include <stdexcept>
#include <string>

namespace refmeasure {

/// Machine-checkable failure categories raised across the library.
enum class ErrorCode {
    ZeroTotal,
    NegativeWeight,
    TooManyAtoms,
    ForeignEvent,
    NullConditioningEvent,
    SpaceMismatch,
    NotAbsolutelyContinuous,
    DomainError,
    ParameterOutOfRange,
    EmptyList,
    MalformedProblem,
    EmptyDictionary,
    NoExtremum,
    OutOfRange,
    ResolutionExceeded,
    InconsistentLayers,
    NotACapacity,
    AllZero,
    ConfigError,
    UnknownDemo,
};

const char* error_code_name(ErrorCode code);

/// Library exception: every throw site attaches a code plus a readable message.
class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

  private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace refmeasure
