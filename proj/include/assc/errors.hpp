#pragma once

#include <stdexcept>
#include <string>

namespace assc {

enum class ErrorKind {
  InvalidInput,
  SolverFailure,
  PreconditionViolation,
  NoRepresentation,
  GenerationFailure,
  InternalError,
};

const char* to_string(ErrorKind kind) noexcept;

/// Base of every exception thrown by the library. `kind()` lets callers
/// (the CLI in particular) map failures onto exit codes without RTTI chains.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define ASSC_DEFINE_ERROR(Name)                                  \
  class Name : public Error {                                    \
   public:                                                       \
    explicit Name(const std::string& what)                       \
        : Error(ErrorKind::Name, what) {}                        \
  };

ASSC_DEFINE_ERROR(InvalidInput)
ASSC_DEFINE_ERROR(SolverFailure)
ASSC_DEFINE_ERROR(PreconditionViolation)
ASSC_DEFINE_ERROR(NoRepresentation)
ASSC_DEFINE_ERROR(GenerationFailure)
ASSC_DEFINE_ERROR(InternalError)

#undef ASSC_DEFINE_ERROR

}  // namespace assc
