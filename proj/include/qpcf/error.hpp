#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qpcf {

// Exit-code families used by the command line front-end.
enum class ErrorKind {
  Precondition = 2,
  Precision = 3,
  Budget = 4,
  Failure = 1,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define QPCF_DECLARE_ERROR(Name, Kind)                                        \
  class Name : public Error {                                                 \
   public:                                                                    \
    explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {}  \
  };

QPCF_DECLARE_ERROR(PrecisionExhausted, Precision)
QPCF_DECLARE_ERROR(DivisionByZero, Precondition)
QPCF_DECLARE_ERROR(NoIrreducibleFound, Precondition)
QPCF_DECLARE_ERROR(BadRamifier, Precondition)
QPCF_DECLARE_ERROR(BrowkinEvenPrime, Precondition)
QPCF_DECLARE_ERROR(UnsupportedField, Precondition)
QPCF_DECLARE_ERROR(PreconditionViolated, Precondition)
QPCF_DECLARE_ERROR(NotInZStar, Precondition)
QPCF_DECLARE_ERROR(BudgetExceeded, Budget)
QPCF_DECLARE_ERROR(NotIntegrable, Precondition)
QPCF_DECLARE_ERROR(NonTermination, Failure)
QPCF_DECLARE_ERROR(InvariantViolation, Failure)

#undef QPCF_DECLARE_ERROR

// Literal parse failure; `position` is a 0-based offset into the input.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : Error(ErrorKind::Precondition, what), position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

}  // namespace qpcf
