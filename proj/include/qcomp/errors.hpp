#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qcomp {

// Every error raised by the library derives from Error.  `kind()` is the
// stable machine-readable name used in CLI reports.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define QCOMP_ERROR(Name)                                                   \
  class Name : public Error {                                               \
  public:                                                                   \
    explicit Name(const std::string& what) : Error(#Name, what) {}          \
  }

class SyntaxError : public Error {
public:
  SyntaxError(std::size_t offset, const std::string& what)
      : Error("SyntaxError", what + " at offset " + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

QCOMP_ERROR(UnknownFunction);
QCOMP_ERROR(ArityError);
QCOMP_ERROR(UnboundVariable);
QCOMP_ERROR(DomainError);

QCOMP_ERROR(InvalidDimension);
QCOMP_ERROR(InvalidModel);
QCOMP_ERROR(NonFiniteSample);

QCOMP_ERROR(InvalidProblem);
QCOMP_ERROR(DegenerateDenominator);
QCOMP_ERROR(BlowUpRootNotBracketed);
QCOMP_ERROR(StepUnderflow);

QCOMP_ERROR(InvalidRegime);

QCOMP_ERROR(NotBracketGenerating);
QCOMP_ERROR(NotSquare);
QCOMP_ERROR(ZNotHypersurface);
QCOMP_ERROR(NotNormalForm);
QCOMP_ERROR(DegenerateDensity);

QCOMP_ERROR(UnknownFixture);

#undef QCOMP_ERROR

}  // namespace qcomp
