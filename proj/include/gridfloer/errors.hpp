#ifndef GRIDFLOER_ERRORS_HPP
#define GRIDFLOER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gridfloer {

enum class Err {
  NotAPermutation,
  CellCollision,
  TraceFailure,
  TooSmall,
  TooLarge,
  NotADomain,
  NotDivisible,
  GradingMismatch,
  IndexOutOfRange,
  SameIndex,
  ComponentTooSmall,
  NotCommutable,
  BadPlacement,
  BadConfiguration,
  NotSuperstabilized,
  NotThin,
  NoDecomposition,
  RoutesDisagree,
  MissingMetadata,
  ParseError,
  ValidationError,
};

const char* errName(Err e);

class Error : public std::runtime_error {
 public:
  Error(Err code, const std::string& what)
      : std::runtime_error(std::string(errName(code)) + ": " + what), code_(code) {}
  Err code() const { return code_; }

 private:
  Err code_;
};

[[noreturn]] inline void fail(Err code, const std::string& what) { throw Error(code, what); }

}  // namespace gridfloer

#endif
