#pragma once

#include <stdexcept>
#include <string>

namespace sofic {

enum class ErrorCode {
  CarrierMismatch,
  FamilyMismatch,
  InvalidPermutation,
  InconsistentPartial,
  Decode,
  IncompleteWindow,
  MalformedWitness,
  Membership,
  CapOverflow,
  Contract,
  Parse,
};

const char* to_string(ErrorCode code);

/// Every failure raised by the library carries a code so the CLI can map it to
/// an exit status. The message names the offending element, pair, or point.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, std::string(to_string(code)) + ": " + what);
}

}  // namespace sofic
