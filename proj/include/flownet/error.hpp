#pragma once

#include <stdexcept>
#include <string>

namespace flownet {

enum class ErrorKind {
  Domain,      // bad argument value (negative mass, wrong sign)
  Structural,  // dimension mismatch, wrong topology, inapplicable operation
  Validation,  // semantic constraint failed (routing invalid, inconsistent field)
  Parse,       // input text is not valid JSON/CSV
  Schema,      // JSON parsed but required fields missing or mistyped
  Numeric,     // computation failed (divergent iteration, non-finite state)
  Io,          // filesystem access failed
  Param,       // unknown or inapplicable parameter override
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace flownet
