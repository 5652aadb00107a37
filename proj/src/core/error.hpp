#pragma once

#include <stdexcept>
#include <string>

namespace dhrg {

enum class ErrorKind {
  InvalidArgument,
  Parse,
  Io,
  Numeric,
  OutOfRange,
  Internal,
};

// Every failure raised by the core carries a kind so the C layer can map it to a status code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace dhrg
