#pragma once

#include <stdexcept>
#include <string>

namespace decent {

enum class ErrorKind {
  structural,    // mismatched lengths, duplicate keys, malformed inputs
  domain,        // argument outside the operation's domain
  search_bound,  // brute-force enumeration would exceed its configured bound
  budget,        // Monte Carlo work exceeds the configured budget
  unsupported,   // operation not defined for the given model variant
  config,        // configuration key missing, unknown or mistyped
  io,            // file could not be read or written
};

const char* to_string(ErrorKind kind) noexcept;

// Process exit status for an error class; 0 is reserved for success and 1 for
// unexpected failures.
int exit_code(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace decent
