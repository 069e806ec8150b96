#pragma once

#include <stdexcept>
#include <string>

namespace gprc {

// Failure categories; these survive the C boundary as gprc_status codes.
enum class Status {
  ok = 0,
  invalid_argument,
  domain_error,
  insufficient_data,
  shape_mismatch,
  singular,
  nonconvergence,
  degenerate_support,
  parse_error,
  io_error,
};

inline const char* status_name(Status s) {
  switch (s) {
    case Status::ok: return "ok";
    case Status::invalid_argument: return "invalid argument";
    case Status::domain_error: return "domain error";
    case Status::insufficient_data: return "insufficient data";
    case Status::shape_mismatch: return "shape mismatch";
    case Status::singular: return "singular";
    case Status::nonconvergence: return "nonconvergence";
    case Status::degenerate_support: return "degenerate support";
    case Status::parse_error: return "parse error";
    case Status::io_error: return "i/o error";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Status status, const std::string& message)
      : std::runtime_error(message), status_(status) {}
  Status status() const { return status_; }

 private:
  Status status_;
};

[[noreturn]] inline void fail(Status status, const std::string& message) {
  throw Error(status, message);
}

inline void require(bool condition, Status status, const std::string& message) {
  if (!condition) fail(status, message);
}

}  // namespace gprc
