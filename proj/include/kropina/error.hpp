#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kropina {

enum class ErrorKind {
  usage,        // dimension mismatch, bad arguments
  data,         // navigation data or metric field violates its contract
  domain,       // tangent vector outside the conic domain, or y = 0
  evaluation,   // non-smooth point hit while propagating jets
  degeneracy,   // indefinite or ill-conditioned fundamental tensor
  no_solution,  // no positive root / target not reachable
  excluded_heading,
  io
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::data: return "data";
    case ErrorKind::domain: return "domain";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::degeneracy: return "degeneracy";
    case ErrorKind::no_solution: return "no-solution";
    case ErrorKind::excluded_heading: return "excluded-heading";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace kropina
