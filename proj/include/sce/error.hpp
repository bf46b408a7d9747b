#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sce {

/// Failure categories raised by the library. The CLI maps these to exit codes.
enum class ErrorKind {
  invalid_interval,
  invalid_argument,
  multiplicity_out_of_range,
  knots_not_increasing,
  out_of_domain,
  index_out_of_range,
  support_mismatch,
  not_positive_definite,
  dimension_limit,
  config_parse,
  io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_interval: return "invalid-interval";
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::multiplicity_out_of_range: return "multiplicity-out-of-range";
    case ErrorKind::knots_not_increasing: return "knots-not-increasing";
    case ErrorKind::out_of_domain: return "out-of-domain";
    case ErrorKind::index_out_of_range: return "index-out-of-range";
    case ErrorKind::support_mismatch: return "support-mismatch";
    case ErrorKind::not_positive_definite: return "not-positive-definite";
    case ErrorKind::dimension_limit: return "dimension-limit";
    case ErrorKind::config_parse: return "config-parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

/// Largest number of input dimensions accepted by tensor-product routines.
inline constexpr std::size_t max_dimension = 6;

}  // namespace sce
