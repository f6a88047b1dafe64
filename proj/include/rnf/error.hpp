#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rnf {

enum class ErrorCode {
  invalid_argument,
  tolerance_infeasible,
  resolution_floor,
  zero_denominator,
  insufficient_precision,
  no_admissible_denominators,
  finite_expansion,
  inadmissible_exponent,
  inadmissible_alpha,
  unresolvable_chord,
  use_spiral_profile,
  use_corner_check,
  insufficient_scale_range,
  not_testable,
  refine_trace,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid argument";
    case ErrorCode::tolerance_infeasible: return "tolerance infeasible";
    case ErrorCode::resolution_floor: return "resolution floor";
    case ErrorCode::zero_denominator: return "zero denominator";
    case ErrorCode::insufficient_precision: return "insufficient precision";
    case ErrorCode::no_admissible_denominators: return "no admissible denominators in range";
    case ErrorCode::finite_expansion: return "finite expansion has no limsup";
    case ErrorCode::inadmissible_exponent: return "inadmissible exponent";
    case ErrorCode::inadmissible_alpha: return "inadmissible alpha";
    case ErrorCode::unresolvable_chord: return "unresolvable chord";
    case ErrorCode::use_spiral_profile: return "use spiral_profile";
    case ErrorCode::use_corner_check: return "use corner_check";
    case ErrorCode::insufficient_scale_range: return "insufficient scale range";
    case ErrorCode::not_testable: return "not testable at this Q range";
    case ErrorCode::refine_trace: return "refine trace";
  }
  return "unknown error";
}

/// Exception carrying a machine-readable code; what() is "<code>: <detail>".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline void require(bool condition, ErrorCode code, const std::string& detail) {
  if (!condition) throw Error(code, detail);
}

}  // namespace rnf
