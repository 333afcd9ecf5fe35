#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rollwave {

enum class ErrorCode {
  invalid_parameters,
  quadrature_nonconvergence,
  solvability_violation,
  resonance_error,
  step_failure,
  degenerate_system,
  contour_near_zero,
  nonconvergent_refinement,
  continuation_stall,
  bracket_invalid,
  no_sign_change,
  numerical_inconsistency,
  schema_mismatch,
  config_parse_error,
  partial_failure,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rollwave
