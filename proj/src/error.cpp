#include "rollwave/error.hpp"

namespace rollwave {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_parameters: return "invalid_parameters";
    case ErrorCode::quadrature_nonconvergence: return "quadrature_nonconvergence";
    case ErrorCode::solvability_violation: return "solvability_violation";
    case ErrorCode::resonance_error: return "resonance_error";
    case ErrorCode::step_failure: return "step_failure";
    case ErrorCode::degenerate_system: return "degenerate_system";
    case ErrorCode::contour_near_zero: return "contour_near_zero";
    case ErrorCode::nonconvergent_refinement: return "nonconvergent_refinement";
    case ErrorCode::continuation_stall: return "continuation_stall";
    case ErrorCode::bracket_invalid: return "bracket_invalid";
    case ErrorCode::no_sign_change: return "no_sign_change";
    case ErrorCode::numerical_inconsistency: return "numerical_inconsistency";
    case ErrorCode::schema_mismatch: return "schema_mismatch";
    case ErrorCode::config_parse_error: return "config_parse_error";
    case ErrorCode::partial_failure: return "partial_failure";
  }
  return "unknown";
}

}  // namespace rollwave
