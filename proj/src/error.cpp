#include "monopole/error.hpp"

namespace monopole {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::rank_mismatch: return "rank_mismatch";
    case ErrorKind::grid_mismatch: return "grid_mismatch";
    case ErrorKind::nonzero_mean: return "nonzero_mean";
    case ErrorKind::non_finite: return "non_finite";
    case ErrorKind::missing_time_derivative: return "missing_time_derivative";
    case ErrorKind::unsupported_degree: return "unsupported_degree";
    case ErrorKind::non_unitary: return "non_unitary";
    case ErrorKind::coulomb_violated: return "coulomb_violated";
    case ErrorKind::smallness_violated: return "smallness_violated";
    case ErrorKind::not_converged: return "not_converged";
    case ErrorKind::blow_up: return "blow_up";
    case ErrorKind::unphysical_component: return "unphysical_component";
    case ErrorKind::degenerate_input: return "degenerate_input";
    case ErrorKind::inadmissible_params: return "inadmissible_params";
    case ErrorKind::config_parse: return "config_parse";
    case ErrorKind::config_validation: return "config_validation";
    case ErrorKind::io: return "io";
    case ErrorKind::corrupt_snapshot: return "corrupt_snapshot";
  }
  return "unknown";
}

}  // namespace monopole
