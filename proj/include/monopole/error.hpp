#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace monopole {

// Machine-readable error categories; the CLI reports these in its error JSON.
enum class ErrorKind {
  invalid_argument,
  rank_mismatch,
  grid_mismatch,
  nonzero_mean,
  non_finite,
  missing_time_derivative,
  unsupported_degree,
  non_unitary,
  coulomb_violated,
  smallness_violated,
  not_converged,
  blow_up,
  unphysical_component,
  degenerate_input,
  inadmissible_params,
  config_parse,
  config_validation,
  io,
  corrupt_snapshot,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace monopole
