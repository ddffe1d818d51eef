#pragma once
// Flat key=value run configuration. Lines are `key = value`; `#` starts a
// comment; unknown keys are errors.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace monopole {

enum class Mode { simulate, picard, gaugefix, estimates, admissible, residuals };

std::string_view mode_name(Mode m);
// Throws Error{config_validation} for an unknown name.
Mode parse_mode(std::string_view name);

struct RunConfig {
  Mode mode = Mode::simulate;
  int N = 64;
  double L = 6.283185307179586;
  int rank = 2;
  double T = 0.5;
  double dt = 0.01;
  int snapshot_stride = 10;
  int monitor_stride = 1;

  // initial data: gaussian | random | zero
  std::string data = "gaussian";
  double amplitude = 0.05;
  double width = 0.4;
  double bandwidth = 3.0;
  std::string input;  // snapshot to start from instead of generated data

  double elliptic_smallness = 0.8;
  double elliptic_tolerance = 1e-11;
  int elliptic_max_iterations = 200;
  double coulomb_smallness = 0.1;
  double coulomb_sobolev_s = 1.0;
  double tol_c = 1e-9;
  int coulomb_max_iterations = 100;
  double cfl = 4.0;
  std::string b2_path = "fields";

  int picard_iterations = 8;

  // analysis
  double s = 0.3;
  double a = -1.0;  // elliptic regularity index; negative means unset
  double theta = 0.8;
  double epsilon = 0.0;
  int samples = 8;
  double scale = 2.0;

  // gates: the run exits nonzero when a measured value exceeds its gate
  double constraint_gate = 1e-9;
  double residual_gate = 1.0;

  std::uint64_t seed = 1;
  std::string output = "out";

  bool operator==(const RunConfig&) const = default;
};

// Throws Error{config_parse} (with the line number) or Error{config_validation}
// (naming the field).
RunConfig parse_config(std::string_view text, std::string_view source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

// Throws Error{config_validation} naming the first offending field.
void validate(const RunConfig& c);

// Normalized form: every key, fixed order, shortest round-trip numbers.
std::string serialize(const RunConfig& c);
void save_config(const RunConfig& c, const std::filesystem::path& path);

}  // namespace monopole
