#include <CLI11.hpp>
#include <iostream>
#include <optional>

#include "monopole/config.hpp"
#include "monopole/error.hpp"
#include "monopole/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral monopole-equation simulator and diagnostics"};
  std::string mode;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  app.add_option("mode", mode, "simulate | picard | gaugefix | estimates | admissible | residuals")->required();
  app.add_option("--config", config_path, "flat key = value configuration file");
  app.add_option("--seed", seed, "overrides the configured seed");
  app.add_option("--out", out, "overrides the configured output directory");
  CLI11_PARSE(app, argc, argv);

  monopole::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = monopole::load_config(config_path);
    cfg.mode = monopole::parse_mode(mode);
    if (seed) cfg.seed = *seed;
    if (out) cfg.output = *out;
    monopole::validate(cfg);
  } catch (const monopole::Error& e) {
    std::cerr << "monopole: " << e.what() << "\n";
    monopole::write_error(out ? *out : cfg.output, monopole::error_kind_name(e.kind()), e.what());
    return 2;
  }
  const int status = monopole::run(cfg);
  if (status == 2) std::cerr << "monopole: failed, see " << cfg.output << "/error.json\n";
  return status;
}
