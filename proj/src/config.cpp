#include "monopole/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unistd.h>
#include <vector>

#include "io_util.hpp"
#include "monopole/error.hpp"

namespace monopole {

void atomic_write(const std::filesystem::path& path, std::string_view bytes) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::io, "cannot open " + tmp.string() + " for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::io, "write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorKind::io, "cannot rename onto " + path.string());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

constexpr std::string_view kModes[] = {"simulate", "picard", "gaugefix", "estimates", "admissible", "residuals"};

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Field {
  std::string_view name;
  std::function<std::string(const RunConfig&)> get;
  // Returns false if the text does not parse as the field's type.
  std::function<bool(RunConfig&, std::string_view)> set;
};

template <class T>
bool parse_number(std::string_view text, T& out) {
  auto r = std::from_chars(text.data(), text.data() + text.size(), out);
  return r.ec == std::errc() && r.ptr == text.data() + text.size();
}

template <class T>
Field number(std::string_view name, T RunConfig::*member) {
  return {name,
          [member](const RunConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          },
          [member](RunConfig& c, std::string_view v) { return parse_number(v, c.*member); }};
}

Field text(std::string_view name, std::string RunConfig::*member) {
  return {name, [member](const RunConfig& c) { return c.*member; },
          [member](RunConfig& c, std::string_view v) {
            c.*member = std::string(v);
            return true;
          }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"mode", [](const RunConfig& c) { return std::string(mode_name(c.mode)); },
       [](RunConfig& c, std::string_view v) {
         c.mode = parse_mode(v);
         return true;
       }},
      number("N", &RunConfig::N),
      number("L", &RunConfig::L),
      number("rank", &RunConfig::rank),
      number("T", &RunConfig::T),
      number("dt", &RunConfig::dt),
      number("snapshot_stride", &RunConfig::snapshot_stride),
      number("monitor_stride", &RunConfig::monitor_stride),
      text("data", &RunConfig::data),
      number("amplitude", &RunConfig::amplitude),
      number("width", &RunConfig::width),
      number("bandwidth", &RunConfig::bandwidth),
      text("input", &RunConfig::input),
      number("elliptic_smallness", &RunConfig::elliptic_smallness),
      number("elliptic_tolerance", &RunConfig::elliptic_tolerance),
      number("elliptic_max_iterations", &RunConfig::elliptic_max_iterations),
      number("coulomb_smallness", &RunConfig::coulomb_smallness),
      number("coulomb_sobolev_s", &RunConfig::coulomb_sobolev_s),
      number("tol_c", &RunConfig::tol_c),
      number("coulomb_max_iterations", &RunConfig::coulomb_max_iterations),
      number("cfl", &RunConfig::cfl),
      text("b2_path", &RunConfig::b2_path),
      number("picard_iterations", &RunConfig::picard_iterations),
      number("s", &RunConfig::s),
      number("a", &RunConfig::a),
      number("theta", &RunConfig::theta),
      number("epsilon", &RunConfig::epsilon),
      number("samples", &RunConfig::samples),
      number("scale", &RunConfig::scale),
      number("constraint_gate", &RunConfig::constraint_gate),
      number("residual_gate", &RunConfig::residual_gate),
      number("seed", &RunConfig::seed),
      text("output", &RunConfig::output),
  };
  return table;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void invalid(std::string_view field, const std::string& why) {
  throw Error(ErrorKind::config_validation, std::string(field) + ": " + why);
}

}  // namespace

std::string_view mode_name(Mode m) { return kModes[static_cast<int>(m)]; }

Mode parse_mode(std::string_view name) {
  for (int i = 0; i < 6; ++i) {
    if (kModes[i] == name) return static_cast<Mode>(i);
  }
  invalid("mode", "unknown mode '" + std::string(name) + "'");
  return Mode::simulate;
}

void validate(const RunConfig& c) {
  if (c.N < 8 || (c.N & (c.N - 1)) != 0) invalid("N", "must be a power of two >= 8");
  if (!(c.L > 0.0) || !std::isfinite(c.L)) invalid("L", "must be positive");
  if (c.rank < 2) invalid("rank", "must be at least 2");
  if (!(c.T >= 0.0) || !std::isfinite(c.T)) invalid("T", "must be nonnegative");
  if (!(c.dt > 0.0)) invalid("dt", "must be positive");
  if (c.snapshot_stride < 1) invalid("snapshot_stride", "must be positive");
  if (c.monitor_stride < 1) invalid("monitor_stride", "must be positive");
  if (c.data != "gaussian" && c.data != "random" && c.data != "zero") {
    invalid("data", "must be gaussian, random or zero");
  }
  if (!(c.amplitude >= 0.0)) invalid("amplitude", "must be nonnegative");
  if (!(c.width > 0.0)) invalid("width", "must be positive");
  if (!(c.bandwidth > 0.0)) invalid("bandwidth", "must be positive");
  if (!(c.elliptic_smallness > 0.0)) invalid("elliptic_smallness", "must be positive");
  if (!(c.elliptic_tolerance > 0.0)) invalid("elliptic_tolerance", "must be positive");
  if (c.elliptic_max_iterations < 1) invalid("elliptic_max_iterations", "must be positive");
  if (!(c.coulomb_smallness > 0.0)) invalid("coulomb_smallness", "must be positive");
  if (!(c.tol_c > 0.0)) invalid("tol_c", "must be positive");
  if (c.coulomb_max_iterations < 1) invalid("coulomb_max_iterations", "must be positive");
  if (!(c.cfl > 0.0)) invalid("cfl", "must be positive");
  if (c.b2_path != "fields" && c.b2_path != "waves") invalid("b2_path", "must be fields or waves");
  if (c.picard_iterations < 1) invalid("picard_iterations", "must be positive");
  if (!(c.s > 0.0)) invalid("s", "must be positive");
  if (c.samples < 1) invalid("samples", "must be positive");
  if (!(c.scale > 0.0)) invalid("scale", "must be positive");
  if (!(c.constraint_gate > 0.0)) invalid("constraint_gate", "must be positive");
  if (!(c.residual_gate > 0.0)) invalid("residual_gate", "must be positive");
  if (c.output.empty()) invalid("output", "must not be empty");
}

RunConfig parse_config(std::string_view text, std::string_view source) {
  RunConfig c;
  std::set<std::string, std::less<>> seen;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorKind::config_parse, where + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto& tab = fields();
    auto it = std::find_if(tab.begin(), tab.end(), [&](const Field& f) { return f.name == key; });
    if (it == tab.end()) throw Error(ErrorKind::config_parse, where + ": unknown key '" + std::string(key) + "'");
    if (!seen.insert(std::string(key)).second) {
      throw Error(ErrorKind::config_parse, where + ": duplicate key '" + std::string(key) + "'");
    }
    if (!it->set(c, value)) {
      throw Error(ErrorKind::config_parse, where + ": cannot parse value '" + std::string(value) + "' for " +
                                               std::string(key));
    }
  }
  validate(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path) { return parse_config(read_file(path), path.string()); }

std::string serialize(const RunConfig& c) {
  std::string out;
  for (const Field& f : fields()) {
    out += f.name;
    out += " = ";
    out += f.get(c);
    out += '\n';
  }
  return out;
}

void save_config(const RunConfig& c, const std::filesystem::path& path) { atomic_write(path, serialize(c)); }

}  // namespace monopole
