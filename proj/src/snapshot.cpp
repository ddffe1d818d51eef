#include "monopole/snapshot.hpp"

#include <openssl/evp.h>

#include <bit>
#include <cstring>
#include <json.hpp>

#include "io_util.hpp"
#include "monopole/error.hpp"

namespace monopole {

namespace {

using nlohmann::json;

void put_le(std::string& out, double v) {
  std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  out.append(b, 8);
}

double get_le(const char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return std::bit_cast<double>(bits);
}

std::filesystem::path header_path(const std::filesystem::path& payload) {
  std::filesystem::path h = payload;
  h += ".json";
  return h;
}

[[noreturn]] void corrupt(const std::filesystem::path& p, const std::string& why) {
  throw Error(ErrorKind::corrupt_snapshot, p.string() + ": " + why);
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::io, "sha256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

void save_snapshot(const Snapshot& s, const std::filesystem::path& payload) {
  if (s.components.empty()) throw Error(ErrorKind::invalid_argument, "save_snapshot: no components");
  const LieField& first = s.components.front();
  std::string bytes;
  bytes.reserve(s.components.size() * first.values().size() * 16);
  json names = json::array();
  for (const LieField& c : s.components) {
    first.require_compatible(c, "save_snapshot");
    names.push_back(c.label());
    for (const cplx& z : c.values()) {
      put_le(bytes, z.real());
      put_le(bytes, z.imag());
    }
  }
  json h = {{"format", "monopole-snapshot"},
            {"format_version", 1},
            {"convention_version", kConventionVersion},
            {"grid", {{"N", first.grid().points()}, {"L", first.grid().length()}}},
            {"rank", first.rank()},
            {"t", s.t},
            {"components", names},
            {"endianness", "little"},
            {"dtype", "float64"},
            {"layout", "component-major; entry planes row-major; point iy*N+ix; real/imag interleaved"},
            {"payload_bytes", bytes.size()},
            {"sha256", sha256_hex(bytes)}};
  atomic_write(payload, bytes);
  atomic_write(header_path(payload), h.dump(2) + "\n");
}

Snapshot load_snapshot(const std::filesystem::path& payload) {
  const std::filesystem::path hp = header_path(payload);
  json h;
  try {
    h = json::parse(read_file(hp));
  } catch (const json::exception& e) {
    corrupt(hp, std::string("unreadable header: ") + e.what());
  }
  const std::string bytes = read_file(payload);
  try {
    if (h.at("format") != "monopole-snapshot") corrupt(hp, "not a snapshot header");
    if (h.at("endianness") != "little" || h.at("dtype") != "float64") corrupt(hp, "unsupported encoding");
    const int n = h.at("grid").at("N").get<int>();
    const double l = h.at("grid").at("L").get<double>();
    const int rank = h.at("rank").get<int>();
    const auto names = h.at("components").get<std::vector<std::string>>();
    const std::size_t expected =
        names.size() * static_cast<std::size_t>(n) * n * static_cast<std::size_t>(rank * rank) * 16;
    if (h.at("payload_bytes").get<std::size_t>() != expected) corrupt(hp, "payload size disagrees with header");
    if (bytes.size() != expected) {
      corrupt(payload, "payload has " + std::to_string(bytes.size()) + " bytes, expected " + std::to_string(expected));
    }
    if (sha256_hex(bytes) != h.at("sha256").get<std::string>()) corrupt(payload, "hash mismatch with header");
    const TorusGrid grid(n, l);
    Snapshot s;
    s.t = h.at("t").get<double>();
    const char* p = bytes.data();
    for (const auto& name : names) {
      LieField c(grid, rank, name);
      for (cplx& z : c.values()) {
        z = cplx(get_le(p), get_le(p + 8));
        p += 16;
      }
      s.components.push_back(std::move(c));
    }
    return s;
  } catch (const json::exception& e) {
    corrupt(hp, std::string("malformed header: ") + e.what());
  }
}

Snapshot to_snapshot(const AuxState& s) {
  Snapshot out{s.t, {s.u, s.ut, s.v, s.vt}};
  const char* names[] = {"u", "ut", "v", "vt"};
  for (int i = 0; i < 4; ++i) out.components[static_cast<std::size_t>(i)].set_label(names[i]);
  return out;
}

AuxState to_aux(const Snapshot& s) {
  const char* names[] = {"u", "ut", "v", "vt"};
  if (s.components.size() != 4) throw Error(ErrorKind::corrupt_snapshot, "snapshot is not a wave state");
  for (int i = 0; i < 4; ++i) {
    if (s.components[static_cast<std::size_t>(i)].label() != names[i]) {
      throw Error(ErrorKind::corrupt_snapshot, "snapshot is not a wave state");
    }
  }
  return {s.components[0], s.components[1], s.components[2], s.components[3], s.t};
}

}  // namespace monopole
