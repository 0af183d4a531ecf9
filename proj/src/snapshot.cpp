#include "convint/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace ci {

namespace {

std::uint64_t to_le(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

}  // namespace

void write_snapshot(const std::string& path, const VectorField& f, const std::string& name, double time) {
  const Grid& g = f.grid();
  nlohmann::json h = {{"dimension", g.d}, {"n_per_axis", g.n}, {"components", f.ncomp()}, {"name", name}, {"time", time}};
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << h.dump() << '\n';
  for (const auto& c : f.components())
    for (double v : c.values()) {
      std::uint64_t bits = to_le(std::bit_cast<std::uint64_t>(v));
      os.write(reinterpret_cast<const char*>(&bits), 8);
    }
  if (!os) throw std::runtime_error("write failed for " + path);
}

void write_snapshot(const std::string& path, const PeriodicField& f, const std::string& name, double time) {
  write_snapshot(path, VectorField({f}), name, time);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(is, line);
  nlohmann::json h = nlohmann::json::parse(line);
  Grid g(h.at("dimension").get<int>(), h.at("n_per_axis").get<int>());
  const int nc = h.at("components").get<int>();
  std::vector<PeriodicField> comps;
  for (int c = 0; c < nc; ++c) {
    std::vector<double> v(g.size());
    for (auto& x : v) {
      std::uint64_t bits = 0;
      is.read(reinterpret_cast<char*>(&bits), 8);
      if (!is) throw std::runtime_error("truncated snapshot " + path);
      x = std::bit_cast<double>(to_le(bits));
    }
    comps.emplace_back(g, std::move(v));
  }
  return {h.at("name").get<std::string>(), h.at("time").get<double>(), VectorField(std::move(comps))};
}

}  // namespace ci
