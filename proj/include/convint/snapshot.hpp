#pragma once

#include <string>

#include "convint/spectral.hpp"

namespace ci {

struct Snapshot {
  std::string name;
  double time = 0.0;
  VectorField field;
};

// one-line JSON header, then little-endian float64 samples, components concatenated
void write_snapshot(const std::string& path, const VectorField& f, const std::string& name, double time);
void write_snapshot(const std::string& path, const PeriodicField& f, const std::string& name, double time);
Snapshot read_snapshot(const std::string& path);

}  // namespace ci
