#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "convint/report.hpp"
#include "convint/spectral.hpp"

namespace ci {

struct AcceptanceOptions {
  std::uint64_t seed = 20240611;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double time_limit = 0.0;  // seconds; 0 when the criterion states none
  std::string detail;       // one-line summary of the worst measured values
  std::vector<ReportRow> rows;
};

// (id, name) for criteria 1..11
std::vector<std::pair<int, std::string>> criterion_list();
CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});

// the zero-triple suite: every row passes trivially
Report trivial_suite();

// the randomized improved-Hoelder family: a = sin(2 pi m x1) env(x2), f = 3 + small trig noise
struct HolderCase {
  PeriodicField a, f;
  int m = 1;
};
std::vector<HolderCase> holder_family(int count, int n, std::uint64_t seed);

}  // namespace ci
