#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "convint/acceptance.hpp"
#include "convint/report.hpp"
#include "convint/snapshot.hpp"

using namespace ci;

TEST_CASE("report CSV and JSON") {
  Report r;
  r.meta("seed", 42.0);
  r.add("a", "plumbing", 1.5, 1.0, 0.1, false, "note, with comma");
  r.add("b", "anchor", 0.0, 0.0, 0.0, true);
  CHECK_FALSE(r.all_pass());
  CHECK(r.failures() == 1);
  std::ostringstream csv;
  r.write_csv(csv);
  CHECK(csv.str().rfind("id,provenance,measured,target,tolerance,pass,note\n", 0) == 0);
  std::ostringstream js;
  r.write_json(js);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["rows"].size() == 2);
  CHECK(j["rows"][0]["note"] == "note, with comma");
}

TEST_CASE("number formatting round-trips") {
  for (double x : {0.1, 1e-300, 12345.678, -2.5e7}) CHECK(std::stod(fmt_num(x)) == doctest::Approx(x).epsilon(1e-9));
}

TEST_CASE("snapshots round-trip") {
  const Grid g(2, 16);
  const PeriodicField f = PeriodicField::from_function(g, [](const Point& x) { return x[0] - 2 * x[1]; });
  const auto path = (std::filesystem::temp_directory_path() / "convint_snapshot_test.bin").string();
  write_snapshot(path, f, "f", 0.25);
  const Snapshot s = read_snapshot(path);
  CHECK(s.name == "f");
  CHECK(s.time == 0.25);
  CHECK((s.field[0] - f).max_abs() == 0.0);
  std::filesystem::remove(path);
}

TEST_CASE("trivial suite passes") { CHECK(trivial_suite().all_pass()); }

TEST_CASE("Hoelder family is seeded and keeps f positive") {
  const auto a = holder_family(3, 32, 5), b = holder_family(3, 32, 5);
  REQUIRE(a.size() == 3);
  for (int i = 0; i < 3; ++i) {
    CHECK((a[i].f - b[i].f).max_abs() == 0.0);
    double fmin = 1e300;
    for (double v : a[i].f.values()) fmin = std::min(fmin, v);
    CHECK(fmin > 0.0);
  }
}

TEST_CASE("criterion 7 runs fast and passes") {
  const CriterionResult c = run_criterion(7);
  CHECK(c.pass);
  CHECK(c.seconds < 1.0);
  CHECK_THROWS(run_criterion(12));
}
