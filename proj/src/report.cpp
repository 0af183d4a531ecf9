#include "convint/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "json.hpp"

namespace ci {

std::string fmt_num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

void Report::meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
void Report::meta(const std::string& key, double value) { meta_.emplace_back(key, fmt_num(value)); }

ReportRow& Report::add(ReportRow row) {
  rows_.push_back(std::move(row));
  return rows_.back();
}

ReportRow& Report::add(const std::string& id, const std::string& provenance, double measured, double target,
                       double tolerance, bool pass, const std::string& note) {
  return add(ReportRow{id, provenance, measured, target, tolerance, pass, note});
}

bool Report::all_pass() const { return failures() == 0; }

int Report::failures() const {
  int n = 0;
  for (const auto& r : rows_) n += r.pass ? 0 : 1;
  return n;
}

namespace {
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}
}  // namespace

void Report::write_csv(std::ostream& os) const {
  os << "id,provenance,measured,target,tolerance,pass,note\n";
  for (const auto& r : rows_)
    os << csv_field(r.id) << ',' << csv_field(r.provenance) << ',' << fmt_num(r.measured) << ',' << fmt_num(r.target)
       << ',' << fmt_num(r.tolerance) << ',' << (r.pass ? "pass" : "FAIL") << ',' << csv_field(r.note) << '\n';
}

void Report::write_summary(std::ostream& os) const {
  for (const auto& [k, v] : meta_) os << "# " << k << " = " << v << '\n';
  for (const auto& r : rows_) {
    os << (r.pass ? "PASS " : "FAIL ") << r.id << "  measured=" << fmt_num(r.measured)
       << " target=" << fmt_num(r.target) << " tol=" << fmt_num(r.tolerance);
    if (!r.note.empty()) os << "  (" << r.note << ')';
    os << '\n';
  }
  os << (all_pass() ? "ALL PASS" : "FAILURES: " + std::to_string(failures())) << " (" << rows_.size() << " rows)\n";
}

void Report::write_json(std::ostream& os) const {
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta_) j["metadata"][k] = v;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows_)
    j["rows"].push_back({{"id", r.id},
                         {"provenance", r.provenance},
                         {"measured", fmt_num(r.measured)},
                         {"target", fmt_num(r.target)},
                         {"tolerance", fmt_num(r.tolerance)},
                         {"pass", r.pass},
                         {"note", r.note}});
  j["all_pass"] = all_pass();
  os << j.dump(2) << '\n';
}

void Report::save(const std::string& dir, const std::string& stem) const {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream csv(base / (stem + ".csv")), sum(base / (stem + "_summary.txt")), js(base / (stem + ".json"));
  if (!csv || !sum || !js) throw std::runtime_error("Report::save: cannot write into " + dir);
  write_csv(csv);
  write_summary(sum);
  write_json(js);
}

}  // namespace ci
