#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace ci {

struct ReportRow {
  std::string id;
  std::string provenance;  // anchor of the checked property, or "plumbing"
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

// check rows plus run metadata; written single-threaded
class Report {
public:
  void meta(const std::string& key, const std::string& value);
  void meta(const std::string& key, double value);
  ReportRow& add(ReportRow row);
  ReportRow& add(const std::string& id, const std::string& provenance, double measured, double target,
                 double tolerance, bool pass, const std::string& note = "");

  const std::vector<ReportRow>& rows() const { return rows_; }
  const std::vector<std::pair<std::string, std::string>>& metadata() const { return meta_; }
  bool all_pass() const;
  int failures() const;

  void write_csv(std::ostream& os) const;
  void write_summary(std::ostream& os) const;
  void write_json(std::ostream& os) const;
  // report.csv, summary.txt and report.json under dir (created if missing)
  void save(const std::string& dir, const std::string& stem = "report") const;

private:
  std::vector<ReportRow> rows_;
  std::vector<std::pair<std::string, std::string>> meta_;
};

// shortest round-trip-stable text form used in every CSV
std::string fmt_num(double x);

}  // namespace ci
