// One line per acceptance criterion; exit status 1 if any fails.
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <string>

#include "convint/acceptance.hpp"

int main(int argc, char** argv) {
  ci::AcceptanceOptions opt;
  if (const char* s = std::getenv("CONVINT_SEED")) opt.seed = std::stoull(s);
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::stoi(argv[i]));
  if (ids.empty())
    for (const auto& c : ci::criterion_list()) ids.push_back(c.first);
  int failed = 0;
  for (int id : ids) {
    const ci::CriterionResult c = ci::run_criterion(id, opt);
    std::cout << (c.pass ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << c.id << "  " << c.name << "  ("
              << std::fixed << std::setprecision(1) << c.seconds << " s)  " << c.detail << std::endl;
    std::cout.unsetf(std::ios::fixed);
    if (!c.pass) {
      ++failed;
      for (const auto& r : c.rows)
        if (!r.pass)
          std::cout << "      " << r.id << ": measured " << ci::fmt_num(r.measured) << ", target "
                    << ci::fmt_num(r.target) << ", tolerance " << ci::fmt_num(r.tolerance) << "  " << r.note << "\n";
    }
  }
  std::cout << (ids.size() - failed) << "/" << ids.size() << " criteria pass" << std::endl;
  return failed == 0 ? 0 : 1;
}
