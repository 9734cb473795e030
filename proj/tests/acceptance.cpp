// Runs every property suite at the default configuration and prints one
// PASS/FAIL line per acceptance criterion. Criterion 12 repeats the run and
// compares the report bytes. Exit status is nonzero when any line fails.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "floatsolid/config.hpp"
#include "floatsolid/verify.hpp"

using namespace floatsolid;

namespace {

const std::map<int, std::string> kTitles = {
    {1, "M M^{-1} = I to 1e-13 for a in {0.5, 1, 2}"},
    {2, "exclusion characterizations agree on 1e4 samples (tol 1e-9)"},
    {3, "half-line norm bounds, 100 samples, relative slack 1e-3"},
    {4, "closed-form half-line oracle, error <= 5e-4 at h = 0.01, order >= 1.7"},
    {5, "resolvent consistency <= 5e-3, order >= 1.7, 3 lambdas x 5 inputs"},
    {6, "decay-rate bound on 64x40 sector grids, zero violations"},
    {7, "sector growth trend ratios <= 1.1"},
    {8, "spectrum Re <= 1e-8, rest state equilibrium, singular set checks"},
    {9, "energy defect <= 1e-3, order >= 1.7, energy nonincreasing"},
    {10, "Riccati residual <= 1e-8, methods agree to 1e-6, J within 2% and minimal"},
    {11, "int |Hdot|^2 <= E(0) under u = -Hdot"},
    {12, "verify reports byte-identical across two runs"},
};

}  // namespace

int main() {
  const Config config;
  const VerifyReport first = run_verify(config);
  const VerifyReport second = run_verify(config);

  std::map<int, std::vector<const SuiteResult*>> by_criterion;
  for (const SuiteResult& s : first.suites) by_criterion[s.criterion].push_back(&s);

  bool all = true;
  for (int c = 1; c <= 11; ++c) {
    bool pass = !by_criterion[c].empty();
    std::string detail;
    for (const SuiteResult* s : by_criterion[c]) {
      pass = pass && s->pass;
      detail += (detail.empty() ? "" : "; ") + s->name + ": " + s->summary;
    }
    all = all && pass;
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << c << " (" << kTitles.at(c)
              << ") " << detail << "\n";
  }

  bool identical = first.suites.size() == second.suites.size();
  std::string mismatch;
  for (std::size_t i = 0; identical && i < first.suites.size(); ++i) {
    if (report_text(first.suites[i]) != report_text(second.suites[i])) {
      identical = false;
      mismatch = first.suites[i].name;
    }
  }
  all = all && identical;
  std::cout << (identical ? "PASS" : "FAIL") << " criterion 12 (" << kTitles.at(12) << ") "
            << (identical ? std::to_string(first.suites.size()) + " reports compared"
                          : "mismatch in " + mismatch)
            << "\n";

  for (const SuiteResult& s : first.suites) {
    if (s.criterion == 0) {
      all = all && s.pass;
      std::cout << (s.pass ? "PASS" : "FAIL") << " invariants " << s.name << ": " << s.summary
                << "\n";
    }
  }
  return all ? 0 : 1;
}
