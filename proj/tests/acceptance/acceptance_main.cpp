// One line per acceptance criterion: PASS/FAIL, the suite behind it, the
// wall time against its budget and the first failing check if any.

#include <cstdio>
#include <string>
#include <vector>

#include "eqsep/errors.hpp"
#include "eqsep/suites.hpp"

namespace {

struct Criterion
{
  int number;
  std::string title;
  std::string suite;
  double budget_seconds;
  bool per_check_budget = false;  // budget applies to each check
};

} // namespace

int main()
{
  using namespace eqsep;

  std::vector<Criterion> const criteria{
      {1, "regular-representation orbit law", "regular", 30, true},
      {2, "CNN filter hierarchy", "cnn", 60},
      {3, "depth stabilization", "depth", 300},
      {4, "width and multiplicity invariance", "width", 300},
      {5, "subgroup hierarchy", "hierarchy", 600},
      {6, "equivariant basis dimensions", "basis", 60},
      {7, "zero-sum partition oracle", "partitions", 600},
      {8, "relation algebra properties", "algebra", 300},
      {9, "symbolic and empirical agreement", "activations", 600},
      {10, "IGN smoke test at n = 3", "ign", 900},
  };

  std::vector<LoggedRelation> log;
  SuiteOptions options;
  options.log = &log;

  int failures = 0;
  for (auto const &c : criteria) {
    bool passed = false;
    std::string note;
    double seconds = 0;
    try {
      auto report = run_suite(c.suite, options);
      seconds = report.seconds;
      passed = report.passed();
      double slowest = 0;
      for (auto const &chk : report.checks)
        slowest = std::max(slowest, chk.seconds);
      double const measured = c.per_check_budget ? slowest : seconds;
      if (measured > c.budget_seconds) {
        passed = false;
        note = "over the time budget";
      }
      if (auto const *f = report.first_failure())
        note = f->name + ": " + f->detail;
      else if (note.empty())
        note = std::to_string(report.checks.size()) + " checks";
    } catch (Error const &e) {
      note = std::string("error: ") + e.what();
    }
    if (!passed)
      ++failures;
    std::printf("%s criterion %d (%s) [%s] %.2fs / %.0fs budget%s: %s\n",
                passed ? "PASS" : "FAIL", c.number, c.title.c_str(),
                c.suite.c_str(), seconds, c.budget_seconds,
                c.per_check_budget ? " per case" : "", note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
