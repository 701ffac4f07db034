// Acceptance battery: one pass/fail line per criterion; exit code counts the
// failures.  `--only N` runs a single criterion, `--threads K` sizes the pool.
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <vector>

#include "percolab/acceptance.hpp"

int main(int argc, char** argv) {
  int only = 0;
  unsigned threads = 1;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only = std::atoi(argv[++i]);
      if (only < 1 || only > 14) {
        std::fprintf(stderr, "--only expects a criterion id in 1..14\n");
        return 64;
      }
    } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
      int t = std::atoi(argv[++i]);
      if (t < 1) {
        std::fprintf(stderr, "--threads expects a positive integer\n");
        return 64;
      }
      threads = static_cast<unsigned>(t);
    } else {
      std::fprintf(stderr, "usage: %s [--only N] [--threads K]\n", argv[0]);
      return 64;
    }
  }

  std::vector<int> ids;
  if (only)
    ids.push_back(only);
  else
    for (int i = 1; i <= 14; ++i) ids.push_back(i);

  int failures = 0;
  for (int id : ids) {
    percolab::acceptance::CriterionResult r = percolab::acceptance::run_criterion(id, threads);
    std::printf("[%s] C%d %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", r.id,
                r.name.c_str(), r.detail.c_str(), r.seconds);
    std::fflush(stdout);
    if (!r.pass) ++failures;
  }
  if (ids.size() > 1)
    std::printf("%zu/%zu criteria passed\n", ids.size() - failures, ids.size());
  return failures;
}
