#include "forestcalc/suite.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

int main(int argc, char** argv) {
  forestcalc::SuiteOptions options;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--quick") == 0) options.quick = true;
  int failed = 0;
  forestcalc::run_acceptance(options, [&](const forestcalc::CriterionResult& r) {
    std::printf("%s\n", forestcalc::format_line(r).c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  });
  std::printf("%d/11 criteria passed\n", 11 - failed);
  return failed == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
