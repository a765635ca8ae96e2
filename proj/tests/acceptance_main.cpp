#include <iostream>

#include "rggld/acceptance.hpp"

int main() {
  std::size_t failed = 0;
  rggld::run_acceptance({}, [&](const rggld::CriterionResult& r) {
    std::cout << rggld::format_result_line(r) << std::endl;
    failed += r.passed ? 0 : 1;
  });
  std::cout << (failed == 0 ? "all acceptance criteria passed" : std::to_string(failed) + " acceptance criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
