#include <iostream>
#include <string>
#include <vector>

#include "diaboli/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only(argv + 1, argv + argc);
  const auto results = diaboli::acceptance::run(std::cout, only);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " acceptance criteria passed\n";
  return failed == 0 ? 0 : 1;
}
