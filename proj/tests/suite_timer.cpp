// Suite wall-clock check. "start <stamp>" records the current time;
// "check <stamp> <seconds>" fails if more than <seconds> have passed.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

namespace {

long long now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

}  // namespace

int main(int argc, char** argv) {
  const std::string mode = argc > 1 ? argv[1] : "";
  if (mode == "start" && argc == 3) {
    std::ofstream(argv[2]) << now_ms() << "\n";
    return 0;
  }
  if (mode == "check" && argc == 4) {
    std::ifstream in(argv[2]);
    long long start = 0;
    if (!(in >> start)) {
      std::cerr << "no start stamp at " << argv[2] << "\n";
      return 1;
    }
    const double elapsed = static_cast<double>(now_ms() - start) / 1000.0;
    const double budget = std::atof(argv[3]);
    std::cout << (elapsed < budget ? "[PASS]" : "[FAIL]") << " suite wall clock " << elapsed << " s (budget "
              << budget << " s)\n";
    return elapsed < budget ? 0 : 1;
  }
  std::cerr << "usage: suite_timer start <stamp> | check <stamp> <seconds>\n";
  return 2;
}
