#include <filesystem>
#include <fstream>
#include <iostream>

#include "fastnav/verify/bench.hpp"

// Regenerates the committed scenario files from the canonical definitions in
// the benchmark registry. A unit test asserts the files match byte for byte.
int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "scenarios";
  std::filesystem::create_directories(dir);
  for (const auto& entry : fastnav::verify::bench_scenario_texts()) {
    const auto path = dir / (std::string(entry.name) + ".json");
    std::ofstream os(path);
    if (!os) {
      std::cerr << "cannot write " << path << "\n";
      return 1;
    }
    os << entry.text;
    std::cout << "wrote " << path.string() << "\n";
  }
  return 0;
}
