// Writes the benchmark fixture memory images. Run from the repository root:
//   mkfixtures [output-dir]
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "fixture_programs.hpp"

int main(int argc, char** argv) {
  const std::filesystem::path dir = argc > 1 ? argv[1] : "fixtures";
  std::filesystem::create_directories(dir);

  const std::pair<const char*, std::string> files[] = {
      {"program1.mem", fixtures::program1()},
      {"loop_parity_1000.mem", fixtures::loop_parity_1000()},
      {"fib_recursive.mem", fixtures::fib_recursive()},
      {"strsort_small.mem", fixtures::strsort_small()},
      {"btb_regression.mem", fixtures::btb_regression()},
  };
  for (const auto& [name, text] : files) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << (dir / name) << "\n";
      return 1;
    }
    out << text;
    std::cout << "wrote " << (dir / name).string() << "\n";
  }
  return 0;
}
