#include <iostream>
#include <string>
#include <vector>

#include "aestruct/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto res = aestruct::cli::run_command(args);
  std::cout << res.out << std::flush;
  std::cerr << res.err << std::flush;
  return res.exit_code;
}
