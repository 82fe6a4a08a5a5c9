#include "hawkeslob/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return hawkeslob::cli::run(args);
}
