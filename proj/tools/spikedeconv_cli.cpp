#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "spikedeconv/cli.hpp"

int main(int argc, char** argv) {
  using namespace spikedeconv;
  std::vector<std::string> args(argv + 1, argv + argc);
  std::optional<std::string> env;
  if (const char* v = std::getenv(kOutputDirEnv)) env = v;
  RunConfig config;
  try {
    config = parse_config(args, env);
  } catch (const HelpRequested& h) {
    std::cout << h.text;
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  return execute(config, std::cout, std::cerr);
}
