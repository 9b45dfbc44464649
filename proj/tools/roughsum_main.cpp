#include <exception>
#include <iostream>

#include "roughsum/cli.hpp"
#include "roughsum/errors.hpp"

int main(int argc, char** argv) {
  using namespace roughsum::cli;
  ExperimentConfig config;
  try {
    config = parse_args(argc, argv);
  } catch (const HelpRequested& h) {
    std::cout << h.what();
    return kExitOk;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  // With data going to stdout the summary line goes to stderr.
  std::ostream& summary = config.out_path == "-" ? std::cerr : std::cout;
  try {
    return run(config, summary);
  } catch (const roughsum::ResourceError& e) {
    std::cerr << "resource error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  }
}
