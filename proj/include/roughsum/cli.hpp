#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>
#include "roughsum/bv_scan.hpp"
#include "roughsum/sieve.hpp"

namespace roughsum::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitIo = 3;

// Output directory used when --out is not given.
inline constexpr const char* kOutDirEnv = "ROUGHSUM_OUT_DIR";

enum class Command { identity, ramare, decompose, typeii, bv, theorem2 };
enum class OutputFormat { csv, json };

struct ExperimentConfig {
  Command command = Command::identity;
  std::int64_t x = 0;
  std::optional<std::int64_t> y;
  std::optional<std::int64_t> limit;
  std::string function_spec = "const";
  std::optional<std::int64_t> q_max;
  double b_exponent = 1.0;
  Weight weight = Weight::psi;
  std::string weights = "primes";  // theorem2: primes | spike=<l0>
  std::string out_path;            // "-" is stdout; empty picks the default location
  OutputFormat format = OutputFormat::csv;
  unsigned threads = 1;
  std::optional<double> tolerance;
  std::uint64_t seed = 20201027;
  int samples = 16;
  bool rough_m = true;
  bool rough_n = true;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Thrown by parse_args for --help; what() holds the help text.
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws UsageError (exit code 2) on malformed, out-of-range or conflicting input.
ExperimentConfig parse_args(int argc, const char* const* argv);

std::string command_name(Command c);
// The config echo written into every JSON output. Execution-only settings
// (threads, output path) are left out so outputs are byte-stable.
nlohmann::json config_to_json(const ExperimentConfig& config);
std::string default_output_path(const ExperimentConfig& config);

// Runs the experiment, writes the output and prints one summary line.
int run(const ExperimentConfig& config, std::ostream& summary);
int run(const ExperimentConfig& config, const SieveTable& table, std::ostream& summary);

// %.12g
std::string format_real(double v);

}  // namespace roughsum::cli
