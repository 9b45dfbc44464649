#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include "roughsum/cli.hpp"
#include "roughsum/test_function.hpp"

namespace roughsum {

// Overwrites the cached log of one prime so that Lambda goes wrong there.
struct SieveTableTamper {
  static void corrupt_log(SieveTable& t, std::size_t prime_index, double delta) {
    t.prime_logs_.at(prime_index) += delta;
  }
};

}  // namespace roughsum

using namespace roughsum;
using namespace roughsum::cli;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"roughsum"};
  argv.insert(argv.end(), args);
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

std::string parse_error(std::initializer_list<const char*> args) {
  try {
    parse(args);
  } catch (const UsageError& e) {
    return e.what();
  }
  return "";
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("roughsum_cli_" + std::to_string(std::rand()) + "_" +
                                        std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("parse decompose example") {
  const auto c = parse({"decompose", "--x", "10000", "--y", "10", "--function", "expo=0.4142", "--out", "r.csv"});
  CHECK(c.command == Command::decompose);
  CHECK(c.x == 10000);
  CHECK(c.y == 10);
  CHECK(c.out_path == "r.csv");
  CHECK(c.format == OutputFormat::csv);
  const auto f = TestFunction::from_spec(parse_function_spec(c.function_spec));
  CHECK(f.is_exponential_phase());
  CHECK(f.alpha() == 0.4142);
}

TEST_CASE("parse bv example fills defaults") {
  const auto c = parse({"bv", "--x", "100000", "--b-exponent", "1", "--format", "json"});
  CHECK(c.command == Command::bv);
  CHECK(c.format == OutputFormat::json);
  CHECK_FALSE(c.q_max.has_value());
  const auto p = BVParameters::make(c.x, c.b_exponent, c.q_max, c.y, c.weight);
  CHECK(p.q_max == 27);
  CHECK(p.y == 111);
}

TEST_CASE("usage errors carry distinct messages") {
  const std::string bad_x = parse_error({"identity", "--x", "abc"});
  const std::string conflict = parse_error({"identity", "--x", "1000", "--limit", "10"});
  const std::string bad_spec = parse_error({"decompose", "--x", "100", "--y", "3", "--function", "expo="});
  const std::string bad_char = parse_error({"decompose", "--x", "100", "--y", "3", "--function", "char=6,1"});
  const std::string bad_y = parse_error({"decompose", "--x", "100", "--y", "100"});
  const std::string bad_q = parse_error({"bv", "--x", "10000", "--q-max", "101"});
  const std::string unknown = parse_error({"bv", "--x", "10000", "--colour", "red"});
  const std::string nocmd = parse_error({});
  const std::string bad_weights = parse_error({"theorem2", "--x", "1000", "--weights", "spike=0"});
  const std::vector<std::string> all{bad_x, conflict, bad_spec, bad_char, bad_y, bad_q, unknown, nocmd, bad_weights};
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK_FALSE(all[i].empty());
    for (std::size_t j = 0; j < i; ++j) CHECK(all[i] != all[j]);
  }
  CHECK(conflict.find("conflicting") != std::string::npos);
  CHECK_THROWS_AS(parse({"decompose", "--x", "100"}), UsageError);
  CHECK_THROWS_AS(parse({"identity", "--help"}), HelpRequested);
}

TEST_CASE("run writes CSV with a header row") {
  TempDir dir;
  struct Case {
    std::vector<const char*> args;
    std::string header;
  };
  const std::vector<Case> cases{
      {{"identity", "--x", "1000"}, "n_max,max_abs_residual,argmax_n,count_checked"},
      {{"ramare", "--x", "1000"}, "x,max_abs_residual,argmax_n,count_checked"},
      {{"decompose", "--x", "1000", "--y", "5", "--function", "char=5,1"},
       "x,y,function,true_re,true_im,log_re,log_im,bilinear_re,bilinear_im,identity_residual,"
       "s1,s1_t,s1_divisor_form,s2,s2_L,s2_m,bound,ratio"},
      {{"typeii", "--x", "1000", "--y", "5"}, "kind,L,arg_m,value"},
      {{"bv", "--x", "10000"}, "q,a_worst,discrepancy,a_term,b_term,e_term"},
      {{"theorem2", "--x", "10000"}, "x,y,Q,l0,a_const,b_const,lhs,rhs,ratio"},
  };
  for (const auto& k : cases) {
    std::vector<const char*> argv{"roughsum"};
    argv.insert(argv.end(), k.args.begin(), k.args.end());
    const std::string out = (dir.path / "out.csv").string();
    argv.push_back("--out");
    argv.push_back(out.c_str());
    const auto c = parse_args(static_cast<int>(argv.size()), argv.data());
    std::ostringstream summary;
    CHECK(run(c, summary) == kExitOk);
    const std::string text = slurp(out);
    CHECK(text.substr(0, text.find('\n')) == k.header);
    const std::string line = summary.str();
    CHECK(line.find("[ok]") != std::string::npos);
    CHECK(std::count(line.begin(), line.end(), '\n') == 1);
  }
}

TEST_CASE("decompose with F = 1 gives one report row") {
  TempDir dir;
  const std::string out = (dir.path / "d.csv").string();
  const auto c = parse({"decompose", "--x", "10000", "--y", "10", "--out", out.c_str()});
  std::ostringstream summary;
  CHECK(run(c, summary) == kExitOk);
  const std::string text = slurp(out);
  CHECK(std::count(text.begin(), text.end(), '\n') == 2);
  CHECK(text.find("\n10000,10,const,") != std::string::npos);
}

TEST_CASE("JSON output re-parses to the config echo") {
  TempDir dir;
  const std::string out = (dir.path / "r.json").string();
  const auto c = parse({"decompose", "--x", "2000", "--y", "7", "--function", "expo=0.25", "--format", "json",
                        "--out", out.c_str(), "--threads", "3", "--seed", "99"});
  std::ostringstream summary;
  REQUIRE(run(c, summary) == kExitOk);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("config") == config_to_json(c));
  CHECK(doc.at("config").at("seed") == 99);
  CHECK_FALSE(doc.at("config").contains("threads"));
  CHECK(doc.at("checks_ok") == true);
  const auto& r = doc.at("result");
  for (const char* key : {"true_sum", "log_term", "bilinear_term"}) {
    CHECK(r.at(key).at("re").is_number());
    CHECK(r.at(key).at("im").is_number());
  }
  CHECK(r.at("moebius_samples").size() == 16);
  CHECK(r.at("proof_steps").is_array());
  CHECK(r.at("s2_grid_restricted") == true);

  const std::string bv_out = (dir.path / "bv.json").string();
  const auto b = parse({"bv", "--x", "10000", "--weight", "pi", "--format", "json", "--out", bv_out.c_str()});
  REQUIRE(run(b, summary) == kExitOk);
  const auto bv_doc = nlohmann::json::parse(slurp(bv_out));
  CHECK(bv_doc.at("config") == config_to_json(b));
  CHECK(bv_doc.at("result").contains("normalized_466"));
  CHECK_FALSE(bv_doc.at("result").contains("normalized_465"));
  CHECK(bv_doc.at("result").at("records").size() == 10);
}

TEST_CASE("outputs are byte-stable across thread counts") {
  TempDir dir;
  for (const char* cmd : {"decompose", "typeii", "bv", "theorem2", "identity"}) {
    std::string reference;
    for (const char* threads : {"1", "4", "8"}) {
      const std::string out = (dir.path / (std::string(cmd) + threads)).string();
      std::vector<const char*> argv{"roughsum", cmd, "--x", "20000", "--threads", threads, "--out", out.c_str()};
      if (std::string(cmd) == "decompose" || std::string(cmd) == "typeii") {
        argv.insert(argv.end(), {"--y", "10", "--function", "expo=0.618"});
      }
      const auto c = parse_args(static_cast<int>(argv.size()), argv.data());
      std::ostringstream summary;
      REQUIRE(run(c, summary) == kExitOk);
      const std::string text = slurp(out);
      if (reference.empty()) reference = text;
      CHECK(text == reference);
    }
  }
}

TEST_CASE("default output path honours the environment") {
  TempDir dir;
  ::setenv(kOutDirEnv, dir.path.c_str(), 1);
  const auto c = parse({"identity", "--x", "100"});
  CHECK(default_output_path(c) == (dir.path / "identity.csv").string());
  std::ostringstream summary;
  CHECK(run(c, summary) == kExitOk);
  CHECK(fs::exists(dir.path / "identity.csv"));
  ::unsetenv(kOutDirEnv);
}

TEST_CASE("corrupted von Mangoldt table fails the checks") {
  SieveTable t(20'000);
  // 101 is above every y used below, so the error lands in the rough part.
  REQUIRE(t.primes()[25] == 101);
  SieveTableTamper::corrupt_log(t, 25, 1e-3);
  TempDir dir;
  const std::string out = (dir.path / "x").string();
  for (auto args : {std::vector<const char*>{"identity", "--x", "20000"},
                    std::vector<const char*>{"decompose", "--x", "20000", "--y", "3"},
                    std::vector<const char*>{"bv", "--x", "20000"}}) {
    std::vector<const char*> argv{"roughsum"};
    argv.insert(argv.end(), args.begin(), args.end());
    argv.push_back("--out");
    argv.push_back(out.c_str());
    const auto c = parse_args(static_cast<int>(argv.size()), argv.data());
    std::ostringstream summary;
    CHECK(run(c, t, summary) == kExitCheckFailed);
    CHECK(summary.str().find("[CHECK FAILED]") != std::string::npos);
  }
}

TEST_CASE("unwritable output gives the I/O exit code") {
  const auto c = parse({"identity", "--x", "100", "--out", "/nonexistent-dir/sub/out.csv"});
  std::ostringstream summary;
  CHECK(run(c, summary) == kExitIo);
  CHECK(summary.str().find("cannot write") != std::string::npos);
}
