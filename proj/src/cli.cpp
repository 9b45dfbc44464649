#include "roughsum/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "roughsum/decomposition.hpp"
#include "roughsum/identities.hpp"
#include "roughsum/test_function.hpp"
#include "roughsum/tolerance.hpp"

namespace roughsum::cli {

std::string format_real(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string command_name(Command c) {
  switch (c) {
    case Command::identity: return "identity";
    case Command::ramare: return "ramare";
    case Command::decompose: return "decompose";
    case Command::typeii: return "typeii";
    case Command::bv: return "bv";
    case Command::theorem2: return "theorem2";
  }
  return "unknown";
}

namespace {

std::optional<std::int64_t> parse_spike(const std::string& weights) {
  if (weights == "primes") return std::nullopt;
  if (weights.rfind("spike=", 0) == 0) {
    const std::string arg = weights.substr(6);
    std::size_t used = 0;
    std::int64_t l0 = 0;
    try {
      l0 = std::stoll(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == arg.size() && !arg.empty() && l0 >= 1) return l0;
  }
  throw UsageError("--weights: expected 'primes' or 'spike=<l0>' with l0 >= 1, got '" + weights + "'");
}

void validate(const ExperimentConfig& c) {
  const std::string cmd = command_name(c.command);
  const std::int64_t x_min =
      (c.command == Command::bv || c.command == Command::theorem2) ? 16
      : (c.command == Command::decompose || c.command == Command::typeii) ? 2
                                                                          : 1;
  if (c.x < x_min) throw UsageError(cmd + ": --x must be >= " + std::to_string(x_min));
  if (c.limit) {
    if (*c.limit < c.x) {
      throw UsageError(cmd + ": conflicting flags, --limit " + std::to_string(*c.limit) +
                       " is below --x " + std::to_string(c.x));
    }
    if (*c.limit > kMaxSieveLimit) {
      throw UsageError(cmd + ": --limit exceeds " + std::to_string(kMaxSieveLimit));
    }
  } else if (std::max<std::int64_t>(c.x, 2) > kMaxSieveLimit) {
    throw UsageError(cmd + ": --x exceeds " + std::to_string(kMaxSieveLimit));
  }
  if (c.tolerance && !(*c.tolerance > 0.0)) throw UsageError(cmd + ": --tolerance must be positive");
  if (c.command == Command::decompose || c.command == Command::typeii) {
    if (!c.y) throw UsageError(cmd + ": --y is required");
    if (*c.y < 1 || *c.y >= c.x) throw UsageError(cmd + ": --y must satisfy 1 <= y < x");
    try {
      parse_function_spec(c.function_spec);
    } catch (const std::invalid_argument& e) {
      throw UsageError(cmd + ": --function: " + e.what());
    }
  }
  if (c.command == Command::bv || c.command == Command::theorem2) {
    try {
      BVParameters::make(c.x, c.b_exponent, c.q_max, c.y, c.weight);
    } catch (const std::invalid_argument& e) {
      throw UsageError(cmd + ": " + e.what());
    }
  }
  if (c.command == Command::theorem2) {
    const auto spike = parse_spike(c.weights);
    if (spike && *spike > c.x) throw UsageError(cmd + ": spike position exceeds --x");
  }
}

}  // namespace

ExperimentConfig parse_args(int argc, const char* const* argv) {
  ExperimentConfig c;
  CLI::App app{"Type I / Type II decomposition experiments for sums over primes", "roughsum"};
  app.require_subcommand(1, 1);

  std::string format = "csv";
  std::string weight = "psi";
  std::int64_t y_value = 0;
  std::int64_t limit_value = 0;
  std::int64_t q_value = 0;
  double tol_value = 0.0;
  bool no_rough_m = false;
  bool no_rough_n = false;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--x", c.x, "Upper summation limit")->required();
    sub->add_option("--limit", limit_value, "Sieve limit (defaults to x)");
    sub->add_option("--out", c.out_path, "Output file, '-' for stdout");
    sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--threads", c.threads, "Worker threads")->check(CLI::Range(1u, 1024u));
    sub->add_option("--tolerance", tol_value, "Override the check tolerance");
  };

  auto* identity = app.add_subcommand("identity", "Scan Lambda(n) = log n - sum Lambda(l) over n <= x");
  common(identity);
  auto* ramare = app.add_subcommand("ramare", "Scan Ramare's identity over squarefree n in (sqrt x, x]");
  common(ramare);

  auto* decompose = app.add_subcommand("decompose", "Type I / Type II decomposition of a rough prime sum");
  auto* typeii = app.add_subcommand("typeii", "Dyadic Type II sum S_II");
  for (auto* sub : {decompose, typeii}) {
    common(sub);
    sub->add_option("--y", y_value, "Roughness threshold")->required();
    sub->add_option("--function", c.function_spec, "const[=c] | expo=<alpha> | char=<q>,<index> | table=<path>");
    sub->add_flag("--no-rough-m", no_rough_m, "Let m range over all integers in S_II");
    sub->add_flag("--no-rough-n", no_rough_n, "Let n range over all integers in S_II");
  }
  decompose->add_option("--seed", c.seed, "Seed for sampled Moebius checks");
  decompose->add_option("--samples", c.samples, "Number of sampled t for Moebius checks")
      ->check(CLI::Range(0, 1'000'000));

  auto* bv = app.add_subcommand("bv", "Discrepancies of psi or pi in progressions to moduli q <= Q");
  auto* theorem2 = app.add_subcommand("theorem2", "Both sides of the bilinear discrepancy bound");
  for (auto* sub : {bv, theorem2}) {
    common(sub);
    sub->add_option("--y", y_value, "Roughness threshold (default round(x^{1/log log x}))");
    sub->add_option("--q-max", q_value, "Largest modulus Q (default floor(x^{1/2}/(log x)^B))");
    sub->add_option("--b-exponent", c.b_exponent, "Exponent B");
  }
  bv->add_option("--weight", weight, "psi or pi")->check(CLI::IsMember({"psi", "pi"}));
  theorem2->add_option("--weights", c.weights, "primes | spike=<l0>");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n" + app.help());
  }

  for (auto* sub : app.get_subcommands()) {
    const std::string name = sub->get_name();
    for (Command cmd : {Command::identity, Command::ramare, Command::decompose, Command::typeii,
                        Command::bv, Command::theorem2}) {
      if (command_name(cmd) == name) c.command = cmd;
    }
    auto given = [sub](const char* name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--y")) c.y = y_value;
    if (given("--limit")) c.limit = limit_value;
    if (given("--q-max")) c.q_max = q_value;
    if (given("--tolerance")) c.tolerance = tol_value;
  }
  c.format = format == "json" ? OutputFormat::json : OutputFormat::csv;
  c.weight = weight == "pi" ? Weight::pi : Weight::psi;
  c.rough_m = !no_rough_m;
  c.rough_n = !no_rough_n;
  validate(c);
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
  nlohmann::json j;
  j["command"] = command_name(c.command);
  j["x"] = c.x;
  j["y"] = c.y ? nlohmann::json(*c.y) : nlohmann::json(nullptr);
  j["limit"] = c.limit ? nlohmann::json(*c.limit) : nlohmann::json(nullptr);
  j["format"] = c.format == OutputFormat::json ? "json" : "csv";
  j["tolerance"] = c.tolerance ? nlohmann::json(*c.tolerance) : nlohmann::json(nullptr);
  switch (c.command) {
    case Command::decompose:
    case Command::typeii:
      j["function"] = c.function_spec;
      j["rough_m"] = c.rough_m;
      j["rough_n"] = c.rough_n;
      if (c.command == Command::decompose) {
        j["seed"] = c.seed;
        j["samples"] = c.samples;
      }
      break;
    case Command::bv:
    case Command::theorem2:
      j["q_max"] = c.q_max ? nlohmann::json(*c.q_max) : nlohmann::json(nullptr);
      j["b_exponent"] = c.b_exponent;
      if (c.command == Command::bv) {
        j["weight"] = c.weight == Weight::pi ? "pi" : "psi";
      } else {
        j["weights"] = c.weights;
      }
      break;
    default:
      break;
  }
  return j;
}

std::string default_output_path(const ExperimentConfig& c) {
  const char* dir = std::getenv(kOutDirEnv);
  std::string base = (dir && *dir) ? std::string(dir) : std::string(".");
  if (base.back() != '/') base += '/';
  return base + command_name(c.command) + (c.format == OutputFormat::json ? ".json" : ".csv");
}

namespace {

// Rows of named cells; rendered as CSV (header + rows) or as a JSON array.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

std::string i64(std::int64_t v) { return std::to_string(v); }

struct Outcome {
  Table table;
  nlohmann::json result;
  std::string summary;
  bool checks_ok = true;
};

nlohmann::json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

Outcome run_identity(const ExperimentConfig& c, const SieveTable& table) {
  const double tol = c.tolerance.value_or(1e-8);
  const auto r = scan_trivial_identity(table, c.x, {c.threads});
  Outcome o;
  o.table.header = {"n_max", "max_abs_residual", "argmax_n", "count_checked"};
  o.table.rows.push_back({i64(r.n_max), format_real(r.max_abs_residual), i64(r.argmax_n), i64(r.count_checked)});
  o.result = {{"n_max", r.n_max}, {"max_abs_residual", r.max_abs_residual},
              {"argmax_n", r.argmax_n}, {"count_checked", r.count_checked}, {"tolerance", tol}};
  o.checks_ok = r.max_abs_residual <= tol;
  o.summary = "identity n_max=" + i64(r.n_max) + " max_abs_residual=" + format_real(r.max_abs_residual) +
              " at n=" + i64(r.argmax_n);
  return o;
}

Outcome run_ramare(const ExperimentConfig& c, const SieveTable& table) {
  const double tol = c.tolerance.value_or(1e-10);
  const auto r = scan_ramare(table, c.x);
  Outcome o;
  o.table.header = {"x", "max_abs_residual", "argmax_n", "count_checked"};
  o.table.rows.push_back({i64(c.x), format_real(r.max_abs_residual), i64(r.argmax_n), i64(r.count_checked)});
  o.result = {{"x", c.x}, {"max_abs_residual", r.max_abs_residual},
              {"argmax_n", r.argmax_n}, {"count_checked", r.count_checked}, {"tolerance", tol}};
  o.checks_ok = r.max_abs_residual <= tol;
  o.summary = "ramare x=" + i64(c.x) + " squarefree n checked=" + i64(r.count_checked) +
              " max_abs_residual=" + format_real(r.max_abs_residual);
  return o;
}

Outcome run_decompose(const ExperimentConfig& c, const SieveTable& table) {
  const auto f = TestFunction::from_spec(parse_function_spec(c.function_spec));
  const RoughPrimeSum problem(table, f, c.x, *c.y, {c.threads});
  const TypeIIOptions opts{c.rough_m, c.rough_n};
  const DecompositionReport r = problem.report(opts);
  const auto steps = problem.proof_step_checks();

  const double sum_tol = c.tolerance.value_or(sum_tolerance(c.x, std::abs(r.log_term)));
  const double identity_tol = c.tolerance.value_or(r.identity_tolerance);

  // Moebius expansion at s1_argmax_t plus sampled t.
  const auto prefix = problem.rough_prefix_sums();
  std::mt19937_64 rng(c.seed);
  std::uniform_int_distribution<std::int64_t> pick(1, c.x);
  double moebius_worst = r.moebius_residual;
  nlohmann::json samples = nlohmann::json::array();
  for (int i = 0; i < c.samples; ++i) {
    const std::int64_t t = pick(rng);
    const auto e = problem.moebius_expansion(t);
    const double res = std::abs(e.value - prefix[t]);
    moebius_worst = std::max(moebius_worst, res);
    samples.push_back({{"t", t}, {"residual", res}, {"majorant", e.majorant}, {"prefix_abs", std::abs(prefix[t])}});
  }

  bool steps_ok = true;
  nlohmann::json step_json = nlohmann::json::array();
  for (const auto& s : steps) {
    steps_ok = steps_ok && s.slack >= -sum_tol;
    step_json.push_back({{"name", s.name}, {"lhs", s.lhs}, {"rhs", s.rhs}, {"slack", s.slack}});
  }

  Outcome o;
  o.table.header = {"x", "y", "function", "true_re", "true_im", "log_re", "log_im",
                    "bilinear_re", "bilinear_im", "identity_residual", "s1", "s1_t",
                    "s1_divisor_form", "s2", "s2_L", "s2_m", "bound", "ratio"};
  o.table.rows.push_back({i64(r.x), i64(r.y), c.function_spec,
                          format_real(r.true_sum.real()), format_real(r.true_sum.imag()),
                          format_real(r.log_term.real()), format_real(r.log_term.imag()),
                          format_real(r.bilinear_term.real()), format_real(r.bilinear_term.imag()),
                          format_real(r.identity_residual), format_real(r.s1_value), i64(r.s1_argmax_t),
                          format_real(r.s1_divisor_form), format_real(r.s2_value), i64(r.s2_arg_L),
                          i64(r.s2_arg_m), format_real(r.bound_value), format_real(r.ratio)});
  o.result = {{"x", r.x},
              {"y", r.y},
              {"function", c.function_spec},
              {"true_sum", complex_json(r.true_sum)},
              {"log_term", complex_json(r.log_term)},
              {"bilinear_term", complex_json(r.bilinear_term)},
              {"identity_residual", r.identity_residual},
              {"identity_tolerance", identity_tol},
              {"s1", r.s1_value},
              {"s1_t", r.s1_argmax_t},
              {"s1_divisor_form", r.s1_divisor_form},
              {"moebius_residual", r.moebius_residual},
              {"moebius_samples", samples},
              {"s2", r.s2_value},
              {"s2_L", r.s2_arg_L},
              {"s2_m", r.s2_arg_m},
              {"s2_grid_restricted", r.s2_grid_restricted},
              {"s2_vacuous", r.s2_vacuous},
              {"bound", r.bound_value},
              {"ratio", r.ratio},
              {"proof_steps", step_json}};
  const bool identity_ok = r.identity_residual <= identity_tol;
  const bool moebius_ok = moebius_worst <= sum_tol && r.s1_value <= r.s1_divisor_form + sum_tol;
  o.checks_ok = identity_ok && moebius_ok && steps_ok;
  o.summary = "decompose x=" + i64(r.x) + " y=" + i64(r.y) + " F=" + c.function_spec +
              " identity_residual=" + format_real(r.identity_residual) +
              " S_I=" + format_real(r.s1_value) + " S_II=" + format_real(r.s2_value) +
              (r.s2_vacuous ? " (vacuous)" : " (grid)") + " ratio=" + format_real(r.ratio) +
              (identity_ok ? "" : " IDENTITY-FAIL") + (moebius_ok ? "" : " MOEBIUS-FAIL") +
              (steps_ok ? "" : " STEP-FAIL");
  return o;
}

Outcome run_typeii(const ExperimentConfig& c, const SieveTable& table) {
  const auto f = TestFunction::from_spec(parse_function_spec(c.function_spec));
  const RoughPrimeSum problem(table, f, c.x, *c.y, {c.threads});
  const auto r = problem.type_II({c.rough_m, c.rough_n});
  Outcome o;
  o.table.header = {"kind", "L", "arg_m", "value"};
  nlohmann::json levels = nlohmann::json::array();
  for (const auto& l : r.levels) {
    o.table.rows.push_back({"level", i64(l.L), i64(l.arg_m), format_real(l.value)});
    levels.push_back({{"L", l.L}, {"arg_m", l.arg_m}, {"value", l.value}});
  }
  o.table.rows.push_back({"max", i64(r.arg_L), i64(r.arg_m), format_real(r.value)});
  o.result = {{"x", c.x}, {"y", *c.y}, {"function", c.function_spec}, {"levels", levels},
              {"s2", r.value}, {"s2_L", r.arg_L}, {"s2_m", r.arg_m},
              {"grid_restricted", r.grid_restricted}, {"vacuous", r.vacuous}};
  o.summary = "typeii x=" + i64(c.x) + " y=" + i64(*c.y) + " S_II=" + format_real(r.value) +
              " at L=" + i64(r.arg_L) + " m=" + i64(r.arg_m) + (r.vacuous ? " (vacuous)" : " (grid)");
  return o;
}

Outcome run_bv(const ExperimentConfig& c, const SieveTable& table) {
  const auto params = BVParameters::make(c.x, c.b_exponent, c.q_max, c.y, c.weight);
  const auto records = discrepancy_profile(table, params, {c.threads});
  const auto stat = bv_statistic(params, records);
  const double tol = c.tolerance.value_or(1e-7);

  Outcome o;
  o.table.header = {"q", "a_worst", "discrepancy", "a_term", "b_term", "e_term"};
  nlohmann::json rows = nlohmann::json::array();
  double worst_split = 0.0;
  for (const auto& r : records) {
    o.table.rows.push_back({i64(r.q), i64(r.a_worst), format_real(r.discrepancy),
                            format_real(r.a_term), format_real(r.b_term), format_real(r.e_term)});
    rows.push_back({{"q", r.q}, {"a_worst", r.a_worst}, {"discrepancy", r.discrepancy},
                    {"a_term", r.a_term}, {"b_term", r.b_term}, {"e_term", r.e_term},
                    {"split_residual", r.split_residual()}});
    worst_split = std::max(worst_split, r.split_residual());
  }
  const bool psi = params.weight == Weight::psi;
  const std::string norm_name = psi ? "normalized_465" : "normalized_466";
  const double norm = psi ? *stat.normalized_465 : *stat.normalized_466;
  o.table.rows.push_back({"lhs", "", format_real(stat.lhs), "", "", ""});
  o.table.rows.push_back({norm_name, "", format_real(norm), "", "", ""});
  o.result = {{"x", params.x}, {"y", params.y}, {"q_max", params.q_max},
              {"b_exponent", params.b_exponent}, {"u", params.u()},
              {"weight", psi ? "psi" : "pi"}, {"records", rows}, {"lhs", stat.lhs},
              {norm_name, norm}, {"max_split_residual", worst_split}};
  o.checks_ok = worst_split <= tol;
  o.summary = std::string("bv x=") + i64(params.x) + " Q=" + i64(params.q_max) + " y=" + i64(params.y) +
              " weight=" + (psi ? "psi" : "pi") + " lhs=" + format_real(stat.lhs) + " " + norm_name +
              "=" + format_real(norm) + " max_split_residual=" + format_real(worst_split);
  return o;
}

Outcome run_theorem2(const ExperimentConfig& c, const SieveTable& table) {
  const auto params = BVParameters::make(c.x, c.b_exponent, c.q_max, c.y, Weight::psi);
  const auto spike = parse_spike(c.weights);
  const BilinearWeights w = spike ? spike_weights(*spike, c.x, params.y)
                                  : prime_sum_weights(table, c.x, params.y);
  const auto r = theorem2_check(table, w, c.x, params.q_max, {c.threads});
  Outcome o;
  o.table.header = {"x", "y", "Q", "l0", "a_const", "b_const", "lhs", "rhs", "ratio"};
  o.table.rows.push_back({i64(c.x), i64(params.y), i64(params.q_max), i64(w.l0), format_real(w.a_const),
                          format_real(w.b_const), format_real(r.lhs), format_real(r.rhs), format_real(r.ratio)});
  o.result = {{"x", c.x}, {"y", params.y}, {"q_max", params.q_max}, {"l0", w.l0},
              {"a_const", w.a_const}, {"b_const", w.b_const}, {"lhs", r.lhs}, {"rhs", r.rhs},
              {"ratio", r.ratio}, {"pair_count", r.pair_count},
              {"note", "numeric evaluation only; the Siegel-Walfisz hypothesis is not checked"}};
  o.summary = "theorem2 x=" + i64(c.x) + " Q=" + i64(params.q_max) + " a=" + format_real(w.a_const) +
              " b=" + format_real(w.b_const) + " lhs=" + format_real(r.lhs) + " rhs=" + format_real(r.rhs) +
              " ratio=" + format_real(r.ratio);
  return o;
}

}  // namespace

int run(const ExperimentConfig& c, const SieveTable& table, std::ostream& summary) {
  if (std::max<std::int64_t>(c.x, 2) > table.limit()) {
    summary << "error: x exceeds the sieve limit\n";
    return kExitUsage;
  }
  Outcome o;
  switch (c.command) {
    case Command::identity: o = run_identity(c, table); break;
    case Command::ramare: o = run_ramare(c, table); break;
    case Command::decompose: o = run_decompose(c, table); break;
    case Command::typeii: o = run_typeii(c, table); break;
    case Command::bv: o = run_bv(c, table); break;
    case Command::theorem2: o = run_theorem2(c, table); break;
  }

  std::string payload;
  if (c.format == OutputFormat::csv) {
    payload = to_csv(o.table);
  } else {
    nlohmann::json doc;
    doc["config"] = config_to_json(c);
    doc["result"] = o.result;
    doc["checks_ok"] = o.checks_ok;
    payload = doc.dump(2) + "\n";
  }

  const std::string path = c.out_path.empty() ? default_output_path(c) : c.out_path;
  if (path == "-") {
    std::cout << payload << std::flush;
    if (!std::cout) return kExitIo;
  } else {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << payload;
    out.flush();
    if (!out) {
      summary << "error: cannot write '" << path << "'\n";
      return kExitIo;
    }
  }
  summary << o.summary << (o.checks_ok ? " [ok]" : " [CHECK FAILED]") << "\n";
  return o.checks_ok ? kExitOk : kExitCheckFailed;
}

int run(const ExperimentConfig& c, std::ostream& summary) {
  const std::int64_t limit = c.limit.value_or(std::max<std::int64_t>(c.x, 2));
  const SieveTable table(limit);
  return run(c, table, summary);
}

}  // namespace roughsum::cli
