#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "roughsum/parallel.hpp"
#include "roughsum/sieve.hpp"
#include "roughsum/test_function.hpp"

namespace roughsum {

enum class Weight { psi, pi };

// Parameters of a Bombieri-Vinogradov scan. Q defaults to
// floor(x^{1/2} / (log x)^B) and y to round(x^{1 / log log x}).
struct BVParameters {
  std::int64_t x = 0;
  double b_exponent = 1.0;
  std::int64_t q_max = 0;
  std::int64_t y = 0;
  Weight weight = Weight::psi;

  // u with x / Q = y^u.
  double u() const;

  // Fills defaults and validates. Throws std::invalid_argument when
  // x < 16, Q is outside [floor(x^{1/2}/(log x)^B), x^{1/2}], or y < 2.
  static BVParameters make(std::int64_t x, double b_exponent,
                           std::optional<std::int64_t> q_max = std::nullopt,
                           std::optional<std::int64_t> y = std::nullopt,
                           Weight weight = Weight::psi);
};

std::int64_t default_q_max(std::int64_t x, double b_exponent);
std::int64_t default_roughness(std::int64_t x);

struct AbeSplit {
  double a = 0.0;  // sum_{n <= x, n = a (q), p(n) > y} log n
  double b = 0.0;  // sum_{n = a (q)} f(n), f(n) = sum_{lm = n; l,m > y rough} Lambda(l)
  double e = 0.0;  // prime powers p^k = a (q) with p <= y, weighted log p
  double combined() const { return a - b + e; }
};

struct DiscrepancyRecord {
  std::int64_t q = 0;
  std::int64_t a_worst = 0;
  double discrepancy = 0.0;  // |W(x;q,a) - W(x)/phi(q)|
  double a_term = 0.0;       // A, B and E at a_worst
  double b_term = 0.0;
  double e_term = 0.0;
  double psi_at_worst = 0.0;  // psi(x;q,a_worst)
  double split_residual() const { return std::abs(psi_at_worst - (a_term - b_term + e_term)); }
};

struct BVStatistic {
  double lhs = 0.0;
  std::optional<double> normalized_465;  // psi weight: lhs / (Q x^{1/2} log x (log log x)^{1/2})
  std::optional<double> normalized_466;  // pi weight:  lhs / (Q x^{1/2} (log log x)^{1/2})
};

// Sparse sequences alpha_l, beta_m with their exact mean-square constants
// a = sup_L (sum_{l <= L} |alpha_l|^2) / L over integers L <= x, and b alike.
struct BilinearWeights {
  std::vector<std::pair<std::int64_t, Complex>> alpha;  // ascending l
  std::vector<std::pair<std::int64_t, Complex>> beta;   // ascending m
  std::int64_t l0 = 0;                                  // smallest l in the support of alpha
  double a_const = 0.0;
  double b_const = 0.0;
};

struct BilinearCheckResult {
  double lhs = 0.0;
  double rhs = 0.0;  // (a b)^{1/2} Q x^{1/2} log x
  double ratio = 0.0;
  std::size_t pair_count = 0;
};

struct SplitScanReport {
  double max_residual = 0.0;
  std::int64_t arg_q = 0;
  std::int64_t arg_a = 0;
  std::int64_t progressions = 0;
};

double psi_progression(const SieveTable& table, std::int64_t x, std::int64_t q, std::int64_t a);
std::int64_t pi_progression(const SieveTable& table, std::int64_t x, std::int64_t q, std::int64_t a);
AbeSplit abe_split(const SieveTable& table, std::int64_t x, std::int64_t q, std::int64_t a,
                   std::int64_t y);

// One record per q <= Q; smallest maximizing residue on ties.
std::vector<DiscrepancyRecord> discrepancy_profile(const SieveTable& table,
                                                   const BVParameters& params,
                                                   Parallelism par = {});
BVStatistic bv_statistic(const BVParameters& params, const std::vector<DiscrepancyRecord>& records);
BVStatistic bv_statistic(const SieveTable& table, const BVParameters& params, Parallelism par = {});

// max |psi(x;q,a) - (A - B + E)| over q <= q_max and reduced residues a.
SplitScanReport scan_abe_split(const SieveTable& table, std::int64_t x, std::int64_t y,
                               std::int64_t q_max, Parallelism par = {});

BilinearWeights make_bilinear_weights(std::vector<std::pair<std::int64_t, Complex>> alpha,
                                      std::vector<std::pair<std::int64_t, Complex>> beta,
                                      std::int64_t x);
// alpha_l = Lambda(l) 1_y(l) on (y, x/y], beta_m = 1_y(m) on (y, x].
BilinearWeights prime_sum_weights(const SieveTable& table, std::int64_t x, std::int64_t y);
// alpha = 1 at l0 only, beta = 1 on (y, x].
BilinearWeights spike_weights(std::int64_t l0, std::int64_t x, std::int64_t y);

inline constexpr std::size_t kDefaultPairBudget = 100'000'000;

// f(n) = sum_{lm = n} alpha_l beta_m for 0 <= n <= x.
std::vector<Complex> convolve_weights(const BilinearWeights& w, std::int64_t x,
                                      std::size_t budget = kDefaultPairBudget);
// Both sides of the bilinear discrepancy bound; the ratio carries no verdict.
BilinearCheckResult theorem2_check(const SieveTable& table, const BilinearWeights& w, std::int64_t x,
                              std::int64_t q_max, Parallelism par = {},
                              std::size_t budget = kDefaultPairBudget);

}  // namespace roughsum
