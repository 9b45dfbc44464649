#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "roughsum/parallel.hpp"
#include "roughsum/sieve.hpp"
#include "roughsum/test_function.hpp"

namespace roughsum {

struct TypeIResult {
  double value = 0.0;
  std::int64_t argmax_t = 1;  // smallest maximizing t
};

struct MoebiusExpansion {
  Complex value;          // sum_{d | P, d <= t} mu(d) sum_{m <= t/d} F(dm)
  double majorant = 0.0;  // sum_{d | P, d <= t} |sum_{m <= t/d} F(dm)|
  std::size_t divisor_count = 0;
};

struct TypeIIOptions {
  bool rough_m = true;  // restrict m to y-rough integers
  bool rough_n = true;  // restrict the n-sum to y-rough integers
};

struct TypeIILevel {
  std::int64_t L = 0;
  double value = 0.0;
  std::int64_t arg_m = 0;
};

// S_II maximized over the dyadic grid L = y 2^j <= x / y rather than over
// real L; `grid_restricted` is always set to record this.
struct TypeIIResult {
  double value = 0.0;
  std::int64_t arg_L = 0;
  std::int64_t arg_m = 0;
  bool vacuous = false;  // y^2 >= x, empty L-range
  bool grid_restricted = true;
  std::vector<TypeIILevel> levels;
};

struct DecompositionReport {
  std::int64_t x = 0;
  std::int64_t y = 0;
  Complex true_sum;
  Complex log_term;
  Complex bilinear_term;
  double identity_residual = 0.0;  // |true_sum - (log_term - bilinear_term)|
  double identity_tolerance = 0.0;
  double s1_value = 0.0;
  std::int64_t s1_argmax_t = 1;
  double s1_divisor_form = 0.0;    // Moebius majorant at s1_argmax_t
  double moebius_residual = 0.0;   // |expansion - prefix sum| at s1_argmax_t
  double s2_value = 0.0;
  std::int64_t s2_arg_L = 0;
  std::int64_t s2_arg_m = 0;
  bool s2_vacuous = false;
  bool s2_grid_restricted = true;
  double bound_value = 0.0;  // 2 S_I log x + sqrt(S_II x (log x)^5)
  double ratio = 0.0;        // |true_sum| / bound_value, 0 if the bound is 0

  bool identity_ok() const { return identity_residual <= identity_tolerance; }
};

// One inequality lhs <= rhs from the proof. Equalities are recorded as
// |difference| <= 0. slack = rhs - lhs.
struct StepCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

struct DyadicBlock {
  std::int64_t L = 0;  // l in (L, 2L]
  std::int64_t M = 0;  // m in (M, 2M]
  Complex value;       // sum_l Lambda(l) sum_m F(lm)
  double lambda_square_sum = 0.0;
  double inner_square_sum = 0.0;
};

// The sum over y-rough prime powers n <= x of Lambda(n) F(n), together with
// every term of its split into a Type I and a Type II part. F is sampled
// once at construction; all methods are pure.
class RoughPrimeSum {
 public:
  RoughPrimeSum(const SieveTable& table, const TestFunction& f, std::int64_t x, std::int64_t y,
                Parallelism par = {});

  std::int64_t x() const { return x_; }
  std::int64_t y() const { return y_; }
  Complex f(std::int64_t n) const { return f_[n]; }
  bool rough(std::int64_t n) const { return rough_[n] != 0; }

  // Direct sum over prime powers n <= x with p(n) > y.
  Complex true_sum() const;
  // sum_{n <= x, p(n) > y} F(n) log n.
  Complex log_term() const;
  // sum over rough prime powers l and rough m > y with lm <= x of Lambda(l) F(lm).
  Complex bilinear_term() const;

  // S(t) = sum_{n <= t, p(n) > y} F(n) for t = 0..x.
  std::vector<Complex> rough_prefix_sums() const;
  TypeIResult type_I() const;
  MoebiusExpansion moebius_expansion(std::int64_t t) const;

  std::vector<std::int64_t> type_II_grid() const;
  // sum over L < l <= 2L, l <= x/m, l <= x/n of F(lm) conj(F(ln)).
  Complex type_II_inner_sum(std::int64_t L, std::int64_t m, std::int64_t n) const;
  // sum over m/2 < n <= 2m of |inner sum|.
  double type_II_cell(std::int64_t L, std::int64_t m, const TypeIIOptions& opts = {}) const;
  TypeIIResult type_II(const TypeIIOptions& opts = {}) const;

  // int_1^x (sum_{t <= n <= x, p(n) > y} F(n)) dt/t, integrated exactly on
  // each unit interval where the integrand is constant.
  Complex piecewise_log_integral() const;
  std::vector<DyadicBlock> dyadic_blocks() const;

  DecompositionReport report(const TypeIIOptions& opts = {}) const;
  std::vector<StepCheck> proof_step_checks() const;

 private:
  const SieveTable& table_;
  std::int64_t x_;
  std::int64_t y_;
  Parallelism par_;
  std::vector<Complex> f_;
  std::vector<std::uint8_t> rough_;
  std::vector<double> lambda_;                 // Lambda(n) on rough n, else 0
  std::vector<std::int64_t> rough_above_y_;    // rough m in (y, x], ascending
  std::vector<std::int64_t> prime_powers_;     // rough prime powers <= x, ascending
};

Complex true_rough_prime_sum(const SieveTable& table, const TestFunction& f, std::int64_t x,
                             std::int64_t y, Parallelism par = {});
Complex rough_log_sum(const SieveTable& table, const TestFunction& f, std::int64_t x,
                      std::int64_t y, Parallelism par = {});
Complex bilinear_sum(const SieveTable& table, const TestFunction& f, std::int64_t x,
                     std::int64_t y, Parallelism par = {});
TypeIResult type_I(const SieveTable& table, const TestFunction& f, std::int64_t x, std::int64_t y);
MoebiusExpansion type_I_moebius_expansion(const SieveTable& table, const TestFunction& f,
                                          std::int64_t t, std::int64_t y);
TypeIIResult type_II(const SieveTable& table, const TestFunction& f, std::int64_t x,
                     std::int64_t y, const TypeIIOptions& opts = {}, Parallelism par = {});
DecompositionReport proposition_report(const SieveTable& table, const TestFunction& f,
                                       std::int64_t x, std::int64_t y, Parallelism par = {});
std::vector<StepCheck> proof_step_checks(const SieveTable& table, const TestFunction& f,
                                         std::int64_t x, std::int64_t y, Parallelism par = {});

}  // namespace roughsum
