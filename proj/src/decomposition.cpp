#include "roughsum/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "roughsum/summation.hpp"
#include "roughsum/tolerance.hpp"

namespace roughsum {

namespace {

void check_xy(const SieveTable& table, std::int64_t x, std::int64_t y, const char* what) {
  if (x < 2 || x > table.limit()) {
    throw std::invalid_argument(std::string(what) + ": x=" + std::to_string(x) +
                                " outside [2, " + std::to_string(table.limit()) + "]");
  }
  if (y < 1 || y >= x) {
    throw std::invalid_argument(std::string(what) + ": need 1 <= y < x, got y=" +
                                std::to_string(y));
  }
}

MoebiusExpansion moebius_expand(const SieveTable& table, std::span<const Complex> f,
                                std::int64_t t, std::int64_t y) {
  MoebiusExpansion out;
  CompensatedComplexSum value;
  CompensatedSum majorant;
  const auto divisors = table.smooth_squarefree_divisors(y, t);
  for (const auto& [d, mu] : divisors) {
    CompensatedComplexSum inner;
    for (std::int64_t dm = d; dm <= t; dm += d) inner.add(f[dm]);
    const Complex s = inner.value();
    value.add(static_cast<double>(mu) * s);
    majorant.add(std::abs(s));
  }
  out.value = value.value();
  out.majorant = majorant.value();
  out.divisor_count = divisors.size();
  return out;
}

}  // namespace

RoughPrimeSum::RoughPrimeSum(const SieveTable& table, const TestFunction& f, std::int64_t x,
                             std::int64_t y, Parallelism par)
    : table_(table), x_(x), y_(y), par_(par) {
  check_xy(table, x, y, "RoughPrimeSum");
  f_ = f.sample(x);
  rough_.assign(static_cast<std::size_t>(x) + 1, 0);
  rough_[1] = 1;
  for (std::int64_t n = 2; n <= x; ++n) {
    rough_[n] = table.spf(n) > y ? 1 : 0;
    if (rough_[n]) rough_above_y_.push_back(n);
  }
  lambda_ = table.von_mangoldt_values(x);
  for (std::int64_t n = 2; n <= x; ++n) {
    if (!rough_[n]) {
      lambda_[n] = 0.0;
    } else if (lambda_[n] != 0.0) {
      prime_powers_.push_back(n);
    }
  }
}

Complex RoughPrimeSum::true_sum() const {
  return deterministic_sum<Complex>(2, x_, par_, [&](std::int64_t n) {
    return lambda_[n] != 0.0 ? lambda_[n] * f_[n] : Complex{};
  });
}

Complex RoughPrimeSum::log_term() const {
  return deterministic_sum<Complex>(2, x_, par_, [&](std::int64_t n) {
    return rough_[n] ? f_[n] * std::log(static_cast<double>(n)) : Complex{};
  });
}

Complex RoughPrimeSum::bilinear_term() const {
  const auto count = static_cast<std::int64_t>(prime_powers_.size());
  return deterministic_sum<Complex>(0, count - 1, par_, [&](std::int64_t i) {
    const std::int64_t ell = prime_powers_[i];
    const std::int64_t m_max = x_ / ell;
    CompensatedComplexSum inner;
    for (std::int64_t m : rough_above_y_) {
      if (m > m_max) break;
      inner.add(f_[ell * m]);
    }
    return lambda_[ell] * inner.value();
  });
}

std::vector<Complex> RoughPrimeSum::rough_prefix_sums() const {
  std::vector<Complex> prefix(static_cast<std::size_t>(x_) + 1);
  CompensatedComplexSum acc;
  for (std::int64_t t = 1; t <= x_; ++t) {
    if (rough_[t]) acc.add(f_[t]);
    prefix[t] = acc.value();
  }
  return prefix;
}

TypeIResult RoughPrimeSum::type_I() const {
  TypeIResult best{-1.0, 1};
  CompensatedComplexSum acc;
  for (std::int64_t t = 1; t <= x_; ++t) {
    if (rough_[t]) acc.add(f_[t]);
    const double v = std::abs(acc.value());
    if (v > best.value) best = {v, t};
  }
  return best;
}

MoebiusExpansion RoughPrimeSum::moebius_expansion(std::int64_t t) const {
  if (t < 1 || t > x_) throw std::invalid_argument("moebius_expansion: t outside [1, x]");
  return moebius_expand(table_, f_, t, y_);
}

std::vector<std::int64_t> RoughPrimeSum::type_II_grid() const {
  std::vector<std::int64_t> grid;
  if (y_ * y_ >= x_) return grid;
  for (std::int64_t L = y_; L <= x_ / y_; L *= 2) grid.push_back(L);
  return grid;
}

Complex RoughPrimeSum::type_II_inner_sum(std::int64_t L, std::int64_t m, std::int64_t n) const {
  const std::int64_t hi = std::min({2 * L, x_ / m, x_ / n});
  CompensatedComplexSum acc;
  for (std::int64_t ell = L + 1; ell <= hi; ++ell) acc.add(f_[ell * m] * std::conj(f_[ell * n]));
  return acc.value();
}

double RoughPrimeSum::type_II_cell(std::int64_t L, std::int64_t m, const TypeIIOptions& opts) const {
  if (x_ / m <= L) return 0.0;  // empty l-range for every n
  CompensatedSum acc;
  const std::int64_t n_hi = std::min(2 * m, x_ / (L + 1));
  for (std::int64_t n = m / 2 + 1; n <= n_hi; ++n) {
    if (opts.rough_n && !rough_[n]) continue;
    acc.add(std::abs(type_II_inner_sum(L, m, n)));
  }
  return acc.value();
}

TypeIIResult RoughPrimeSum::type_II(const TypeIIOptions& opts) const {
  TypeIIResult result;
  const auto grid = type_II_grid();
  if (grid.empty()) {
    result.vacuous = true;
    return result;
  }
  double best = -1.0;
  for (std::int64_t L : grid) {
    std::vector<std::int64_t> ms;
    for (std::int64_t m = y_ + 1; m <= 2 * x_ / L; ++m) {
      if (!opts.rough_m || rough_[m]) ms.push_back(m);
    }
    std::vector<double> cells(ms.size(), 0.0);
    constexpr std::size_t kCellChunk = 64;
    parallel_for((ms.size() + kCellChunk - 1) / kCellChunk, par_, [&](std::size_t c) {
      const std::size_t hi = std::min(ms.size(), (c + 1) * kCellChunk);
      for (std::size_t i = c * kCellChunk; i < hi; ++i) cells[i] = type_II_cell(L, ms[i], opts);
    });
    TypeIILevel level{L, -1.0, 0};
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (cells[i] > level.value) level = {L, cells[i], ms[i]};
    }
    if (ms.empty()) level.value = 0.0;
    result.levels.push_back(level);
    if (!ms.empty() && level.value > best) {
      best = level.value;
      result.value = level.value;
      result.arg_L = L;
      result.arg_m = level.arg_m;
    }
  }
  return result;
}

Complex RoughPrimeSum::piecewise_log_integral() const {
  // On (k-1, k] the integrand is T(k) = sum_{k <= n <= x} 1_y(n) F(n).
  std::vector<Complex> tail(static_cast<std::size_t>(x_) + 2);
  CompensatedComplexSum acc;
  for (std::int64_t k = x_; k >= 1; --k) {
    if (rough_[k]) acc.add(f_[k]);
    tail[k] = acc.value();
  }
  CompensatedComplexSum integral;
  for (std::int64_t k = 2; k <= x_; ++k) {
    integral.add(tail[k] * std::log1p(1.0 / static_cast<double>(k - 1)));
  }
  return integral.value();
}

std::vector<DyadicBlock> RoughPrimeSum::dyadic_blocks() const {
  std::vector<DyadicBlock> blocks;
  for (std::int64_t L = y_; (L + 1) * (y_ + 1) <= x_; L *= 2) {
    const auto first = std::upper_bound(prime_powers_.begin(), prime_powers_.end(), L);
    const auto last = std::upper_bound(first, prime_powers_.end(), std::min(2 * L, x_));
    double lambda_sq = 0.0;
    {
      CompensatedSum s;
      for (auto it = first; it != last; ++it) s.add(lambda_[*it] * lambda_[*it]);
      lambda_sq = s.value();
    }
    for (std::int64_t M = y_; (M + 1) * (L + 1) <= x_; M *= 2) {
      DyadicBlock block{L, M, {}, lambda_sq, 0.0};
      CompensatedComplexSum value;
      CompensatedSum inner_sq;
      const auto m_first = std::upper_bound(rough_above_y_.begin(), rough_above_y_.end(), M);
      for (auto it = first; it != last; ++it) {
        const std::int64_t ell = *it;
        const std::int64_t m_hi = std::min(2 * M, x_ / ell);
        CompensatedComplexSum inner;
        for (auto mt = m_first; mt != rough_above_y_.end() && *mt <= m_hi; ++mt) {
          inner.add(f_[ell * *mt]);
        }
        const Complex s = inner.value();
        value.add(lambda_[ell] * s);
        inner_sq.add(std::norm(s));
      }
      block.value = value.value();
      block.inner_square_sum = inner_sq.value();
      blocks.push_back(block);
    }
  }
  return blocks;
}

DecompositionReport RoughPrimeSum::report(const TypeIIOptions& opts) const {
  DecompositionReport r;
  r.x = x_;
  r.y = y_;
  r.true_sum = true_sum();
  r.log_term = log_term();
  r.bilinear_term = bilinear_term();
  r.identity_residual = std::abs(r.true_sum - (r.log_term - r.bilinear_term));
  r.identity_tolerance = decomposition_tolerance(r.log_term);

  const TypeIResult s1 = type_I();
  r.s1_value = s1.value;
  r.s1_argmax_t = s1.argmax_t;
  const MoebiusExpansion expansion = moebius_expansion(s1.argmax_t);
  r.s1_divisor_form = expansion.majorant;
  r.moebius_residual = std::abs(expansion.value - rough_prefix_sums()[s1.argmax_t]);

  const TypeIIResult s2 = type_II(opts);
  r.s2_value = s2.value;
  r.s2_arg_L = s2.arg_L;
  r.s2_arg_m = s2.arg_m;
  r.s2_vacuous = s2.vacuous;
  r.s2_grid_restricted = s2.grid_restricted;

  const double log_x = std::log(static_cast<double>(x_));
  r.bound_value = 2.0 * r.s1_value * log_x +
                  std::sqrt(r.s2_value * static_cast<double>(x_) * std::pow(log_x, 5));
  r.ratio = r.bound_value > 0.0 ? std::abs(r.true_sum) / r.bound_value : 0.0;
  return r;
}

std::vector<StepCheck> RoughPrimeSum::proof_step_checks() const {
  std::vector<StepCheck> checks;
  auto equality = [&](std::string name, Complex a, Complex b) {
    const double diff = std::abs(a - b);
    checks.push_back({std::move(name), diff, 0.0, -diff});
  };
  auto inequality = [&](std::string name, double lhs, double rhs) {
    checks.push_back({std::move(name), lhs, rhs, rhs - lhs});
  };

  const Complex logs = log_term();
  equality("log_integral_identity", piecewise_log_integral(), logs);
  const double log_x = std::log(static_cast<double>(x_));
  inequality("log_term_bound", std::abs(logs), 2.0 * log_x * type_I().value);

  const auto blocks = dyadic_blocks();
  CompensatedComplexSum cover;
  for (const auto& b : blocks) {
    cover.add(b.value);
    inequality("cauchy_schwarz L=" + std::to_string(b.L) + " M=" + std::to_string(b.M),
               std::norm(b.value), b.lambda_square_sum * b.inner_square_sum);
  }
  equality("dyadic_cover", cover.value(), bilinear_term());
  return checks;
}

Complex true_rough_prime_sum(const SieveTable& table, const TestFunction& f, std::int64_t x,
                             std::int64_t y, Parallelism par) {
  return RoughPrimeSum(table, f, x, y, par).true_sum();
}

Complex rough_log_sum(const SieveTable& table, const TestFunction& f, std::int64_t x,
                      std::int64_t y, Parallelism par) {
  return RoughPrimeSum(table, f, x, y, par).log_term();
}

Complex bilinear_sum(const SieveTable& table, const TestFunction& f, std::int64_t x,
                     std::int64_t y, Parallelism par) {
  return RoughPrimeSum(table, f, x, y, par).bilinear_term();
}

TypeIResult type_I(const SieveTable& table, const TestFunction& f, std::int64_t x, std::int64_t y) {
  return RoughPrimeSum(table, f, x, y).type_I();
}

MoebiusExpansion type_I_moebius_expansion(const SieveTable& table, const TestFunction& f,
                                          std::int64_t t, std::int64_t y) {
  if (t < 1 || t > table.limit()) {
    throw std::invalid_argument("type_I_moebius_expansion: t outside [1, limit]");
  }
  if (y < 1) throw std::invalid_argument("type_I_moebius_expansion: y must be >= 1");
  return moebius_expand(table, f.sample(t), t, y);
}

TypeIIResult type_II(const SieveTable& table, const TestFunction& f, std::int64_t x,
                     std::int64_t y, const TypeIIOptions& opts, Parallelism par) {
  return RoughPrimeSum(table, f, x, y, par).type_II(opts);
}

DecompositionReport proposition_report(const SieveTable& table, const TestFunction& f,
                                       std::int64_t x, std::int64_t y, Parallelism par) {
  return RoughPrimeSum(table, f, x, y, par).report();
}

std::vector<StepCheck> proof_step_checks(const SieveTable& table, const TestFunction& f,
                                         std::int64_t x, std::int64_t y, Parallelism par) {
  return RoughPrimeSum(table, f, x, y, par).proof_step_checks();
}

}  // namespace roughsum
