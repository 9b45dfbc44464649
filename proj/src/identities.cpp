#include "roughsum/identities.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "roughsum/errors.hpp"

namespace roughsum {

double trivial_identity_residual(const SieveTable& table, std::int64_t n) {
  if (n < 1 || n > table.limit()) {
    throw std::invalid_argument("trivial_identity_residual: n=" + std::to_string(n) +
                                " out of range");
  }
  double divisor_sum = 0.0;
  for (const auto& f : table.factorize(n)) {
    std::int64_t ell = 1;
    for (int k = 1; k <= f.exponent; ++k) {
      ell *= f.p;
      if (ell == n) break;  // the pair (l, m) needs m > 1
      divisor_sum += table.von_mangoldt(ell);
    }
  }
  return table.von_mangoldt(n) - (std::log(static_cast<double>(n)) - divisor_sum);
}

namespace {

struct MaxWitness {
  double value = -1.0;
  std::int64_t arg = 0;
  void offer(double v, std::int64_t at) {
    if (v > value || (v == value && at < arg)) {
      value = v;
      arg = at;
    }
  }
};

}  // namespace

IdentityScanReport scan_trivial_identity(const SieveTable& table, std::int64_t n_max,
                                         Parallelism par) {
  if (n_max < 1 || n_max > table.limit()) {
    throw std::invalid_argument("scan_trivial_identity: n_max out of range");
  }
  const auto chunks =
      static_cast<std::size_t>((n_max + kReductionChunk - 1) / kReductionChunk);
  std::vector<MaxWitness> partial(chunks);
  parallel_for(chunks, par, [&](std::size_t c) {
    const std::int64_t lo = 1 + static_cast<std::int64_t>(c) * kReductionChunk;
    const std::int64_t hi = std::min(n_max, lo + kReductionChunk - 1);
    for (std::int64_t n = lo; n <= hi; ++n) {
      partial[c].offer(std::fabs(trivial_identity_residual(table, n)), n);
    }
  });
  MaxWitness best;
  for (const auto& w : partial) best.offer(w.value, w.arg);
  return {n_max, best.value, best.arg, n_max};
}

namespace {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Rational& operator+=(const Rational& o) {
    const std::int64_t g = std::gcd(den, o.den);
    num = num * (o.den / g) + o.num * (den / g);
    den = den / g * o.den;
    const std::int64_t r = std::gcd(num < 0 ? -num : num, den);
    if (r > 1) {
      num /= r;
      den /= r;
    }
    return *this;
  }
};

}  // namespace

double ramare_residual(const SieveTable& table, std::int64_t n, std::int64_t x) {
  if (x < 1 || x > table.limit()) {
    throw std::invalid_argument("ramare_residual: x=" + std::to_string(x) + " out of range");
  }
  const std::int64_t z = isqrt(x);
  // n > sqrt(x) <=> n > floor(sqrt(x)) for integer n.
  if (n <= z || n > x) {
    throw PreconditionError("ramare_residual: n=" + std::to_string(n) + " not in (sqrt(" +
                            std::to_string(x) + "), " + std::to_string(x) + "]");
  }
  if (!table.is_squarefree(n)) {
    throw PreconditionError("ramare_residual: n=" + std::to_string(n) + " is not squarefree");
  }
  Rational rhs{1, 1};
  for (const auto& f : table.factorize(n)) {  // ascending p
    if (static_cast<std::int64_t>(f.p) > z) continue;
    rhs += Rational{-1, table.omega_z(n / f.p, z)};
  }
  const std::int64_t lhs = table.is_prime(n) ? 1 : 0;
  Rational residual{lhs, 1};
  residual += Rational{-rhs.num, rhs.den};
  return static_cast<double>(residual.num) / static_cast<double>(residual.den);
}

IdentityScanReport scan_ramare(const SieveTable& table, std::int64_t x) {
  if (x < 1 || x > table.limit()) throw std::invalid_argument("scan_ramare: x out of range");
  IdentityScanReport report{x, 0.0, 0, 0};
  for (std::int64_t n = isqrt(x) + 1; n <= x; ++n) {
    if (!table.is_squarefree(n)) continue;
    const double r = std::fabs(ramare_residual(table, n, x));
    if (report.count_checked == 0 || r > report.max_abs_residual) {
      report.max_abs_residual = r;
      report.argmax_n = n;
    }
    ++report.count_checked;
  }
  return report;
}

}  // namespace roughsum
