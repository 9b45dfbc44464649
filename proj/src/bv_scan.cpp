#include "roughsum/bv_scan.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "roughsum/errors.hpp"
#include "roughsum/summation.hpp"

namespace roughsum {

namespace {

void check_progression(const SieveTable& table, std::int64_t x, std::int64_t q, std::int64_t a,
                       const char* what) {
  if (x < 1 || x > table.limit()) {
    throw std::invalid_argument(std::string(what) + ": x=" + std::to_string(x) +
                                " outside [1, " + std::to_string(table.limit()) + "]");
  }
  if (q < 1) throw std::invalid_argument(std::string(what) + ": q must be >= 1");
  if (a < 0 || a >= q) throw std::invalid_argument(std::string(what) + ": need 0 <= a < q");
}

// First n >= 1 with n = a (mod q).
std::int64_t first_in_class(std::int64_t q, std::int64_t a) { return a == 0 ? q : a; }

// Shared precomputation for the A - B + E split at fixed (x, y).
class ProgressionSplitter {
 public:
  ProgressionSplitter(const SieveTable& table, std::int64_t x, std::int64_t y)
      : table_(table), x_(x), y_(y) {
    if (x < 1 || x > table.limit()) throw std::invalid_argument("abe_split: x out of range");
    if (y < 2) throw std::invalid_argument("abe_split: y must be >= 2");
    for (std::int64_t m = y + 1; m <= x; ++m) {
      if (table.spf(m) > y) rough_above_y_.push_back(m);
    }
    for (const auto& pp : table.prime_powers(x)) {
      if (pp.p > y) {
        if (pp.n <= x / (y + 1)) rough_powers_.push_back(pp);
      } else {
        small_powers_.push_back(pp);
      }
    }
  }

  bool rough(std::int64_t n) const { return n == 1 || table_.spf(n) > y_; }

  AbeSplit split(std::int64_t q, std::int64_t a) const {
    CompensatedSum a_sum;
    for (std::int64_t n = first_in_class(q, a); n <= x_; n += q) {
      if (n > 1 && rough(n)) a_sum.add(std::log(static_cast<double>(n)));
    }
    CompensatedSum b_sum;
    for (const auto& pp : rough_powers_) {
      const std::int64_t m_max = x_ / pp.n;
      for (std::int64_t m : rough_above_y_) {
        if (m > m_max) break;
        if ((pp.n * m) % q == a) b_sum.add(pp.log_p);
      }
    }
    CompensatedSum e_sum;
    for (const auto& pp : small_powers_) {
      if (pp.n % q == a) e_sum.add(pp.log_p);
    }
    return {a_sum.value(), b_sum.value(), e_sum.value()};
  }

  // The same sums for every residue class at once, each accumulated in the
  // same order as split().
  std::vector<AbeSplit> split_all(std::int64_t q) const {
    std::vector<CompensatedSum> as(q), bs(q), es(q);
    for (std::int64_t n = 2; n <= x_; ++n) {
      if (rough(n)) as[n % q].add(std::log(static_cast<double>(n)));
    }
    for (const auto& pp : rough_powers_) {
      const std::int64_t m_max = x_ / pp.n;
      for (std::int64_t m : rough_above_y_) {
        if (m > m_max) break;
        bs[(pp.n * m) % q].add(pp.log_p);
      }
    }
    for (const auto& pp : small_powers_) es[pp.n % q].add(pp.log_p);
    std::vector<AbeSplit> out(q);
    for (std::int64_t r = 0; r < q; ++r) out[r] = {as[r].value(), bs[r].value(), es[r].value()};
    return out;
  }

 private:
  const SieveTable& table_;
  std::int64_t x_;
  std::int64_t y_;
  std::vector<std::int64_t> rough_above_y_;
  std::vector<PrimePower> rough_powers_;  // p > y, p^k <= x/(y+1)
  std::vector<PrimePower> small_powers_;  // p <= y
};

std::vector<double> psi_buckets(const std::vector<PrimePower>& powers, std::int64_t q) {
  std::vector<CompensatedSum> acc(q);
  for (const auto& pp : powers) acc[pp.n % q].add(pp.log_p);
  std::vector<double> out(q);
  for (std::int64_t r = 0; r < q; ++r) out[r] = acc[r].value();
  return out;
}

double psi_total(const std::vector<PrimePower>& powers) {
  CompensatedSum acc;
  for (const auto& pp : powers) acc.add(pp.log_p);
  return acc.value();
}

}  // namespace

double BVParameters::u() const {
  return std::log(static_cast<double>(x) / static_cast<double>(q_max)) /
         std::log(static_cast<double>(y));
}

std::int64_t default_q_max(std::int64_t x, double b_exponent) {
  const double v = std::sqrt(static_cast<double>(x)) /
                   std::pow(std::log(static_cast<double>(x)), b_exponent);
  return static_cast<std::int64_t>(std::floor(v));
}

std::int64_t default_roughness(std::int64_t x) {
  const double lx = std::log(static_cast<double>(x));
  return static_cast<std::int64_t>(std::llround(std::exp(lx / std::log(lx))));
}

BVParameters BVParameters::make(std::int64_t x, double b_exponent,
                                std::optional<std::int64_t> q_max, std::optional<std::int64_t> y,
                                Weight weight) {
  if (x < 16) throw std::invalid_argument("BVParameters: x must be >= 16 so that log log x > 0");
  if (!(b_exponent > 0.0) || !std::isfinite(b_exponent)) {
    throw std::invalid_argument("BVParameters: B must be a positive real");
  }
  BVParameters p;
  p.x = x;
  p.b_exponent = b_exponent;
  p.weight = weight;
  const std::int64_t q_floor = default_q_max(x, b_exponent);
  p.q_max = q_max.value_or(q_floor);
  if (p.q_max < 1 || p.q_max < q_floor || p.q_max > isqrt(x)) {
    throw std::invalid_argument("BVParameters: Q=" + std::to_string(p.q_max) +
                                " outside [" + std::to_string(std::max<std::int64_t>(q_floor, 1)) +
                                ", " + std::to_string(isqrt(x)) + "]");
  }
  p.y = y.value_or(default_roughness(x));
  if (p.y < 2) throw std::invalid_argument("BVParameters: y must be >= 2");
  return p;
}

double psi_progression(const SieveTable& table, std::int64_t x, std::int64_t q, std::int64_t a) {
  check_progression(table, x, q, a, "psi_progression");
  CompensatedSum acc;
  for (std::int64_t n = first_in_class(q, a); n <= x; n += q) acc.add(table.von_mangoldt(n));
  return acc.value();
}

std::int64_t pi_progression(const SieveTable& table, std::int64_t x, std::int64_t q, std::int64_t a) {
  check_progression(table, x, q, a, "pi_progression");
  std::int64_t count = 0;
  for (std::int64_t n = first_in_class(q, a); n <= x; n += q) {
    if (n >= 2 && table.spf(n) == n) ++count;
  }
  return count;
}

AbeSplit abe_split(const SieveTable& table, std::int64_t x, std::int64_t q, std::int64_t a,
                   std::int64_t y) {
  check_progression(table, x, q, a, "abe_split");
  return ProgressionSplitter(table, x, y).split(q, a);
}

std::vector<DiscrepancyRecord> discrepancy_profile(const SieveTable& table,
                                                   const BVParameters& params, Parallelism par) {
  if (params.x > table.limit()) throw std::invalid_argument("discrepancy_profile: x exceeds the sieve limit");
  const std::int64_t x = params.x;
  const auto powers = table.prime_powers(x);
  std::vector<PrimePower> primes_only;
  for (const auto& pp : powers) {
    if (pp.n == pp.p) primes_only.push_back(pp);
  }
  const double psi_x = psi_total(powers);
  const auto pi_x = static_cast<double>(primes_only.size());
  const ProgressionSplitter splitter(table, x, params.y);

  std::vector<DiscrepancyRecord> records(static_cast<std::size_t>(params.q_max));
  parallel_for(records.size(), par, [&](std::size_t idx) {
    const auto q = static_cast<std::int64_t>(idx) + 1;
    const auto psi = psi_buckets(powers, q);
    std::vector<double> weight_values;
    double total = 0.0;
    if (params.weight == Weight::psi) {
      weight_values = psi;
      total = psi_x;
    } else {
      weight_values.assign(q, 0.0);
      for (const auto& pp : primes_only) weight_values[pp.n % q] += 1.0;
      total = pi_x;
    }
    const double expected = total / static_cast<double>(table.euler_phi(q));
    DiscrepancyRecord rec;
    rec.q = q;
    rec.discrepancy = -1.0;
    for (std::int64_t a = (q == 1 ? 0 : 1); a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double d = std::fabs(weight_values[a] - expected);
      if (d > rec.discrepancy) {
        rec.discrepancy = d;
        rec.a_worst = a;
      }
    }
    const AbeSplit s = splitter.split(q, rec.a_worst);
    rec.a_term = s.a;
    rec.b_term = s.b;
    rec.e_term = s.e;
    rec.psi_at_worst = psi[rec.a_worst];
    records[idx] = rec;
  });
  return records;
}

BVStatistic bv_statistic(const BVParameters& params, const std::vector<DiscrepancyRecord>& records) {
  CompensatedSum acc;
  for (const auto& r : records) acc.add(r.discrepancy);
  BVStatistic stat;
  stat.lhs = acc.value();
  const auto x = static_cast<double>(params.x);
  const double lx = std::log(x);
  const double scale = static_cast<double>(params.q_max) * std::sqrt(x) * std::sqrt(std::log(lx));
  if (params.weight == Weight::psi) {
    stat.normalized_465 = stat.lhs / (scale * lx);
  } else {
    stat.normalized_466 = stat.lhs / scale;
  }
  return stat;
}

BVStatistic bv_statistic(const SieveTable& table, const BVParameters& params, Parallelism par) {
  return bv_statistic(params, discrepancy_profile(table, params, par));
}

SplitScanReport scan_abe_split(const SieveTable& table, std::int64_t x, std::int64_t y,
                               std::int64_t q_max, Parallelism par) {
  if (q_max < 1) throw std::invalid_argument("scan_abe_split: q_max must be >= 1");
  const ProgressionSplitter splitter(table, x, y);
  const auto powers = table.prime_powers(x);
  std::vector<SplitScanReport> per_q(static_cast<std::size_t>(q_max));
  parallel_for(per_q.size(), par, [&](std::size_t idx) {
    const auto q = static_cast<std::int64_t>(idx) + 1;
    const auto psi = psi_buckets(powers, q);
    const auto splits = splitter.split_all(q);
    SplitScanReport r{-1.0, q, 0, 0};
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) != 1) continue;
      const double res = std::fabs(psi[a] - splits[a].combined());
      ++r.progressions;
      if (res > r.max_residual) {
        r.max_residual = res;
        r.arg_a = a;
      }
    }
    per_q[idx] = r;
  });
  SplitScanReport total{-1.0, 0, 0, 0};
  for (const auto& r : per_q) {
    total.progressions += r.progressions;
    if (r.max_residual > total.max_residual) {
      total.max_residual = r.max_residual;
      total.arg_q = r.arg_q;
      total.arg_a = r.arg_a;
    }
  }
  return total;
}

namespace {

double mean_square_sup(const std::vector<std::pair<std::int64_t, Complex>>& seq) {
  // Between support points the ratio only decreases, so the sup over
  // integer L is attained at a support point.
  CompensatedSum acc;
  double sup = 0.0;
  for (const auto& [k, v] : seq) {
    acc.add(std::norm(v));
    sup = std::max(sup, acc.value() / static_cast<double>(k));
  }
  return sup;
}

void check_support(const std::vector<std::pair<std::int64_t, Complex>>& seq, std::int64_t x,
                   const char* what) {
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (seq[i].first < 1 || seq[i].first > x) {
      throw std::invalid_argument(std::string(what) + ": support outside [1, x]");
    }
    if (i > 0 && seq[i].first <= seq[i - 1].first) {
      throw std::invalid_argument(std::string(what) + ": indices must be strictly ascending");
    }
  }
}

}  // namespace

BilinearWeights make_bilinear_weights(std::vector<std::pair<std::int64_t, Complex>> alpha,
                                      std::vector<std::pair<std::int64_t, Complex>> beta,
                                      std::int64_t x) {
  check_support(alpha, x, "make_bilinear_weights(alpha)");
  check_support(beta, x, "make_bilinear_weights(beta)");
  BilinearWeights w;
  w.a_const = mean_square_sup(alpha);
  w.b_const = mean_square_sup(beta);
  w.l0 = alpha.empty() ? 0 : alpha.front().first;
  w.alpha = std::move(alpha);
  w.beta = std::move(beta);
  return w;
}

BilinearWeights prime_sum_weights(const SieveTable& table, std::int64_t x, std::int64_t y) {
  if (x < 1 || x > table.limit()) throw std::invalid_argument("prime_sum_weights: x out of range");
  if (y < 1) throw std::invalid_argument("prime_sum_weights: y must be >= 1");
  std::vector<std::pair<std::int64_t, Complex>> alpha;
  for (const auto& pp : table.prime_powers(x / y)) {
    if (pp.p > y && pp.n > y) alpha.emplace_back(pp.n, pp.log_p);
  }
  std::vector<std::pair<std::int64_t, Complex>> beta;
  for (std::int64_t m = y + 1; m <= x; ++m) {
    if (table.spf(m) > y) beta.emplace_back(m, 1.0);
  }
  return make_bilinear_weights(std::move(alpha), std::move(beta), x);
}

BilinearWeights spike_weights(std::int64_t l0, std::int64_t x, std::int64_t y) {
  if (l0 < 1 || l0 > x) throw std::invalid_argument("spike_weights: l0 outside [1, x]");
  std::vector<std::pair<std::int64_t, Complex>> beta;
  for (std::int64_t m = std::max<std::int64_t>(y, 0) + 1; m <= x; ++m) beta.emplace_back(m, 1.0);
  return make_bilinear_weights({{l0, 1.0}}, std::move(beta), x);
}

std::vector<Complex> convolve_weights(const BilinearWeights& w, std::int64_t x, std::size_t budget) {
  std::vector<Complex> f(static_cast<std::size_t>(std::max<std::int64_t>(x, 0)) + 1);
  std::size_t pairs = 0;
  for (const auto& [ell, a] : w.alpha) {
    for (const auto& [m, b] : w.beta) {
      if (m > x / ell) break;
      if (++pairs > budget) {
        throw ResourceError("convolve_weights: more than " + std::to_string(budget) +
                            " (l, m) pairs");
      }
      f[ell * m] += a * b;
    }
  }
  return f;
}

BilinearCheckResult theorem2_check(const SieveTable& table, const BilinearWeights& w, std::int64_t x,
                              std::int64_t q_max, Parallelism par, std::size_t budget) {
  if (x < 2 || x > table.limit()) throw std::invalid_argument("theorem2_check: x out of range");
  if (q_max < 1) throw std::invalid_argument("theorem2_check: Q must be >= 1");
  const auto f = convolve_weights(w, x, budget);
  std::vector<double> per_q(static_cast<std::size_t>(q_max));
  parallel_for(per_q.size(), par, [&](std::size_t idx) {
    const auto q = static_cast<std::int64_t>(idx) + 1;
    std::vector<CompensatedComplexSum> buckets(q);
    for (std::int64_t n = 1; n <= x; ++n) buckets[n % q].add(f[n]);
    CompensatedComplexSum coprime;
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) == 1) coprime.add(buckets[a].value());
    }
    const Complex expected = coprime.value() / static_cast<double>(table.euler_phi(q));
    double worst = 0.0;
    for (std::int64_t a = 0; a < q; ++a) {
      if (std::gcd(a, q) == 1) worst = std::max(worst, std::abs(buckets[a].value() - expected));
    }
    per_q[idx] = worst;
  });
  CompensatedSum lhs;
  for (double v : per_q) lhs.add(v);

  BilinearCheckResult r;
  r.lhs = lhs.value();
  const auto xd = static_cast<double>(x);
  r.rhs = std::sqrt(w.a_const * w.b_const) * static_cast<double>(q_max) * std::sqrt(xd) * std::log(xd);
  r.ratio = r.rhs > 0.0 ? r.lhs / r.rhs : 0.0;
  for (const auto& [ell, a] : w.alpha) {
    for (const auto& [m, b] : w.beta) {
      if (m > x / ell) break;
      ++r.pair_count;
    }
  }
  return r;
}

}  // namespace roughsum
