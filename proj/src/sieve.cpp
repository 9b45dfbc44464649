#include "roughsum/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <new>
#include <stdexcept>
#include <string>

#include "roughsum/errors.hpp"

namespace roughsum {

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative argument");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while (r + 1 <= n / (r + 1)) ++r;
  return r;
}

SieveTable::SieveTable(std::int64_t limit) : limit_(limit) {
  if (limit < 2) throw std::invalid_argument("build_sieve: limit must be >= 2");
  if (limit > kMaxSieveLimit) {
    throw std::invalid_argument("build_sieve: limit " + std::to_string(limit) +
                                " exceeds " + std::to_string(kMaxSieveLimit));
  }
  try {
    spf_.assign(static_cast<std::size_t>(limit) + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("build_sieve: cannot allocate table for limit " + std::to_string(limit));
  }
  const std::int64_t root = isqrt(limit);
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    const auto p = static_cast<std::uint32_t>(i);
    spf_[i] = p;
    primes_.push_back(p);
    if (i > root) continue;
    for (std::int64_t j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = p;
    }
  }
  prime_logs_.reserve(primes_.size());
  for (std::uint32_t p : primes_) prime_logs_.push_back(std::log(static_cast<double>(p)));
}

void SieveTable::check_range(std::int64_t n, const char* what) const {
  if (n < 1 || n > limit_) {
    throw std::invalid_argument(std::string(what) + ": n=" + std::to_string(n) +
                                " outside [1, " + std::to_string(limit_) + "]");
  }
}

std::uint32_t SieveTable::spf(std::int64_t n) const {
  if (n < 2 || n > limit_) {
    throw std::invalid_argument("spf: n=" + std::to_string(n) + " outside [2, " +
                                std::to_string(limit_) + "]");
  }
  return spf_[n];
}

std::uint32_t SieveTable::largest_prime_factor(std::int64_t n) const {
  check_range(n, "largest_prime_factor");
  std::uint32_t best = 1;
  while (n > 1) {
    best = spf_[n];
    n /= best;
  }
  return best;
}

bool SieveTable::is_prime(std::int64_t n) const {
  check_range(n, "is_prime");
  return n >= 2 && spf_[n] == n;
}

std::vector<PrimeFactor> SieveTable::factorize(std::int64_t n) const {
  check_range(n, "factorize");
  std::vector<PrimeFactor> out;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.push_back({p, e});
  }
  return out;
}

double SieveTable::log_prime(std::uint32_t p) const {
  const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
  if (it == primes_.end() || *it != p) {
    throw std::invalid_argument("log_prime: " + std::to_string(p) + " is not a tabulated prime");
  }
  return prime_logs_[static_cast<std::size_t>(it - primes_.begin())];
}

double SieveTable::von_mangoldt(std::int64_t n) const {
  check_range(n, "von_mangoldt");
  if (n == 1) return 0.0;
  const std::uint32_t p = spf_[n];
  std::int64_t m = n;
  while (m % p == 0) m /= p;
  return m == 1 ? log_prime(p) : 0.0;
}

int SieveTable::mobius(std::int64_t n) const {
  check_range(n, "mobius");
  int mu = 1;
  while (n > 1) {
    const std::uint32_t p = spf_[n];
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  return mu;
}

std::int64_t SieveTable::euler_phi(std::int64_t n) const {
  check_range(n, "euler_phi");
  std::int64_t phi = n;
  for (const auto& f : factorize(n)) phi = phi / f.p * (f.p - 1);
  return phi;
}

bool SieveTable::is_squarefree(std::int64_t n) const {
  check_range(n, "is_squarefree");
  return mobius(n) != 0;
}

bool SieveTable::is_rough(std::int64_t n, std::int64_t y) const {
  check_range(n, "is_rough");
  if (y < 1) throw std::invalid_argument("is_rough: y must be >= 1");
  return n == 1 || static_cast<std::int64_t>(spf_[n]) > y;
}

int SieveTable::omega_z(std::int64_t m, std::int64_t z) const {
  check_range(m, "omega_z");
  if (z < 1) throw std::invalid_argument("omega_z: z must be >= 1");
  int count = 1;
  for (const auto& f : factorize(m)) {
    if (static_cast<std::int64_t>(f.p) <= z) ++count;
  }
  return count;
}

std::vector<SignedDivisor> SieveTable::smooth_squarefree_divisors(std::int64_t y,
                                                                   std::int64_t bound,
                                                                   std::size_t cap) const {
  if (y < 1 || bound < 1) {
    throw std::invalid_argument("smooth_squarefree_divisors: y and bound must be >= 1");
  }
  const std::int64_t pmax = std::min(y, bound);
  if (pmax > limit_) {
    throw std::invalid_argument("smooth_squarefree_divisors: primes up to " +
                                std::to_string(pmax) + " exceed the sieve limit");
  }
  const auto end = std::upper_bound(primes_.begin(), primes_.end(), static_cast<std::uint32_t>(pmax));
  const std::span<const std::uint32_t> ps(primes_.data(), static_cast<std::size_t>(end - primes_.begin()));

  std::vector<SignedDivisor> out{{1, 1}};
  // Depth-first over ascending primes; each stack frame is (d, mu, next index).
  struct Frame {
    std::int64_t d;
    int mu;
    std::size_t next;
  };
  std::vector<Frame> stack{{1, 1, 0}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    for (std::size_t i = f.next; i < ps.size(); ++i) {
      if (f.d > bound / ps[i]) break;
      const std::int64_t d = f.d * ps[i];
      if (out.size() >= cap) {
        throw ResourceError("smooth_squarefree_divisors: more than " + std::to_string(cap) +
                            " divisors for y=" + std::to_string(y) +
                            ", bound=" + std::to_string(bound));
      }
      out.push_back({d, -f.mu});
      stack.push_back({d, -f.mu, i + 1});
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.d < b.d; });
  return out;
}

std::vector<PrimePower> SieveTable::prime_powers(std::int64_t x) const {
  if (x > limit_) throw std::invalid_argument("prime_powers: x exceeds the sieve limit");
  std::vector<PrimePower> out;
  for (std::size_t i = 0; i < primes_.size() && primes_[i] <= x; ++i) {
    const std::uint32_t p = primes_[i];
    for (std::int64_t pk = p; pk <= x; pk *= p) {
      out.push_back({pk, p, prime_logs_[i]});
      if (pk > x / p) break;
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.n < b.n; });
  return out;
}

std::vector<double> SieveTable::von_mangoldt_values(std::int64_t x) const {
  std::vector<double> lam(static_cast<std::size_t>(std::max<std::int64_t>(x, 0)) + 1, 0.0);
  for (const auto& pp : prime_powers(x)) lam[pp.n] = pp.log_p;
  return lam;
}

std::int64_t SieveTable::prime_count(std::int64_t x) const {
  if (x > limit_) throw std::invalid_argument("prime_count: x exceeds the sieve limit");
  return std::upper_bound(primes_.begin(), primes_.end(), static_cast<std::uint64_t>(std::max<std::int64_t>(x, 0)),
                          [](std::uint64_t v, std::uint32_t p) { return v < p; }) -
         primes_.begin();
}

}  // namespace roughsum
