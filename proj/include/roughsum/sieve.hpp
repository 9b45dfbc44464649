#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace roughsum {

struct PrimeFactor {
  std::uint32_t p;
  int exponent;
};

struct PrimePower {
  std::int64_t n;  // p^k
  std::uint32_t p;
  double log_p;
};

struct SignedDivisor {
  std::int64_t d;
  int mu;
};

// Default cap on the number of squarefree smooth divisors enumerated.
inline constexpr std::size_t kDefaultDivisorCap = 10'000'000;

// Largest accepted sieve limit. Entries are stored as 32 bits, so memory
// is about 4 bytes per integer: 10^8 needs ~400 MB.
inline constexpr std::int64_t kMaxSieveLimit = 4'000'000'000;

// Immutable smallest-prime-factor table for 1 <= n <= limit.
//
// The convention p(1) = +infinity is used throughout: 1 is y-rough for every y.
// log p is evaluated once per prime at construction, so Lambda(p^k) is
// bit-identical to Lambda(p) in every query.
class SieveTable {
 public:
  explicit SieveTable(std::int64_t limit);

  std::int64_t limit() const { return limit_; }
  std::span<const std::uint32_t> primes() const { return primes_; }

  // Smallest prime factor; requires 2 <= n <= limit.
  std::uint32_t spf(std::int64_t n) const;
  std::uint32_t largest_prime_factor(std::int64_t n) const;  // 1 for n = 1
  bool is_prime(std::int64_t n) const;
  std::vector<PrimeFactor> factorize(std::int64_t n) const;

  // log p for a prime p <= limit.
  double log_prime(std::uint32_t p) const;

  double von_mangoldt(std::int64_t n) const;
  int mobius(std::int64_t n) const;
  std::int64_t euler_phi(std::int64_t n) const;
  bool is_squarefree(std::int64_t n) const;
  // 1_y(n): no prime <= y divides n.
  bool is_rough(std::int64_t n, std::int64_t y) const;
  // 1 + #{p <= z : p | m}.
  int omega_z(std::int64_t m, std::int64_t z) const;

  // Squarefree d <= bound with all prime factors <= y, ascending, with mu(d).
  // Throws ResourceError if more than `cap` divisors would be produced.
  std::vector<SignedDivisor> smooth_squarefree_divisors(
      std::int64_t y, std::int64_t bound, std::size_t cap = kDefaultDivisorCap) const;

  // All prime powers p^k <= x in ascending order.
  std::vector<PrimePower> prime_powers(std::int64_t x) const;
  // Lambda(n) for 0 <= n <= x (index 0 holds 0).
  std::vector<double> von_mangoldt_values(std::int64_t x) const;
  std::int64_t prime_count(std::int64_t x) const;

 private:
  friend struct SieveTableTamper;  // test access only

  void check_range(std::int64_t n, const char* what) const;

  std::int64_t limit_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
  std::vector<double> prime_logs_;
};

inline SieveTable build_sieve(std::int64_t limit) { return SieveTable(limit); }

// Smallest nonnegative integer r with r*r <= n < (r+1)^2.
std::int64_t isqrt(std::int64_t n);

}  // namespace roughsum
