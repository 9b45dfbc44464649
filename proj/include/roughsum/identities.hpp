#pragma once

#include <cstdint>

#include "roughsum/parallel.hpp"
#include "roughsum/sieve.hpp"

namespace roughsum {

struct IdentityScanReport {
  std::int64_t n_max = 0;
  double max_abs_residual = 0.0;
  std::int64_t argmax_n = 1;
  std::int64_t count_checked = 0;
};

// Lambda(n) - (log n - sum_{lm = n, l,m > 1} Lambda(l)). Only prime-power l
// contribute, so the divisor pairs are read off the factorization.
double trivial_identity_residual(const SieveTable& table, std::int64_t n);

// Max |residual| over 1 <= n <= n_max; ties go to the smallest n.
IdentityScanReport scan_trivial_identity(const SieveTable& table, std::int64_t n_max,
                                         Parallelism par = {});

// Ramare's identity for squarefree sqrt(x) < n <= x:
//   1_P(n) = 1 - sum_{pm = n, p <= sqrt(x)} 1 / omega_{sqrt(x)}(m).
// The right side is summed in exact rational arithmetic (ascending p), so the
// returned residual LHS - RHS is exactly 0 when the identity holds.
// Throws PreconditionError if n is not squarefree or not in (sqrt(x), x].
double ramare_residual(const SieveTable& table, std::int64_t n, std::int64_t x);

// Ramare residual over every squarefree n in (sqrt(x), x].
IdentityScanReport scan_ramare(const SieveTable& table, std::int64_t x);

}  // namespace roughsum
