#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>

namespace roughsum {

// Sums with at most this many terms are checked to an absolute tolerance.
inline constexpr std::int64_t kAbsoluteToleranceTerms = 1'000'000;
inline constexpr double kAbsoluteTolerance = 1e-9;
inline constexpr double kRelativeTolerance = 1e-8;

inline double sum_tolerance(std::int64_t terms, double magnitude) {
  return terms <= kAbsoluteToleranceTerms ? kAbsoluteTolerance
                                          : kRelativeTolerance * std::max(1.0, magnitude);
}

// Allowed |true_sum - (log_term - bilinear_term)|.
inline double decomposition_tolerance(std::complex<double> log_term) {
  return kRelativeTolerance * (1.0 + std::abs(log_term));
}

}  // namespace roughsum
