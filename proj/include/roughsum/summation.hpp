#pragma once

#include <cmath>
#include <complex>

namespace roughsum {

// Neumaier's variant of Kahan summation. Results depend only on the order
// in which terms are added.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  CompensatedSum& operator+=(double v) {
    add(v);
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class CompensatedComplexSum {
 public:
  void add(std::complex<double> v) {
    re_.add(v.real());
    im_.add(v.imag());
  }
  CompensatedComplexSum& operator+=(std::complex<double> v) {
    add(v);
    return *this;
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  CompensatedSum re_;
  CompensatedSum im_;
};

template <class T>
struct CompensatedFor;
template <>
struct CompensatedFor<double> {
  using type = CompensatedSum;
};
template <>
struct CompensatedFor<std::complex<double>> {
  using type = CompensatedComplexSum;
};
template <class T>
using CompensatedFor_t = typename CompensatedFor<T>::type;

}  // namespace roughsum
