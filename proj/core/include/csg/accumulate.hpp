#pragma once

#include <cmath>
#include <complex>

namespace csg {

/// Neumaier-compensated summation. Level sums accumulate thousands of
/// complex magnitudes with wide dynamic range; compensation keeps the
/// deterministic ascending-index order accurate.
class CompensatedSum {
public:
  void add(double x) {
    if (!std::isfinite(x) || !std::isfinite(sum_)) {
      // overflowed sums stay inf instead of collapsing to NaN
      sum_ += x;
      comp_ = 0.0;
      return;
    }
    double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

class ComplexCompensatedSum {
public:
  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  std::complex<double> value() const { return {re_.value(), im_.value()}; }

private:
  CompensatedSum re_, im_;
};

} // namespace csg
