#pragma once

#include <cmath>
#include <complex>

namespace eslab {

enum class Summation { kPlain, kCompensated };

/// Left-to-right accumulator; compensated mode is Neumaier's variant of Kahan.
class RealAccumulator {
 public:
  explicit RealAccumulator(Summation mode = Summation::kPlain) : mode_(mode) {}

  void add(double x) {
    if (mode_ == Summation::kPlain) {
      sum_ += x;
      return;
    }
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + carry_; }

 private:
  Summation mode_;
  double sum_ = 0.0;
  double carry_ = 0.0;
};

class ComplexAccumulator {
 public:
  explicit ComplexAccumulator(Summation mode = Summation::kPlain) : re_(mode), im_(mode) {}

  void add(std::complex<double> z) {
    re_.add(z.real());
    im_.add(z.imag());
  }
  void add(double re, double im) {
    re_.add(re);
    im_.add(im);
  }

  std::complex<double> value() const { return {re_.value(), im_.value()}; }

 private:
  RealAccumulator re_;
  RealAccumulator im_;
};

}  // namespace eslab
