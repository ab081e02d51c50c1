#pragma once

#include <complex>
#include <span>
#include <vector>

namespace eslab {

/// Linear s-fold self-convolution a * a * ... * a (length s (n - 1) + 1),
/// computed with one forward transform, a pointwise power and one inverse.
std::vector<double> convolution_power(std::span<const double> a, int s);

/// X[f] = sum_r x[r] e(f r / n) for f = 0..n-1, any length n.
std::vector<std::complex<double>> dft_positive(std::span<const double> x);

}  // namespace eslab
