#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

namespace eslab {

using BigInt = boost::multiprecision::cpp_int;

struct VinogradovCount {
  int t = 1;
  int k = 1;
  std::uint64_t H = 1;
  /// Ordered solutions of sum x_i^j = sum y_i^j (1 <= j <= k), 1 <= x_i, y_i <= H.
  BigInt count;
  /// count / H^(2t - k(k+1)/2).
  double normalized = 0.0;
};

/// Exact count by hashing the power-sum vectors of all t-tuples and summing
/// squared multiplicities. Throws BudgetError when H^t > 1e9.
VinogradovCount count_J(int t, int k, std::uint64_t H);

/// Integral over [0,1) of |F(alpha)|^(2t), F(alpha) = sum_{|x - X| <= H} e(alpha x^k),
/// as the number of solutions of sum x_i^k = sum y_i^k in that range.
BigInt mean_value_F(int t, std::uint64_t X, std::uint64_t H, int k);

/// (1/M) sum_{j<M} |F(j/M)|^(2t) with M > 2t (X+H)^k; M = 0 picks the smallest.
double mean_value_quadrature(int t, std::uint64_t X, std::uint64_t H, int k, std::uint64_t M = 0);

struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<VinogradovCount> counts;
  /// log J - (intercept + slope log H) per point.
  std::vector<double> residuals;
};

/// Ordinary least squares of log J_{t,k}(H) against log H.
ScalingFit scaling_exponent(int t, int k, const std::vector<std::uint64_t>& H_list);

}  // namespace eslab
