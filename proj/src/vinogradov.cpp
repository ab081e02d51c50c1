#include "eslab/vinogradov.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

#include "eslab/errors.hpp"
#include "eslab/expsums.hpp"
#include "eslab/int128.hpp"
#include "eslab/phase.hpp"
#include "eslab/summation.hpp"

namespace eslab {

namespace {

constexpr double kTupleBudget = 1e9;

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Open addressing on the full key; multiplicities are exact.
class PowerSumHistogram {
 public:
  explicit PowerSumHistogram(int width) : width_(width) { rehash(1024); }

  void add(const std::uint64_t* key, std::uint64_t weight) {
    if (2 * (used_ + 1) > counts_.size()) rehash(counts_.size() * 2);
    insert(key, weight);
  }

  BigInt sum_of_squares() const {
    BigInt total = 0;
    u128 partial = 0;
    for (std::uint64_t c : counts_) {
      const u128 sq = static_cast<u128>(c) * c;
      if (partial > kU128Max - sq) {
        total += BigInt(to_string_u128(partial));
        partial = 0;
      }
      partial += sq;
    }
    total += BigInt(to_string_u128(partial));
    return total;
  }

 private:
  std::size_t slot_of(const std::uint64_t* key) const {
    std::uint64_t h = 0;
    for (int i = 0; i < width_; ++i) h = mix(h ^ key[i]);
    return static_cast<std::size_t>(h) & (counts_.size() - 1);
  }

  void insert(const std::uint64_t* key, std::uint64_t weight) {
    std::size_t s = slot_of(key);
    while (counts_[s] != 0) {
      if (std::equal(key, key + width_, keys_.data() + s * width_)) {
        counts_[s] += weight;
        return;
      }
      s = (s + 1) & (counts_.size() - 1);
    }
    std::copy(key, key + width_, keys_.data() + s * width_);
    counts_[s] = weight;
    ++used_;
  }

  void rehash(std::size_t capacity) {
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<std::uint64_t> old_counts = std::move(counts_);
    keys_.assign(capacity * width_, 0);
    counts_.assign(capacity, 0);
    used_ = 0;
    for (std::size_t s = 0; s < old_counts.size(); ++s)
      if (old_counts[s] != 0) insert(old_keys.data() + s * width_, old_counts[s]);
  }

  int width_;
  std::size_t used_ = 0;
  std::vector<std::uint64_t> keys_;
  std::vector<std::uint64_t> counts_;
};

// Visits nondecreasing t-tuples from [lo, hi] with their ordered multiplicity
// t! / prod(m_i!) and the power sums sum x^j for j = 1..k (or only j = k).
template <class Visit>
void for_each_multiset(int t, std::uint64_t lo, std::uint64_t hi, int k, bool single_power, Visit&& visit) {
  const int width = single_power ? 1 : k;
  std::vector<std::uint64_t> x(static_cast<std::size_t>(t), lo);
  std::uint64_t fact[16] = {1};
  for (int i = 1; i < 16; ++i) fact[i] = fact[i - 1] * i;
  std::array<std::uint64_t, 8> key{};
  while (true) {
    key.fill(0);
    std::uint64_t denom = 1;
    int run = 1;
    for (int i = 0; i < t; ++i) {
      std::uint64_t p = 1;
      for (int j = 1; j <= k; ++j) {
        p *= x[i];
        if (!single_power) key[j - 1] += p;
      }
      if (single_power) key[0] += p;
      if (i > 0 && x[i] == x[i - 1]) {
        ++run;
      } else {
        denom *= fact[run];
        run = 1;
      }
    }
    denom = denom * fact[run] / fact[1];
    visit(key.data(), fact[t] / denom, width);
    int i = t - 1;
    while (i >= 0 && x[i] == hi) --i;
    if (i < 0) break;
    const std::uint64_t v = x[i] + 1;
    for (int j = i; j < t; ++j) x[j] = v;
  }
}

void check_sizes(int t, int k) {
  if (t < 1 || t > 15) throw ConfigError("t must lie in [1, 15]");
  if (k < 1 || k > 8) throw ConfigError("k must lie in [1, 8]");
}

void check_key_range(int t, std::uint64_t top, int k) {
  std::uint64_t p = 0;
  if (!checked_pow_u64(top, k, p) || static_cast<u128>(p) * t > std::numeric_limits<std::uint64_t>::max())
    throw BudgetError("power sums overflow 64 bits");
}

}  // namespace

VinogradovCount count_J(int t, int k, std::uint64_t H) {
  check_sizes(t, k);
  if (H < 1) throw ConfigError("count_J: H must be >= 1");
  if (std::pow(static_cast<double>(H), t) > kTupleBudget) {
    const auto largest = static_cast<std::uint64_t>(std::floor(std::pow(kTupleBudget, 1.0 / t) + 1e-9));
    throw BudgetError("count_J: H^t exceeds 1e9; largest feasible H for t = " + std::to_string(t) + " is " +
                      std::to_string(largest));
  }
  check_key_range(t, H, k);
  PowerSumHistogram hist(k);
  for_each_multiset(t, 1, H, k, false, [&](const std::uint64_t* key, std::uint64_t w, int) { hist.add(key, w); });
  VinogradovCount out;
  out.t = t;
  out.k = k;
  out.H = H;
  out.count = hist.sum_of_squares();
  const double exponent = 2.0 * t - k * (k + 1) / 2.0;
  out.normalized = out.count.convert_to<double>() / std::pow(static_cast<double>(H), exponent);
  return out;
}

BigInt mean_value_F(int t, std::uint64_t X, std::uint64_t H, int k) {
  check_sizes(t, k);
  if (X < H) throw ConfigError("mean_value_F: need X >= H");
  if (std::pow(2.0 * static_cast<double>(H) + 1.0, t) > kTupleBudget)
    throw BudgetError("mean_value_F: (2H+1)^t exceeds 1e9");
  check_key_range(t, X + H, k);
  PowerSumHistogram hist(1);
  for_each_multiset(t, X - H, X + H, k, true, [&](const std::uint64_t* key, std::uint64_t w, int) { hist.add(key, w); });
  return hist.sum_of_squares();
}

double mean_value_quadrature(int t, std::uint64_t X, std::uint64_t H, int k, std::uint64_t M) {
  check_sizes(t, k);
  std::uint64_t top = 0;
  if (!checked_pow_u64(X + H, k, top)) throw BudgetError("mean_value_quadrature: (X+H)^k overflows");
  const u128 need = static_cast<u128>(2 * t) * top + 1;
  if (need > static_cast<u128>(1'000'000'000)) throw BudgetError("mean_value_quadrature: grid above 1e9 points");
  if (M == 0) M = static_cast<std::uint64_t>(need);
  if (M < need) throw ConfigError("mean_value_quadrature: grid must exceed 2t (X+H)^k");
  RealAccumulator acc;
  for (std::uint64_t j = 0; j < M; ++j) {
    const auto F = weyl_sum(static_cast<std::int64_t>(X), static_cast<std::int64_t>(H),
                            Angle::from_fraction(static_cast<std::int64_t>(j), M), k);
    acc.add(std::pow(std::norm(F.value), t));
  }
  return acc.value() / static_cast<double>(M);
}

ScalingFit scaling_exponent(int t, int k, const std::vector<std::uint64_t>& H_list) {
  if (H_list.size() < 2) throw ConfigError("scaling_exponent: need at least two H values");
  ScalingFit fit;
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::uint64_t H : H_list) {
    fit.counts.push_back(count_J(t, k, H));
    xs.push_back(std::log(static_cast<double>(H)));
    ys.push_back(std::log(fit.counts.back().count.convert_to<double>()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0;
  double my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i] / n;
    my += ys[i] / n;
  }
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0) throw ConfigError("scaling_exponent: H values must not all coincide");
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) fit.residuals.push_back(ys[i] - fit.intercept - fit.slope * xs[i]);
  return fit;
}

}  // namespace eslab
