#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "eslab/int128.hpp"
#include "eslab/window_sieve.hpp"

namespace eslab {

/// A real number mod 1 stored as value / 2^128. Addition and integer
/// multiplication wrap mod 2^128, which is exact mod-1 arithmetic.
class Angle {
 public:
  constexpr Angle() = default;
  constexpr explicit Angle(u128 raw) : raw_(raw) {}

  /// Nearest representable angle to x mod 1.
  static Angle from_double(double x);
  /// Nearest representable angle to a/q mod 1 (q > 0).
  static Angle from_fraction(std::int64_t a, std::uint64_t q);
  /// Accepts decimals ("0.25", "-1e-10"), fractions ("1/3"), and "0x" followed
  /// by up to 32 hex digits. Throws ConfigError on malformed input.
  static Angle parse(std::string_view text);
  /// Exactly 32 hex digits, no prefix.
  static Angle from_hex(std::string_view hex);

  constexpr u128 raw() const { return raw_; }
  std::string to_hex() const;

  /// Value in [0, 1).
  double to_double() const;
  /// Representative in [-1/2, 1/2).
  double to_signed() const;
  /// Distance to the nearest integer, exact in units of 2^-128.
  constexpr u128 distance_raw() const { return raw_ <= (kU128Max - raw_ + 1) ? raw_ : kU128Max - raw_ + 1; }
  /// ||x|| in [0, 1/2].
  double distance() const;

  /// e(x) = exp(2 pi i x), evaluated from the top 53 bits.
  std::complex<double> expi() const;

  constexpr Angle operator+(Angle o) const { return Angle(raw_ + o.raw_); }
  constexpr Angle operator-(Angle o) const { return Angle(raw_ - o.raw_); }
  constexpr Angle operator-() const { return Angle(u128{0} - raw_); }
  constexpr Angle& operator+=(Angle o) {
    raw_ += o.raw_;
    return *this;
  }
  /// Multiplication by an integer given mod 2^128 (two's complement for negatives).
  constexpr Angle times(u128 m) const { return Angle(raw_ * m); }
  constexpr Angle times(std::int64_t m) const { return Angle(raw_ * static_cast<u128>(static_cast<i128>(m))); }

  friend constexpr bool operator==(Angle, Angle) = default;

 private:
  u128 raw_ = 0;
};

/// g(n) = sum_{j=1..k} coeffs[j-1] (n - base)^j mod 1; the constant term is
/// dropped because only the magnitude of sums matters.
class PolynomialPhase {
 public:
  static constexpr int kMaxDegree = 8;

  PolynomialPhase() = default;
  /// Throws ConfigError unless 1 <= coeffs.size() <= 8.
  PolynomialPhase(std::int64_t base, std::vector<Angle> coeffs);

  std::int64_t base() const { return base_; }
  int degree() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<Angle>& coeffs() const { return coeffs_; }
  Angle coeff(int j) const { return coeffs_[j - 1]; }

  /// Horner evaluation in exact wrapping arithmetic.
  Angle evaluate(i128 n) const;

  /// Phase -g.
  PolynomialPhase negated() const;

  friend bool operator==(const PolynomialPhase&, const PolynomialPhase&) = default;

 private:
  std::int64_t base_ = 0;
  std::vector<Angle> coeffs_;
};

/// Rewrites alpha n^k as sum_j C(k,j) N^(k-j) alpha (n - N)^j.
PolynomialPhase monomial_to_shifted(Angle alpha, int k, std::int64_t N);

/// Same polynomial (up to its constant term) expanded around new_base.
PolynomialPhase shift_basis(const PolynomialPhase& phase, std::int64_t new_base);

/// Streams g(first), g(first + step), g(first + 2 step), ... using an order-k
/// forward-difference table. Every update is an exact wrapping addition, so
/// the stream never drifts from direct evaluation.
class PhaseStream {
 public:
  PhaseStream(const PolynomialPhase& phase, i128 first, i128 step = 1);

  Angle current() const { return diffs_[0]; }
  void advance() {
    for (int i = 0; i < degree_; ++i) diffs_[i] += diffs_[i + 1];
  }
  Angle next() {
    const Angle out = diffs_[0];
    advance();
    return out;
  }

 private:
  int degree_ = 0;
  Angle diffs_[PolynomialPhase::kMaxDegree + 1];
};

/// g(n) mod 1 for every n in the window, in increasing n.
std::vector<Angle> phase_stream(const PolynomialPhase& phase, const Window& window);

/// Result of splitting each coefficient into a_j/(q j) plus a small remainder.
class StrippedPhase {
 public:
  const PolynomialPhase& stripped() const { return stripped_; }
  const std::vector<std::int64_t>& numerators() const { return numerators_; }
  std::uint64_t q() const { return q_; }
  /// k! q: the rational part is constant on residue classes of this modulus.
  std::uint64_t modulus() const { return modulus_; }

  /// Angle of sum_j a_j (n - base)^j / (q j) for the class of n.
  Angle offset(i128 n) const;
  /// Entry r is offset(n) for n = r (mod modulus); BudgetError above 10^7 classes.
  std::vector<Angle> offsets() const;

 private:
  friend StrippedPhase rational_part_strip(const PolynomialPhase&, std::uint64_t);
  PolynomialPhase stripped_;
  std::vector<std::int64_t> numerators_;
  std::uint64_t q_ = 1;
  std::uint64_t modulus_ = 1;
};

/// a_j = nearest integer to q j alpha_j (ties to even); the stripped
/// coefficient is alpha_j - a_j/(q j) rounded to the 2^-128 grid. Requires
/// 1 <= q <= 10^6.
StrippedPhase rational_part_strip(const PolynomialPhase& phase, std::uint64_t q);

std::uint64_t binomial(int n, int k);
std::uint64_t factorial(int n);

}  // namespace eslab
