#include "eslab/phase.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cctype>
#include <cmath>
#include <numbers>

#include "eslab/errors.hpp"

namespace eslab {

namespace mp = boost::multiprecision;

namespace {

const mp::cpp_int& two_128() {
  static const mp::cpp_int v = mp::cpp_int(1) << 128;
  return v;
}

u128 to_u128(const mp::cpp_int& v) {
  mp::cpp_int r = v % two_128();
  if (r < 0) r += two_128();
  const auto lo = static_cast<std::uint64_t>(r & mp::cpp_int(UINT64_MAX));
  const auto hi = static_cast<std::uint64_t>(r >> 64);
  return (static_cast<u128>(hi) << 64U) | lo;
}

mp::cpp_int from_u128(u128 v) {
  mp::cpp_int r = static_cast<std::uint64_t>(v >> 64U);
  r <<= 64;
  r += static_cast<std::uint64_t>(v);
  return r;
}

/// floor(num / den) for den > 0 and any sign of num.
mp::cpp_int floor_div(const mp::cpp_int& num, const mp::cpp_int& den) {
  mp::cpp_int q = num / den;
  if ((num % den) != 0 && num < 0) --q;
  return q;
}

/// Nearest integer to num / den, ties to even.
mp::cpp_int round_half_even(const mp::cpp_int& num, const mp::cpp_int& den) {
  const mp::cpp_int fl = floor_div(num, den);
  const mp::cpp_int twice_rem = 2 * (num - fl * den);
  if (twice_rem < den) return fl;
  if (twice_rem > den) return fl + 1;
  return (fl % 2 == 0) ? fl : fl + 1;
}

Angle angle_from_rational(const mp::cpp_int& num, const mp::cpp_int& den) {
  return Angle(to_u128(round_half_even(num * two_128(), den)));
}

u128 wrap(i128 v) { return static_cast<u128>(v); }

}  // namespace

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t acc = 1;
  for (int i = 1; i <= k; ++i) acc = acc * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return acc;
}

std::uint64_t factorial(int n) {
  std::uint64_t acc = 1;
  for (int i = 2; i <= n; ++i) acc *= static_cast<std::uint64_t>(i);
  return acc;
}

Angle Angle::from_double(double x) {
  if (!std::isfinite(x)) throw ConfigError("angle must be finite");
  // x - floor(x) is exact for x >= 0 but can round for negative x.
  if (x < 0) return -from_double(-x);
  double frac = x - std::floor(x);
  if (frac >= 1.0) frac = 0.0;
  const double hi_part = std::ldexp(frac, 64);
  const double hi = std::floor(hi_part);
  const double lo = std::nearbyint(std::ldexp(hi_part - hi, 64));
  u128 raw = static_cast<u128>(static_cast<std::uint64_t>(hi)) << 64U;
  if (lo >= 18446744073709551616.0) {
    raw += static_cast<u128>(1) << 64U;
  } else {
    raw += static_cast<std::uint64_t>(lo);
  }
  return Angle(raw);
}

Angle Angle::from_fraction(std::int64_t a, std::uint64_t q) {
  if (q == 0) throw ConfigError("zero denominator");
  return angle_from_rational(mp::cpp_int(a), mp::cpp_int(q));
}

Angle Angle::from_hex(std::string_view hex) {
  if (hex.empty() || hex.size() > 32) throw ConfigError("hex angle needs 1 to 32 digits");
  u128 raw = 0;
  for (char c : hex) {
    int d = 0;
    if (c >= '0' && c <= '9') {
      d = c - '0';
    } else if (c >= 'a' && c <= 'f') {
      d = c - 'a' + 10;
    } else if (c >= 'A' && c <= 'F') {
      d = c - 'A' + 10;
    } else {
      throw ConfigError("bad hex digit in angle: " + std::string(hex));
    }
    raw = (raw << 4U) | static_cast<u128>(d);
  }
  return Angle(raw);
}

Angle Angle::parse(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw ConfigError("empty angle");
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) return from_hex(text.substr(2));

  auto parse_decimal = [&s](std::string_view part) -> std::pair<mp::cpp_int, mp::cpp_int> {
    std::size_t i = 0;
    bool negative = false;
    if (i < part.size() && (part[i] == '+' || part[i] == '-')) negative = part[i++] == '-';
    mp::cpp_int num = 0;
    mp::cpp_int den = 1;
    bool digits = false;
    while (i < part.size() && std::isdigit(static_cast<unsigned char>(part[i]))) {
      num = num * 10 + (part[i++] - '0');
      digits = true;
    }
    if (i < part.size() && part[i] == '.') {
      ++i;
      while (i < part.size() && std::isdigit(static_cast<unsigned char>(part[i]))) {
        num = num * 10 + (part[i++] - '0');
        den *= 10;
        digits = true;
      }
    }
    if (!digits) throw ConfigError("malformed angle: " + s);
    if (i < part.size() && (part[i] == 'e' || part[i] == 'E')) {
      ++i;
      bool neg_exp = false;
      if (i < part.size() && (part[i] == '+' || part[i] == '-')) neg_exp = part[i++] == '-';
      int e = 0;
      bool exp_digits = false;
      while (i < part.size() && std::isdigit(static_cast<unsigned char>(part[i]))) {
        e = e * 10 + (part[i++] - '0');
        exp_digits = true;
        if (e > 4000) throw ConfigError("exponent too large: " + s);
      }
      if (!exp_digits) throw ConfigError("malformed exponent: " + s);
      mp::cpp_int scale = mp::pow(mp::cpp_int(10), e);
      if (neg_exp) {
        den *= scale;
      } else {
        num *= scale;
      }
    }
    if (i != part.size()) throw ConfigError("malformed angle: " + s);
    if (negative) num = -num;
    return {num, den};
  };

  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    auto [a_num, a_den] = parse_decimal(std::string_view(s).substr(0, slash));
    auto [q_num, q_den] = parse_decimal(std::string_view(s).substr(slash + 1));
    if (q_num == 0) throw ConfigError("zero denominator in angle: " + s);
    mp::cpp_int num = a_num * q_den;
    mp::cpp_int den = a_den * q_num;
    if (den < 0) {
      num = -num;
      den = -den;
    }
    return angle_from_rational(num, den);
  }
  auto [num, den] = parse_decimal(s);
  return angle_from_rational(num, den);
}

std::string Angle::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(32, '0');
  u128 v = raw_;
  for (int i = 31; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[static_cast<unsigned>(v & 0xFU)];
    v >>= 4U;
  }
  return out;
}

double Angle::to_double() const {
  const double x = std::ldexp(static_cast<double>(raw_), -128);
  return x >= 1.0 ? 0.0 : x;
}

double Angle::to_signed() const { return std::ldexp(static_cast<double>(static_cast<i128>(raw_)), -128); }

double Angle::distance() const { return std::ldexp(static_cast<double>(distance_raw()), -128); }

std::complex<double> Angle::expi() const {
  const double turns = to_signed();
  double s = 0.0;
  double c = 0.0;
  ::sincos(2.0 * std::numbers::pi * turns, &s, &c);
  return {c, s};
}

PolynomialPhase::PolynomialPhase(std::int64_t base, std::vector<Angle> coeffs)
    : base_(base), coeffs_(std::move(coeffs)) {
  if (coeffs_.empty() || coeffs_.size() > kMaxDegree) {
    throw ConfigError("polynomial degree must lie in [1,8]");
  }
}

Angle PolynomialPhase::evaluate(i128 n) const {
  const u128 x = wrap(n - base_);
  u128 acc = 0;
  for (int j = degree(); j >= 1; --j) acc = (acc + coeffs_[j - 1].raw()) * x;
  return Angle(acc);
}

PolynomialPhase PolynomialPhase::negated() const {
  std::vector<Angle> c;
  c.reserve(coeffs_.size());
  for (Angle a : coeffs_) c.push_back(-a);
  return PolynomialPhase(base_, std::move(c));
}

PolynomialPhase monomial_to_shifted(Angle alpha, int k, std::int64_t N) {
  if (k < 1 || k > PolynomialPhase::kMaxDegree) throw ConfigError("degree k must lie in [1,8]");
  const u128 n = wrap(N);
  std::vector<Angle> coeffs(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    u128 mult = binomial(k, j);
    for (int e = 0; e < k - j; ++e) mult *= n;
    coeffs[static_cast<std::size_t>(j - 1)] = alpha.times(mult);
  }
  return PolynomialPhase(N, std::move(coeffs));
}

PolynomialPhase shift_basis(const PolynomialPhase& phase, std::int64_t new_base) {
  const i128 delta_signed = static_cast<i128>(new_base) - phase.base();
  constexpr i128 kLimit = static_cast<i128>(1) << 62;
  if (delta_signed > kLimit || delta_signed < -kLimit) throw ConfigError("basis shift exceeds 2^62");
  const u128 delta = wrap(delta_signed);
  const int k = phase.degree();
  std::vector<Angle> beta(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    Angle acc;
    u128 power = 1;
    for (int i = j; i <= k; ++i) {
      acc += phase.coeff(i).times(static_cast<u128>(binomial(i, j)) * power);
      power *= delta;
    }
    beta[static_cast<std::size_t>(j - 1)] = acc;
  }
  return PolynomialPhase(new_base, std::move(beta));
}

PhaseStream::PhaseStream(const PolynomialPhase& phase, i128 first, i128 step) : degree_(phase.degree()) {
  for (int i = 0; i <= degree_; ++i) diffs_[i] = phase.evaluate(first + step * i);
  // Convert the k+1 samples in place into the forward-difference table.
  for (int order = 1; order <= degree_; ++order) {
    for (int i = degree_; i >= order; --i) diffs_[i] = diffs_[i] - diffs_[i - 1];
  }
}

std::vector<Angle> phase_stream(const PolynomialPhase& phase, const Window& window) {
  std::vector<Angle> out;
  out.reserve(window.length());
  if (window.empty()) return out;
  PhaseStream stream(phase, window.first());
  for (std::uint64_t i = 0; i < window.length(); ++i) out.push_back(stream.next());
  return out;
}

StrippedPhase rational_part_strip(const PolynomialPhase& phase, std::uint64_t q) {
  if (q == 0) throw DomainError("rational_part_strip: q must be positive");
  if (q > 1000000) throw ConfigError("rational_part_strip: q must not exceed 10^6");
  const int k = phase.degree();
  StrippedPhase out;
  out.q_ = q;
  out.modulus_ = factorial(k) * q;
  std::vector<Angle> stripped(static_cast<std::size_t>(k));
  out.numerators_.resize(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    const mp::cpp_int qj = mp::cpp_int(q) * j;
    const mp::cpp_int a = round_half_even(qj * from_u128(phase.coeff(j).raw()), two_128());
    const auto a64 = static_cast<std::int64_t>(a);
    out.numerators_[static_cast<std::size_t>(j - 1)] = a64;
    stripped[static_cast<std::size_t>(j - 1)] = phase.coeff(j) - angle_from_rational(a, qj);
  }
  out.stripped_ = PolynomialPhase(phase.base(), std::move(stripped));
  return out;
}

Angle StrippedPhase::offset(i128 n) const {
  const int k = stripped_.degree();
  const i128 m = static_cast<i128>(modulus_);
  i128 x = (n - stripped_.base()) % m;
  if (x < 0) x += m;
  // Common denominator k! q; the term a_j x^j / (q j) becomes a_j x^j (k!/j) / (k! q).
  mp::cpp_int num = 0;
  for (int j = 1; j <= k; ++j) {
    const mp::cpp_int qj = mp::cpp_int(q_) * j;
    mp::cpp_int xp = mp::powm(mp::cpp_int(static_cast<std::int64_t>(x)), j, qj);
    num += mp::cpp_int(numerators_[static_cast<std::size_t>(j - 1)]) * xp * (factorial(k) / j);
  }
  return angle_from_rational(num, mp::cpp_int(modulus_));
}

std::vector<Angle> StrippedPhase::offsets() const {
  if (modulus_ > 10000000) throw BudgetError("too many residue classes to tabulate");
  std::vector<Angle> out(modulus_);
  for (std::uint64_t c = 0; c < modulus_; ++c) out[c] = offset(static_cast<i128>(c));
  return out;
}

}  // namespace eslab
