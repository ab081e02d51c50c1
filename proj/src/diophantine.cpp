#include "eslab/diophantine.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <numeric>

namespace eslab {

namespace mp = boost::multiprecision;

namespace {

constexpr std::uint64_t kExhaustiveLimit = 10'000'000;
const double kFloor = std::ldexp(1.0, -100);

/// Nearest integer to q * alpha (alpha in [0,1)), halves rounded up.
std::int64_t nearest_integer(Angle alpha, std::uint64_t q) {
  const u128 v = alpha.raw();
  const u128 lo = static_cast<u128>(static_cast<std::uint64_t>(v)) * q;
  const u128 hi = static_cast<u128>(static_cast<std::uint64_t>(v >> 64U)) * q;
  const u128 whole = (hi + (lo >> 64U)) >> 64U;
  const u128 frac = alpha.times(static_cast<u128>(q)).raw();
  return static_cast<std::int64_t>(whole) + ((frac >> 127U) != 0 ? 1 : 0);
}

RationalApprox make_approx(Angle alpha, std::int64_t a, std::uint64_t q) {
  RationalApprox r;
  r.a = a;
  r.q = q;
  r.err_raw = alpha.times(static_cast<u128>(q)).distance_raw();
  r.err = std::ldexp(static_cast<double>(r.err_raw), -128);
  r.at_resolution_floor = r.err < kFloor;
  return r;
}

}  // namespace

std::vector<RationalApprox> continued_fraction_convergents(Angle alpha, std::uint64_t q_max) {
  std::vector<RationalApprox> out;
  if (q_max < 1) return out;
  mp::cpp_int num = 0;
  num += static_cast<std::uint64_t>(alpha.raw() >> 64U);
  num <<= 64;
  num += static_cast<std::uint64_t>(alpha.raw());
  mp::cpp_int den = mp::cpp_int(1) << 128;
  mp::cpp_int h_prev = 1, h_prev2 = 0;
  mp::cpp_int k_prev = 0, k_prev2 = 1;
  for (;;) {
    const mp::cpp_int term = num / den;
    const mp::cpp_int h = term * h_prev + h_prev2;
    const mp::cpp_int k = term * k_prev + k_prev2;
    if (k > q_max) break;
    out.push_back(make_approx(alpha, static_cast<std::int64_t>(h), static_cast<std::uint64_t>(k)));
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const mp::cpp_int rem = num - term * den;
    if (rem == 0) break;
    num = den;
    den = rem;
  }
  return out;
}

RationalApprox best_rational(Angle alpha, std::uint64_t q_max) {
  if (q_max < 1) throw ConfigError("best_rational: q_max must be >= 1");
  // Records of min ||q alpha|| occur only at convergent denominators.
  RationalApprox best = make_approx(alpha, nearest_integer(alpha, 1), 1);
  for (const RationalApprox& c : continued_fraction_convergents(alpha, q_max)) {
    const RationalApprox cand = make_approx(alpha, nearest_integer(alpha, c.q), c.q);
    if (cand.err_raw < best.err_raw) best = cand;
  }
  return best;
}

std::optional<QSearchResult> simultaneous_q_search(const PolynomialPhase& coeffs, double H, std::uint64_t q_max) {
  if (q_max < 1) return std::nullopt;
  if (q_max > kExhaustiveLimit) throw BudgetError("simultaneous_q_search: q_max above 10^7");
  const int k = coeffs.degree();
  std::vector<double> scale(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) scale[static_cast<std::size_t>(j - 1)] = std::ldexp(std::pow(H, j), -128);
  std::vector<u128> multiple(static_cast<std::size_t>(k), 0);
  QSearchResult best{1, INFINITY};
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    double quality = 0.0;
    for (int j = 0; j < k; ++j) {
      multiple[j] += coeffs.coeffs()[j].raw();
      const double d = static_cast<double>(Angle(multiple[j]).distance_raw()) * scale[j];
      quality = std::max(quality, d);
    }
    if (quality < best.quality) best = {q, quality};
  }
  return best;
}

std::vector<Angle> typeII_combinations(const PolynomialPhase& coeffs, std::int64_t N) {
  const int k = coeffs.degree();
  std::vector<Angle> out(static_cast<std::size_t>(k));
  for (int j = 1; j <= k; ++j) {
    Angle g = coeffs.coeff(j).times(static_cast<std::int64_t>(j));
    if (j < k) g += coeffs.coeff(j + 1).times(static_cast<u128>(j + 1) * static_cast<u128>(static_cast<i128>(N)));
    out[static_cast<std::size_t>(j - 1)] = g;
  }
  return out;
}

double typeII_quality(const std::vector<Angle>& combined, double N, double H, std::uint64_t q) {
  double quality = 0.0;
  for (std::size_t j = 1; j <= combined.size(); ++j) {
    const double scale = std::pow(H, static_cast<double>(j + 1)) / N;
    quality = std::max(quality, scale * combined[j - 1].times(static_cast<u128>(q)).distance());
  }
  return quality;
}

std::optional<TypeIIStructure> typeII_structure_search(const PolynomialPhase& coeffs, std::int64_t N, double H,
                                                       std::uint64_t q_max) {
  if (q_max < 1) return std::nullopt;
  if (q_max > kExhaustiveLimit) throw BudgetError("typeII_structure_search: q_max above 10^7");
  TypeIIStructure out;
  out.combined = typeII_combinations(coeffs, N);
  const std::size_t k = out.combined.size();
  std::vector<double> scale(k);
  for (std::size_t j = 1; j <= k; ++j) {
    scale[j - 1] = std::ldexp(std::pow(H, static_cast<double>(j + 1)) / static_cast<double>(N), -128);
  }
  std::vector<u128> multiple(k, 0);
  out.quality = INFINITY;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    double quality = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      multiple[j] += out.combined[j].raw();
      quality = std::max(quality, static_cast<double>(Angle(multiple[j]).distance_raw()) * scale[j]);
    }
    if (quality < out.quality) {
      out.quality = quality;
      out.q = q;
    }
  }
  return out;
}

MonomialLift monomial_lift(std::uint64_t q, Angle alpha, int k, std::uint64_t N, std::uint64_t H,
                           double max_quality) {
  if (q < 1) throw ConfigError("monomial_lift: q must be positive");
  if (k < 1 || k > PolynomialPhase::kMaxDegree) throw ConfigError("monomial_lift: k must lie in [1,8]");
  MonomialLift out;
  const double Nd = static_cast<double>(N);
  const double Hd = static_cast<double>(H);
  const PolynomialPhase shifted = monomial_to_shifted(alpha, k, static_cast<std::int64_t>(N));
  for (int j = 1; j <= k; ++j) {
    out.hypothesis.push_back(std::pow(Hd, j) * shifted.coeff(j).times(static_cast<u128>(q)).distance());
    const std::uint64_t factor = q * binomial(k, j);
    out.q_prime = std::lcm(out.q_prime, factor);
  }
  const double base = alpha.times(static_cast<u128>(out.q_prime)).distance();
  for (int j = k; j >= 1; --j) {
    const double scaled = std::pow(Nd, k - j) * base;
    if (j < k && scaled >= 0.5) throw LiftFailure(j, scaled, "N^(k-j) ||q' alpha|| >= 1/2");
    const double bound = scaled * std::pow(Hd, j);
    if (bound > max_quality) throw LiftFailure(j, bound, "bound exceeds the hypothesis scale");
    out.bound_chain.push_back(bound);
  }
  return out;
}

Arc classify_arc(Angle alpha, int k, std::uint64_t X, std::uint64_t H, double Q) {
  if (!(Q >= 1.0)) throw ConfigError("classify_arc: Q must be >= 1");
  Arc arc;
  arc.Q = Q;
  arc.X = X;
  arc.H = H;
  arc.k = k;
  arc.width = Q / (std::pow(static_cast<double>(X), k - 1) * static_cast<double>(H));
  const auto q_limit = static_cast<std::uint64_t>(std::floor(Q));

  auto accept = [&](std::uint64_t q) {
    if (alpha.times(static_cast<u128>(q)).distance() > arc.width) return false;
    std::int64_t a = nearest_integer(alpha, q) % static_cast<std::int64_t>(q);
    if (a <= 0) a += static_cast<std::int64_t>(q);
    arc.kind = Arc::Kind::kMajor;
    arc.a = static_cast<std::uint64_t>(a);
    arc.q = q;
    return true;
  };

  if (2.0 * Q * arc.width < 1.0) {
    // A solution then satisfies |alpha - a/q| < 1/(2 q^2), so it is a convergent.
    for (const RationalApprox& c : continued_fraction_convergents(alpha, q_limit)) {
      if (accept(c.q)) return arc;
    }
    return arc;
  }
  if (q_limit > 100'000'000) throw BudgetError("classify_arc: Q too large for the wide-arc scan");
  for (std::uint64_t q = 1; q <= q_limit; ++q) {
    if (accept(q)) return arc;
  }
  return arc;
}

std::string to_string(Arc::Kind kind) { return kind == Arc::Kind::kMajor ? "major" : "minor"; }

}  // namespace eslab
