#include "eslab/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

namespace eslab {

namespace {

constexpr std::uint64_t kCoefficientTableLimit = 100'000'000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30U)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27U)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31U);
}

bool needs_factorization(Coefficient c) { return c == Coefficient::kMobius || c == Coefficient::kTauBounded; }

/// Coefficient lookup for 1 <= n <= bound, backed by a sieve of (0, bound].
class CoefficientTable {
 public:
  CoefficientTable(Coefficient c, std::uint64_t bound, std::uint64_t seed) : kind_(c), seed_(seed) {
    if (needs_factorization(c) && bound > 0) {
      if (bound > kCoefficientTableLimit) throw BudgetError("coefficient table beyond 10^8 entries");
      table_ = sieve_window(Window(0, bound));
    }
  }

  double operator()(std::uint64_t n) const {
    if (!table_) return coefficient_value(kind_, n, Factorization{{}, n}, seed_);
    return coefficient_value(kind_, n, table_->factors(n - 1), seed_);
  }

 private:
  Coefficient kind_;
  std::uint64_t seed_;
  std::optional<ArithmeticTable> table_;
};

ExpSumResult finish(std::complex<double> value, std::uint64_t terms, std::uint64_t length) {
  ExpSumResult r;
  r.value = value;
  r.terms = terms;
  r.normalized = length == 0 ? 0.0 : std::abs(value) / static_cast<double>(length);
  return r;
}

std::uint64_t ceil_u64(double x) { return x <= 0 ? 0 : static_cast<std::uint64_t>(std::ceil(x)); }

}  // namespace

ExpSumResult lambda_exp_sum(const ArithmeticTable& table, const PolynomialPhase& phase, Summation mode) {
  return lambda_mobius_sums(table, phase, mode).lambda;
}

ExpSumResult mobius_exp_sum(const ArithmeticTable& table, const PolynomialPhase& phase, Summation mode) {
  return lambda_mobius_sums(table, phase, mode).mobius;
}

LambdaMobiusSums lambda_mobius_sums(const ArithmeticTable& table, const PolynomialPhase& phase,
                                    Summation mode) {
  ComplexAccumulator lam(mode);
  ComplexAccumulator mu(mode);
  const std::size_t n = table.size();
  if (n > 0) {
    const auto lambda = table.lambda_values();
    const auto mobius = table.mu_values();
    PhaseStream stream(phase, table.window().first());
    for (std::size_t i = 0; i < n; ++i) {
      const Angle a = stream.next();
      if (mobius[i] == 0 && lambda[i] == 0.0) continue;
      const std::complex<double> e = a.expi();
      if (lambda[i] != 0.0) lam.add(lambda[i] * e.real(), lambda[i] * e.imag());
      if (mobius[i] > 0) {
        mu.add(e);
      } else if (mobius[i] < 0) {
        mu.add(-e.real(), -e.imag());
      }
    }
  }
  return {finish(lam.value(), n, n), finish(mu.value(), n, n)};
}

ExpSumResult unit_exp_sum(const Window& window, const PolynomialPhase& phase, Summation mode) {
  ComplexAccumulator acc(mode);
  if (!window.empty()) {
    PhaseStream stream(phase, window.first());
    for (std::uint64_t i = 0; i < window.length(); ++i) acc.add(stream.next().expi());
  }
  return finish(acc.value(), window.length(), window.length());
}

ExpSumResult weyl_sum(std::int64_t X, std::int64_t H, Angle alpha, int k, Summation mode) {
  if (H < 0) throw ConfigError("weyl_sum: H must be nonnegative");
  const PolynomialPhase phase = monomial_to_shifted(alpha, k, 0);
  ComplexAccumulator acc(mode);
  const auto count = static_cast<std::uint64_t>(2 * H + 1);
  PhaseStream stream(phase, static_cast<i128>(X) - H);
  for (std::uint64_t i = 0; i < count; ++i) acc.add(stream.next().expi());
  return finish(acc.value(), count, count);
}

double coefficient_value(Coefficient c, std::uint64_t n, const Factorization& f, std::uint64_t seed) {
  switch (c) {
    case Coefficient::kUnit:
      return 1.0;
    case Coefficient::kLog:
      return std::log(static_cast<double>(n));
    case Coefficient::kMobius:
      if (!f.squarefree()) return 0.0;
      return f.omega() % 2 == 0 ? 1.0 : -1.0;
    case Coefficient::kTauBounded: {
      const std::uint64_t h = splitmix64(seed ^ splitmix64(n));
      const double u = static_cast<double>(h >> 11U) * 0x1.0p-53 * 2.0 - 1.0;
      return static_cast<double>(tau_r(f, 5)) * u;
    }
  }
  return 0.0;
}

ExpSumResult type_I_sum(const Window& window, const BilinearSpec& spec, const PolynomialPhase& phase,
                        Summation mode) {
  const std::uint64_t N = window.start();
  const std::uint64_t H = window.length();
  if (spec.M >= N) {
    ExpSumResult r = finish({}, 0, H);
    r.warnings.push_back("M >= N: outer range is empty");
    r.diagnostics.emplace_back("M_over_H", H == 0 ? INFINITY : static_cast<double>(spec.M) / H);
    return r;
  }
  const std::uint64_t m_lo = spec.M + 1;
  const std::uint64_t m_hi = 2 * spec.M;
  const CoefficientTable b(spec.b, m_hi, spec.seed);
  ComplexAccumulator acc(mode);
  std::uint64_t terms = 0;
  for (std::uint64_t m = m_lo; m <= m_hi && H > 0; ++m) {
    const double bm = b(m);
    if (bm == 0.0) continue;
    const std::uint64_t l_lo = N / m + 1;
    const std::uint64_t l_hi = window.last() / m;
    if (l_lo > l_hi) continue;
    PhaseStream stream(phase, static_cast<i128>(l_lo) * m, static_cast<i128>(m));
    for (std::uint64_t l = l_lo; l <= l_hi; ++l) {
      const std::complex<double> e = stream.next().expi();
      const double w = spec.psi == Psi::kLog ? bm * std::log(static_cast<double>(l)) : bm;
      acc.add(w * e.real(), w * e.imag());
      ++terms;
    }
  }
  ExpSumResult r = finish(acc.value(), terms, H);
  r.diagnostics.emplace_back("M_over_H", H == 0 ? INFINITY : static_cast<double>(spec.M) / H);
  if (spec.M > H) r.warnings.push_back("M exceeds H");
  return r;
}

ExpSumResult type_II_sum(const Window& window, const BilinearSpec& spec, const PolynomialPhase& phase,
                         Summation mode) {
  const std::uint64_t N = window.start();
  const std::uint64_t H = window.length();
  const double L = static_cast<double>(N) / static_cast<double>(std::max<std::uint64_t>(spec.M, 1));
  const std::uint64_t m_lo = spec.M + 1;
  const std::uint64_t m_hi = 2 * spec.M;
  const std::uint64_t l_min = std::max<std::uint64_t>(1, ceil_u64(L / 2.0));
  const auto l_max = static_cast<std::uint64_t>(std::floor(2.0 * L));
  ComplexAccumulator acc(mode);
  std::uint64_t terms = 0;
  if (H > 0 && l_min <= l_max) {
    const CoefficientTable a(spec.a, l_max, spec.seed ^ 0xa11ULL);
    const CoefficientTable b(spec.b, m_hi, spec.seed);
    for (std::uint64_t m = m_lo; m <= m_hi; ++m) {
      const double bm = b(m);
      if (bm == 0.0) continue;
      const std::uint64_t l_lo = std::max(N / m + 1, l_min);
      const std::uint64_t l_hi = std::min(window.last() / m, l_max);
      if (l_lo > l_hi) continue;
      PhaseStream stream(phase, static_cast<i128>(l_lo) * m, static_cast<i128>(m));
      for (std::uint64_t l = l_lo; l <= l_hi; ++l) {
        const std::complex<double> e = stream.next().expi();
        const double w = bm * a(l);
        acc.add(w * e.real(), w * e.imag());
        ++terms;
      }
    }
  }
  ExpSumResult r = finish(acc.value(), terms, H);
  const bool applicable = static_cast<double>(H) >= std::max(L, static_cast<double>(spec.M));
  r.diagnostics.emplace_back("L", L);
  r.diagnostics.emplace_back("applicable", applicable ? 1.0 : 0.0);
  return r;
}

}  // namespace eslab
