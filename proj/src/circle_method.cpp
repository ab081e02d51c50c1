#include "eslab/circle_method.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eslab/convolution.hpp"
#include "eslab/errors.hpp"
#include "eslab/int128.hpp"
#include "eslab/summation.hpp"

namespace eslab {

namespace {

constexpr std::uint64_t kConvolutionBudget = 1'000'000'000;
constexpr std::uint64_t kFftLengthLimit = std::uint64_t{1} << 27;

std::uint64_t pow_or_throw(std::uint64_t base, int k, const char* what) {
  std::uint64_t out = 0;
  if (!checked_pow_u64(base, k, out)) throw BudgetError(std::string(what) + ": power overflows 64 bits");
  return out;
}

std::uint64_t euler_phi_prime_power(std::uint64_t p, int j) {
  std::uint64_t pj = 1;
  for (int i = 0; i < j - 1; ++i) pj *= p;
  return pj * (p - 1);
}

void validate(const WaringInstance& w) {
  if (w.k < 1 || w.k > PolynomialPhase::kMaxDegree) throw ConfigError("waring: k must lie in [1, 8]");
  if (w.s < 1) throw ConfigError("waring: s must be >= 1");
  if (w.X <= w.H) throw ConfigError("waring: need X - H >= 1");
  if (w.X + w.H >= Window::kMaxStart) throw ConfigError("waring: X + H too large");
}

void set_feasibility(WaringInstance& w) {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  if (!checked_pow_u64(w.X - w.H, w.k, lo)) {
    w.feasible = false;
    return;
  }
  const bool hi_ok = checked_pow_u64(w.X + w.H, w.k, hi);
  const u128 slo = static_cast<u128>(w.s) * lo;
  const u128 shi = hi_ok ? static_cast<u128>(w.s) * hi : kU128Max;
  w.feasible = slo <= w.N && w.N <= shi;
}

// k-th power residue counts of the units modulo L = p^j.
std::vector<std::uint64_t> unit_power_histogram(std::uint64_t p, std::uint64_t L, int k) {
  std::vector<std::uint64_t> cnt(L, 0);
  for (std::uint64_t b = 1; b < L; ++b) {
    if (b % p == 0) continue;
    ++cnt[powmod_u64(b, static_cast<std::uint64_t>(k), L)];
  }
  return cnt;
}

std::complex<double> cpow(std::complex<double> z, int s) {
  std::complex<double> out(1.0, 0.0);
  for (int i = 0; i < s; ++i) out *= z;
  return out;
}

// Term of the series at L = p^j through a DFT of the residue histogram.
std::complex<double> prime_power_term(std::uint64_t p, std::uint64_t L, int j, const WaringInstance& inst) {
  const auto cnt = unit_power_histogram(p, L, inst.k);
  std::vector<double> hist(cnt.begin(), cnt.end());
  const auto S = dft_positive(hist);
  const double phi = static_cast<double>(euler_phi_prime_power(p, j));
  const std::uint64_t n_mod = inst.N % L;
  ComplexAccumulator acc;
  for (std::uint64_t a = 1; a < L; ++a) {
    if (a % p == 0) continue;
    const std::complex<double> g = S[a] / phi;
    const std::uint64_t r = mulmod_u64(a, n_mod, L);
    acc.add(cpow(g, inst.s) * Angle::from_fraction(-static_cast<std::int64_t>(r), L).expi());
  }
  return acc.value();
}

struct PrimePowerTerms {
  // term[L] for prime powers L <= q_max; smallest prime factor table.
  std::vector<std::complex<double>> term;
  std::vector<std::uint32_t> spf;
};

PrimePowerTerms prime_power_terms(const WaringInstance& inst, std::uint64_t q_max) {
  PrimePowerTerms out;
  out.term.assign(q_max + 1, {0.0, 0.0});
  out.spf.assign(q_max + 1, 0);
  for (std::uint64_t i = 2; i <= q_max; ++i) {
    if (out.spf[i] != 0) continue;
    for (std::uint64_t m = i; m <= q_max; m += i)
      if (out.spf[m] == 0) out.spf[m] = static_cast<std::uint32_t>(i);
    int j = 1;
    for (std::uint64_t L = i; L <= q_max; L *= i, ++j) {
      out.term[L] = prime_power_term(i, L, j, inst);
      if (L > q_max / i) break;
    }
  }
  return out;
}

std::complex<double> multiplicative_term(std::uint64_t q, const PrimePowerTerms& t) {
  std::complex<double> out(1.0, 0.0);
  while (q > 1) {
    const std::uint64_t p = t.spf[q];
    std::uint64_t L = 1;
    while (q % p == 0) {
      q /= p;
      L *= p;
    }
    out *= t.term[L];
  }
  return out;
}

double weight(std::uint64_t m, int k) {
  return std::pow(static_cast<double>(m), -1.0 + 1.0 / k) / k;
}

void check_convolution_budget(const WaringInstance& inst, std::uint64_t& lo, std::uint64_t& hi) {
  lo = pow_or_throw(inst.lo(), inst.k, "convolution");
  hi = pow_or_throw(inst.hi(), inst.k, "convolution");
  const u128 total = static_cast<u128>(inst.s) * hi;
  if (total > kConvolutionBudget)
    throw BudgetError("s (X+H)^k = " + to_string_u128(total) + " exceeds the convolution budget 1e9; use a smaller instance");
  if (static_cast<u128>(inst.s) * (hi - lo + 1) > kFftLengthLimit)
    throw BudgetError("convolution length exceeds 2^27; use a smaller instance");
}

// Iterates nondecreasing index tuples of a given size over [0, n).
class MultisetIterator {
 public:
  MultisetIterator(std::size_t n, int size) : n_(n), idx_(static_cast<std::size_t>(size), 0), done_(n == 0 && size > 0) {}
  bool done() const { return done_; }
  const std::vector<std::uint32_t>& indices() const { return idx_; }
  void next() {
    int i = static_cast<int>(idx_.size()) - 1;
    while (i >= 0 && idx_[i] + 1 == n_) --i;
    if (i < 0) {
      done_ = true;
      return;
    }
    const std::uint32_t v = idx_[i] + 1;
    for (std::size_t t = static_cast<std::size_t>(i); t < idx_.size(); ++t) idx_[t] = v;
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> idx_;
  bool done_;
};

double multiset_count(std::size_t n, int size) {
  double c = 1.0;
  for (int i = 0; i < size; ++i) c = c * static_cast<double>(n + i) / (i + 1);
  return c;
}

}  // namespace

WaringInstance WaringInstance::from_theta(int k, int s, std::uint64_t N, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("waring: theta must lie in (0, 1]");
  if (k < 1 || s < 1) throw ConfigError("waring: k and s must be positive");
  WaringInstance w;
  w.k = k;
  w.s = s;
  w.N = N;
  w.theta = theta;
  w.X = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(N) / s, 1.0 / k)));
  w.H = static_cast<std::uint64_t>(std::llround(std::pow(static_cast<double>(w.X), theta)));
  validate(w);
  set_feasibility(w);
  return w;
}

WaringInstance WaringInstance::explicit_range(int k, int s, std::uint64_t N, std::uint64_t X, std::uint64_t H) {
  WaringInstance w;
  w.k = k;
  w.s = s;
  w.N = N;
  w.X = X;
  w.H = H;
  w.theta = (X > 1 && H > 0) ? std::log(static_cast<double>(H)) / std::log(static_cast<double>(X)) : 0.0;
  validate(w);
  set_feasibility(w);
  return w;
}

std::uint64_t WaringInstance::power_lo() const { return pow_or_throw(lo(), k, "power_lo"); }
std::uint64_t WaringInstance::power_hi() const { return pow_or_throw(hi(), k, "power_hi"); }

int gamma_kp(int k, std::uint64_t p) {
  if (!is_prime_u64(p)) throw DomainError("gamma_kp: " + std::to_string(p) + " is not prime");
  if (k < 1) throw ConfigError("gamma_kp: k must be positive");
  int tau = 0;
  int kk = k;
  while (kk % static_cast<std::int64_t>(p) == 0) {
    kk /= static_cast<int>(p);
    ++tau;
  }
  return (p == 2 && tau > 0) ? tau + 2 : tau + 1;
}

std::uint64_t R_of_k(int k) {
  if (k < 1) throw ConfigError("R_of_k: k must be positive");
  std::uint64_t r = 1;
  for (std::uint64_t p = 2; p <= static_cast<std::uint64_t>(k) + 1; ++p) {
    if (!is_prime_u64(p) || k % static_cast<int>(p - 1) != 0) continue;
    for (int g = gamma_kp(k, p); g > 0; --g) r *= p;
  }
  return r;
}

std::complex<double> gauss_sum(std::uint64_t q, std::int64_t a, int k) {
  if (q == 0) throw DomainError("gauss_sum: q must be positive");
  const std::int64_t qi = static_cast<std::int64_t>(q);
  const std::uint64_t am = static_cast<std::uint64_t>(((a % qi) + qi) % qi);
  if (gcd_u64(am, q) != 1) throw DomainError("gauss_sum: gcd(a, q) != 1");
  ComplexAccumulator acc;
  for (std::uint64_t b = 0; b < q; ++b) {
    if (gcd_u64(b, q) != 1) continue;
    const std::uint64_t r = mulmod_u64(am, powmod_u64(b, static_cast<std::uint64_t>(k), q), q);
    acc.add(Angle::from_fraction(static_cast<std::int64_t>(r), q).expi());
  }
  return acc.value();
}

LocalData local_data(std::uint64_t q, const WaringInstance& inst) {
  if (q == 0) throw DomainError("local_data: q must be positive");
  LocalData out;
  out.q = q;
  std::uint64_t phi = 0;
  for (std::uint64_t a = 1; a <= q; ++a) {
    if (gcd_u64(a % q, q) != 1) continue;
    out.gauss.emplace_back(a, gauss_sum(q, static_cast<std::int64_t>(a), inst.k));
    ++phi;
  }
  ComplexAccumulator acc;
  for (const auto& [a, g] : out.gauss) {
    const std::uint64_t r = mulmod_u64(a % q, inst.N % q, q);
    acc.add(cpow(g / static_cast<double>(phi), inst.s) * Angle::from_fraction(-static_cast<std::int64_t>(r), q).expi());
  }
  out.series_term = acc.value();
  return out;
}

std::complex<double> series_term(std::uint64_t q, const WaringInstance& inst) {
  if (q == 0) throw DomainError("series_term: q must be positive");
  std::complex<double> out(1.0, 0.0);
  std::uint64_t rest = q;
  for (std::uint64_t p = 2; p * p <= rest; ++p) {
    if (rest % p != 0) continue;
    std::uint64_t L = 1;
    int j = 0;
    while (rest % p == 0) {
      rest /= p;
      L *= p;
      ++j;
    }
    out *= prime_power_term(p, L, j, inst);
  }
  if (rest > 1) out *= prime_power_term(rest, rest, 1, inst);
  return out;
}

SeriesResult singular_series(const WaringInstance& inst, std::uint64_t q_max) {
  if (q_max < 1) throw ConfigError("singular_series: q_max must be >= 1");
  if (q_max > 100'000) throw BudgetError("singular_series: q_max above 1e5");
  const auto terms = prime_power_terms(inst, q_max);
  ComplexAccumulator total;
  ComplexAccumulator tail;
  for (std::uint64_t q = 1; q <= q_max; ++q) {
    const std::complex<double> t = multiplicative_term(q, terms);
    total.add(t);
    if (q > q_max / 10) tail.add(t);
  }
  SeriesResult out;
  out.q_max = q_max;
  out.value = total.value().real();
  out.imag = std::abs(total.value().imag());
  out.tail = q_max >= 10 ? std::abs(tail.value()) : 0.0;
  if (out.value < 0.1) out.warnings.push_back("truncated singular series below 0.1");
  return out;
}

double local_density(std::uint64_t p, int j, const WaringInstance& inst) {
  if (!is_prime_u64(p)) throw DomainError("local_density: " + std::to_string(p) + " is not prime");
  if (j < 1) throw ConfigError("local_density: j must be positive");
  std::uint64_t L = 1;
  for (int i = 0; i < j; ++i) {
    if (L > 10'000'000 / p) throw BudgetError("local_density: p^j above 1e7");
    L *= p;
  }
  const auto cnt = unit_power_histogram(p, L, inst.k);
  const std::uint64_t phi = euler_phi_prime_power(p, j);
  const std::uint64_t target = inst.N % L;
  std::vector<std::uint64_t> support;
  for (std::uint64_t r = 0; r < L; ++r)
    if (cnt[r] != 0) support.push_back(r);

  const double work = static_cast<double>(L) * static_cast<double>(support.size()) * (inst.s - 1);
  if (inst.s <= 8 && work <= 4e8) {
    // Exact integer counts; phi^s < 2^128 for these sizes.
    std::vector<u128> cur(cnt.begin(), cnt.end());
    std::vector<u128> nxt(L);
    for (int step = 1; step < inst.s; ++step) {
      std::fill(nxt.begin(), nxt.end(), u128{0});
      for (std::uint64_t r = 0; r < L; ++r) {
        if (cur[r] == 0) continue;
        for (std::uint64_t u : support) {
          std::uint64_t t = r + u;
          if (t >= L) t -= L;
          nxt[t] += cur[r] * cnt[u];
        }
      }
      cur.swap(nxt);
    }
    long double num = static_cast<long double>(cur[target]) * static_cast<long double>(L);
    long double den = 1.0L;
    for (int i = 0; i < inst.s; ++i) den *= static_cast<long double>(phi);
    return static_cast<double>(num / den);
  }
  // Cyclic convolution through the DFT of the normalized histogram.
  std::vector<double> h(L);
  for (std::uint64_t r = 0; r < L; ++r) h[r] = static_cast<double>(cnt[r]) / static_cast<double>(phi);
  const auto hat = dft_positive(h);
  ComplexAccumulator acc;
  for (std::uint64_t f = 0; f < L; ++f) {
    const std::uint64_t r = mulmod_u64(f, target, L);
    acc.add(cpow(hat[f], inst.s) * Angle::from_fraction(-static_cast<std::int64_t>(r), L).expi());
  }
  return acc.value().real();
}

VBetaResult v_beta(double beta, const WaringInstance& inst, const VBetaOptions& options) {
  if (!(std::abs(beta) <= 1.0)) throw ConfigError("v_beta: |beta| must be <= 1");
  const std::uint64_t lo = inst.power_lo();
  const std::uint64_t hi = inst.power_hi();
  const std::uint64_t count = hi - lo + 1;
  const Angle b = Angle::from_double(beta);
  VBetaResult out;
  out.terms = count;
  if (count <= options.max_terms) {
    PhaseStream stream(PolynomialPhase(0, {b}), static_cast<i128>(lo));
    ComplexAccumulator acc;
    for (std::uint64_t m = lo; m <= hi; ++m) acc.add(weight(m, inst.k) * stream.next().expi());
    out.value = acc.value();
    return out;
  }
  if (!options.allow_fast_path)
    throw BudgetError("v_beta: " + std::to_string(count) + " terms exceed the budget; enable the fast path");

  // Constant weight per block, geometric sum for the phases.
  const std::uint64_t B = std::max<std::uint64_t>(options.block, 1);
  const std::complex<double> eb = b.expi();
  const bool trivial = b.raw() == 0;
  ComplexAccumulator acc;
  double err = 0.0;
  for (std::uint64_t m0 = lo; m0 <= hi; m0 += B) {
    const std::uint64_t len = std::min(B, hi - m0 + 1);
    const double mid = static_cast<double>(m0) + 0.5 * static_cast<double>(len - 1);
    const double w = std::pow(mid, -1.0 + 1.0 / inst.k) / inst.k;
    std::complex<double> geo;
    if (trivial) {
      geo = static_cast<double>(len);
    } else {
      const std::complex<double> eL = b.times(static_cast<u128>(len)).expi();
      geo = (1.0 - eL) / (1.0 - eb);
    }
    acc.add(w * b.times(static_cast<u128>(m0)).expi() * geo);
    const double deriv = (1.0 - 1.0 / inst.k) / inst.k * std::pow(static_cast<double>(m0), -2.0 + 1.0 / inst.k);
    err += deriv * static_cast<double>(len) * static_cast<double>(len) / 2.0;
  }
  out.value = acc.value();
  out.approximated = true;
  out.error_bound = err;
  return out;
}

SingularIntegral singular_integral(const WaringInstance& inst) {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  check_convolution_budget(inst, lo, hi);
  SingularIntegral out;
  out.scale = std::pow(static_cast<double>(inst.H), inst.s - 1) / std::pow(static_cast<double>(inst.X), inst.k - 1);
  const u128 slo = static_cast<u128>(inst.s) * lo;
  const u128 shi = static_cast<u128>(inst.s) * hi;
  if (inst.N < slo || inst.N > shi) return out;
  std::vector<double> a(hi - lo + 1);
  for (std::uint64_t m = lo; m <= hi; ++m) a[m - lo] = weight(m, inst.k);
  const auto conv = convolution_power(a, inst.s);
  out.value = conv[static_cast<std::size_t>(inst.N - slo)];
  if (out.scale > 0) out.ratio = out.value / out.scale;
  return out;
}

RhoResult rho_exact(const WaringInstance& inst) {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  check_convolution_budget(inst, lo, hi);
  RhoResult out;
  const u128 slo = static_cast<u128>(inst.s) * lo;
  const u128 shi = static_cast<u128>(inst.s) * hi;
  if (inst.N < slo || inst.N > shi) return out;
  const ArithmeticTable table = sieve_window(inst.window(), 1);
  std::vector<double> weighted(hi - lo + 1, 0.0);
  std::vector<double> primes(hi - lo + 1, 0.0);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const std::uint64_t n = table.n_at(i);
    const std::uint64_t m = pow_or_throw(n, inst.k, "rho_exact") - lo;
    weighted[m] = table.lambda(i);
    if (table.lambda(i) > 0 && table.factors(i).omega() == 1 &&
        (table.factors(i).small.empty() ? true : table.factors(i).small[0].exponent == 1))
      primes[m] = 1.0;
  }
  const std::size_t idx = static_cast<std::size_t>(inst.N - slo);
  out.rho = convolution_power(weighted, inst.s)[idx];
  out.prime_count = static_cast<std::uint64_t>(std::llround(std::max(0.0, convolution_power(primes, inst.s)[idx])));
  return out;
}

double rho_fourier(const WaringInstance& inst, std::uint64_t M) {
  const std::uint64_t hi = inst.power_hi();
  const u128 need = static_cast<u128>(inst.s) * hi + 1;
  if (need > kConvolutionBudget) throw BudgetError("rho_fourier: grid above 1e9 points");
  if (M == 0) M = static_cast<std::uint64_t>(need);
  if (M < need) throw ConfigError("rho_fourier: grid must exceed s (X+H)^k");
  const ArithmeticTable table = sieve_window(inst.window(), 1);
  const std::uint64_t n_mod = inst.N % M;
  ComplexAccumulator acc;
  for (std::uint64_t j = 0; j < M; ++j) {
    const std::complex<double> f = f_alpha(table, inst, Angle::from_fraction(static_cast<std::int64_t>(j), M)).value;
    const std::uint64_t r = mulmod_u64(n_mod, j, M);
    acc.add(cpow(f, inst.s) * Angle::from_fraction(-static_cast<std::int64_t>(r), M).expi());
  }
  return acc.value().real() / static_cast<double>(M);
}

RepresentationSearch find_representations(const WaringInstance& inst, std::size_t limit, std::uint64_t max_entries) {
  RepresentationSearch out;
  out.R = R_of_k(inst.k);
  out.N_mod_R = inst.N % out.R;
  out.s_mod_R = static_cast<std::uint64_t>(inst.s) % out.R;

  const std::uint64_t top = inst.power_hi();
  if (static_cast<u128>(top) * static_cast<u128>(inst.s) > std::numeric_limits<std::uint64_t>::max())
    throw BudgetError("find_representations: s (X+H)^k overflows 64 bits");

  const auto primes = sieve_window(inst.window(), 1).primes();
  std::vector<std::uint64_t> pw(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) pw[i] = pow_or_throw(primes[i], inst.k, "find_representations");

  const int s1 = (inst.s + 1) / 2;
  const int s2 = inst.s - s1;
  if (multiset_count(primes.size(), s2) > static_cast<double>(max_entries) ||
      multiset_count(primes.size(), s1) > 1e12) {
    int feasible = s2;
    while (feasible > 0 && multiset_count(primes.size(), feasible) > static_cast<double>(max_entries)) --feasible;
    std::ostringstream msg;
    msg << "find_representations: " << primes.size() << " primes give too many half tuples for split " << s1 << "+"
        << s2 << "; smallest feasible split is " << (inst.s - feasible) << "+" << feasible;
    throw BudgetError(msg.str());
  }

  // Second half: (sum, tuple id) sorted by sum, ties kept in lexicographic order.
  std::vector<std::uint32_t> half;
  std::vector<std::pair<std::uint64_t, std::uint32_t>> index;
  for (MultisetIterator it(primes.size(), s2); !it.done(); it.next()) {
    std::uint64_t sum = 0;
    for (auto i : it.indices()) sum += pw[i];
    if (sum > inst.N) continue;
    index.emplace_back(sum, static_cast<std::uint32_t>(index.size()));
    half.insert(half.end(), it.indices().begin(), it.indices().end());
  }
  std::stable_sort(index.begin(), index.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  for (MultisetIterator it(primes.size(), s1); !it.done() && out.reps.size() < limit; it.next()) {
    std::uint64_t sum = 0;
    for (auto i : it.indices()) sum += pw[i];
    if (sum > inst.N) continue;
    const std::uint64_t need = inst.N - sum;
    auto range = std::equal_range(index.begin(), index.end(), std::make_pair(need, std::uint32_t{0}),
                                  [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto e = range.first; e != range.second && out.reps.size() < limit; ++e) {
      const std::uint32_t* tail = half.data() + static_cast<std::size_t>(e->second) * s2;
      if (s2 > 0 && tail[0] < it.indices().back()) continue;
      std::vector<std::uint64_t> rep;
      u128 check = 0;
      for (auto i : it.indices()) rep.push_back(primes[i]);
      for (int t = 0; t < s2; ++t) rep.push_back(primes[tail[t]]);
      for (auto p : rep) {
        u128 v = 1;
        for (int t = 0; t < inst.k; ++t) v *= p;
        check += v;
        if (p < inst.lo() || p > inst.hi()) throw Error("find_representations: prime outside range");
      }
      if (check != inst.N) throw Error("find_representations: verification failed");
      out.reps.push_back(std::move(rep));
    }
  }
  if (out.reps.empty()) {
    std::ostringstream msg;
    msg << "no representation found; N mod R(k) = " << out.N_mod_R << ", s mod R(k) = " << out.s_mod_R
        << " with R(k) = " << out.R;
    if (out.N_mod_R != out.s_mod_R) msg << "; the congruence N = s (mod R(k)) fails";
    if (!inst.feasible) msg << "; N lies outside [s (X-H)^k, s (X+H)^k]";
    out.diagnosis = msg.str();
  }
  return out;
}

ExpSumResult f_alpha(const ArithmeticTable& table, const WaringInstance& inst, Angle alpha) {
  if (!(table.window() == inst.window())) throw ConfigError("f_alpha: table window does not match the instance");
  return lambda_exp_sum(table, monomial_to_shifted(alpha, inst.k, 0));
}

ExpSumResult f_alpha(const WaringInstance& inst, Angle alpha) {
  return f_alpha(sieve_window(inst.window(), 1), inst, alpha);
}

MainTerm major_arc_main_term(const WaringInstance& inst, std::uint64_t q_max) {
  MainTerm out;
  out.series = singular_series(inst, q_max);
  out.integral = singular_integral(inst);
  out.value = out.series.value * out.integral.value;
  return out;
}

}  // namespace eslab
