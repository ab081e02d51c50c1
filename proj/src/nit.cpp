#include <cmath>
#include <numbers>

#include "eslab/diophantine.hpp"

namespace eslab {

PolynomialPhase nit_taylor_phase(double t, std::int64_t base, int k) {
  if (base < 1) throw ConfigError("nit_taylor_phase: base must be positive");
  if (k < 1 || k > PolynomialPhase::kMaxDegree) throw ConfigError("nit_taylor_phase: k must lie in [1, 8]");
  // log(base + x) = log(base) + sum_j (-1)^(j-1) x^j / (j base^j).
  std::vector<Angle> coeffs;
  const long double scale = static_cast<long double>(t) / (2.0L * std::numbers::pi_v<long double>);
  long double inv_pow = 1.0L;
  for (int j = 1; j <= k; ++j) {
    inv_pow /= static_cast<long double>(base);
    const long double c = scale * inv_pow / j * ((j % 2 == 1) ? 1.0L : -1.0L);
    const long double frac = c - std::floor(c);
    coeffs.push_back(Angle::from_double(static_cast<double>(frac)));
  }
  return PolynomialPhase(base, std::move(coeffs));
}

NitModel nit_approximation(const PolynomialPhase& coeffs, const Window& window, std::uint64_t q,
                           const NitOptions& options) {
  if (q < 1) throw ConfigError("nit_approximation: q must be positive");
  const auto N = static_cast<std::int64_t>(window.start());
  const double Nd = static_cast<double>(N);
  const double Hd = static_cast<double>(window.length());
  if (N < 3 || window.length() == 0) throw DomainError("nit_approximation: needs N >= 3 and H >= 1");
  const double log_n = std::log(Nd);
  const int k = coeffs.degree();

  const PolynomialPhase phase = coeffs.base() == N ? coeffs : shift_basis(coeffs, N);

  NitModel model;
  model.structure_quality = typeII_quality(typeII_combinations(phase, N), Nd, Hd, q);
  const double bound = options.structure_bound.value_or(std::pow(log_n, 10.0));
  if (model.structure_quality > bound) throw StructureFailure(model.structure_quality);

  const double B = options.B.value_or(options.A + 2.0 * k);
  model.H0 = static_cast<std::uint64_t>(std::floor(Hd * std::pow(log_n, -B)));
  if (model.H0 < 10) {
    throw DomainError("nit_approximation: progression length H (log N)^-B = " + std::to_string(model.H0) +
                      " is below 10; lower B");
  }
  model.n0 = options.n0.value_or(N);
  if (model.n0 < N || static_cast<double>(model.n0) + static_cast<double>(model.H0) > Nd + Hd) {
    throw DomainError("nit_approximation: progression (n0, n0 + H0] leaves the window");
  }

  const PolynomialPhase local = shift_basis(phase, model.n0);
  const StrippedPhase strip = rational_part_strip(local, q);
  model.modulus = strip.modulus();
  const double beta1 = strip.stripped().coeff(1).to_signed();
  model.t = 2.0 * std::numbers::pi * static_cast<double>(model.n0) * beta1;
  model.t_scale_ratio = std::fabs(model.t) / std::pow(Nd / Hd, k + 1);
  model.target_deviation = std::pow(log_n, -options.A - 15.0);

  // e(g(n)) = e(C) e(offset_c) e(g'(n)) with C = g(n0); the model replaces
  // e(g'(n)) by (n/n0)^(it).
  const Angle constant = phase.evaluate(model.n0);
  const double n0d = static_cast<double>(model.n0);
  const double turns_log_n0 = model.t * std::log(n0d) / (2.0 * std::numbers::pi);
  const Angle log_shift = Angle::from_double(turns_log_n0 - std::floor(turns_log_n0));
  std::vector<Angle> offset_table;
  if (model.modulus <= 100000) offset_table = strip.offsets();
  auto offset_of = [&](i128 n) {
    if (offset_table.empty()) return strip.offset(n);
    const auto m = static_cast<i128>(model.modulus);
    return offset_table[static_cast<std::size_t>(((n % m) + m) % m)];
  };
  auto eta_for = [&](i128 n) { return constant + offset_of(n) - log_shift; };
  model.eta_phase = eta_for(static_cast<i128>(model.n0) + 1);
  if (model.modulus <= 100000) {
    model.eta_by_class.reserve(model.modulus);
    for (std::uint64_t r = 0; r < model.modulus; ++r) model.eta_by_class.push_back(eta_for(static_cast<i128>(r)));
  }

  PhaseStream stream(phase, static_cast<i128>(model.n0) + 1);
  double worst = 0.0;
  for (std::uint64_t i = 1; i <= model.H0; ++i) {
    const i128 n = static_cast<i128>(model.n0) + i;
    const Angle residual = stream.next() - constant - offset_of(n);
    const double model_turns = model.t * std::log1p(static_cast<double>(i) / n0d) / (2.0 * std::numbers::pi);
    const double diff = residual.to_signed() - model_turns;
    worst = std::max(worst, 2.0 * std::fabs(std::sin(std::numbers::pi * diff)));
  }
  model.max_dev = worst;
  return model;
}

}  // namespace eslab
