#include <doctest.h>

#include <random>

#include "eslab/errors.hpp"
#include "eslab/phase.hpp"
#include "oracles.hpp"

using namespace eslab;

namespace {

Angle random_angle(std::mt19937_64& rng) { return Angle((static_cast<u128>(rng()) << 64) | rng()); }

PolynomialPhase random_phase(std::mt19937_64& rng, int k, std::int64_t base) {
  std::vector<Angle> c;
  for (int j = 0; j < k; ++j) c.push_back(random_angle(rng));
  return PolynomialPhase(base, c);
}

}  // namespace

TEST_CASE("angle parsing and formatting") {
  CHECK(Angle::parse("0.25").raw() == (u128{1} << 126));
  CHECK(Angle::parse("1/4") == Angle::parse("0.25"));
  CHECK(Angle::parse("-0.25") == Angle::parse("3/4"));
  CHECK(Angle::parse("2.5e-1") == Angle::parse("0.25"));
  CHECK(Angle::parse("1/3").to_hex() == "55555555555555555555555555555555");
  CHECK(Angle::from_hex(Angle::parse("1/7").to_hex()) == Angle::parse("1/7"));
  CHECK(Angle::parse("0x40000000000000000000000000000000") == Angle::parse("1/4"));
  CHECK_THROWS_AS(Angle::parse("abc"), ConfigError);
  CHECK_THROWS_AS(Angle::parse("1/0"), ConfigError);
  CHECK(Angle::parse("0.75").to_signed() == doctest::Approx(-0.25));
  CHECK(Angle::parse("0.3").distance() == doctest::Approx(0.3));
  CHECK(Angle::parse("0.7").distance() == doctest::Approx(0.3));
}

TEST_CASE("angle arithmetic is exact") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const Angle x = random_angle(rng), y = random_angle(rng), z = random_angle(rng);
    CHECK((x + y) + z == x + (y + z));
    const std::int64_t m = static_cast<std::int64_t>(rng() % 50);
    Angle sum;
    for (int t = 0; t < m; ++t) sum += x;
    CHECK(x.times(m) == sum);
    CHECK(x.times(-m) == -sum);
  }
}

TEST_CASE("monomial_to_shifted examples") {
  const auto p = monomial_to_shifted(Angle::parse("1/4"), 1, 12345);
  CHECK(p.coeff(1) == Angle::parse("1/4"));
  const auto q = monomial_to_shifted(Angle::parse("1/3"), 2, 6);
  CHECK(q.coeff(1).distance_raw() <= 16);
  CHECK(q.coeff(2) == Angle::parse("1/3"));
  const auto zero = monomial_to_shifted(Angle(), 5, 1'000'000'000);
  for (const Angle& c : zero.coeffs()) CHECK(c.raw() == 0);
}

TEST_CASE("monomial_to_shifted equals alpha n^k up to a constant") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 5;
    const Angle alpha = random_angle(rng);
    const auto N = static_cast<std::int64_t>(rng() % 1'000'000'000);
    const auto shifted = monomial_to_shifted(alpha, k, N);
    const PolynomialPhase base0 = monomial_to_shifted(alpha, k, 0);
    std::vector<Angle> mono(k);
    mono[k - 1] = alpha;
    const PolynomialPhase direct(0, mono);
    for (int t = 0; t < 5; ++t) {
      const std::int64_t n = N + static_cast<std::int64_t>(rng() % 1000);
      const std::int64_t m = N + static_cast<std::int64_t>(rng() % 1000);
      CHECK(shifted.evaluate(n) - shifted.evaluate(m) == direct.evaluate(n) - direct.evaluate(m));
      CHECK(base0.evaluate(n) == direct.evaluate(n));
    }
  }
}

TEST_CASE("shift_basis") {
  const PolynomialPhase p(0, {Angle::parse("0.1"), Angle::parse("0.01")});
  CHECK(shift_basis(p, 0) == p);
  const auto s = shift_basis(p, 3);
  CHECK(s.coeff(1).to_double() == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(s.coeff(2) == p.coeff(2));

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 1 + trial % 8;
    const auto base = static_cast<std::int64_t>(rng() % 1'000'000'000'000ULL);
    const auto phase = random_phase(rng, k, base);
    const auto delta = static_cast<std::int64_t>(rng() % 2'000'000) - 1'000'000;
    const auto shifted = shift_basis(phase, base + delta);
    CHECK(shift_basis(shifted, base) == phase);
    const std::int64_t n = base + static_cast<std::int64_t>(rng() % 10'000);
    const std::int64_t m = base - static_cast<std::int64_t>(rng() % 10'000);
    CHECK(shifted.evaluate(n) - shifted.evaluate(m) == phase.evaluate(n) - phase.evaluate(m));
  }
}

TEST_CASE("phase_stream small cases") {
  const auto half = phase_stream(PolynomialPhase(0, {Angle::parse("1/2")}), Window(0, 4));
  CHECK(half == std::vector<Angle>{Angle::parse("1/2"), Angle(), Angle::parse("1/2"), Angle()});
  const auto quarter = phase_stream(PolynomialPhase(0, {Angle::parse("1/4")}), Window(0, 4));
  CHECK(quarter == std::vector<Angle>{Angle::parse("1/4"), Angle::parse("1/2"), Angle::parse("3/4"), Angle()});
}

TEST_CASE("phase_stream matches big-integer evaluation") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    const int k = trial < 3 ? 3 : 8;
    const std::uint64_t N = 1'000'000'000ULL + rng() % 1'000'000'000ULL;
    const Window w(N, 20'000);
    const auto phase = random_phase(rng, k, static_cast<std::int64_t>(N + rng() % 100));
    const auto stream = phase_stream(phase, w);
    for (std::size_t i = 0; i < stream.size(); i += 97) {
      const auto exact = oracle::exact_phase_raw(phase, static_cast<std::int64_t>(w.first() + i));
      CHECK(oracle::raw_distance(oracle::to_cpp(stream[i].raw()), exact) < std::ldexp(1.0, -100));
    }
    CHECK(oracle::to_cpp(stream.back().raw()) ==
          oracle::exact_phase_raw(phase, static_cast<std::int64_t>(w.last())));
  }
}

TEST_CASE("phase_stream on coefficients near 1/2") {
  const u128 near_half = (u128{1} << 127) - 1;
  std::vector<Angle> c(6, Angle(near_half));
  const PolynomialPhase phase(500, c);
  const Window w(0, 50'000);
  const auto stream = phase_stream(phase, w);
  for (std::size_t i = 0; i < stream.size(); i += 101)
    CHECK(oracle::to_cpp(stream[i].raw()) == oracle::exact_phase_raw(phase, static_cast<std::int64_t>(w.first() + i)));
}

TEST_CASE("rational_part_strip") {
  const PolynomialPhase rational(0, {Angle::parse("1/3"), Angle::parse("5/6")});
  const auto r = rational_part_strip(rational, 3);
  for (const Angle& c : r.stripped().coeffs()) CHECK(c.distance_raw() <= 1);
  CHECK(r.modulus() == 6);

  const PolynomialPhase near(0, {Angle::parse("1/3") + Angle::from_double(1e-10)});
  const auto s = rational_part_strip(near, 3);
  CHECK(s.stripped().coeff(1).to_signed() == doctest::Approx(1e-10).epsilon(1e-9));
  CHECK(s.numerators()[0] == 1);
  CHECK(s.offset(0).distance_raw() <= 4);
  CHECK((s.offset(1) - Angle::parse("1/3")).distance_raw() <= 4);
  CHECK((s.offset(2) - Angle::parse("2/3")).distance_raw() <= 4);

  const PolynomialPhase noop(0, {Angle::parse("0.4")});
  const auto t = rational_part_strip(noop, 1);
  CHECK(t.numerators()[0] == 0);
  CHECK(t.stripped() == noop);

  CHECK_THROWS_AS(rational_part_strip(noop, 0), DomainError);
  CHECK_THROWS_AS(rational_part_strip(noop, 2'000'000), ConfigError);
}

TEST_CASE("rational_part_strip reassembles the phase") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 4;
    const auto base = static_cast<std::int64_t>(rng() % 1'000'000);
    const auto phase = random_phase(rng, k, base);
    const std::uint64_t q = 1 + rng() % 12;
    const auto s = rational_part_strip(phase, q);
    for (int t = 0; t < 20; ++t) {
      const std::int64_t n = base + static_cast<std::int64_t>(rng() % 1000);
      const Angle rebuilt = s.stripped().evaluate(n) + s.offset(n);
      const double drift = std::pow(static_cast<double>(n - base) + 1, k) * k * std::ldexp(1.0, -127);
      CHECK((rebuilt - phase.evaluate(n)).distance() <= drift + std::ldexp(1.0, -120));
    }
    if (s.modulus() <= 5000) {
      const auto table = s.offsets();
      for (std::int64_t n = base; n < base + 50; ++n) {
        const auto r = static_cast<std::size_t>(((n % static_cast<std::int64_t>(s.modulus())) +
                                                 static_cast<std::int64_t>(s.modulus())) %
                                                static_cast<std::int64_t>(s.modulus()));
        CHECK(table[r] == s.offset(n));
      }
    }
  }
}

TEST_CASE("phase validation") {
  CHECK_THROWS_AS(PolynomialPhase(0, {}), ConfigError);
  CHECK_THROWS_AS(PolynomialPhase(0, std::vector<Angle>(9)), ConfigError);
  CHECK(binomial(8, 3) == 56);
  CHECK(factorial(5) == 120);
}
