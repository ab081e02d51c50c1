#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "eslab/diophantine.hpp"
#include "eslab/errors.hpp"
#include "oracles.hpp"

using namespace eslab;

namespace {

// min over q <= q_max of ||q alpha||, smallest q on ties.
std::pair<std::uint64_t, u128> brute_best(Angle alpha, std::uint64_t q_max) {
  std::uint64_t best_q = 1;
  u128 best = alpha.distance_raw();
  for (std::uint64_t q = 2; q <= q_max; ++q) {
    const u128 d = alpha.times(static_cast<u128>(q)).distance_raw();
    if (d < best) {
      best = d;
      best_q = q;
    }
  }
  return {best_q, best};
}

}  // namespace

TEST_CASE("continued fraction convergents") {
  const auto third = continued_fraction_convergents(Angle::parse("1/3"), 100);
  REQUIRE(third.size() >= 2);
  CHECK(third[0].q == 1);
  CHECK(third[0].a == 0);
  CHECK(third[1].q == 3);
  CHECK(third[1].a == 1);

  const auto golden = continued_fraction_convergents(Angle::parse("0.618034"), 13);
  std::vector<std::pair<std::int64_t, std::uint64_t>> seen;
  for (const auto& c : golden) seen.emplace_back(c.a, c.q);
  for (auto want : std::vector<std::pair<std::int64_t, std::uint64_t>>{{1, 2}, {2, 3}, {3, 5}, {5, 8}, {8, 13}})
    CHECK(std::find(seen.begin(), seen.end(), want) != seen.end());

  const auto zero = continued_fraction_convergents(Angle(), 100);
  REQUIRE(zero.size() == 1);
  CHECK(zero[0].q == 1);
  CHECK(zero[0].a == 0);
}

TEST_CASE("best_rational examples") {
  const auto a = best_rational(Angle::parse("0.3333340"), 10);
  CHECK(a.q == 3);
  CHECK(a.err == doctest::Approx(2e-6).epsilon(1e-6));
  const auto b = best_rational(Angle::parse("0.618034"), 10);
  CHECK(b.q == 8);
  CHECK(b.err == doctest::Approx(0.055728).epsilon(1e-4));
  const auto c = best_rational(Angle::parse("1/2"), 10);
  CHECK(c.q == 2);
  CHECK(c.err == 0);
  CHECK(c.at_resolution_floor);
  CHECK_THROWS_AS(best_rational(Angle(), 0), ConfigError);
}

TEST_CASE("best_rational agrees with exhaustive search") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 400; ++trial) {
    const Angle alpha((static_cast<u128>(rng()) << 64) | rng());
    const std::uint64_t q_max = 1 + rng() % 3000;
    const auto [q, d] = brute_best(alpha, q_max);
    const auto r = best_rational(alpha, q_max);
    CHECK(r.q == q);
    CHECK(r.err_raw == d);
  }
}

TEST_CASE("simultaneous_q_search") {
  const PolynomialPhase sixths(0, {Angle::parse("1/6"), Angle::parse("1/3"), Angle::parse("1/2")});
  const auto a = simultaneous_q_search(sixths, 1000, 10);
  REQUIRE(a);
  CHECK(a->q == 6);
  CHECK(a->quality < 1e-20);

  const double H = 1000;
  const PolynomialPhase near(0, {Angle::parse("1/3") + Angle::from_double(1 / (10 * H))});
  const auto b = simultaneous_q_search(near, H, 10);
  CHECK(b->q == 3);
  CHECK(b->quality == doctest::Approx(0.3).epsilon(1e-9));

  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Angle> c;
    for (int j = 0; j < 2; ++j) c.push_back(Angle((static_cast<u128>(rng()) << 64) | rng()));
    const PolynomialPhase g(0, c);
    const auto r = simultaneous_q_search(g, 1e4, 100);
    double best = INFINITY;
    std::uint64_t best_q = 0;
    for (std::uint64_t q = 1; q <= 100; ++q) {
      double quality = 0;
      for (int j = 1; j <= 2; ++j)
        quality = std::max(quality, std::pow(1e4, j) * c[j - 1].times(static_cast<u128>(q)).distance());
      if (quality < best) {
        best = quality;
        best_q = q;
      }
    }
    CHECK(r->q == best_q);
    CHECK(r->quality == doctest::Approx(best));
    CHECK(r->quality > 1);
    // More candidates can only help.
    CHECK(simultaneous_q_search(g, 1e4, 400)->quality <= r->quality);
  }
}

TEST_CASE("type-II structure") {
  const auto g = monomial_to_shifted(Angle::parse("2/5"), 3, 1'000'000);
  const auto s = typeII_structure_search(g, 1'000'000, 10'000, 5 * 6);
  REQUIRE(s);
  CHECK(s->quality < 1e-15);
  const PolynomialPhase k1(0, {Angle::parse("1/7")});
  const auto t = typeII_structure_search(k1, 1'000'000, 10'000, 10);
  CHECK(t->q == 7);
  CHECK(t->quality < 1e-15);

  std::mt19937_64 rng(51);
  std::vector<Angle> c;
  for (int j = 0; j < 3; ++j) c.push_back(Angle((static_cast<u128>(rng()) << 64) | rng()));
  CHECK(typeII_structure_search(PolynomialPhase(1'000'000, c), 1'000'000, 10'000, 100)->quality > 1);
}

TEST_CASE("monomial_lift") {
  const auto exact = monomial_lift(5, Angle::parse("3/5"), 3, 10'000, 1000, 1.0);
  CHECK(exact.q_prime % 5 == 0);
  for (double b : exact.bound_chain) CHECK(b < 1e-12);

  const Angle alpha = Angle::parse("1/3") + Angle::from_double(1e-12);
  const auto lift = monomial_lift(3, alpha, 2, 10'000, 1000, 1.0);
  CHECK(lift.q_prime == 6);
  CHECK(lift.bound_chain.back() == doctest::Approx(1e4 * 1e3 * 6e-12).epsilon(1e-3));

  const Angle generic = Angle::parse("0.2718281828459045");
  try {
    (void)monomial_lift(1, generic, 2, 10'000, 1000, 1.0);
    FAIL("expected LiftFailure");
  } catch (const LiftFailure& f) {
    CHECK(f.step() == 2);
  }
}

TEST_CASE("classify_arc examples") {
  const auto a = classify_arc(Angle::parse("1/3"), 1, 1000, 100, 10);
  CHECK(a.kind == Arc::Kind::kMajor);
  CHECK(a.a == 1);
  CHECK(a.q == 3);

  const std::uint64_t X = 1000, H = 100;
  const double Q = 5;
  const double width = Q / (static_cast<double>(X) * static_cast<double>(H));
  CHECK(classify_arc(Angle::parse("1/3") + Angle::from_double(2 * width), 2, X, H, Q).kind == Arc::Kind::kMinor);
  CHECK(classify_arc(Angle::parse("1/3") + Angle::from_double(0.2 * width), 2, X, H, Q).kind == Arc::Kind::kMajor);

  const auto zero = classify_arc(Angle(), 1, 1000, 100, 10);
  CHECK(zero.kind == Arc::Kind::kMajor);
  CHECK(zero.a == 1);
  CHECK(zero.q == 1);
}

TEST_CASE("classify_arc agrees with brute force") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 300; ++trial) {
    const Angle alpha((static_cast<u128>(rng()) << 64) | rng());
    const double Q = 1 + static_cast<double>(rng() % 300);
    const std::uint64_t X = 10 + rng() % 200, H = 1 + rng() % 50;
    const int k = 1 + static_cast<int>(rng() % 2);
    const auto arc = classify_arc(alpha, k, X, H, Q);
    std::uint64_t witness = 0;
    for (std::uint64_t q = 1; q <= static_cast<std::uint64_t>(Q) && witness == 0; ++q)
      if (alpha.times(static_cast<u128>(q)).distance() <= arc.width) witness = q;
    CHECK((arc.kind == Arc::Kind::kMajor) == (witness != 0));
    if (witness) CHECK(arc.q == witness);
  }
}

TEST_CASE("nit_approximation") {
  const Window w(1'000'000, 31'623);
  const PolynomialPhase zero(1'000'000, {Angle(), Angle(), Angle()});
  NitOptions opts;
  opts.B = 2;
  const auto z = nit_approximation(zero, w, 1, opts);
  CHECK(z.t == 0);
  CHECK(z.max_dev < 1e-12);

  const double a1 = 1 / (10.0 * 31'623);
  const PolynomialPhase tiny(1'000'000, {Angle::from_double(a1)});
  const auto m = nit_approximation(tiny, w, 1, opts);
  CHECK(m.t == doctest::Approx(2 * std::numbers::pi * 1'000'000 * a1).epsilon(1e-9));
  CHECK(m.max_dev <= 0.01);

  const double t0 = 12345.0;
  const auto r = nit_approximation(nit_taylor_phase(t0, 1'000'000, 3), w, 1, opts);
  CHECK(std::abs(r.t - t0) / t0 < 0.01);
  CHECK(r.max_dev <= 0.01);

  NitOptions bad;
  bad.B = 20;
  CHECK_THROWS_AS(nit_approximation(tiny, w, 1, bad), DomainError);
  NitOptions strict = opts;
  strict.structure_bound = 1e-30;
  std::mt19937_64 rng(71);
  std::vector<Angle> c;
  for (int j = 0; j < 3; ++j) c.push_back(Angle((static_cast<u128>(rng()) << 64) | rng()));
  CHECK_THROWS_AS(nit_approximation(PolynomialPhase(1'000'000, c), w, 1, strict), StructureFailure);
}
