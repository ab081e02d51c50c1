#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eslab/errors.hpp"
#include "eslab/phase.hpp"
#include "eslab/window_sieve.hpp"

namespace eslab {

/// a/q with err = ||q alpha||.
struct RationalApprox {
  std::int64_t a = 0;
  std::uint64_t q = 1;
  double err = 0.0;
  /// ||q alpha|| in units of 2^-128.
  u128 err_raw = 0;
  /// err < 2^-100: the 2^-128 grid, not alpha, limits the statement.
  bool at_resolution_floor = false;
};

/// Convergents of alpha in [0,1) with denominator <= q_max, increasing q.
/// The expansion is exact for the stored value raw/2^128.
std::vector<RationalApprox> continued_fraction_convergents(Angle alpha, std::uint64_t q_max);

/// The q <= q_max minimizing ||q alpha|| (ties to the smallest q), with a
/// the nearest integer to q alpha.
RationalApprox best_rational(Angle alpha, std::uint64_t q_max);

struct QSearchResult {
  std::uint64_t q = 1;
  double quality = 0.0;
};

/// Smallest q <= q_max minimizing max_j H^j ||q alpha_j|| by exhaustive
/// search; nullopt only when q_max < 1. BudgetError above 10^7.
std::optional<QSearchResult> simultaneous_q_search(const PolynomialPhase& coeffs, double H, std::uint64_t q_max);

/// j alpha_j + (j+1) N alpha_{j+1} for j = 1..k with alpha_{k+1} = 0.
std::vector<Angle> typeII_combinations(const PolynomialPhase& coeffs, std::int64_t N);

/// max_j (H^(j+1)/N) ||q gamma_j|| for the combinations above.
double typeII_quality(const std::vector<Angle>& combined, double N, double H, std::uint64_t q);

struct TypeIIStructure {
  std::uint64_t q = 1;
  double quality = 0.0;
  std::vector<Angle> combined;
};

/// Smallest q <= q_max minimizing typeII_quality; nullopt when q_max < 1.
std::optional<TypeIIStructure> typeII_structure_search(const PolynomialPhase& coeffs, std::int64_t N, double H,
                                                       std::uint64_t q_max);

struct MonomialLift {
  /// lcm of q C(k,j) over 1 <= j <= k.
  std::uint64_t q_prime = 1;
  /// Entry for step j (j = k first, j = 1 last): N^(k-j) H^j ||q' alpha||.
  std::vector<double> bound_chain;
  /// Measured H^j ||q C(k,j) N^(k-j) alpha|| for j = 1..k.
  std::vector<double> hypothesis;
};

/// Raised when a descent step of monomial_lift breaks.
class LiftFailure : public DomainError {
 public:
  LiftFailure(int step, double value, const std::string& why)
      : DomainError("monomial_lift failed at step j=" + std::to_string(step) + ": " + why), step_(step), value_(value) {}
  int step() const { return step_; }
  double value() const { return value_; }

 private:
  int step_;
  double value_;
};

/// Recovers ||q' alpha|| <= E/(N^(k-1) H) from the per-coefficient
/// hypotheses, checking every step numerically. A step j fails when
/// N^(k-j) H^j ||q' alpha|| exceeds max_quality, or (j < k) when
/// N^(k-j) ||q' alpha|| >= 1/2.
MonomialLift monomial_lift(std::uint64_t q, Angle alpha, int k, std::uint64_t N, std::uint64_t H,
                           double max_quality);

struct Arc {
  enum class Kind { kMajor, kMinor };
  Kind kind = Kind::kMinor;
  /// Witness for kMajor: 1 <= a <= q <= Q, gcd(a, q) = 1.
  std::uint64_t a = 0;
  std::uint64_t q = 0;
  double Q = 1.0;
  std::uint64_t X = 1;
  std::uint64_t H = 1;
  int k = 1;
  /// Arc half-width Q / (X^(k-1) H).
  double width = 0.0;
};

/// Major iff some q <= Q has ||q alpha|| <= Q/(X^(k-1) H); the witness is
/// the smallest such q. Angles are read mod 1, so alpha near 0 lands on
/// the arc around 1/1.
Arc classify_arc(Angle alpha, int k, std::uint64_t X, std::uint64_t H, double Q);

std::string to_string(Arc::Kind kind);

// ---------------------------------------------------------------------------

struct NitOptions {
  /// Progression length H0 = H (log N)^(-B). Defaults to A + 2k.
  std::optional<double> B;
  double A = 2.0;
  /// Progression start; defaults to N.
  std::optional<std::int64_t> n0;
  /// Largest accepted type-II structure quality; defaults to (log N)^10.
  std::optional<double> structure_bound;
};

struct NitModel {
  double t = 0.0;
  /// eta for the residue class of n0 + 1, as e(eta_phase).
  Angle eta_phase;
  /// eta for every class r mod k! q (empty when there are more than 10^5).
  std::vector<Angle> eta_by_class;
  /// max over the progression of |e(g(n)) - eta n^(it)|.
  double max_dev = 0.0;
  std::int64_t n0 = 0;
  std::uint64_t H0 = 0;
  std::uint64_t modulus = 1;
  double structure_quality = 0.0;
  /// |t| / (N/H)^(k+1).
  double t_scale_ratio = 0.0;
  /// (log N)^(-A-15), the deviation the asymptotic argument aims for.
  double target_deviation = 0.0;
};

/// Raised when the coefficients lack the type-II structure at the given q.
class StructureFailure : public DomainError {
 public:
  explicit StructureFailure(double quality)
      : DomainError("nit_approximation: type-II structure quality " + std::to_string(quality) + " above bound"),
        quality_(quality) {}
  double quality() const { return quality_; }

 private:
  double quality_;
};

/// Degree-k Taylor polynomial of t log(n) / (2 pi) around base, as a phase.
PolynomialPhase nit_taylor_phase(double t, std::int64_t base, int k);

/// Models e(g(n)) as eta n^(it) on (n0, n0 + H0]: shifts the basis to n0,
/// strips the rational parts mod k! q, and sets t = 2 pi n0 beta_1'.
NitModel nit_approximation(const PolynomialPhase& coeffs, const Window& window, std::uint64_t q,
                           const NitOptions& options = {});

}  // namespace eslab
