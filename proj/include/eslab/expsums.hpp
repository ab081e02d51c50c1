#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eslab/errors.hpp"
#include "eslab/phase.hpp"
#include "eslab/summation.hpp"
#include "eslab/window_sieve.hpp"

namespace eslab {

struct ExpSumResult {
  std::complex<double> value;
  std::uint64_t terms = 0;
  /// |value| / H, or 0 for an empty range.
  double normalized = 0.0;
  std::vector<std::string> warnings;
  std::vector<std::pair<std::string, double>> diagnostics;
};

/// sum_{n in window} Lambda(n) e(g(n)), ascending n.
ExpSumResult lambda_exp_sum(const ArithmeticTable& table, const PolynomialPhase& phase,
                            Summation mode = Summation::kPlain);
/// sum_{n in window} mu(n) e(g(n)), ascending n.
ExpSumResult mobius_exp_sum(const ArithmeticTable& table, const PolynomialPhase& phase,
                            Summation mode = Summation::kPlain);
/// sum_{n in window} e(g(n)).
ExpSumResult unit_exp_sum(const Window& window, const PolynomialPhase& phase,
                          Summation mode = Summation::kPlain);

struct LambdaMobiusSums {
  ExpSumResult lambda;
  ExpSumResult mobius;
};
/// Both weighted sums from a single pass over the phase stream; each result
/// is bit-identical to the corresponding single-weight function.
LambdaMobiusSums lambda_mobius_sums(const ArithmeticTable& table, const PolynomialPhase& phase,
                                    Summation mode = Summation::kPlain);

/// F(alpha) = sum_{|n - X| <= H} e(alpha n^k), including the constant term.
ExpSumResult weyl_sum(std::int64_t X, std::int64_t H, Angle alpha, int k,
                      Summation mode = Summation::kPlain);

/// Coefficient sequences allowed in bilinear sums. All satisfy |c_n| <= tau_5(n).
enum class Coefficient { kUnit, kLog, kMobius, kTauBounded };
enum class Psi { kOne, kLog };

struct BilinearSpec {
  /// Outer variable runs over M < m <= 2M.
  std::uint64_t M = 1;
  Coefficient a = Coefficient::kUnit;
  Coefficient b = Coefficient::kUnit;
  Psi psi = Psi::kOne;
  /// Seeds the kTauBounded family so runs are replayable.
  std::uint64_t seed = 0x5eedULL;
};

/// Value of a coefficient family at n. kTauBounded gives tau_5(n) u_n with
/// u_n uniform in [-1, 1], a fixed function of (seed, n).
double coefficient_value(Coefficient c, std::uint64_t n, const Factorization& f, std::uint64_t seed);

/// sum_{m ~ M} b_m sum_{N/m < l <= (N+H)/m} psi(l) e(g(l m)), m then l ascending.
/// Diagnostic "M_over_H" is M/H; M >= N yields 0 with a warning.
ExpSumResult type_I_sum(const Window& window, const BilinearSpec& spec, const PolynomialPhase& phase,
                        Summation mode = Summation::kPlain);

/// sum_{m ~ M} b_m sum_{N < l m <= N+H, L/2 <= l <= 2L} a_l e(g(l m)) with
/// L = N/M. Diagnostic "applicable" is 1 when H >= max(L, M).
ExpSumResult type_II_sum(const Window& window, const BilinearSpec& spec, const PolynomialPhase& phase,
                         Summation mode = Summation::kPlain);

// ---------------------------------------------------------------------------
// Heath-Brown decomposition with K = 3.

enum class HbTarget { kLambda, kMobius };

/// Which bilinear shape a tuple reduces to: a long smooth variable l = r_i
/// with unit weight, the same with log weight (i = 1), or all free variables
/// at most 2 N^(1/3).
enum class HbCase { kTypeI, kTypeILog, kTypeII };

struct HbComponent {
  int j = 1;
  HbCase kind = HbCase::kTypeII;
  /// Per position, e such that 2^(e-1) < r <= 2^e (e = 0 means r = 1).
  std::vector<int> dyadic;
  /// Sum of the tuple weights times e(g(r_1 ... r_m)); terms = tuple count.
  /// The sign and binomial factor of level j are not applied.
  ExpSumResult sum;
};

struct HeathBrownResult {
  HbTarget target = HbTarget::kLambda;
  std::uint64_t cutoff = 0;
  std::vector<HbComponent> components;
  /// sum_j (-1)^(j-1) C(3,j) sum of level-j components.
  std::complex<double> total;
  /// Reconstructed coefficient of each n (should equal Lambda(n) or mu(n)).
  std::vector<double> per_n;
  /// Integer reconstruction, mu target only.
  std::vector<std::int64_t> per_n_integer;
  /// max over n of |per_n - Lambda(n)| / max(1, Lambda(n)), or the count of
  /// mismatches for the mu target.
  double max_pointwise_error = 0.0;
  /// mu target with zero phase: exact integer sum of the reconstruction.
  std::int64_t integer_total = 0;
  std::uint64_t tuples = 0;
};

struct HbOptions {
  std::uint64_t max_tuples = 200'000'000;
  Summation mode = Summation::kCompensated;
  unsigned threads = 0;
};

/// Raised when the tuple budget runs out; carries the components of the
/// chunks that completed.
class HeathBrownPartial : public BudgetError {
 public:
  HeathBrownPartial(const std::string& what, HeathBrownResult partial)
      : BudgetError(what), partial_(std::move(partial)) {}
  const HeathBrownResult& partial() const { return partial_; }

 private:
  HeathBrownResult partial_;
};

/// Cutoff z = ceil((2N)^(1/3)); the identity needs every n < (z+1)^3. For
/// the mu target the reconstruction is checked at every n and the window is
/// refused (DomainError) if any n disagrees.
HeathBrownResult heath_brown_decompose(const ArithmeticTable& table, const PolynomialPhase& phase,
                                       HbTarget target, const HbOptions& options = {});

std::uint64_t heath_brown_cutoff(std::uint64_t N);

}  // namespace eslab
