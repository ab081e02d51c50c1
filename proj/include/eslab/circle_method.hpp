#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "eslab/expsums.hpp"
#include "eslab/phase.hpp"
#include "eslab/window_sieve.hpp"

namespace eslab {

/// Configuration for N = n_1^k + ... + n_s^k with |n_i - X| <= H.
struct WaringInstance {
  int k = 2;
  int s = 5;
  std::uint64_t N = 0;
  double theta = 1.0;
  std::uint64_t X = 0;
  std::uint64_t H = 0;
  /// s (X-H)^k <= N <= s (X+H)^k.
  bool feasible = false;

  /// X = round((N/s)^(1/k)), H = round(X^theta).
  static WaringInstance from_theta(int k, int s, std::uint64_t N, double theta);
  /// Explicit centre and radius; theta is recorded as log H / log X.
  static WaringInstance explicit_range(int k, int s, std::uint64_t N, std::uint64_t X, std::uint64_t H);

  std::uint64_t lo() const { return X - H; }
  std::uint64_t hi() const { return X + H; }
  /// (X-H-1, X+H].
  Window window() const { return Window(X - H - 1, 2 * H + 1); }
  /// (X-H)^k and (X+H)^k.
  std::uint64_t power_lo() const;
  std::uint64_t power_hi() const;
};

int gamma_kp(int k, std::uint64_t p);
std::uint64_t R_of_k(int k);

/// S(q,a) = sum_{b mod q, (b,q)=1} e(a b^k / q).
std::complex<double> gauss_sum(std::uint64_t q, std::int64_t a, int k);

struct LocalData {
  std::uint64_t q = 1;
  /// (a, S(q,a)) for 1 <= a <= q with gcd(a,q) = 1.
  std::vector<std::pair<std::uint64_t, std::complex<double>>> gauss;
  std::complex<double> series_term;
};

/// Direct O(q^2) evaluation of the q-th series term from gauss_sum.
LocalData local_data(std::uint64_t q, const WaringInstance& inst);

struct SeriesResult {
  double value = 0.0;
  /// |Im| of the truncated sum.
  double imag = 0.0;
  /// |sum of terms with q_max/10 < q <= q_max|.
  double tail = 0.0;
  std::uint64_t q_max = 0;
  std::vector<std::string> warnings;
};

/// Truncated singular series. Terms are built from prime-power terms by
/// multiplicativity; each prime-power term comes from a DFT of the k-th power
/// residue histogram.
SeriesResult singular_series(const WaringInstance& inst, std::uint64_t q_max = 10'000);

/// Term of the series at q, computed the same way singular_series does.
std::complex<double> series_term(std::uint64_t q, const WaringInstance& inst);

/// p^j #{(b_i) mod p^j units : sum b_i^k = N} / phi(p^j)^s, by repeated
/// convolution of the residue histogram.
double local_density(std::uint64_t p, int j, const WaringInstance& inst);

struct VBetaOptions {
  std::uint64_t max_terms = 200'000'000;
  bool allow_fast_path = false;
  std::uint64_t block = 4096;
};

struct VBetaResult {
  std::complex<double> value;
  std::uint64_t terms = 0;
  bool approximated = false;
  double error_bound = 0.0;
};

/// k^-1 sum_{(X-H)^k <= m <= (X+H)^k} m^(-1+1/k) e(beta m).
VBetaResult v_beta(double beta, const WaringInstance& inst, const VBetaOptions& options = {});

struct SingularIntegral {
  double value = 0.0;
  /// H^(s-1) / X^(k-1).
  double scale = 0.0;
  double ratio = 0.0;
};

SingularIntegral singular_integral(const WaringInstance& inst);

struct RhoResult {
  /// sum of prod Lambda(n_i) over tuples with sum n_i^k = N.
  double rho = 0.0;
  /// Number of ordered prime tuples.
  std::uint64_t prime_count = 0;
};

RhoResult rho_exact(const WaringInstance& inst);

/// (1/M) sum_{j<M} f(j/M)^s e(-N j/M) with M > s (X+H)^k; 0 picks the
/// smallest valid M.
double rho_fourier(const WaringInstance& inst, std::uint64_t M = 0);

struct RepresentationSearch {
  /// Nondecreasing prime tuples in lexicographic order.
  std::vector<std::vector<std::uint64_t>> reps;
  std::uint64_t R = 1;
  std::uint64_t N_mod_R = 0;
  std::uint64_t s_mod_R = 0;
  /// Empty when reps is nonempty.
  std::string diagnosis;
};

/// Meet-in-the-middle search, ceil(s/2) + floor(s/2). max_entries bounds the
/// number of stored half tuples.
RepresentationSearch find_representations(const WaringInstance& inst, std::size_t limit,
                                          std::uint64_t max_entries = 50'000'000);

/// f(alpha) = sum_{|n-X| <= H} Lambda(n) e(alpha n^k).
ExpSumResult f_alpha(const WaringInstance& inst, Angle alpha);
ExpSumResult f_alpha(const ArithmeticTable& table, const WaringInstance& inst, Angle alpha);

struct MainTerm {
  SeriesResult series;
  SingularIntegral integral;
  double value = 0.0;
};

MainTerm major_arc_main_term(const WaringInstance& inst, std::uint64_t q_max = 10'000);

}  // namespace eslab
