#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace eslab {

/// Half-open integer interval (start, start + length].
class Window {
 public:
  static constexpr std::uint64_t kMaxStart = std::uint64_t{1} << 62;
  static constexpr std::uint64_t kMaxEnd = std::uint64_t{1} << 63;

  Window() = default;
  /// Throws ConfigError when start > 2^62 or start + length > 2^63.
  Window(std::uint64_t start, std::uint64_t length);

  /// H = floor(N^theta); theta must lie in (0, 1].
  static Window from_theta(std::uint64_t start, double theta);

  std::uint64_t start() const { return start_; }
  std::uint64_t length() const { return length_; }
  std::uint64_t first() const { return start_ + 1; }
  std::uint64_t last() const { return start_ + length_; }
  bool empty() const { return length_ == 0; }
  bool contains(std::uint64_t n) const { return n > start_ && n <= last(); }

  friend bool operator==(const Window&, const Window&) = default;

 private:
  std::uint64_t start_ = 0;
  std::uint64_t length_ = 0;
};

struct PrimePower {
  std::uint32_t prime;
  std::uint8_t exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Factorization data for one n: small prime powers (p <= sqrt(N+H)) plus a
/// residual cofactor that is 1 or a prime above the sieving limit.
struct Factorization {
  std::span<const PrimePower> small;
  std::uint64_t residual;

  /// Number of distinct prime factors, the residual included.
  int omega() const { return static_cast<int>(small.size()) + (residual > 1 ? 1 : 0); }
  bool squarefree() const;
  /// Product of all prime powers and the residual.
  std::uint64_t reconstruct() const;
};

/// Immutable per-n arithmetic data over a window.
class ArithmeticTable {
 public:
  ArithmeticTable() = default;

  const Window& window() const { return window_; }
  std::size_t size() const { return lambda_.size(); }

  /// Index i corresponds to n = window.first() + i.
  std::uint64_t n_at(std::size_t i) const { return window_.first() + i; }
  double lambda(std::size_t i) const { return lambda_[i]; }
  int mu(std::size_t i) const { return mu_[i]; }
  Factorization factors(std::size_t i) const {
    return {std::span<const PrimePower>(factors_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]),
            residual_[i]};
  }

  std::span<const double> lambda_values() const { return lambda_; }
  std::span<const std::int8_t> mu_values() const { return mu_; }

  /// Primes of the window in increasing order.
  std::vector<std::uint64_t> primes() const;

  /// Binary cache format: "ESLAB1", N and H as little-endian u64, then per n:
  /// f64 lambda, i8 mu, u8 count, count x (u32 prime, u8 exponent), u64 residual.
  void save(const std::filesystem::path& path) const;
  static ArithmeticTable load(const std::filesystem::path& path);

  friend bool operator==(const ArithmeticTable&, const ArithmeticTable&) = default;

 private:
  friend ArithmeticTable sieve_window(const Window&, unsigned);

  Window window_;
  std::vector<double> lambda_;
  std::vector<std::int8_t> mu_;
  std::vector<std::uint64_t> offsets_{0};
  std::vector<PrimePower> factors_;
  std::vector<std::uint64_t> residual_;
};

/// Segmented sieve over the window. Segments of 2^20 integers are processed
/// independently on up to `threads` workers (0 = hardware concurrency).
ArithmeticTable sieve_window(const Window& window, unsigned threads = 0);

/// Sum of Lambda(n) over the window.
double chebyshev_psi_delta(const ArithmeticTable& table);

/// tau_r(p^e) = C(e + r - 1, r - 1).
std::uint64_t tau_r(const Factorization& f, int r);

struct DivisorMoment {
  double sum;
  /// sum / (H (log N)^(r^s - 1)); NaN when N < 2 or H = 0.
  double normalized;
};

/// Sum of tau_r(n)^s over the window, r in [2,5], s in [1,4].
DivisorMoment divisor_moment(const Window& window, int r, int s, unsigned threads = 0);

/// Primes up to limit, inclusive (simple Eratosthenes).
std::vector<std::uint32_t> primes_up_to(std::uint32_t limit);

}  // namespace eslab
