#include "eslab/window_sieve.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "eslab/errors.hpp"
#include "eslab/int128.hpp"
#include "eslab/parallel.hpp"

namespace eslab {

namespace {

constexpr std::uint64_t kSegmentLength = std::uint64_t{1} << 20;
constexpr char kMagic[6] = {'E', 'S', 'L', 'A', 'B', '1'};

struct Segment {
  std::vector<double> lambda;
  std::vector<std::int8_t> mu;
  std::vector<std::uint32_t> counts;
  std::vector<PrimePower> factors;
  std::vector<std::uint64_t> residual;
};

Segment sieve_segment(std::uint64_t lo, std::uint64_t hi, const std::vector<std::uint32_t>& base) {
  const std::size_t len = hi - lo + 1;
  Segment seg;
  std::vector<std::uint64_t> rem(len);
  for (std::size_t i = 0; i < len; ++i) rem[i] = lo + i;
  std::vector<std::uint32_t> count(len, 0);

  auto first_index = [lo](std::uint64_t p) -> std::uint64_t {
    const std::uint64_t first_multiple = (lo + p - 1) / p * p;
    return first_multiple - lo;
  };

  for (std::uint32_t p : base) {
    for (std::uint64_t i = first_index(p); i < len; i += p) ++count[i];
  }
  std::vector<std::uint32_t> pos(len + 1, 0);
  for (std::size_t i = 0; i < len; ++i) pos[i + 1] = pos[i] + count[i];
  seg.factors.resize(pos[len]);
  std::vector<std::uint32_t> cursor(pos.begin(), pos.end() - 1);
  for (std::uint32_t p : base) {
    for (std::uint64_t i = first_index(p); i < len; i += p) {
      std::uint8_t e = 0;
      std::uint64_t r = rem[i];
      while (r % p == 0) {
        r /= p;
        ++e;
      }
      rem[i] = r;
      seg.factors[cursor[i]++] = {p, e};
    }
  }

  seg.lambda.assign(len, 0.0);
  seg.mu.assign(len, 0);
  seg.residual = std::move(rem);
  seg.counts = std::move(count);
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint64_t residual = seg.residual[i];
    const std::uint32_t c = seg.counts[i];
    const int omega = static_cast<int>(c) + (residual > 1 ? 1 : 0);
    if (omega == 1) {
      seg.lambda[i] = c == 1 ? std::log(static_cast<double>(seg.factors[pos[i]].prime))
                             : std::log(static_cast<double>(residual));
    }
    bool squarefree = true;
    for (std::uint32_t j = pos[i]; j < pos[i + 1]; ++j) {
      if (seg.factors[j].exponent > 1) squarefree = false;
    }
    seg.mu[i] = squarefree ? static_cast<std::int8_t>(omega % 2 == 0 ? 1 : -1) : 0;
  }
  return seg;
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(b.data(), 8);
}

std::uint64_t get_u64(std::ifstream& in) {
  std::array<unsigned char, 8> b{};
  in.read(reinterpret_cast<char*>(b.data()), 8);
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8U) | b[i];
  return v;
}

}  // namespace

Window::Window(std::uint64_t start, std::uint64_t length) : start_(start), length_(length) {
  if (start > kMaxStart) throw ConfigError("window start exceeds 2^62");
  if (length > kMaxEnd - start) throw ConfigError("window end N + H exceeds 2^63");
}

Window Window::from_theta(std::uint64_t start, double theta) {
  if (!(theta > 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in (0, 1]");
  // The nudge keeps exact powers such as (10^6)^(1/2) from landing just below an integer.
  const long double h = std::floor(std::pow(static_cast<long double>(start), static_cast<long double>(theta)) + 1e-9L);
  return Window(start, static_cast<std::uint64_t>(h));
}

bool Factorization::squarefree() const {
  for (const auto& pp : small) {
    if (pp.exponent > 1) return false;
  }
  return true;
}

std::uint64_t Factorization::reconstruct() const {
  u128 acc = residual;
  for (const auto& pp : small) {
    for (int e = 0; e < pp.exponent; ++e) acc *= pp.prime;
  }
  return static_cast<std::uint64_t>(acc);
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t limit) {
  std::vector<std::uint32_t> out;
  if (limit < 2) return out;
  out.push_back(2);
  // Odd-only bitmap: bit i stands for 2i + 1.
  const std::uint64_t half = (static_cast<std::uint64_t>(limit) + 1) / 2;
  std::vector<bool> composite(half, false);
  for (std::uint64_t i = 1; i < half; ++i) {
    if (composite[i]) continue;
    const std::uint64_t p = 2 * i + 1;
    out.push_back(static_cast<std::uint32_t>(p));
    for (std::uint64_t j = p * p / 2; j < half; j += p) composite[j] = true;
  }
  return out;
}

ArithmeticTable sieve_window(const Window& window, unsigned threads) {
  ArithmeticTable table;
  table.window_ = window;
  if (window.empty()) return table;

  const auto limit = static_cast<std::uint32_t>(isqrt_u64(window.last()));
  const std::vector<std::uint32_t> base = primes_up_to(limit);

  const std::uint64_t segments = (window.length() + kSegmentLength - 1) / kSegmentLength;
  std::vector<Segment> parts(segments);
  parallel_for(segments, threads, [&](std::size_t s) {
    const std::uint64_t lo = window.first() + s * kSegmentLength;
    const std::uint64_t hi = std::min(window.last(), lo + kSegmentLength - 1);
    parts[s] = sieve_segment(lo, hi, base);
  });

  const std::size_t n = window.length();
  table.lambda_.reserve(n);
  table.mu_.reserve(n);
  table.residual_.reserve(n);
  table.offsets_.reserve(n + 1);
  for (auto& seg : parts) {
    table.lambda_.insert(table.lambda_.end(), seg.lambda.begin(), seg.lambda.end());
    table.mu_.insert(table.mu_.end(), seg.mu.begin(), seg.mu.end());
    table.residual_.insert(table.residual_.end(), seg.residual.begin(), seg.residual.end());
    table.factors_.insert(table.factors_.end(), seg.factors.begin(), seg.factors.end());
    for (std::uint32_t c : seg.counts) table.offsets_.push_back(table.offsets_.back() + c);
    seg = Segment{};
  }
  return table;
}

std::vector<std::uint64_t> ArithmeticTable::primes() const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < size(); ++i) {
    const Factorization f = factors(i);
    if (mu_[i] == -1 && f.omega() == 1) out.push_back(n_at(i));
  }
  return out;
}

void ArithmeticTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  put_u64(out, window_.start());
  put_u64(out, window_.length());
  for (std::size_t i = 0; i < size(); ++i) {
    put_u64(out, std::bit_cast<std::uint64_t>(lambda_[i]));
    out.put(static_cast<char>(mu_[i]));
    const Factorization f = factors(i);
    out.put(static_cast<char>(f.small.size()));
    for (const auto& pp : f.small) {
      for (int b = 0; b < 4; ++b) out.put(static_cast<char>((pp.prime >> (8 * b)) & 0xFFU));
      out.put(static_cast<char>(pp.exponent));
    }
    put_u64(out, f.residual);
  }
  if (!out) throw IoError("write failed for " + path.string());
}

ArithmeticTable ArithmeticTable::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[6];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("bad magic in " + path.string());
  }
  const std::uint64_t start = get_u64(in);
  const std::uint64_t length = get_u64(in);
  ArithmeticTable table;
  table.window_ = Window(start, length);
  table.lambda_.reserve(length);
  for (std::uint64_t i = 0; i < length; ++i) {
    table.lambda_.push_back(std::bit_cast<double>(get_u64(in)));
    table.mu_.push_back(static_cast<std::int8_t>(in.get()));
    const int count = in.get();
    for (int c = 0; c < count; ++c) {
      std::array<unsigned char, 5> b{};
      in.read(reinterpret_cast<char*>(b.data()), 5);
      const std::uint32_t p = b[0] | (b[1] << 8U) | (b[2] << 16U) | (static_cast<std::uint32_t>(b[3]) << 24U);
      table.factors_.push_back({p, b[4]});
    }
    table.offsets_.push_back(table.factors_.size());
    table.residual_.push_back(get_u64(in));
    if (!in) throw IoError("truncated table file " + path.string());
  }
  return table;
}

double chebyshev_psi_delta(const ArithmeticTable& table) {
  double sum = 0.0;
  for (double v : table.lambda_values()) sum += v;
  return sum;
}

std::uint64_t tau_r(const Factorization& f, int r) {
  auto binom = [](std::uint64_t n, std::uint64_t k) {
    std::uint64_t acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) acc = acc * (n - k + i) / i;
    return acc;
  };
  std::uint64_t acc = f.residual > 1 ? static_cast<std::uint64_t>(r) : 1;
  for (const auto& pp : f.small) acc *= binom(pp.exponent + r - 1, r - 1);
  return acc;
}

DivisorMoment divisor_moment(const Window& window, int r, int s, unsigned threads) {
  if (r < 2 || r > 5) throw ConfigError("divisor_moment: r must lie in [2,5]");
  if (s < 1 || s > 4) throw ConfigError("divisor_moment: s must lie in [1,4]");
  const ArithmeticTable table = sieve_window(window, threads);
  u128 total = 0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    u128 t = tau_r(table.factors(i), r);
    u128 p = 1;
    for (int e = 0; e < s; ++e) p *= t;
    total += p;
  }
  DivisorMoment out{static_cast<double>(total), std::numeric_limits<double>::quiet_NaN()};
  if (window.start() >= 2 && window.length() > 0) {
    const double exponent = std::pow(static_cast<double>(r), s) - 1.0;
    out.normalized = out.sum / (static_cast<double>(window.length()) *
                                std::pow(std::log(static_cast<double>(window.start())), exponent));
  }
  return out;
}

}  // namespace eslab
