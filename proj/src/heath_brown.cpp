#include "eslab/expsums.hpp"

#include <array>
#include <atomic>
#include <cmath>
#include <map>

#include "eslab/int128.hpp"
#include "eslab/parallel.hpp"

namespace eslab {

namespace {

constexpr std::size_t kChunk = 4096;
constexpr int kMaxPositions = 6;

int dyadic_exponent(std::uint64_t r) {
  // Smallest e with r <= 2^e.
  int e = 0;
  while ((std::uint64_t{1} << e) < r) ++e;
  return e;
}

/// Packs (j, case, dyadic exponents) into an ordered integer key.
std::uint64_t pack_key(int j, HbCase kind, const std::array<int, kMaxPositions>& dyadic, int positions) {
  std::uint64_t key = static_cast<std::uint64_t>(j);
  key = (key << 2U) | static_cast<std::uint64_t>(kind);
  for (int i = 0; i < kMaxPositions; ++i) {
    key = (key << 7U) | static_cast<std::uint64_t>(i < positions ? dyadic[i] + 1 : 0);
  }
  return key;
}

void unpack_key(std::uint64_t key, HbComponent& out) {
  std::array<int, kMaxPositions> d{};
  for (int i = kMaxPositions - 1; i >= 0; --i) {
    d[i] = static_cast<int>(key & 0x7FU) - 1;
    key >>= 7U;
  }
  out.kind = static_cast<HbCase>(key & 0x3U);
  out.j = static_cast<int>(key >> 2U);
  out.dyadic.clear();
  for (int v : d) {
    if (v >= 0) out.dyadic.push_back(v);
  }
}

struct BoxSum {
  ComplexAccumulator acc;
  std::uint64_t count = 0;
  explicit BoxSum(Summation mode) : acc(mode) {}
};

struct ChunkResult {
  std::map<std::uint64_t, BoxSum> boxes;
  std::vector<double> per_n;
  std::vector<std::int64_t> per_n_integer;
  std::uint64_t tuples = 0;
};

/// Enumerates ordered factorizations n = r_0 ... r_{m-1}. Positions
/// [free, m) are Moebius-weighted and must be squarefree and <= cutoff; the
/// remaining positions are free and the last free one absorbs the cofactor.
class TupleEnumerator {
 public:
  struct Tuple {
    std::array<std::uint64_t, kMaxPositions> r;
    int sign;
  };

  TupleEnumerator(std::vector<std::pair<std::uint64_t, int>> primes, std::uint64_t cutoff)
      : primes_(std::move(primes)), cutoff_(cutoff) {}

  template <typename Visit>
  void run(int positions, int free, Visit&& visit) {
    positions_ = positions;
    free_ = free;
    std::vector<int> rem(primes_.size());
    for (std::size_t i = 0; i < primes_.size(); ++i) rem[i] = primes_[i].second;
    Tuple t{};
    t.sign = 1;
    assign(free_, rem, t, visit);
  }

 private:
  // Positions are filled in the order free..positions-1, then 0..free-1.
  template <typename Visit>
  void assign(int pos, std::vector<int>& rem, Tuple& t, Visit& visit) {
    if (pos == positions_) {
      assign_free(0, rem, t, visit);
      return;
    }
    divisors(0, rem, 1, true, [&](std::uint64_t d, int parity) {
      t.r[pos] = d;
      const int saved = t.sign;
      if (parity) t.sign = -t.sign;
      assign(pos + 1, rem, t, visit);
      t.sign = saved;
    });
  }

  template <typename Visit>
  void assign_free(int pos, std::vector<int>& rem, Tuple& t, Visit& visit) {
    if (pos == free_ - 1) {
      std::uint64_t v = 1;
      for (std::size_t i = 0; i < primes_.size(); ++i) {
        for (int e = 0; e < rem[i]; ++e) v *= primes_[i].first;
      }
      t.r[pos] = v;
      visit(t);
      return;
    }
    divisors(0, rem, 1, false, [&](std::uint64_t d, int) {
      t.r[pos] = d;
      assign_free(pos + 1, rem, t, visit);
    });
  }

  /// Calls emit(d, parity) for every divisor d of the remaining part; the
  /// exponents of d are removed from rem during the call.
  template <typename Emit>
  void divisors(std::size_t idx, std::vector<int>& rem, std::uint64_t value, bool squarefree, Emit&& emit,
                int parity = 0) {
    if (idx == primes_.size()) {
      emit(value, parity);
      return;
    }
    const std::uint64_t p = primes_[idx].first;
    const int max_e = squarefree ? std::min(rem[idx], 1) : rem[idx];
    const int saved = rem[idx];
    std::uint64_t v = value;
    for (int e = 0; e <= max_e; ++e) {
      if (squarefree && v > cutoff_) break;
      rem[idx] = saved - e;
      divisors(idx + 1, rem, v, squarefree, emit, parity ^ (e & 1));
      v *= p;
    }
    rem[idx] = saved;
  }

  std::vector<std::pair<std::uint64_t, int>> primes_;
  std::uint64_t cutoff_;
  int positions_ = 0;
  int free_ = 0;
};

}  // namespace

std::uint64_t heath_brown_cutoff(std::uint64_t N) {
  // Smallest z with z^3 >= 2N.
  const u128 target = static_cast<u128>(2) * N;
  auto z = static_cast<std::uint64_t>(std::cbrt(static_cast<double>(target)));
  while (z > 0 && static_cast<u128>(z - 1) * (z - 1) * (z - 1) >= target) --z;
  while (static_cast<u128>(z) * z * z < target) ++z;
  return z;
}

HeathBrownResult heath_brown_decompose(const ArithmeticTable& table, const PolynomialPhase& phase,
                                       HbTarget target, const HbOptions& options) {
  const Window& window = table.window();
  const std::uint64_t N = window.start();
  const std::uint64_t z = heath_brown_cutoff(N);
  HeathBrownResult result;
  result.target = target;
  result.cutoff = z;
  if (window.empty()) return result;

  if (static_cast<u128>(window.last()) >= static_cast<u128>(z + 1) * (z + 1) * (z + 1)) {
    throw DomainError("heath_brown_decompose: window reaches (z+1)^3, outside the identity's range");
  }
  const bool is_lambda = target == HbTarget::kLambda;
  const double type_two_limit = 2.0 * std::cbrt(static_cast<double>(N));
  const int j_min = is_lambda ? 1 : 2;

  const std::size_t n_total = table.size();
  const std::size_t chunks = (n_total + kChunk - 1) / kChunk;
  std::vector<ChunkResult> parts(chunks);
  std::vector<bool> done(chunks, false);
  std::atomic<std::uint64_t> tuples_seen{0};

  auto run_chunk = [&](std::size_t c) {
    ChunkResult& out = parts[c];
    const std::size_t begin = c * kChunk;
    const std::size_t end = std::min(n_total, begin + kChunk);
    out.per_n.assign(end - begin, 0.0);
    out.per_n_integer.assign(end - begin, 0);
    PhaseStream stream(phase, table.n_at(begin));
    std::map<std::uint64_t, std::pair<double, std::uint64_t>> local;
    for (std::size_t i = begin; i < end; ++i) {
      const std::complex<double> e = stream.next().expi();
      const Factorization f = table.factors(i);
      std::vector<std::pair<std::uint64_t, int>> primes;
      for (const auto& pp : f.small) primes.emplace_back(pp.prime, pp.exponent);
      if (f.residual > 1) primes.emplace_back(f.residual, 1);
      TupleEnumerator tuples(std::move(primes), z);
      local.clear();
      const std::uint64_t tuples_before = out.tuples;
      double coefficient = 0.0;
      std::int64_t coefficient_integer = 0;
      for (int j = j_min; j <= 3; ++j) {
        const int positions = is_lambda ? 2 * j : 2 * j - 1;
        const int free = is_lambda ? j : j - 1;
        const int level_sign = (j % 2 == 1) ? 1 : -1;
        const auto level_binom = static_cast<int>(binomial(3, j));
        double level_sum = 0.0;
        std::int64_t level_integer = 0;
        tuples.run(positions, free, [&](const TupleEnumerator::Tuple& t) {
          std::array<int, kMaxPositions> dyadic{};
          for (int p = 0; p < positions; ++p) dyadic[p] = dyadic_exponent(t.r[p]);
          HbCase kind = HbCase::kTypeII;
          for (int p = 0; p < free; ++p) {
            if (static_cast<double>(t.r[p]) > type_two_limit) {
              kind = (is_lambda && p == 0) ? HbCase::kTypeILog : HbCase::kTypeI;
              break;
            }
          }
          const double weight =
              is_lambda ? t.sign * std::log(static_cast<double>(t.r[0])) : static_cast<double>(t.sign);
          auto& slot = local[pack_key(j, kind, dyadic, positions)];
          slot.first += weight;
          slot.second += 1;
          level_sum += weight;
          level_integer += t.sign;
          ++out.tuples;
        });
        coefficient += level_sign * level_binom * level_sum;
        coefficient_integer += level_sign * level_binom * level_integer;
      }
      out.per_n[i - begin] = is_lambda ? coefficient : static_cast<double>(coefficient_integer);
      out.per_n_integer[i - begin] = coefficient_integer;
      for (const auto& [key, slot] : local) {
        auto it = out.boxes.try_emplace(key, options.mode).first;
        it->second.acc.add(slot.first * e.real(), slot.first * e.imag());
        it->second.count += slot.second;
      }
      if (tuples_seen.fetch_add(out.tuples - tuples_before) + (out.tuples - tuples_before) > options.max_tuples) {
        throw BudgetError("heath_brown_decompose: tuple budget exhausted");
      }
    }
    done[c] = true;
  };

  std::string budget_message;
  try {
    parallel_for(chunks, options.threads, run_chunk);
  } catch (const BudgetError& e) {
    budget_message = e.what();
  }

  // Merge completed chunks in index order.
  std::map<std::uint64_t, BoxSum> merged;
  for (std::size_t c = 0; c < chunks; ++c) {
    if (!done[c]) continue;
    for (auto& [key, box] : parts[c].boxes) {
      auto it = merged.try_emplace(key, options.mode).first;
      it->second.acc.add(box.acc.value());
      it->second.count += box.count;
    }
    result.per_n.insert(result.per_n.end(), parts[c].per_n.begin(), parts[c].per_n.end());
    if (!is_lambda) {
      result.per_n_integer.insert(result.per_n_integer.end(), parts[c].per_n_integer.begin(),
                                  parts[c].per_n_integer.end());
    }
    result.tuples += parts[c].tuples;
  }
  ComplexAccumulator total(options.mode);
  const double H = static_cast<double>(window.length());
  for (const auto& [key, box] : merged) {
    HbComponent comp;
    unpack_key(key, comp);
    comp.sum.value = box.acc.value();
    comp.sum.terms = box.count;
    comp.sum.normalized = std::abs(comp.sum.value) / H;
    const double factor = ((comp.j % 2 == 1) ? 1.0 : -1.0) * static_cast<double>(binomial(3, comp.j));
    total.add(factor * comp.sum.value);
    result.components.push_back(std::move(comp));
  }
  result.total = total.value();

  if (!budget_message.empty()) throw HeathBrownPartial(budget_message, std::move(result));

  if (is_lambda) {
    double worst = 0.0;
    for (std::size_t i = 0; i < result.per_n.size(); ++i) {
      const double lam = table.lambda(i);
      worst = std::max(worst, std::fabs(result.per_n[i] - lam) / std::max(1.0, lam));
    }
    result.max_pointwise_error = worst;
  } else {
    std::size_t mismatches = 0;
    std::uint64_t first_bad = 0;
    for (std::size_t i = 0; i < result.per_n_integer.size(); ++i) {
      if (result.per_n_integer[i] != table.mu(i)) {
        if (mismatches == 0) first_bad = table.n_at(i);
        ++mismatches;
      }
      result.integer_total += result.per_n_integer[i];
    }
    result.max_pointwise_error = static_cast<double>(mismatches);
    if (mismatches > 0) {
      throw DomainError("heath_brown_decompose: mu identity fails at n = " + std::to_string(first_bad) +
                        " (" + std::to_string(mismatches) + " mismatches); window outside its validity range");
    }
  }
  return result;
}

}  // namespace eslab
