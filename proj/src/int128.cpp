#include "eslab/int128.hpp"

#include <algorithm>
#include <cmath>

namespace eslab {

std::string to_string_u128(u128 v) {
  if (v == 0) return "0";
  std::string out;
  while (v != 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::string to_string_i128(i128 v) {
  if (v < 0) return "-" + to_string_u128(static_cast<u128>(0) - static_cast<u128>(v));
  return to_string_u128(static_cast<u128>(v));
}

std::uint64_t isqrt_u64(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (static_cast<u128>(r) * r > n) --r;
  while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool checked_pow_u64(std::uint64_t base, int exp, std::uint64_t& out) {
  u128 acc = 1;
  for (int i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > UINT64_MAX) return false;
  }
  out = static_cast<std::uint64_t>(acc);
  return true;
}

std::uint64_t iroot_u64(std::uint64_t n, int k) {
  if (k == 1 || n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<long double>(n), 1.0L / k));
  std::uint64_t p = 0;
  while (r > 0 && (!checked_pow_u64(r, k, p) || p > n)) --r;
  while (checked_pow_u64(r + 1, k, p) && p <= n) ++r;
  return r;
}

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  if (m == 1) return 0;
  std::uint64_t result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mulmod_u64(result, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1U;
  }
  return result;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int r = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++r;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < r; ++i) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

}  // namespace eslab
