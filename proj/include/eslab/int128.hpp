#pragma once

#include <cstdint>
#include <string>

namespace eslab {

using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u128 kU128Max = ~u128{0};

/// Decimal rendering; iostreams do not know about __int128.
std::string to_string_u128(u128 v);
std::string to_string_i128(i128 v);

/// floor(sqrt(n)) for 64-bit n, exact.
std::uint64_t isqrt_u64(std::uint64_t n);

/// Integer k-th root floor, exact.
std::uint64_t iroot_u64(std::uint64_t n, int k);

std::uint64_t gcd_u64(std::uint64_t a, std::uint64_t b);

/// a * b mod m without overflow.
inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m);

/// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

/// Returns false on overflow, otherwise stores base^exp in out.
bool checked_pow_u64(std::uint64_t base, int exp, std::uint64_t& out);

}  // namespace eslab
