#pragma once

#include <cstdint>

namespace euler41 {

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

// Inverse of a mod m for gcd(a, m) = 1, via extended Euclid.
inline std::uint64_t invmod64(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, new_t = 1;
  std::uint64_t r = m, new_r = a % m;
  while (new_r != 0) {
    std::uint64_t q = r / new_r;
    std::int64_t tmp_t = t - static_cast<std::int64_t>(q) * new_t;
    t = new_t;
    new_t = tmp_t;
    std::uint64_t tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  return t < 0 ? static_cast<std::uint64_t>(t + static_cast<std::int64_t>(m)) : static_cast<std::uint64_t>(t);
}

}  // namespace euler41
