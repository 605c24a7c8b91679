#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <vector>

namespace euler41 {

using BigInt = mpz_class;

// ---------------------------------------------------------------------------
// FactoredInteger: a nonnegative integer together with its complete prime
// factorization. The blessed constructors check that every listed prime is
// prime, that primes are strictly increasing, and that the product of the
// prime powers equals the value.
// ---------------------------------------------------------------------------

struct PrimePower {
  BigInt prime;
  std::uint32_t exponent = 1;

  bool operator==(const PrimePower&) const = default;
};

class FactoredInteger {
public:
  // The integer 1 (empty factorization).
  FactoredInteger() : value_(1) {}

  // Validating constructor: throws std::invalid_argument if the list is not
  // a well-formed factorization (primality of each base included).
  static FactoredInteger from_factors(std::vector<PrimePower> factors);

  // Deserialization path for untrusted data: the value is taken to be the
  // product of the listed powers, with no primality checks. Callers that
  // accept claims (certificate verification) must re-validate themselves.
  static FactoredInteger claim(std::vector<PrimePower> factors);

  const BigInt& value() const { return value_; }
  const std::vector<PrimePower>& factors() const { return factors_; }

  // Product of two factored integers; exponents of shared primes are added.
  FactoredInteger times(const FactoredInteger& other) const;

  bool operator==(const FactoredInteger&) const = default;

private:
  BigInt value_;
  std::vector<PrimePower> factors_;
};

// ---------------------------------------------------------------------------
// Modular and integer utilities on BigInt.
// ---------------------------------------------------------------------------

// base^exponent mod modulus. Throws std::invalid_argument if modulus < 2 or
// exponent < 0.
BigInt modpow(const BigInt& base, const BigInt& exponent, const BigInt& modulus);

// Legendre symbol (a/p) for odd p >= 3; the caller is responsible for the
// primality of p. Throws std::invalid_argument when p is even or < 3.
int legendre(const BigInt& a, const BigInt& p);

// floor(sqrt(n)); throws std::invalid_argument for n < 0.
BigInt isqrt(const BigInt& n);

// True iff n >= 0 and isqrt(n)^2 == n. Quadratic-residue tables mod 64 and
// mod 45 reject most non-squares before the isqrt falls back.
bool is_perfect_square(const BigInt& n);

// ---------------------------------------------------------------------------
// Prime enumeration: segmented, memory bounded by the segment length rather
// than the upper bound, so bounds up to 5e10 stay cheap.
// ---------------------------------------------------------------------------

inline constexpr std::uint64_t kDefaultSegmentOdds = std::uint64_t{1} << 20;

class PrimeStream {
public:
  // Primes p with lo_exclusive < p <= hi_inclusive, ascending.
  PrimeStream(std::uint64_t lo_exclusive, std::uint64_t hi_inclusive,
              std::uint64_t segment_odds = kDefaultSegmentOdds);

  std::optional<std::uint64_t> next();

private:
  void fill_segment(std::uint64_t seg_lo);

  std::uint64_t lo_, hi_, segment_odds_;
  std::uint64_t seg_lo_ = 0;  // first odd value covered by the current segment
  std::vector<std::uint64_t> base_primes_;    // odd primes <= sqrt(hi)
  std::vector<std::uint64_t> next_multiple_;  // next odd multiple per base prime
  std::vector<std::uint8_t> seg_;
  std::size_t seg_len_ = 0;
  std::size_t pos_ = 0;
  bool two_pending_ = false;
  bool done_ = false;
};

// Primes in [2, B], ascending. Throws std::invalid_argument for B < 2.
PrimeStream primes_up_to(std::uint64_t B);

// Applies f to every prime in (lo_exclusive, hi_inclusive].
template <typename F>
void for_primes(std::uint64_t lo_exclusive, std::uint64_t hi_inclusive, F&& f) {
  PrimeStream s(lo_exclusive, hi_inclusive);
  while (auto p = s.next()) f(*p);
}

// ---------------------------------------------------------------------------
// Primality checks shared by every module.
// ---------------------------------------------------------------------------

// Deterministic Miller-Rabin for the full 64-bit range.
bool is_prime_u64(std::uint64_t n);

// One code path for all primality asserts: deterministic below 2^64, Fermat
// tests base 2 and 3 above (sufficient for internal sanity checks; proofs go
// through the certificate machinery).
bool is_prime_checked(const BigInt& n);

// ---------------------------------------------------------------------------
// Primorials, Mertens products, small factorization.
// ---------------------------------------------------------------------------

// Product of primes <= n, optionally divided by one excluded prime <= n.
// excluded == 0 means no exclusion. Throws std::invalid_argument when n < 2
// or when excluded is given but is not a prime <= n.
FactoredInteger primorial(std::uint64_t n, std::uint64_t excluded = 0);

// prod_{p <= B} (1 - 1/p), accumulated in log space at 256-bit precision,
// good to well over 12 significant digits. B >= 2.
long double mertens_product(std::uint64_t B);

// Complete factorization of k by trial division by primes <= bound, with a
// primality check on the final cofactor. nullopt when a composite cofactor
// survives the bound. k >= 1.
std::optional<FactoredInteger> factor_small(const BigInt& k, std::uint64_t bound);

}  // namespace euler41
