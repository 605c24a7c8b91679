#include "euler41/arith.hpp"

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace euler41 {

// ---------------------------------------------------------------------------
// FactoredInteger
// ---------------------------------------------------------------------------

namespace {

// Balanced product of value^exp terms; keeps the operands of each
// multiplication near the same size.
BigInt product_tree(const std::vector<BigInt>& terms, std::size_t lo, std::size_t hi) {
  if (lo == hi) return 1;
  if (hi - lo == 1) return terms[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return product_tree(terms, lo, mid) * product_tree(terms, mid, hi);
}

BigInt factors_product(const std::vector<PrimePower>& factors) {
  std::vector<BigInt> terms;
  terms.reserve(factors.size());
  for (const auto& f : factors) {
    BigInt t;
    mpz_pow_ui(t.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    terms.push_back(std::move(t));
  }
  return product_tree(terms, 0, terms.size());
}

}  // namespace

FactoredInteger FactoredInteger::from_factors(std::vector<PrimePower> factors) {
  const BigInt* prev = nullptr;
  for (const auto& f : factors) {
    if (f.exponent == 0) throw std::invalid_argument("factor exponent must be positive");
    if (prev && !(*prev < f.prime))
      throw std::invalid_argument("factor primes must be strictly increasing");
    if (!is_prime_checked(f.prime))
      throw std::invalid_argument("factor base fails primality check: " + f.prime.get_str());
    prev = &f.prime;
  }
  FactoredInteger r;
  r.value_ = factors_product(factors);
  r.factors_ = std::move(factors);
  return r;
}

FactoredInteger FactoredInteger::claim(std::vector<PrimePower> factors) {
  FactoredInteger r;
  r.value_ = factors_product(factors);
  r.factors_ = std::move(factors);
  return r;
}

FactoredInteger FactoredInteger::times(const FactoredInteger& other) const {
  std::vector<PrimePower> merged;
  merged.reserve(factors_.size() + other.factors_.size());
  std::size_t i = 0, j = 0;
  while (i < factors_.size() || j < other.factors_.size()) {
    if (j == other.factors_.size() ||
        (i < factors_.size() && factors_[i].prime < other.factors_[j].prime)) {
      merged.push_back(factors_[i++]);
    } else if (i == factors_.size() || other.factors_[j].prime < factors_[i].prime) {
      merged.push_back(other.factors_[j++]);
    } else {
      merged.push_back({factors_[i].prime, factors_[i].exponent + other.factors_[j].exponent});
      ++i, ++j;
    }
  }
  FactoredInteger r;
  r.value_ = value_ * other.value_;
  r.factors_ = std::move(merged);
  return r;
}

// ---------------------------------------------------------------------------
// Modular and integer utilities
// ---------------------------------------------------------------------------

BigInt modpow(const BigInt& base, const BigInt& exponent, const BigInt& modulus) {
  if (modulus < 2) throw std::invalid_argument("modpow: modulus must be >= 2");
  if (exponent < 0) throw std::invalid_argument("modpow: exponent must be nonnegative");
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

int legendre(const BigInt& a, const BigInt& p) {
  if (p < 3 || mpz_even_p(p.get_mpz_t()))
    throw std::invalid_argument("legendre: p must be an odd prime >= 3");
  return mpz_legendre(a.get_mpz_t(), p.get_mpz_t());
}

BigInt isqrt(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("isqrt: negative input");
  BigInt r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

namespace {

constexpr std::uint64_t residue_mask_64() {
  std::uint64_t m = 0;
  for (int i = 0; i < 64; ++i) m |= std::uint64_t{1} << ((i * i) % 64);
  return m;
}

constexpr std::uint64_t residue_mask_45() {
  std::uint64_t m = 0;
  for (int i = 0; i < 45; ++i) m |= std::uint64_t{1} << ((i * i) % 45);
  return m;
}

}  // namespace

bool is_perfect_square(const BigInt& n) {
  if (n < 0) return false;
  static constexpr std::uint64_t mask64 = residue_mask_64();
  static constexpr std::uint64_t mask45 = residue_mask_45();
  const std::uint64_t r64 = mpz_fdiv_ui(n.get_mpz_t(), 64);
  if (!(mask64 >> r64 & 1)) return false;
  const std::uint64_t r45 = mpz_fdiv_ui(n.get_mpz_t(), 45);
  if (!(mask45 >> r45 & 1)) return false;
  BigInt root = isqrt(n);
  return root * root == n;
}

// ---------------------------------------------------------------------------
// Segmented prime enumeration
// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint64_t> odd_primes_up_to(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 3) return primes;
  std::vector<std::uint8_t> sieve(limit + 1, 1);
  for (std::uint64_t i = 3; i * i <= limit; i += 2)
    if (sieve[i])
      for (std::uint64_t j = i * i; j <= limit; j += 2 * i) sieve[j] = 0;
  for (std::uint64_t i = 3; i <= limit; i += 2)
    if (sieve[i]) primes.push_back(i);
  return primes;
}

}  // namespace

PrimeStream::PrimeStream(std::uint64_t lo_exclusive, std::uint64_t hi_inclusive,
                         std::uint64_t segment_odds)
    : lo_(lo_exclusive), hi_(hi_inclusive), segment_odds_(std::max<std::uint64_t>(segment_odds, 64)) {
  if (hi_ < 2 || lo_ >= hi_) {
    done_ = true;
    return;
  }
  two_pending_ = lo_ < 2;
  std::uint64_t root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(hi_)));
  while (root * root > hi_) --root;
  while ((root + 1) * (root + 1) <= hi_) ++root;
  base_primes_ = odd_primes_up_to(root);
  next_multiple_.resize(base_primes_.size());

  std::uint64_t start = std::max<std::uint64_t>(lo_ + 1, 3);
  if (start % 2 == 0) ++start;
  if (start > hi_) {
    done_ = !two_pending_;
    if (done_) return;
    seg_lo_ = hi_ + 1;  // no odd segment needed
    seg_len_ = 0;
    return;
  }
  for (std::size_t i = 0; i < base_primes_.size(); ++i) {
    const std::uint64_t p = base_primes_[i];
    std::uint64_t m = std::max(p * p, (start + p - 1) / p * p);
    if (m % 2 == 0) m += p;
    next_multiple_[i] = m;
  }
  fill_segment(start);
}

void PrimeStream::fill_segment(std::uint64_t seg_lo) {
  seg_lo_ = seg_lo;
  const std::uint64_t span = 2 * segment_odds_;
  const std::uint64_t seg_hi = (hi_ - seg_lo_ < span - 1) ? hi_ : seg_lo_ + span - 1;
  seg_len_ = (seg_hi - seg_lo_) / 2 + 1;  // count of odd values in [seg_lo, seg_hi]
  seg_.assign(seg_len_, 1);
  for (std::size_t i = 0; i < base_primes_.size(); ++i) {
    const std::uint64_t p = base_primes_[i];
    std::uint64_t m = next_multiple_[i];
    for (; m <= seg_hi; m += 2 * p) seg_[(m - seg_lo_) / 2] = 0;
    next_multiple_[i] = m;
  }
  pos_ = 0;
}

std::optional<std::uint64_t> PrimeStream::next() {
  if (done_) return std::nullopt;
  if (two_pending_) {
    two_pending_ = false;
    return 2;
  }
  for (;;) {
    while (pos_ < seg_len_) {
      const std::size_t i = pos_++;
      if (seg_[i]) return seg_lo_ + 2 * i;
    }
    const std::uint64_t next_lo = seg_lo_ + 2 * segment_odds_;
    if (seg_len_ == 0 || next_lo > hi_) {
      done_ = true;
      return std::nullopt;
    }
    fill_segment(next_lo);
  }
}

PrimeStream primes_up_to(std::uint64_t B) {
  if (B < 2) throw std::invalid_argument("primes_up_to: B must be >= 2");
  return PrimeStream(1, B);
}

// ---------------------------------------------------------------------------
// Deterministic 64-bit primality
// ---------------------------------------------------------------------------

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod_u64(r, a, m);
    a = mulmod_u64(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_u64(std::uint64_t n, std::uint64_t a) {
  if (a % n == 0) return true;
  std::uint64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) d /= 2, ++s;
  std::uint64_t x = powmod_u64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  // First twelve primes as bases: deterministic for the whole 64-bit range.
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (!miller_rabin_u64(n, a)) return false;
  }
  return true;
}

bool is_prime_checked(const BigInt& n) {
  if (n < 2) return false;
  if (mpz_fits_ulong_p(n.get_mpz_t())) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
  if (mpz_even_p(n.get_mpz_t())) return false;
  const BigInt nm1 = n - 1;
  for (int base : {2, 3}) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), base)) return false;
    if (modpow(base, nm1, n) != 1) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Primorials, Mertens products, trial factorization
// ---------------------------------------------------------------------------

FactoredInteger primorial(std::uint64_t n, std::uint64_t excluded) {
  if (n < 2) throw std::invalid_argument("primorial: n must be >= 2");
  if (excluded != 0) {
    if (excluded > n || !is_prime_u64(excluded))
      throw std::invalid_argument("primorial: excluded must be a prime <= n");
  }
  std::vector<PrimePower> factors;
  for_primes(1, n, [&](std::uint64_t p) {
    if (p != excluded) factors.push_back({BigInt(static_cast<unsigned long>(p)), 1});
  });
  return FactoredInteger::from_factors(std::move(factors));
}

long double mertens_product(std::uint64_t B) {
  if (B < 2) throw std::invalid_argument("mertens_product: B must be >= 2");
  // Accumulate sum of log(1 - 1/p) at 256-bit precision; ~2e9 factors at the
  // paper's full bound would stay well inside the error budget.
  mpfr_t acc, term;
  mpfr_init2(acc, 256);
  mpfr_init2(term, 256);
  mpfr_set_zero(acc, 1);
  for_primes(1, B, [&](std::uint64_t p) {
    mpfr_set_ui(term, 1, MPFR_RNDN);
    mpfr_div_ui(term, term, p, MPFR_RNDN);
    mpfr_neg(term, term, MPFR_RNDN);
    mpfr_log1p(term, term, MPFR_RNDN);
    mpfr_add(acc, acc, term, MPFR_RNDN);
  });
  mpfr_exp(acc, acc, MPFR_RNDN);
  long double result = mpfr_get_ld(acc, MPFR_RNDN);
  mpfr_clear(acc);
  mpfr_clear(term);
  return result;
}

std::optional<FactoredInteger> factor_small(const BigInt& k, std::uint64_t bound) {
  if (k < 1) throw std::invalid_argument("factor_small: k must be positive");
  if (bound < 1) throw std::invalid_argument("factor_small: bound must be positive");
  BigInt rest = k;
  std::vector<PrimePower> factors;
  if (bound >= 2) {
    PrimeStream ps(1, bound);
    while (auto p = ps.next()) {
      if (BigInt(static_cast<unsigned long>(*p)) * static_cast<unsigned long>(*p) > rest) break;
      if (!mpz_divisible_ui_p(rest.get_mpz_t(), *p)) continue;
      std::uint32_t e = 0;
      do {
        mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), *p);
        ++e;
      } while (mpz_divisible_ui_p(rest.get_mpz_t(), *p));
      factors.push_back({BigInt(static_cast<unsigned long>(*p)), e});
    }
  }
  if (rest != 1) {
    if (!is_prime_checked(rest)) return std::nullopt;
    factors.push_back({rest, 1});
  }
  return FactoredInteger::from_factors(std::move(factors));
}

}  // namespace euler41
