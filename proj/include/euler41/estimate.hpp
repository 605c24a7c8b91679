#pragma once

#include <cstdint>
#include <string>

#include "euler41/poly.hpp"

namespace euler41 {

// ---------------------------------------------------------------------------
// The probability, density and CPU-time arithmetic behind the search plan.
// All products over primes accumulate in log space.
// ---------------------------------------------------------------------------

inline constexpr long double kEulerGamma = 0.57721566490153286L;

// ln(10^d_small) * ln(10^d_big): expected number of candidate pairs per
// simultaneous prime pair, assuming independent prime-number-theorem
// densities at both sizes.
long double expected_trials(std::uint64_t d_small, std::uint64_t d_big);

// 1 - (1 - 1/T)^m, evaluated stably for large T.
long double success_prob(long double T, long double m);

// trials * (prod_{p <= n} (p-1)/p)^2: how many of the raw trials survive the
// primorial construction's guarantee of no prime factor <= n.
long double primorial_adjusted(std::uint64_t n, long double trials);

// trials * (e^-gamma / ln B)^2: Mertens approximation of the post-sieve count.
long double post_sieve_estimate(long double trials, std::uint64_t B);

// Same, with the exact prime product instead of the asymptotic.
long double post_sieve_exact(long double trials, std::uint64_t B);

// count * t_small + (count / ln(10^d_small)) * t_big, in seconds: every
// candidate gets the small test, the expected small-PRP fraction gets the
// big one.
long double cpu_time_model(long double count, long double t_small, long double t_big,
                           std::uint64_t d_small);

inline constexpr long double kSecondsPerYear = 365.0L * 86400;

// ---------------------------------------------------------------------------
// Full report mirroring the three planning scenarios.
// ---------------------------------------------------------------------------

struct EstimateReport {
  std::uint64_t d_small = 20000, d_big = 60000;
  std::uint64_t n = 23143;
  std::uint64_t sieve_bound = 50'000'000'000ULL;
  long double t_small = 14, t_big = 123;
  long double multiplier = 3;  // planned trials = multiplier * T

  long double T = 0;                   // expected trials per success
  long double m = 0;                   // planned trials
  long double success_prob_m = 0;      // chance of >= 1 success in m trials
  long double success_prob_T = 0;      // same at exactly T trials
  long double primorial_adjusted = 0;  // trials surviving the primorial screen
  long double post_sieve = 0;          // trials surviving the sieve (Mertens)
  long double cpu_seconds_raw = 0;
  long double cpu_seconds_primorial = 0;
  long double cpu_seconds_sieved = 0;

  std::string to_key_values() const;  // flat "key=value" lines
  std::string to_json() const;
};

// Fills every derived field from the input fields already set in `r`.
// `exact_sieve_product` switches post_sieve to the exact prime product.
void compute_report(EstimateReport& r, bool exact_sieve_product = false);

// ---------------------------------------------------------------------------
// Hardy-Littlewood Conjecture F for a quadratic ax^2 + bx + c.
// ---------------------------------------------------------------------------

struct HLReport {
  QuadraticSpec quad;
  int epsilon = 1;             // 2 iff a + b is even
  long double C_partial = 0;   // prod_{2 < p <= B, p not | a} (1 - (D/p)/(p-1))
  std::uint64_t bound_used = 0;
  long double coefficient = 0; // epsilon * C / sqrt(a) * prod_{p>2, p | gcd(a,b)} p/(p-1)

  std::string to_json() const;
};

// Throws std::invalid_argument (naming the hypothesis) for quadratics
// outside Conjecture F. B >= 3.
HLReport hl_constant(const QuadraticSpec& quad, std::uint64_t B);

// Number of x in [x_min, x_limit] with |quad(x)| prime; deterministic
// primality below 2^64, Fermat-screened above.
std::uint64_t count_prime_values(const QuadraticSpec& quad, std::uint64_t x_limit,
                                 std::uint64_t x_min = 1);

// Number of distinct prime |quad(x)| over x in [x_min, x_limit].
std::uint64_t count_distinct_prime_values(const QuadraticSpec& quad, std::uint64_t x_limit,
                                          std::uint64_t x_min = 0);

}  // namespace euler41
