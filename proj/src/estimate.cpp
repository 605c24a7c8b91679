#include "euler41/estimate.hpp"

#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace euler41 {

namespace {

constexpr long double kLn10 = 2.302585092994045684L;

long double ln_pow10(std::uint64_t digits) { return kLn10 * static_cast<long double>(digits); }

// log of prod_{p <= B} (1 - 1/p).
long double log_mertens(std::uint64_t B) {
  long double acc = 0;
  for_primes(1, B, [&](std::uint64_t p) {
    acc += std::log1p(-1.0L / static_cast<long double>(p));
  });
  return acc;
}

}  // namespace

long double expected_trials(std::uint64_t d_small, std::uint64_t d_big) {
  if (d_small < 1 || d_big < 1) throw std::invalid_argument("expected_trials: digit counts >= 1");
  return ln_pow10(d_small) * ln_pow10(d_big);
}

long double success_prob(long double T, long double m) {
  if (!(T > 1)) throw std::invalid_argument("success_prob: T must be > 1");
  if (m < 0) throw std::invalid_argument("success_prob: m must be >= 0");
  return -std::expm1(m * std::log1p(-1.0L / T));
}

long double primorial_adjusted(std::uint64_t n, long double trials) {
  if (n < 2) throw std::invalid_argument("primorial_adjusted: n must be >= 2");
  const long double log_prod = log_mertens(n);
  return trials * std::exp(2 * log_prod);
}

long double post_sieve_estimate(long double trials, std::uint64_t B) {
  if (B < 2) throw std::invalid_argument("post_sieve_estimate: B must be >= 2");
  const long double density = std::exp(-kEulerGamma) / std::log(static_cast<long double>(B));
  return trials * density * density;
}

long double post_sieve_exact(long double trials, std::uint64_t B) {
  if (B < 2) throw std::invalid_argument("post_sieve_exact: B must be >= 2");
  return trials * std::exp(2 * log_mertens(B));
}

long double cpu_time_model(long double count, long double t_small, long double t_big,
                           std::uint64_t d_small) {
  if (count < 0 || t_small < 0 || t_big < 0)
    throw std::invalid_argument("cpu_time_model: inputs must be nonnegative");
  return count * t_small + count / ln_pow10(d_small) * t_big;
}

// ---------------------------------------------------------------------------
// EstimateReport
// ---------------------------------------------------------------------------

void compute_report(EstimateReport& r, bool exact_sieve_product) {
  r.T = expected_trials(r.d_small, r.d_big);
  r.m = r.multiplier * r.T;
  r.success_prob_T = success_prob(r.T, r.T);
  r.success_prob_m = success_prob(r.T, r.m);
  r.primorial_adjusted = primorial_adjusted(r.n, r.m);
  r.post_sieve = exact_sieve_product ? post_sieve_exact(r.m, r.sieve_bound)
                                     : post_sieve_estimate(r.m, r.sieve_bound);
  r.cpu_seconds_raw = cpu_time_model(r.m, r.t_small, r.t_big, r.d_small);
  r.cpu_seconds_primorial = cpu_time_model(r.primorial_adjusted, r.t_small, r.t_big, r.d_small);
  r.cpu_seconds_sieved = cpu_time_model(r.post_sieve, r.t_small, r.t_big, r.d_small);
}

namespace {

std::string fmt_ld(long double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string EstimateReport::to_key_values() const {
  std::ostringstream os;
  os << "d_small=" << d_small << "\n"
     << "d_big=" << d_big << "\n"
     << "n=" << n << "\n"
     << "sieve_bound=" << sieve_bound << "\n"
     << "t_small=" << fmt_ld(t_small) << "\n"
     << "t_big=" << fmt_ld(t_big) << "\n"
     << "multiplier=" << fmt_ld(multiplier) << "\n"
     << "expected_trials=" << fmt_ld(T) << "\n"
     << "planned_trials=" << fmt_ld(m) << "\n"
     << "success_prob_at_T=" << fmt_ld(success_prob_T) << "\n"
     << "success_prob_at_m=" << fmt_ld(success_prob_m) << "\n"
     << "primorial_adjusted=" << fmt_ld(primorial_adjusted) << "\n"
     << "post_sieve=" << fmt_ld(post_sieve) << "\n"
     << "cpu_seconds_raw=" << fmt_ld(cpu_seconds_raw) << "\n"
     << "cpu_seconds_primorial=" << fmt_ld(cpu_seconds_primorial) << "\n"
     << "cpu_seconds_sieved=" << fmt_ld(cpu_seconds_sieved) << "\n"
     << "cpu_years_raw=" << fmt_ld(cpu_seconds_raw / kSecondsPerYear) << "\n"
     << "cpu_years_primorial=" << fmt_ld(cpu_seconds_primorial / kSecondsPerYear) << "\n"
     << "cpu_years_sieved=" << fmt_ld(cpu_seconds_sieved / kSecondsPerYear) << "\n";
  return os.str();
}

std::string EstimateReport::to_json() const {
  nlohmann::json j;
  j["d_small"] = d_small;
  j["d_big"] = d_big;
  j["n"] = n;
  j["sieve_bound"] = sieve_bound;
  j["t_small"] = static_cast<double>(t_small);
  j["t_big"] = static_cast<double>(t_big);
  j["multiplier"] = static_cast<double>(multiplier);
  j["expected_trials"] = static_cast<double>(T);
  j["planned_trials"] = static_cast<double>(m);
  j["success_prob_at_T"] = static_cast<double>(success_prob_T);
  j["success_prob_at_m"] = static_cast<double>(success_prob_m);
  j["primorial_adjusted"] = static_cast<double>(primorial_adjusted);
  j["post_sieve"] = static_cast<double>(post_sieve);
  j["cpu_seconds_raw"] = static_cast<double>(cpu_seconds_raw);
  j["cpu_seconds_primorial"] = static_cast<double>(cpu_seconds_primorial);
  j["cpu_seconds_sieved"] = static_cast<double>(cpu_seconds_sieved);
  j["cpu_years_raw"] = static_cast<double>(cpu_seconds_raw / kSecondsPerYear);
  j["cpu_years_primorial"] = static_cast<double>(cpu_seconds_primorial / kSecondsPerYear);
  j["cpu_years_sieved"] = static_cast<double>(cpu_seconds_sieved / kSecondsPerYear);
  return j.dump(1);
}

// ---------------------------------------------------------------------------
// Hardy-Littlewood Conjecture F
// ---------------------------------------------------------------------------

HLReport hl_constant(const QuadraticSpec& quad, std::uint64_t B) {
  quad.validate();
  if (B < 3) throw std::invalid_argument("hl_constant: B must be >= 3");

  const BigInt D = quad.discriminant();
  long double log_c = 0;
  for_primes(2, B, [&](std::uint64_t p) {  // odd primes only
    if (mpz_divisible_ui_p(quad.a.get_mpz_t(), p)) return;
    const int chi = mpz_kronecker_ui(D.get_mpz_t(), p);
    if (chi == 0) return;
    log_c += std::log1p(-static_cast<long double>(chi) / (static_cast<long double>(p) - 1));
  });

  HLReport rep;
  rep.quad = quad;
  rep.bound_used = B;
  rep.epsilon = mpz_even_p(BigInt(quad.a + quad.b).get_mpz_t()) ? 2 : 1;
  rep.C_partial = std::exp(log_c);

  BigInt g;
  mpz_gcd(g.get_mpz_t(), quad.a.get_mpz_t(), quad.b.get_mpz_t());
  long double gcd_factor = 1;
  if (g > 2) {
    // Odd primes dividing gcd(a, b); g is tiny in practice.
    for_primes(2, mpz_get_ui(g.get_mpz_t()), [&](std::uint64_t p) {
      if (mpz_divisible_ui_p(g.get_mpz_t(), p))
        gcd_factor *= static_cast<long double>(p) / (static_cast<long double>(p) - 1);
    });
  }
  const long double sqrt_a = std::sqrt(static_cast<long double>(quad.a.get_d()));
  rep.coefficient = rep.epsilon * rep.C_partial / sqrt_a * gcd_factor;
  return rep;
}

std::string HLReport::to_json() const {
  nlohmann::json j;
  j["a"] = quad.a.get_str();
  j["b"] = quad.b.get_str();
  j["c"] = quad.c.get_str();
  j["discriminant"] = quad.discriminant().get_str();
  j["epsilon"] = epsilon;
  j["bound"] = bound_used;
  j["C_partial"] = static_cast<double>(C_partial);
  j["coefficient"] = static_cast<double>(coefficient);
  return j.dump(1);
}

// ---------------------------------------------------------------------------
// Empirical prime counts
// ---------------------------------------------------------------------------

namespace {

bool quad_fits_i128(const QuadraticSpec& q, std::uint64_t x_limit) {
  const BigInt lim(static_cast<unsigned long>(x_limit));
  const BigInt worst = abs(q.a) * lim * lim + abs(q.b) * lim + abs(q.c);
  return mpz_sizeinbase(worst.get_mpz_t(), 2) <= 63 && q.a.fits_slong_p() &&
         q.b.fits_slong_p() && q.c.fits_slong_p();
}

std::uint64_t abs_value_u64(const QuadraticSpec& q, std::uint64_t x) {
  const __int128 a = q.a.get_si(), b = q.b.get_si(), c = q.c.get_si();
  __int128 v = (a * static_cast<__int128>(x) + b) * static_cast<__int128>(x) + c;
  if (v < 0) v = -v;
  return static_cast<std::uint64_t>(v);
}

}  // namespace

std::uint64_t count_prime_values(const QuadraticSpec& quad, std::uint64_t x_limit,
                                 std::uint64_t x_min) {
  if (x_limit < x_min) return 0;
  std::uint64_t count = 0;
  if (quad_fits_i128(quad, x_limit)) {
    for (std::uint64_t x = x_min; x <= x_limit; ++x) {
      if (is_prime_u64(abs_value_u64(quad, x))) ++count;
    }
  } else {
    for (std::uint64_t x = x_min; x <= x_limit; ++x) {
      BigInt v = abs(quad.eval(BigInt(static_cast<unsigned long>(x))));
      if (is_prime_checked(v)) ++count;
    }
  }
  return count;
}

std::uint64_t count_distinct_prime_values(const QuadraticSpec& quad, std::uint64_t x_limit,
                                          std::uint64_t x_min) {
  std::set<BigInt> primes;
  for (std::uint64_t x = x_min; x <= x_limit; ++x) {
    BigInt v = abs(quad.eval(BigInt(static_cast<unsigned long>(x))));
    if (is_prime_checked(v)) primes.insert(v);
  }
  return static_cast<std::uint64_t>(primes.size());
}

}  // namespace euler41
