#include <doctest.h>

#include <cmath>
#include <random>

#include "euler41/arith.hpp"
#include "euler41/poly.hpp"

using namespace euler41;

TEST_CASE("modpow basics") {
  CHECK(modpow(3, 42, 43) == 1);  // Fermat, 43 prime
  CHECK(modpow(5, 0, 7) == 1);
  CHECK(modpow(3, 90, 91) == 1);  // 3^6 = 729 = 8*91 + 1
  CHECK(modpow(2, 10, 1024) == 0);
  CHECK(modpow(-1, 3, 5) == 4);
  CHECK_THROWS_AS(modpow(2, 3, 1), std::invalid_argument);
  CHECK_THROWS_AS(modpow(2, -1, 5), std::invalid_argument);
}

TEST_CASE("modpow satisfies Fermat's little theorem for all p <= 10^4") {
  PrimeStream ps(1, 10'000);
  while (auto p = ps.next()) {
    const BigInt pb(static_cast<unsigned long>(*p));
    for (std::uint64_t a = 1; a < *p; ++a) {
      if (modpow(BigInt(static_cast<unsigned long>(a)), pb - 1, pb) != 1)
        FAIL("Fermat fails at p=", *p, " a=", a);
    }
  }
}

TEST_CASE("legendre examples") {
  CHECK(legendre(0, 7) == 0);
  CHECK(legendre(-163, 3) == -1);
  CHECK(legendre(-163, 41) == 1);
  CHECK_THROWS_AS(legendre(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(legendre(3, 10), std::invalid_argument);
}

TEST_CASE("legendre agrees with Euler's criterion for p <= 997") {
  PrimeStream ps(2, 997);
  while (auto p = ps.next()) {
    const BigInt pb(static_cast<unsigned long>(*p));
    for (std::uint64_t a = 0; a < *p; ++a) {
      const BigInt euler = modpow(BigInt(static_cast<unsigned long>(a)), (pb - 1) / 2, pb);
      const int expected = euler == 0 ? 0 : (euler == 1 ? 1 : -1);
      REQUIRE(legendre(BigInt(static_cast<unsigned long>(a)), pb) == expected);
    }
  }
}

TEST_CASE("isqrt and perfect squares") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(15) == 3);
  CHECK(isqrt(16) == 4);
  CHECK_THROWS_AS(isqrt(-1), std::invalid_argument);

  CHECK(is_perfect_square(1681));     // 41^2 = f(40)
  CHECK(!is_perfect_square(117641));  // 342^2 < 117641 < 343^2
  CHECK(!is_perfect_square(-159));
  CHECK(is_perfect_square(0));
  CHECK(is_perfect_square(1));
  CHECK(!is_perfect_square(2));
}

TEST_CASE("isqrt bracketing on random 512-bit values") {
  std::mt19937_64 rng(41);
  for (int i = 0; i < 100'000; ++i) {
    BigInt n = 0;
    for (int w = 0; w < 8; ++w) n = (n << 64) + BigInt(static_cast<unsigned long>(rng()));
    const BigInt r = isqrt(n);
    REQUIRE(r * r <= n);
    REQUIRE((r + 1) * (r + 1) > n);
  }
}

TEST_CASE("prime stream basics") {
  SUBCASE("B = 10") {
    auto s = primes_up_to(10);
    std::vector<std::uint64_t> got;
    while (auto p = s.next()) got.push_back(*p);
    CHECK(got == std::vector<std::uint64_t>{2, 3, 5, 7});
  }
  SUBCASE("B = 2") {
    auto s = primes_up_to(2);
    CHECK(s.next() == 2);
    CHECK(!s.next());
  }
  SUBCASE("B = 1 is rejected") { CHECK_THROWS_AS(primes_up_to(1), std::invalid_argument); }
  SUBCASE("pi(10^6) = 78498") {
    std::uint64_t count = 0;
    for_primes(1, 1'000'000, [&](std::uint64_t) { ++count; });
    CHECK(count == 78498);
  }
  SUBCASE("range (10, 30]") {
    std::vector<std::uint64_t> got;
    for_primes(10, 30, [&](std::uint64_t p) { got.push_back(p); });
    CHECK(got == std::vector<std::uint64_t>{11, 13, 17, 19, 23, 29});
  }
  SUBCASE("tiny segments agree with one big segment") {
    std::vector<std::uint64_t> a, b;
    PrimeStream small_segs(1, 10'000, 64);
    while (auto p = small_segs.next()) a.push_back(*p);
    for_primes(1, 10'000, [&](std::uint64_t p) { b.push_back(p); });
    CHECK(a == b);
  }
  SUBCASE("window at the paper's full sieve bound") {
    std::uint64_t count = 0, first = 0, last = 0;
    for_primes(50'000'000'000ULL - 10'000, 50'000'000'000ULL, [&](std::uint64_t p) {
      if (!first) first = p;
      last = p;
      ++count;
    });
    CHECK(count > 0);
    CHECK(first > 50'000'000'000ULL - 10'000);
    CHECK(last <= 50'000'000'000ULL);
    REQUIRE(is_prime_u64(first));
    REQUIRE(is_prime_u64(last));
  }
}

TEST_CASE("deterministic 64-bit primality") {
  CHECK(is_prime_u64(2));
  CHECK(is_prime_u64(3));
  CHECK(!is_prime_u64(1));
  CHECK(!is_prime_u64(0));
  CHECK(is_prime_u64(15541));
  CHECK(!is_prime_u64(91));
  CHECK(!is_prime_u64(324371));           // 547 * 593
  CHECK(is_prime_u64(484111));            // h(110)
  CHECK(is_prime_u64(2888065147340603));  // f(g(110))
  CHECK(!is_prime_u64(3215031751ULL));    // strong pseudoprime to bases 2,3,5,7
  // Sieve oracle cross-check.
  std::vector<std::uint8_t> sieve(100'000, 1);
  sieve[0] = sieve[1] = 0;
  for (std::uint64_t i = 2; i * i < sieve.size(); ++i)
    if (sieve[i])
      for (std::uint64_t j = i * i; j < sieve.size(); j += i) sieve[j] = 0;
  for (std::uint64_t n = 0; n < sieve.size(); ++n)
    REQUIRE(is_prime_u64(n) == (sieve[n] != 0));
}

TEST_CASE("FactoredInteger validation") {
  auto fi = FactoredInteger::from_factors({{2, 1}, {3, 1}, {5, 1}, {7, 1}});
  CHECK(fi.value() == 210);

  CHECK_THROWS_AS(FactoredInteger::from_factors({{4, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FactoredInteger::from_factors({{3, 1}, {2, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(FactoredInteger::from_factors({{2, 0}}), std::invalid_argument);

  // claim() skips the checks; verification layers re-validate instead.
  auto claimed = FactoredInteger::claim({{4, 2}});
  CHECK(claimed.value() == 16);

  auto a = FactoredInteger::from_factors({{2, 2}, {7, 1}});  // 28
  auto b = FactoredInteger::from_factors({{2, 1}, {3, 1}});  // 6
  auto ab = a.times(b);
  CHECK(ab.value() == 168);
  REQUIRE(ab.factors().size() == 3);
  CHECK(ab.factors()[0].exponent == 3);
}

TEST_CASE("primorial") {
  CHECK(primorial(10).value() == 210);
  CHECK(primorial(2).value() == 2);

  // 43#/43 = product of primes <= 41
  const auto m = primorial(43, 43);
  CHECK(m.value() == BigInt("304250263527210"));
  CHECK(m.factors().size() == 13);
  CHECK(m.factors().back().prime == 41);

  CHECK_THROWS_AS(primorial(1), std::invalid_argument);
  CHECK_THROWS_AS(primorial(10, 4), std::invalid_argument);   // not prime
  CHECK_THROWS_AS(primorial(10, 11), std::invalid_argument);  // > n

  SUBCASE("divisibility is monotone in n") {
    const std::uint64_t ns[] = {2, 3, 10, 100, 101, 997};
    for (std::uint64_t n : ns) {
      CHECK(mpz_divisible_p(primorial(1000).value().get_mpz_t(),
                            primorial(n).value().get_mpz_t()));
    }
  }
}

TEST_CASE("primorial(23143, 43) matches the recorded flagship sizes") {
  const auto m = primorial(23143, 43);
  CHECK(m.value().get_str().size() == 9991);
  const BigInt x = BigInt("310927391") * m.value();
  CHECK(x.get_str().size() == 10000);
  // Consistency with the 60000-digit target: the sextic's value at x must
  // have exactly 60000 digits.
  CHECK(composed_sextic().eval(x).get_str().size() == 60000);
}

TEST_CASE("mertens product") {
  CHECK(static_cast<double>(mertens_product(10)) == doctest::Approx(8.0 / 35).epsilon(1e-12));
  CHECK(static_cast<double>(mertens_product(2)) == doctest::Approx(0.5).epsilon(1e-15));
  // Within 1.5% of the Mertens asymptotic at 10^6.
  const long double asym = std::exp(-0.5772156649015329L) / std::log(1e6L);
  const long double got = mertens_product(1'000'000);
  CHECK(static_cast<double>(std::abs(got - asym) / asym) < 0.015);

  SUBCASE("strictly decreasing as B crosses each new prime") {
    long double prev = 2;
    const std::uint64_t bs[] = {2, 3, 5, 10, 100, 1000, 10'000};
    for (std::uint64_t b : bs) {
      const long double v = mertens_product(b);
      CHECK(v < prev);
      prev = v;
    }
    // Flat between primes.
    CHECK(mertens_product(3) == mertens_product(4));
  }
}

TEST_CASE("factor_small") {
  auto r = factor_small(210, 20);
  REQUIRE(r);
  CHECK(r->value() == 210);
  CHECK(r->factors().size() == 4);

  // The paper's multiplier: 310927391 = 37 * 137 * 61339.
  auto k = factor_small(BigInt("310927391"), 1'000'000);
  REQUIRE(k);
  REQUIRE(k->factors().size() == 3);
  CHECK(k->factors()[0].prime == 37);
  CHECK(k->factors()[1].prime == 137);
  CHECK(k->factors()[2].prime == 61339);

  CHECK(!factor_small(4, 1).has_value());
  auto one = factor_small(1, 10);
  REQUIRE(one);
  CHECK(one->value() == 1);
  CHECK(one->factors().empty());

  // Prime survivor above the bound is still recognized.
  auto p = factor_small(BigInt("1000003"), 10);
  REQUIRE(p);
  CHECK(p->factors().size() == 1);

  // Composite cofactor of two large primes fails.
  CHECK(!factor_small(BigInt("1000003") * BigInt("1000033"), 10).has_value());

  CHECK_THROWS_AS(factor_small(0, 10), std::invalid_argument);
}
