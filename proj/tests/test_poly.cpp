#include <doctest.h>

#include <algorithm>
#include <random>

#include "euler41/poly.hpp"

using namespace euler41;

namespace {

// Exhaustive root oracle over F_p.
std::vector<std::uint64_t> roots_by_scan(const PolyZ& P, std::uint64_t p) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t r = 0; r < p; ++r) {
    BigInt v = P.eval(BigInt(static_cast<unsigned long>(r)));
    if (mpz_fdiv_ui(v.get_mpz_t(), p) == 0) out.push_back(r);
  }
  return out;
}

}  // namespace

TEST_CASE("ring operations") {
  const PolyZ& f = euler_poly();
  const PolyZ& g = substitution_cubic();
  const PolyZ& h = cofactor_quadratic();
  const PolyZ& i = cofactor_quartic();

  const PolyZ fg = f.compose(g);
  CHECK(fg.degree() == 6);
  CHECK(fg.coeff(6) == 1600);

  const PolyZ one{1};
  CHECK(h * i == fg - one);

  const PolyZ identity{0, 1};
  CHECK(f.compose(identity) == f);
  CHECK(composed_sextic() == fg);

  CHECK((PolyZ{1, 2} + PolyZ{3, -2}).degree() == 0);
  CHECK((PolyZ{1, 1} - PolyZ{1, 1}).is_zero());
  CHECK((PolyZ() * PolyZ{5, 5}).is_zero());
}

TEST_CASE("evaluation") {
  CHECK(substitution_cubic().eval(2) == 569);
  CHECK(euler_poly().eval(569) == 324371);
  CHECK(euler_poly().eval(40) == 1681);  // 41^2, first composite after the streak
  CHECK(cofactor_quadratic().eval(0) == 1);
  CHECK(composed_sextic().eval(0) == 43);
  CHECK(cofactor_quadratic().eval(-1) == 40);
}

TEST_CASE("factorization identity") {
  CHECK(verify_euler_identity());

  // Perturbing h's constant term must break the product comparison.
  const PolyZ h_bad{2, 1, 40};
  const PolyZ one{1};
  CHECK(h_bad * cofactor_quartic() != composed_sextic() - one);

  // Spot check at x = 10, both routes computed exactly.
  const BigInt lhs = composed_sextic().eval(10) - 1;
  const BigInt rhs = cofactor_quadratic().eval(10) * cofactor_quartic().eval(10);
  CHECK(lhs == rhs);
  CHECK(lhs == BigInt("1982164002"));
}

TEST_CASE("to_string") {
  CHECK(euler_poly().to_string() == "x^2 + x + 41");
  CHECK(cofactor_quadratic().to_string() == "40x^2 + x + 1");
  CHECK(composed_sextic().to_string() ==
        "1600x^6 + 3280x^5 + 5041x^4 + 3564x^3 + 1887x^2 + 126x + 43");
  CHECK(PolyZ().to_string() == "0");
  CHECK(PolyZ{-1, -2}.to_string() == "-2x - 1");
}

TEST_CASE("roots_mod_p examples") {
  CHECK(roots_mod_p(cofactor_quadratic(), 7) == std::vector<std::uint64_t>{1, 3});
  CHECK(roots_mod_p(euler_poly(), 41) == std::vector<std::uint64_t>{0, 40});
  CHECK(roots_mod_p(euler_poly(), 3).empty());
  CHECK(roots_mod_p(composed_sextic(), 3).empty());
  CHECK(roots_mod_p(composed_sextic(), 7).empty());
  CHECK(roots_mod_p(composed_sextic(), 43) == std::vector<std::uint64_t>{0, 5, 23, 35});
  CHECK(roots_mod_p(cofactor_quadratic(), 43) == std::vector<std::uint64_t>{4, 25});

  // Reduction drops the degree when p divides leading coefficients.
  CHECK(roots_mod_p(cofactor_quadratic(), 2) == std::vector<std::uint64_t>{1});
  CHECK(roots_mod_p(cofactor_quadratic(), 5) == std::vector<std::uint64_t>{4});

  CHECK_THROWS_AS(roots_mod_p(PolyZ{7, 7}, 7), std::invalid_argument);
  CHECK_THROWS_AS(roots_mod_p(PolyZ(), 5), std::invalid_argument);
}

TEST_CASE("euler_poly has no roots mod any prime p < 41") {
  for_primes(1, 40, [&](std::uint64_t p) {
    for (std::uint64_t r = 0; r < p; ++r) {
      const BigInt v = euler_poly().eval(BigInt(static_cast<unsigned long>(r)));
      REQUIRE(mpz_fdiv_ui(v.get_mpz_t(), p) != 0);
    }
    CHECK(roots_mod_p(euler_poly(), p).empty());
  });
}

TEST_CASE("roots agree with exhaustive scan for small primes") {
  std::vector<std::uint64_t> primes;
  for_primes(1, 300, [&](std::uint64_t p) { primes.push_back(p); });
  const PolyZ polys[] = {cofactor_quadratic(), composed_sextic(), cofactor_quartic(),
                         substitution_cubic()};
  for (std::uint64_t p : primes) {
    for (const PolyZ& P : polys) {
      REQUIRE(roots_mod_p(P, p) == roots_by_scan(P, p));
    }
  }
}

TEST_CASE("roots on random primes: scan equivalence and membership") {
  std::mt19937_64 rng(163);
  std::vector<std::uint64_t> small_primes, big_primes;
  while (small_primes.size() < 400) {
    std::uint64_t c = 1000 + rng() % 9000;
    if (is_prime_u64(c)) small_primes.push_back(c);
  }
  while (big_primes.size() < 600) {
    std::uint64_t c = 1000 + rng() % 999'000;
    if (is_prime_u64(c)) big_primes.push_back(c);
  }

  for (std::uint64_t p : small_primes) {
    // p <= 10^4: full equivalence with the exhaustive oracle.
    REQUIRE(roots_mod_p(cofactor_quadratic(), p) == roots_by_scan(cofactor_quadratic(), p));
    REQUIRE(roots_mod_p(composed_sextic(), p) == roots_by_scan(composed_sextic(), p));
  }
  for (std::uint64_t p : big_primes) {
    // Larger p: every returned root must evaluate to 0 mod p, counts bounded
    // by the degrees.
    for (const PolyZ& P : {cofactor_quadratic(), composed_sextic()}) {
      const auto roots = roots_mod_p(P, p);
      for (std::uint64_t r : roots) {
        const BigInt v = P.eval(BigInt(static_cast<unsigned long>(r)));
        REQUIRE(mpz_fdiv_ui(v.get_mpz_t(), p) == 0);
      }
      REQUIRE(std::is_sorted(roots.begin(), roots.end()));
      REQUIRE(std::adjacent_find(roots.begin(), roots.end()) == roots.end());
    }
    REQUIRE(roots_mod_p(cofactor_quadratic(), p).size() <= 2);
    REQUIRE(roots_mod_p(composed_sextic(), p).size() <= 6);
  }
}

TEST_CASE("quadratic root existence tracks the discriminant") {
  // disc(h) = 1 - 160 = -159; for p not dividing 80, h has a root mod p iff
  // legendre(-159, p) >= 0.
  for_primes(2, 2000, [&](std::uint64_t p) {
    if (80 % p == 0) return;
    const bool has_root = !roots_mod_p(cofactor_quadratic(), p).empty();
    const int chi = legendre(-159, BigInt(static_cast<unsigned long>(p)));
    CHECK(has_root == (chi >= 0));
  });
}

TEST_CASE("QuadraticSpec validation") {
  QuadraticSpec euler{1, 1, 41};
  CHECK_NOTHROW(euler.validate());
  CHECK(euler.discriminant() == -163);

  QuadraticSpec ruby{36, -810, 2753};
  CHECK_NOTHROW(ruby.validate());

  CHECK_THROWS_AS((QuadraticSpec{-1, 1, 41}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuadraticSpec{2, 4, 8}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((QuadraticSpec{1, 2, 1}.validate()), std::invalid_argument);  // disc = 0
  CHECK_THROWS_AS((QuadraticSpec{1, 1, 2}.validate()), std::invalid_argument);  // a+b, c even
}
