#pragma once

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "euler41/arith.hpp"

namespace euler41 {

// Dense polynomial over Z. coeffs[i] is the degree-i coefficient; the
// representation is normalized so the last entry is nonzero (zero polynomial
// = empty sequence).
class PolyZ {
public:
  PolyZ() = default;
  explicit PolyZ(std::vector<BigInt> coeffs);
  PolyZ(std::initializer_list<long> coeffs);

  bool is_zero() const { return coeffs_.empty(); }
  // -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const BigInt& coeff(std::size_t i) const;
  const std::vector<BigInt>& coeffs() const { return coeffs_; }

  BigInt eval(const BigInt& x) const;
  PolyZ compose(const PolyZ& inner) const;

  // Human form, highest degree first, e.g. "40x^2 + x + 1".
  std::string to_string() const;

  friend PolyZ operator+(const PolyZ& a, const PolyZ& b);
  friend PolyZ operator-(const PolyZ& a, const PolyZ& b);
  friend PolyZ operator*(const PolyZ& a, const PolyZ& b);
  bool operator==(const PolyZ&) const = default;

private:
  void normalize();
  std::vector<BigInt> coeffs_;
};

// The fixed quartet behind the construction: Euler's polynomial, the cubic
// substitution that makes f(g(x)) - 1 split, and the two cofactors of the
// split.
const PolyZ& euler_poly();         // x^2 + x + 41
const PolyZ& substitution_cubic(); // 40x^3 + 41x^2 + 42x + 1
const PolyZ& cofactor_quadratic(); // 40x^2 + x + 1
const PolyZ& cofactor_quartic();   // 40x^4 + 81x^3 + 123x^2 + 84x + 42
const PolyZ& composed_sextic();    // euler_poly() o substitution_cubic()

// True iff composed_sextic() - 1 == cofactor_quadratic() * cofactor_quartic()
// exactly AND composed_sextic() matches its published coefficients
// [43, 126, 1887, 3564, 5041, 3280, 1600] term for term.
bool verify_euler_identity();

// Distinct roots of P modulo a prime p, ascending. P must be nonzero mod p
// (std::invalid_argument otherwise). Degree <= 2 goes through the explicit
// formula with a deterministic modular square root; higher degrees take
// gcd(x^p - x, P) followed by equal-degree splitting seeded from (p, P).
std::vector<std::uint64_t> roots_mod_p(const PolyZ& P, std::uint64_t p);

// Hypotheses of the Hardy-Littlewood quadratic: a > 0, gcd(a,b,c) = 1,
// b^2 - 4ac not a perfect square, a+b and c not both even.
struct QuadraticSpec {
  BigInt a, b, c;

  // Throws std::invalid_argument naming the violated hypothesis.
  void validate() const;
  BigInt discriminant() const { return b * b - 4 * a * c; }
  BigInt eval(const BigInt& x) const { return (a * x + b) * x + c; }
};

}  // namespace euler41
