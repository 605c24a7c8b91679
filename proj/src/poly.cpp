#include "euler41/poly.hpp"

#include <algorithm>
#include <stdexcept>

#include "euler41/mod64.hpp"

namespace euler41 {

// ---------------------------------------------------------------------------
// PolyZ
// ---------------------------------------------------------------------------

PolyZ::PolyZ(std::vector<BigInt> coeffs) : coeffs_(std::move(coeffs)) { normalize(); }

PolyZ::PolyZ(std::initializer_list<long> coeffs) {
  coeffs_.reserve(coeffs.size());
  for (long c : coeffs) coeffs_.emplace_back(c);
  normalize();
}

void PolyZ::normalize() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

const BigInt& PolyZ::coeff(std::size_t i) const {
  static const BigInt zero = 0;
  return i < coeffs_.size() ? coeffs_[i] : zero;
}

BigInt PolyZ::eval(const BigInt& x) const {
  BigInt acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

PolyZ PolyZ::compose(const PolyZ& inner) const {
  PolyZ acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * inner + PolyZ(std::vector<BigInt>{*it});
  return acc;
}

PolyZ operator+(const PolyZ& a, const PolyZ& b) {
  std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
  return PolyZ(std::move(c));
}

PolyZ operator-(const PolyZ& a, const PolyZ& b) {
  std::vector<BigInt> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
  return PolyZ(std::move(c));
}

PolyZ operator*(const PolyZ& a, const PolyZ& b) {
  if (a.is_zero() || b.is_zero()) return PolyZ();
  std::vector<BigInt> c(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return PolyZ(std::move(c));
}

std::string PolyZ::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  for (int i = degree(); i >= 0; --i) {
    const BigInt& c = coeffs_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    BigInt mag = abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (mag != 1 || i == 0) out += mag.get_str();
    if (i > 0) {
      out += "x";
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The fixed quartet
// ---------------------------------------------------------------------------

const PolyZ& euler_poly() {
  static const PolyZ f{41, 1, 1};
  return f;
}

const PolyZ& substitution_cubic() {
  static const PolyZ g{1, 42, 41, 40};
  return g;
}

const PolyZ& cofactor_quadratic() {
  static const PolyZ h{1, 1, 40};
  return h;
}

const PolyZ& cofactor_quartic() {
  static const PolyZ i{42, 84, 123, 81, 40};
  return i;
}

const PolyZ& composed_sextic() {
  static const PolyZ fg = euler_poly().compose(substitution_cubic());
  return fg;
}

bool verify_euler_identity() {
  static const PolyZ one{1};
  if (composed_sextic() - one != cofactor_quadratic() * cofactor_quartic()) return false;
  const PolyZ published{43, 126, 1887, 3564, 5041, 3280, 1600};
  return composed_sextic() == published;
}

// ---------------------------------------------------------------------------
// Roots modulo p
// ---------------------------------------------------------------------------

namespace {

using Fp = std::vector<std::uint64_t>;  // dense coeffs mod p, trimmed

void fp_trim(Fp& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Fp fp_reduce(const PolyZ& P, std::uint64_t p) {
  Fp a(P.coeffs().size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = mpz_fdiv_ui(P.coeffs()[i].get_mpz_t(), p);
  fp_trim(a);
  return a;
}

Fp fp_mul(const Fp& a, const Fp& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Fp c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p;
  }
  fp_trim(c);
  return c;
}

// a mod b, b nonzero.
Fp fp_mod(Fp a, const Fp& b, std::uint64_t p) {
  const std::uint64_t lead_inv = invmod64(b.back(), p);
  while (a.size() >= b.size()) {
    const std::uint64_t q = mulmod64(a.back(), lead_inv, p);
    const std::size_t shift = a.size() - b.size();
    if (q != 0) {
      for (std::size_t i = 0; i < b.size(); ++i) {
        const std::uint64_t sub = mulmod64(q, b[i], p);
        a[shift + i] = (a[shift + i] + p - sub) % p;
      }
    }
    a.pop_back();
    fp_trim(a);
    if (a.empty()) break;
  }
  return a;
}

void fp_make_monic(Fp& a, std::uint64_t p) {
  if (a.empty() || a.back() == 1) return;
  const std::uint64_t inv = invmod64(a.back(), p);
  for (auto& c : a) c = mulmod64(c, inv, p);
}

Fp fp_gcd(Fp a, Fp b, std::uint64_t p) {
  while (!b.empty()) {
    Fp r = fp_mod(std::move(a), b, p);
    a = std::move(b);
    b = std::move(r);
  }
  fp_make_monic(a, p);
  return a;
}

// base^e mod (m, p) by square and multiply.
Fp fp_powmod(Fp base, std::uint64_t e, const Fp& m, std::uint64_t p) {
  Fp r{1};
  base = fp_mod(std::move(base), m, p);
  while (e) {
    if (e & 1) r = fp_mod(fp_mul(r, base, p), m, p);
    base = fp_mod(fp_mul(base, base, p), m, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4ecb9aa515059ULL;
  return z ^ (z >> 31);
}

// Deterministic square root of a QR a mod odd prime p.
std::uint64_t sqrtmod64(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  if (p % 4 == 3) return powmod64(a, (p + 1) / 4, p);
  // Tonelli-Shanks with the smallest quadratic nonresidue as generator.
  std::uint64_t q = p - 1;
  unsigned s = 0;
  while (q % 2 == 0) q /= 2, ++s;
  std::uint64_t z = 2;
  while (powmod64(z, (p - 1) / 2, p) != p - 1) ++z;
  std::uint64_t m = s;
  std::uint64_t c = powmod64(z, q, p);
  std::uint64_t t = powmod64(a, q, p);
  std::uint64_t r = powmod64(a, (q + 1) / 2, p);
  while (t != 1) {
    std::uint64_t i = 0, tt = t;
    while (tt != 1) tt = mulmod64(tt, tt, p), ++i;
    std::uint64_t b = c;
    for (std::uint64_t j = 0; j + i + 1 < m; ++j) b = mulmod64(b, b, p);
    m = i;
    c = mulmod64(b, b, p);
    t = mulmod64(t, c, p);
    r = mulmod64(r, b, p);
  }
  return r;
}

// Splits a monic squarefree product of linear factors into roots.
void collect_roots(Fp g, std::uint64_t p, std::uint64_t& rng_state,
                   std::vector<std::uint64_t>& out) {
  if (g.size() < 2) return;
  if (g.size() == 2) {
    out.push_back((p - g[0]) % p);
    return;
  }
  // x | g means 0 is a root; peel it so the (x+delta)^((p-1)/2) trick only
  // sees nonzero roots.
  if (g[0] == 0) {
    out.push_back(0);
    g.erase(g.begin());
    if (g.size() < 2) return;
  }
  for (;;) {
    const std::uint64_t delta = splitmix64(rng_state) % p;
    Fp shifted{delta, 1};
    Fp w = fp_powmod(std::move(shifted), (p - 1) / 2, g, p);
    if (w.empty())
      w = Fp{p - 1};
    else
      w[0] = (w[0] + p - 1) % p;
    fp_trim(w);
    if (w.empty()) continue;  // (x+delta)^((p-1)/2) == 1 mod g, retry
    Fp d = fp_gcd(w, g, p);
    if (d.size() > 1 && d.size() < g.size()) {
      Fp quotient_side = fp_gcd(g, d, p);  // d itself; split g by division
      // Compute g / d by long division.
      Fp q;
      {
        Fp rem = g;
        const std::uint64_t lead_inv = invmod64(d.back(), p);
        q.assign(g.size() - d.size() + 1, 0);
        while (rem.size() >= d.size()) {
          const std::uint64_t qc = mulmod64(rem.back(), lead_inv, p);
          const std::size_t shift = rem.size() - d.size();
          q[shift] = qc;
          for (std::size_t i = 0; i < d.size(); ++i) {
            const std::uint64_t sub = mulmod64(qc, d[i], p);
            rem[shift + i] = (rem[shift + i] + p - sub) % p;
          }
          rem.pop_back();
          fp_trim(rem);
          if (rem.empty()) break;
        }
        fp_trim(q);
      }
      collect_roots(std::move(d), p, rng_state, out);
      collect_roots(std::move(q), p, rng_state, out);
      return;
    }
  }
}

}  // namespace

std::vector<std::uint64_t> roots_mod_p(const PolyZ& P, std::uint64_t p) {
  if (p < 2) throw std::invalid_argument("roots_mod_p: p must be prime");
  Fp a = fp_reduce(P, p);
  if (a.empty()) throw std::invalid_argument("roots_mod_p: P is zero mod p");
  if (a.size() == 1) return {};

  if (p == 2) {
    std::vector<std::uint64_t> roots;
    for (std::uint64_t r : {0, 1}) {
      std::uint64_t v = 0;
      for (auto it = a.rbegin(); it != a.rend(); ++it) v = (v * r + *it) % 2;
      if (v == 0) roots.push_back(r);
    }
    return roots;
  }

  std::vector<std::uint64_t> roots;
  if (a.size() == 2) {
    roots.push_back(mulmod64((p - a[0]) % p, invmod64(a[1], p), p));
  } else if (a.size() == 3) {
    const std::uint64_t c = a[0], b = a[1], lead = a[2];
    const std::uint64_t disc =
        (mulmod64(b, b, p) + p - mulmod64(4 % p, mulmod64(lead, c, p), p)) % p;
    const std::uint64_t inv2a = invmod64(mulmod64(2, lead, p), p);
    if (disc == 0) {
      roots.push_back(mulmod64((p - b) % p, inv2a, p));
    } else if (powmod64(disc, (p - 1) / 2, p) == 1) {
      const std::uint64_t s = sqrtmod64(disc, p);
      roots.push_back(mulmod64(((p - b) + s) % p, inv2a, p));
      roots.push_back(mulmod64(((p - b) + (p - s)) % p, inv2a, p));
    }
  } else {
    // gcd(x^p - x, a) isolates the distinct linear factors.
    Fp xp = fp_powmod(Fp{0, 1}, p, a, p);
    if (xp.size() < 2) xp.resize(2, 0);
    xp[1] = (xp[1] + p - 1) % p;  // x^p - x mod a
    fp_trim(xp);
    Fp g = xp.empty() ? a : fp_gcd(std::move(xp), a, p);
    fp_make_monic(g, p);
    if (g.size() > 1) {
      std::uint64_t seed = p * 0x9e3779b97f4a7c15ULL;
      for (std::uint64_t c : a) seed = seed * 1099511628211ULL + c;
      collect_roots(std::move(g), p, seed, roots);
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// QuadraticSpec
// ---------------------------------------------------------------------------

void QuadraticSpec::validate() const {
  if (a <= 0) throw std::invalid_argument("quadratic: a must be positive");
  BigInt g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g != 1) throw std::invalid_argument("quadratic: gcd(a,b,c) must be 1");
  if (is_perfect_square(discriminant()))
    throw std::invalid_argument("quadratic: b^2-4ac must not be a perfect square");
  if (mpz_even_p(BigInt(a + b).get_mpz_t()) && mpz_even_p(c.get_mpz_t()))
    throw std::invalid_argument("quadratic: a+b and c must not both be even");
}

}  // namespace euler41
