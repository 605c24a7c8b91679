#include "euler41/primality.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "euler41/errors.hpp"
#include "euler41/poly.hpp"

namespace euler41 {

// ---------------------------------------------------------------------------
// Fermat PRP
// ---------------------------------------------------------------------------

PrpResult fermat_prp_ex(const BigInt& N, const BigInt& base) {
  if (N < 3) throw std::invalid_argument("fermat_prp: N must be >= 3");
  if (base < 2) throw std::invalid_argument("fermat_prp: base must be >= 2");
  if (mpz_even_p(N.get_mpz_t())) return {false, "even"};
  BigInt g;
  mpz_gcd(g.get_mpz_t(), base.get_mpz_t(), N.get_mpz_t());
  if (g > 1) return {false, "shares factor " + g.get_str() + " with base"};
  return {modpow(base, N - 1, N) == 1, ""};
}

bool fermat_prp(const BigInt& N, const BigInt& base) {
  return fermat_prp_ex(N, base).probable_prime;
}

// ---------------------------------------------------------------------------
// Certificate JSON
// ---------------------------------------------------------------------------

std::string to_string(CertStage s) {
  switch (s) {
    case CertStage::h_stage: return "h-stage";
    case CertStage::fg_stage: return "fg-stage";
    case CertStage::generic: return "generic";
  }
  return "generic";
}

std::optional<CertStage> cert_stage_from_string(const std::string& s) {
  if (s == "h-stage") return CertStage::h_stage;
  if (s == "fg-stage") return CertStage::fg_stage;
  if (s == "generic") return CertStage::generic;
  return std::nullopt;
}

namespace {

using nlohmann::json;

BigInt parse_decimal(const json& j, const char* field) {
  if (!j.is_string()) throw FormatError(std::string("certificate: ") + field + " must be a decimal string");
  const std::string& s = j.get_ref<const std::string&>();
  BigInt v;
  if (s.empty() || mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0)
    throw FormatError(std::string("certificate: ") + field + " is not a decimal integer: " + s);
  return v;
}

}  // namespace

std::string BLSCertificate::to_json() const {
  json j;
  j["version"] = 1;
  j["stage"] = euler41::to_string(stage);
  j["N"] = N.get_str();
  if (x) j["x"] = x->get_str();
  json jf = json::array();
  for (const auto& f : F.factors())
    jf.push_back(json::array({f.prime.get_str(), std::to_string(f.exponent)}));
  j["F"] = jf;
  j["R"] = R.get_str();
  json jw = json::array();
  for (const auto& w : witnesses) jw.push_back(json::array({w.p.get_str(), w.a.get_str()}));
  j["witnesses"] = jw;
  j["q"] = q.get_str();
  j["r"] = r.get_str();
  return j.dump(1);
}

BLSCertificate BLSCertificate::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("certificate: ") + e.what(), e.byte);
  }
  if (!j.is_object()) throw FormatError("certificate: top level must be an object");
  for (const char* field : {"version", "stage", "N", "F", "R", "witnesses", "q", "r"})
    if (!j.contains(field)) throw FormatError(std::string("certificate: missing field ") + field);
  if (!j["version"].is_number_integer() || j["version"].get<int>() != 1)
    throw FormatError("certificate: unsupported version");

  BLSCertificate c;
  auto stage = cert_stage_from_string(j["stage"].get<std::string>());
  if (!stage) throw FormatError("certificate: unknown stage " + j["stage"].dump());
  c.stage = *stage;
  c.N = parse_decimal(j["N"], "N");
  if (j.contains("x")) c.x = parse_decimal(j["x"], "x");
  if (!j["F"].is_array()) throw FormatError("certificate: F must be an array");
  std::vector<PrimePower> factors;
  for (const auto& e : j["F"]) {
    if (!e.is_array() || e.size() != 2) throw FormatError("certificate: F entries must be [prime, exponent]");
    BigInt prime = parse_decimal(e[0], "F.prime");
    BigInt expo = parse_decimal(e[1], "F.exponent");
    if (expo < 1 || !expo.fits_uint_p()) throw FormatError("certificate: bad F exponent");
    factors.push_back({prime, static_cast<std::uint32_t>(expo.get_ui())});
  }
  c.F = FactoredInteger::claim(std::move(factors));
  c.R = parse_decimal(j["R"], "R");
  if (!j["witnesses"].is_array()) throw FormatError("certificate: witnesses must be an array");
  for (const auto& e : j["witnesses"]) {
    if (!e.is_array() || e.size() != 2)
      throw FormatError("certificate: witness entries must be [p, a]");
    c.witnesses.push_back({parse_decimal(e[0], "witness.p"), parse_decimal(e[1], "witness.a")});
  }
  c.q = parse_decimal(j["q"], "q");
  c.r = parse_decimal(j["r"], "r");
  return c;
}

void BLSCertificate::save(const std::filesystem::path& path) const {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << to_json() << "\n";
  }
  std::filesystem::rename(tmp, path);
}

BLSCertificate BLSCertificate::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

Verdict bls_check(const BLSCertificate& cert) {
  const BigInt& N = cert.N;
  if (N <= 1 || mpz_even_p(N.get_mpz_t()))
    return {false, "N-parity", "N must be odd and > 1"};

  const BigInt& F = cert.F.value();
  if (F < 2 || mpz_odd_p(F.get_mpz_t())) return {false, "F-even", "F must be even"};

  // The factorization of F is a claim until every base is re-checked prime,
  // strictly increasing, and the product matches.
  BigInt product = 1;
  const BigInt* prev = nullptr;
  for (const auto& f : cert.F.factors()) {
    if (f.exponent == 0) return {false, "F-factorization", "zero exponent"};
    if (prev && !(*prev < f.prime))
      return {false, "F-factorization", "primes not strictly increasing"};
    if (!is_prime_checked(f.prime))
      return {false, "F-factorization", "listed prime fails primality check: " + f.prime.get_str()};
    BigInt pw;
    mpz_pow_ui(pw.get_mpz_t(), f.prime.get_mpz_t(), f.exponent);
    product *= pw;
    prev = &f.prime;
  }
  if (product != F) return {false, "F-factorization", "prime powers do not multiply to F"};

  if (F * cert.R != N - 1) return {false, "F-R-split", "N - 1 != F * R"};

  // Every distinct prime of F needs exactly one witness.
  if (cert.witnesses.size() != cert.F.factors().size())
    return {false, "witness-coverage", "one witness per distinct prime of F"};
  for (std::size_t i = 0; i < cert.witnesses.size(); ++i) {
    if (cert.witnesses[i].p != cert.F.factors()[i].prime)
      return {false, "witness-coverage", "witness primes must match F's primes in order"};
  }

  // Condition (1), exact integer form: 2*F^3 > N.
  if (2 * F * F * F <= N)
    return {false, "condition-1", "F^3 <= N/2"};

  // R = 2Fq + r with 1 <= r < 2F.
  if (cert.q < 0 || cert.r < 1 || cert.r >= 2 * F || 2 * F * cert.q + cert.r != cert.R)
    return {false, "qr-split", "R != 2Fq + r with 1 <= r < 2F"};

  // Condition (3): q = 0 or r^2 - 8q not a perfect square.
  if (cert.q != 0 && is_perfect_square(cert.r * cert.r - 8 * cert.q))
    return {false, "condition-3", "r^2 - 8q is a perfect square"};

  // Condition (2), the expensive one last: per-prime witnesses.
  const BigInt Nm1 = N - 1;
  for (const auto& w : cert.witnesses) {
    if (w.a < 2) return {false, "condition-2", "witness base must be >= 2"};
    const BigInt part = modpow(w.a, Nm1 / w.p, N);
    BigInt full = modpow(part, w.p, N);
    if (full != 1)
      return {false, "condition-2", "a^(N-1) != 1 for p = " + w.p.get_str()};
    BigInt g;
    BigInt pm1 = part - 1;
    mpz_gcd(g.get_mpz_t(), pm1.get_mpz_t(), N.get_mpz_t());
    if (g != 1)
      return {false, "condition-2", "gcd(a^((N-1)/p) - 1, N) != 1 for p = " + w.p.get_str()};
  }

  return {true, "", ""};
}

// ---------------------------------------------------------------------------
// Witness search and provers
// ---------------------------------------------------------------------------

WitnessOutcome witness_search(const BigInt& N, const BigInt& p, std::uint64_t cap) {
  if (N < 3 || mpz_even_p(N.get_mpz_t()))
    throw std::invalid_argument("witness_search: N must be odd and >= 3");
  if (!mpz_divisible_p(BigInt(N - 1).get_mpz_t(), p.get_mpz_t()))
    throw std::invalid_argument("witness_search: p must divide N - 1");

  const BigInt Nm1 = N - 1;
  const BigInt reduced = Nm1 / p;
  for (BigInt a = 2; a <= static_cast<long>(cap) && a < N - 1; ++a) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), N.get_mpz_t());
    if (g > 1) return {WitnessOutcome::Status::factor_found, g};

    const BigInt part = modpow(a, reduced, N);
    if (modpow(part, p, N) != 1) {
      // A coprime base failing Fermat proves N composite.
      return {WitnessOutcome::Status::probable_composite, a};
    }
    BigInt pm1 = part - 1;
    mpz_gcd(g.get_mpz_t(), pm1.get_mpz_t(), N.get_mpz_t());
    if (g == 1) return {WitnessOutcome::Status::found, a};
    if (g < N) return {WitnessOutcome::Status::factor_found, g};
    // g == N: a has small order for this p; try the next base.
  }
  return {WitnessOutcome::Status::cap_exhausted, 0};
}

namespace {

ProveResult witness_failure(const WitnessOutcome& w, const BigInt& p) {
  switch (w.status) {
    case WitnessOutcome::Status::probable_composite:
      return {std::nullopt, ProveError::no_witness,
              "probable composite: base " + w.value.get_str() + " fails the Fermat condition"};
    case WitnessOutcome::Status::factor_found:
      return {std::nullopt, ProveError::no_witness,
              "composite: nontrivial factor " + w.value.get_str() + " found"};
    default:
      return {std::nullopt, ProveError::no_witness,
              "witness cap exhausted for p = " + p.get_str()};
  }
}

// R = 2Fq + r with 1 <= r < 2F.
bool split_qr(const BigInt& R, const BigInt& F, BigInt& q, BigInt& r) {
  const BigInt twoF = 2 * F;
  q = R / twoF;
  r = R - q * twoF;
  return r >= 1;
}

}  // namespace

ProveResult bls_prove_h(const FactoredInteger& x, std::uint64_t witness_cap) {
  if (mpz_odd_p(x.value().get_mpz_t()))
    return {std::nullopt, ProveError::precondition, "x must be even"};
  if (x.value() < 22)
    return {std::nullopt, ProveError::augmentation_required,
            "x < 22: F = x cannot clear condition (1) at this size"};

  const BigInt& xv = x.value();
  const BigInt N = cofactor_quadratic().eval(xv);
  const BigInt R = 40 * xv + 1;

  BLSCertificate cert;
  cert.N = N;
  cert.stage = CertStage::h_stage;
  cert.x = xv;
  cert.F = x;
  cert.R = R;
  if (!split_qr(R, xv, cert.q, cert.r))
    return {std::nullopt, ProveError::split_unusable, "R is a multiple of 2F"};

  for (const auto& f : x.factors()) {
    WitnessOutcome w = witness_search(N, f.prime, witness_cap);
    if (w.status != WitnessOutcome::Status::found) return witness_failure(w, f.prime);
    cert.witnesses.push_back({f.prime, w.value});
  }

  Verdict v = bls_check(cert);
  if (!v.proved)
    return {std::nullopt, ProveError::no_witness,
            "constructed certificate rejected at " + v.condition + ": " + v.detail};
  return {cert, ProveError::none, ""};
}

ProveResult bls_prove_fg(const BigInt& x, const BLSCertificate& h_cert, std::uint64_t witness_cap) {
  if (mpz_odd_p(x.get_mpz_t()))
    return {std::nullopt, ProveError::precondition, "x must be even"};
  const BigInt h = cofactor_quadratic().eval(x);
  if (h_cert.N != h)
    return {std::nullopt, ProveError::precondition, "h certificate is not for h(x)"};
  Verdict hv = bls_check(h_cert);
  if (!hv.proved)
    return {std::nullopt, ProveError::precondition,
            "h certificate does not verify: " + hv.condition};

  const BigInt N = composed_sextic().eval(x);
  const BigInt i = cofactor_quartic().eval(x);
  if (mpz_odd_p(i.get_mpz_t()))
    return {std::nullopt, ProveError::precondition, "i(x) odd: internal invariant violated"};

  BLSCertificate cert;
  cert.N = N;
  cert.stage = CertStage::fg_stage;
  cert.x = x;
  cert.F = FactoredInteger::from_factors({{BigInt(2), 1}, {h, 1}});
  cert.R = i / 2;
  if (!split_qr(cert.R, cert.F.value(), cert.q, cert.r))
    return {std::nullopt, ProveError::split_unusable, "R is a multiple of 2F"};

  for (const BigInt& p : {BigInt(2), h}) {
    WitnessOutcome w = witness_search(N, p, witness_cap);
    if (w.status != WitnessOutcome::Status::found) return witness_failure(w, p);
    cert.witnesses.push_back({p, w.value});
  }

  Verdict v = bls_check(cert);
  if (!v.proved)
    return {std::nullopt, ProveError::no_witness,
            "constructed certificate rejected at " + v.condition + ": " + v.detail};
  return {cert, ProveError::none, ""};
}

}  // namespace euler41
