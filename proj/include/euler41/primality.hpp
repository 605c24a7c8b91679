#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "euler41/arith.hpp"

namespace euler41 {

// ---------------------------------------------------------------------------
// Fermat probable-prime testing
// ---------------------------------------------------------------------------

struct PrpResult {
  bool probable_prime = false;
  std::string note;  // "even", "shares factor ... with base", empty when clean
};

// a^(N-1) == 1 (mod N)? Even N and gcd(base, N) > 1 report false with a note.
// N >= 3, base >= 2 (std::invalid_argument otherwise).
PrpResult fermat_prp_ex(const BigInt& N, const BigInt& base);
bool fermat_prp(const BigInt& N, const BigInt& base);

// ---------------------------------------------------------------------------
// Certificates: everything needed to re-verify an N-1 primality proof where
// N - 1 = F * R, F even and fully factored, F^3 > N/2.
// ---------------------------------------------------------------------------

enum class CertStage { h_stage, fg_stage, generic };

std::string to_string(CertStage s);
std::optional<CertStage> cert_stage_from_string(const std::string& s);

struct WitnessEntry {
  BigInt p;  // a distinct prime of F
  BigInt a;  // base with a^(N-1) == 1 and gcd(a^((N-1)/p) - 1, N) == 1

  bool operator==(const WitnessEntry&) const = default;
};

struct BLSCertificate {
  BigInt N;
  CertStage stage = CertStage::generic;
  std::optional<BigInt> x;  // provenance: the x behind an h-stage/fg-stage N
  FactoredInteger F;
  BigInt R;
  std::vector<WitnessEntry> witnesses;
  BigInt q;
  BigInt r;  // R = 2*F*q + r with 1 <= r < 2*F

  // JSON wire format: every integer is a decimal string; F is an array of
  // [prime, exponent] pairs, witnesses an array of [p_i, a_i] pairs.
  std::string to_json() const;
  static BLSCertificate from_json(const std::string& text);  // FormatError on bad input

  void save(const std::filesystem::path& path) const;
  static BLSCertificate load(const std::filesystem::path& path);
};

// Verification verdict: `proved` iff every condition holds; otherwise
// `condition` names the first violated check, one of:
//   "N-parity", "F-even", "F-factorization", "F-R-split", "witness-coverage",
//   "condition-1", "qr-split", "condition-3", "condition-2".
struct Verdict {
  bool proved = false;
  std::string condition;
  std::string detail;
};

// Re-validates everything from scratch; trusts nothing in the certificate.
Verdict bls_check(const BLSCertificate& cert);

// ---------------------------------------------------------------------------
// Witness search and certificate construction
// ---------------------------------------------------------------------------

struct WitnessOutcome {
  enum class Status { found, probable_composite, factor_found, cap_exhausted };
  Status status = Status::cap_exhausted;
  BigInt value;  // the witness when found; a nontrivial divisor for factor_found
};

// Smallest a >= 2 with a^(N-1) == 1 (mod N) and gcd(a^((N-1)/p) - 1, N) = 1.
// Aborts early with probable_composite when some coprime base fails Fermat;
// reports factor_found when a gcd lands strictly between 1 and N.
WitnessOutcome witness_search(const BigInt& N, const BigInt& p, std::uint64_t cap = 1000);

enum class ProveError {
  none,
  augmentation_required,  // x too small for F = x to clear condition (1)
  no_witness,             // witness search exhausted or probable compositeness
  precondition,           // parity or structural preconditions violated
  split_unusable,         // no q, r with R = 2Fq + r, 1 <= r < 2F
};

struct ProveResult {
  std::optional<BLSCertificate> cert;
  ProveError error = ProveError::none;
  std::string detail;

  bool ok() const { return error == ProveError::none; }
};

// Proof of N = 40x^2 + x + 1 from fully factored even x >= 22:
// N - 1 = x * (40x + 1), F = x.
ProveResult bls_prove_h(const FactoredInteger& x, std::uint64_t witness_cap = 1000);

// Proof of N = f(g(x)) for even x, given a proved certificate for
// h(x) = 40x^2 + x + 1: F = 2*h(x), R = i(x)/2.
ProveResult bls_prove_fg(const BigInt& x, const BLSCertificate& h_cert,
                         std::uint64_t witness_cap = 1000);

}  // namespace euler41
