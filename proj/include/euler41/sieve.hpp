#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "euler41/arith.hpp"

namespace euler41 {

// Parameters of one search: candidates are x = k * M for k in [kmin, kmax],
// where M = (product of primes <= n) / d.
struct SearchConfig {
  std::uint64_t n = 23143;          // primorial bound
  std::uint64_t d = 43;             // excluded prime, or 1 for no exclusion
  std::uint64_t kmin = 1;
  std::uint64_t kmax = 1;
  std::uint64_t sieve_bound = 50'000'000'000ULL;
  std::uint64_t prp_base = 3;

  // Throws std::invalid_argument on violated invariants (kmin <= kmax,
  // d prime and <= n unless 1, M even, base >= 2).
  void validate() const;

  // M as a factored integer; recomputed on demand.
  FactoredInteger primorial_part() const;

  bool operator==(const SearchConfig&) const = default;
};

struct SieveReport {
  std::uint64_t primes_applied = 0;
  std::uint64_t bits_cleared = 0;
};

// Bitmap of surviving multipliers k, 1 bit per k - kmin. Sieving clears the
// bit of every k for which h(kM) or f(g(kM)) has a prime factor in the
// applied range; bits never come back.
class CandidateMap {
public:
  // All bits set, nothing applied. CapacityError when the range exceeds 2^32.
  static CandidateMap fresh(const SearchConfig& config);

  const SearchConfig& config() const { return config_; }
  const BigInt& multiplier() const { return M_; }

  std::uint64_t size() const { return config_.kmax - config_.kmin + 1; }
  bool alive(std::uint64_t k) const;
  std::uint64_t survivor_count() const;

  // Ascending k over surviving bits; f returning false stops the walk.
  template <typename F>
  void for_each_survivor(F&& f) const {
    for (std::uint64_t k = config_.kmin; k <= config_.kmax; ++k) {
      if (alive(k) && !f(k)) return;
    }
  }
  std::vector<std::uint64_t> survivors() const;

  // Applies every prime p in (p_lo_exclusive, p_hi_inclusive]: with
  // m = M mod p != 0, each root r of h or f(g(x)) mod p eliminates
  // k == r * m^-1 (mod p). Re-applying a range is a no-op on the bitmap.
  // p_hi must not exceed config().sieve_bound.
  SieveReport sieve_range(std::uint64_t p_lo_exclusive, std::uint64_t p_hi_inclusive);

  // Largest T such that every prime <= T has been applied.
  std::uint64_t sieved_to() const;

  // Bitwise AND of two maps over identical configs; applied ranges are
  // unioned, so disjointly complementary partitions merge to the full range.
  static CandidateMap merge(const CandidateMap& a, const CandidateMap& b);

  // Checkpoint file, bit-exact: magic "E41S", u32 LE version, then n, d,
  // kmin, kmax, sieved_to as u64 LE, the bitmap LSB-first per byte, and a
  // CRC-32 (IEEE) of all preceding bytes as u32 LE. Atomic via tmp+rename.
  void save(const std::filesystem::path& path) const;

  // FormatError (with byte offset) on bad magic, version, length or CRC.
  // The checkpoint does not carry sieve_bound/prp_base; callers may override
  // the defaults here.
  static CandidateMap load(const std::filesystem::path& path,
                           std::optional<std::uint64_t> sieve_bound = std::nullopt,
                           std::uint64_t prp_base = 3);

private:
  CandidateMap() = default;
  void clear_bit(std::uint64_t index, std::uint64_t& cleared);
  void note_applied(std::uint64_t lo_exclusive, std::uint64_t hi_inclusive);

  SearchConfig config_;
  BigInt M_;
  std::vector<std::uint64_t> bits_;
  // Disjoint applied prime ranges (lo, hi], ascending, merged when touching.
  std::vector<std::pair<std::uint64_t, std::uint64_t>> applied_;
};

}  // namespace euler41
