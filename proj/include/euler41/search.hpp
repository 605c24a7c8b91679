#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "euler41/primality.hpp"
#include "euler41/sieve.hpp"

namespace euler41 {

// One h-PRP log entry: the ordinal-th probable prime h(kM) found.
struct HPrpEntry {
  std::uint64_t ordinal = 0;
  std::uint64_t k = 0;
  std::uint64_t digits_h = 0;
  std::uint64_t digits_fg = 0;
};

// One hit: k whose h(x) and f(g(x)) both passed PRP. Certificate paths are
// relative to the state directory; empty when the pair stayed unproven.
struct HitRecord {
  std::uint64_t ordinal = 0;
  std::uint64_t k = 0;
  std::string h_cert_path;
  std::string fg_cert_path;
  bool proved = false;
};

// Persistent single-writer state directory:
//   config.json   search parameters
//   map.e41s      sieve checkpoint
//   cursor.json   last k fully processed
//   h_prp.log     append-only (ordinal, k, digit counts, timestamp)
//   hits.log      append-only (ordinal, k, cert paths, status)
//   certs/NNNN.{h,fg}.json
class SearchState {
public:
  // Fresh directory: config, unsieved map, empty logs.
  static SearchState create(const std::filesystem::path& dir, const SearchConfig& config);

  // Existing directory; config.json is derived from the map checkpoint when
  // missing (sieve bound defaulting to the checkpoint's sieved_to).
  static SearchState open(const std::filesystem::path& dir);

  const std::filesystem::path& dir() const { return dir_; }
  const SearchConfig& config() const { return config_; }
  const CandidateMap& map() const { return map_; }
  std::uint64_t cursor() const { return cursor_; }
  const std::vector<HPrpEntry>& h_prp_log() const { return h_prp_; }
  const std::vector<HitRecord>& hits() const { return hits_; }

private:
  friend struct PipelineRunner;
  SearchState() = default;
  void load_logs();

  std::filesystem::path dir_;
  SearchConfig config_;
  CandidateMap map_ = CandidateMap::fresh({.n = 2, .d = 1, .kmin = 1, .kmax = 1, .sieve_bound = 2});
  std::uint64_t cursor_ = 0;
  std::vector<HPrpEntry> h_prp_;
  std::vector<HitRecord> hits_;
};

struct PipelineBudget {
  std::optional<std::uint64_t> candidates;  // max survivors to process
  std::optional<double> wall_seconds;
};

struct PipelineSummary {
  std::uint64_t processed = 0;
  std::uint64_t h_passes = 0;
  std::uint64_t fg_tests = 0;
  std::uint64_t fg_passes = 0;
  std::uint64_t proved = 0;
  std::uint64_t unproven = 0;
  std::uint64_t cursor = 0;
};

// Walks surviving k past the cursor in ascending order: PRP-test h(kM), log
// passes, PRP-test f(g(kM)) for those, and prove both stages for full hits
// (unfactorable or unprovable hits are kept as unproven PRP pairs). Stops at
// the budget; the cursor only advances past fully processed candidates.
// Resuming after an interruption reproduces identical logs; `jobs` > 1
// parallelizes the h-stage tests without changing any output.
// Requires map.sieved_to() >= config.sieve_bound.
PipelineSummary run_pipeline(SearchState& state, const PipelineBudget& budget,
                             unsigned jobs = 1, bool timestamps = false);

struct VerifyReport {
  std::uint64_t certificates_checked = 0;
  std::uint64_t proved_hits = 0;
  std::uint64_t unproven_hits = 0;
  std::vector<std::string> findings;

  bool ok() const { return findings.empty(); }
};

// Re-verifies every stored certificate with bls_check, recomputes h-PRP
// ordinals, and cross-checks hits against the h-PRP log.
VerifyReport verify_run(const SearchState& state);

}  // namespace euler41
