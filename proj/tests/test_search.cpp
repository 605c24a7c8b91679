#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "euler41/errors.hpp"
#include "euler41/poly.hpp"
#include "euler41/search.hpp"

using namespace euler41;
namespace fs = std::filesystem;

namespace {

// Desk-scale slice of the real configuration: n = 43, d = 43, base 3.
SearchConfig desk_config(std::uint64_t kmax = 600) {
  return {.n = 43, .d = 43, .kmin = 1, .kmax = kmax, .sieve_bound = 100'000, .prp_base = 3};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("euler41_search_" + name);
  fs::remove_all(dir);
  return dir;
}

// create + sieve + reopen: the normal external workflow.
SearchState make_state(const fs::path& dir, const SearchConfig& cfg) {
  SearchState::create(dir, cfg);
  auto map = CandidateMap::load(dir / "map.e41s", cfg.sieve_bound, cfg.prp_base);
  map.sieve_range(1, cfg.sieve_bound);
  map.save(dir / "map.e41s");
  return SearchState::open(dir);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Frozen from an independent brute-force run of the same configuration:
// k values whose h(kM) is a base-3 PRP, in order, for k <= 600, and the (one)
// k <= 600 with both members PRP (and genuinely prime).
const std::vector<std::uint64_t> kExpectedHPrpKs = {1,   4,   23,  57,  114, 166, 205, 234, 249,
                                                    361, 413, 477, 481, 487, 533, 540, 563};
constexpr std::uint64_t kExpectedHitK = 481;

}  // namespace

TEST_CASE("budget zero leaves the state untouched") {
  const auto dir = fresh_dir("budget0");
  SearchState st = make_state(dir, desk_config());
  const auto before_cursor = st.cursor();
  const PipelineSummary s = run_pipeline(st, {.candidates = 0});
  CHECK(s.processed == 0);
  CHECK(st.cursor() == before_cursor);
  CHECK(st.h_prp_log().empty());
  CHECK(st.hits().empty());
  fs::remove_all(dir);
}

TEST_CASE("pipeline requires a fully sieved map") {
  const auto dir = fresh_dir("undersieved");
  auto cfg = desk_config(50);
  SearchState::create(dir, cfg);  // fresh map, sieved_to = 1
  SearchState st = SearchState::open(dir);
  CHECK_THROWS_AS(run_pipeline(st, {}), std::invalid_argument);
  fs::remove_all(dir);
}

TEST_CASE("full pipeline run matches the frozen fixture") {
  const auto dir = fresh_dir("full");
  SearchState st = make_state(dir, desk_config());
  const PipelineSummary s = run_pipeline(st, {});

  CHECK(s.cursor == 600);
  CHECK(s.h_passes == kExpectedHPrpKs.size());
  CHECK(s.fg_tests == s.h_passes);
  CHECK(s.fg_passes == 1);
  CHECK(s.proved == 1);
  CHECK(s.unproven == 0);

  REQUIRE(st.h_prp_log().size() == kExpectedHPrpKs.size());
  for (std::size_t i = 0; i < kExpectedHPrpKs.size(); ++i) {
    CHECK(st.h_prp_log()[i].ordinal == i + 1);
    CHECK(st.h_prp_log()[i].k == kExpectedHPrpKs[i]);
  }
  REQUIRE(st.hits().size() == 1);
  CHECK(st.hits()[0].k == kExpectedHitK);
  CHECK(st.hits()[0].proved);
  CHECK(st.hits()[0].ordinal == 1);

  SUBCASE("digit counts recorded in the log") {
    CHECK(st.h_prp_log()[0].digits_h > 25);
    CHECK(st.h_prp_log()[0].digits_fg > 3 * st.h_prp_log()[0].digits_h - 10);
  }

  SUBCASE("certificates verify and match the hit") {
    const VerifyReport rep = verify_run(st);
    CHECK(rep.ok());
    CHECK(rep.certificates_checked == 2);
    CHECK(rep.proved_hits == 1);

    const BLSCertificate h_cert = BLSCertificate::load(dir / st.hits()[0].h_cert_path);
    CHECK(h_cert.stage == CertStage::h_stage);
    CHECK(h_cert.N == cofactor_quadratic().eval(BigInt(481) * st.map().multiplier()));
  }

  SUBCASE("hit values sit in the guaranteed residue classes") {
    // h(x) == 1 and f(g(x)) == 43 mod every prime p <= 41 (p != d = 43).
    const BigInt x = BigInt(static_cast<unsigned long>(kExpectedHitK)) * st.map().multiplier();
    const BigInt hv = cofactor_quadratic().eval(x);
    const BigInt fgv = composed_sextic().eval(x);
    for_primes(1, 41, [&](std::uint64_t p) {
      CHECK(mpz_fdiv_ui(hv.get_mpz_t(), p) == 1 % p);
      CHECK(mpz_fdiv_ui(fgv.get_mpz_t(), p) == 43 % p);
    });
  }

  SUBCASE("verify_run flags a tampered certificate") {
    const fs::path cert_path = dir / st.hits()[0].fg_cert_path;
    BLSCertificate cert = BLSCertificate::load(cert_path);
    cert.witnesses[1].a = cert.N - 1;  // fails condition (2) at the odd prime
    cert.save(cert_path);
    const VerifyReport rep = verify_run(st);
    CHECK(!rep.ok());
    bool saw_condition = false;
    for (const auto& f : rep.findings) saw_condition |= f.find("condition-2") != std::string::npos;
    CHECK(saw_condition);
  }

  SUBCASE("verify_run flags a missing certificate") {
    fs::remove(dir / st.hits()[0].h_cert_path);
    const VerifyReport rep = verify_run(st);
    CHECK(!rep.ok());
    bool saw_missing = false;
    for (const auto& f : rep.findings) saw_missing |= f.find("missing") != std::string::npos;
    CHECK(saw_missing);
  }

  fs::remove_all(dir);
}

TEST_CASE("resume equivalence: A then B equals A+B") {
  const auto cfg = desk_config();
  const auto dir1 = fresh_dir("split");
  const auto dir2 = fresh_dir("single");

  {
    SearchState st = make_state(dir1, cfg);
    run_pipeline(st, {.candidates = 30});
    SearchState st2 = SearchState::open(dir1);  // fresh process resumes
    CHECK(st2.cursor() == st.cursor());
    run_pipeline(st2, {});
  }
  {
    SearchState st = make_state(dir2, cfg);
    run_pipeline(st, {});
  }

  CHECK(slurp(dir1 / "h_prp.log") == slurp(dir2 / "h_prp.log"));
  CHECK(slurp(dir1 / "hits.log") == slurp(dir2 / "hits.log"));
  CHECK(slurp(dir1 / "cursor.json") == slurp(dir2 / "cursor.json"));
  CHECK(slurp(dir1 / "certs/0001.h.json") == slurp(dir2 / "certs/0001.h.json"));
  CHECK(slurp(dir1 / "certs/0001.fg.json") == slurp(dir2 / "certs/0001.fg.json"));

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("a lost cursor write only re-runs work, never duplicates logs") {
  const auto cfg = desk_config();
  const auto dir = fresh_dir("midk");
  SearchState st = make_state(dir, cfg);
  run_pipeline(st, {.candidates = 80});
  const std::string h_log = slurp(dir / "h_prp.log");
  const std::string hits_log = slurp(dir / "hits.log");
  REQUIRE(!h_log.empty());

  // Roll the durable cursor back past logged entries, as if the process had
  // died between a log append and the cursor update.
  {
    std::ofstream out(dir / "cursor.json", std::ios::trunc);
    out << "{\"cursor\": 100}\n";
  }
  SearchState resumed = SearchState::open(dir);
  // The logs outrank the stale cursor.
  CHECK(resumed.cursor() >= 100);
  run_pipeline(resumed, {});

  SearchState full = SearchState::open(dir);
  // Every k appears once, ordinals still dense.
  const VerifyReport rep = verify_run(full);
  CHECK(rep.ok());
  CHECK(slurp(dir / "h_prp.log").substr(0, h_log.size()) == h_log);
  CHECK(slurp(dir / "hits.log").substr(0, hits_log.size()) == hits_log);
  fs::remove_all(dir);
}

TEST_CASE("parallel h-stage testing changes no output") {
  const auto cfg = desk_config(400);
  const auto dir1 = fresh_dir("seq");
  const auto dir2 = fresh_dir("par");
  {
    SearchState st = make_state(dir1, cfg);
    run_pipeline(st, {}, 1);
  }
  {
    SearchState st = make_state(dir2, cfg);
    run_pipeline(st, {}, 4);
  }
  CHECK(slurp(dir1 / "h_prp.log") == slurp(dir2 / "h_prp.log"));
  CHECK(slurp(dir1 / "hits.log") == slurp(dir2 / "hits.log"));
  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("state directory validation") {
  const auto dir = fresh_dir("valid");
  CHECK_THROWS_AS(SearchState::open(dir), FormatError);  // no map

  SearchState::create(dir, desk_config(50));
  {
    std::ofstream out(dir / "config.json", std::ios::trunc);
    out << "{\"n\": 43}\n";  // missing fields
  }
  CHECK_THROWS_AS(SearchState::open(dir), FormatError);
  fs::remove_all(dir);
}
