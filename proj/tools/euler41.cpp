// Command-line front end: every stage of the x^2 + x + 41 search pipeline.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "euler41/errors.hpp"
#include "euler41/estimate.hpp"
#include "euler41/poly.hpp"
#include "euler41/primality.hpp"
#include "euler41/search.hpp"
#include "euler41/sieve.hpp"

namespace fs = std::filesystem;
using namespace euler41;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerification = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

// Accepts plain decimals, underscores as digit separators, and scientific
// notation with a nonnegative integral result (5e10, 1.5e3).
std::uint64_t parse_u64_flex(const std::string& raw) {
  std::string s;
  s.reserve(raw.size());
  for (char ch : raw)
    if (ch != '_') s.push_back(ch);
  if (s.empty()) throw std::invalid_argument("empty number");

  const std::size_t epos = s.find_first_of("eE");
  std::string mantissa = epos == std::string::npos ? s : s.substr(0, epos);
  long exponent = 0;
  if (epos != std::string::npos) {
    const std::string exp_str = s.substr(epos + 1);
    std::size_t used = 0;
    exponent = std::stol(exp_str, &used);
    if (used != exp_str.size()) throw std::invalid_argument("bad exponent in " + raw);
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_dot = false;
  for (char ch : mantissa) {
    if (ch == '.') {
      if (seen_dot) throw std::invalid_argument("bad number " + raw);
      seen_dot = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw std::invalid_argument("bad number " + raw);
    digits.push_back(ch);
    if (seen_dot) ++frac_digits;
  }
  if (digits.empty()) throw std::invalid_argument("bad number " + raw);
  const long shift = exponent - frac_digits;
  if (shift < 0) throw std::invalid_argument("not an integer: " + raw);
  BigInt v;
  mpz_set_str(v.get_mpz_t(), digits.c_str(), 10);
  for (long i = 0; i < shift; ++i) v *= 10;
  if (!v.fits_ulong_p()) throw std::invalid_argument("number out of range: " + raw);
  return mpz_get_ui(v.get_mpz_t());
}

// 59481223 -> "59,481,223"
std::string group_digits(const std::string& digits) {
  std::string out;
  const std::size_t sign = (!digits.empty() && digits[0] == '-') ? 1 : 0;
  const std::size_t len = digits.size() - sign;
  out.reserve(digits.size() + len / 3);
  if (sign) out.push_back('-');
  for (std::size_t i = 0; i < len; ++i) {
    if (i > 0 && (len - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[sign + i]);
  }
  return out;
}

std::string group_digits(std::uint64_t v) { return group_digits(std::to_string(v)); }
std::string group_digits(const BigInt& v) { return group_digits(v.get_str()); }

std::string fmt_real(long double v, int precision = 10) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

struct FlexNumber {
  std::string raw;
  std::optional<std::uint64_t> value;

  void set(const std::string& s) {
    raw = s;
    value = parse_u64_flex(s);
  }
};

void add_flex_option(CLI::App* cmd, const std::string& name, FlexNumber& slot,
                     const std::string& desc, bool required = false) {
  auto* opt = cmd->add_option_function<std::string>(
      name, [&slot](const std::string& s) { slot.set(s); }, desc);
  if (required) opt->required();
}

// ---------------------------------------------------------------------------
// identity
// ---------------------------------------------------------------------------

int cmd_identity(bool json_out) {
  const bool ok = verify_euler_identity();
  const PolyZ& sextic = composed_sextic();
  if (json_out) {
    json j;
    j["identity_holds"] = ok;
    json coeffs = json::array();
    for (const auto& c : sextic.coeffs()) coeffs.push_back(c.get_str());
    j["sextic_coefficients"] = coeffs;
    j["sextic"] = sextic.to_string();
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "f(x)    = " << euler_poly().to_string() << "\n"
              << "g(x)    = " << substitution_cubic().to_string() << "\n"
              << "h(x)    = " << cofactor_quadratic().to_string() << "\n"
              << "i(x)    = " << cofactor_quartic().to_string() << "\n"
              << "f(g(x)) = " << sextic.to_string() << "\n\n"
              << "coefficients of f(g(x)), ascending degree:\n";
    for (std::size_t i = 0; i < sextic.coeffs().size(); ++i)
      std::cout << "  x^" << i << "  " << sextic.coeffs()[i].get_str() << "\n";
    std::cout << "\nf(g(x)) - 1 == h(x) * i(x): " << (ok ? "OK" : "FAILED") << "\n";
  }
  return ok ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------
// sieve
// ---------------------------------------------------------------------------

int cmd_sieve(const FlexNumber& n, const FlexNumber& exclude, const FlexNumber& kmin,
              const FlexNumber& kmax, const FlexNumber& bound, const std::string& out,
              bool resume, unsigned jobs, bool json_out) {
  CandidateMap map = [&] {
    if (resume && fs::exists(out)) {
      CandidateMap loaded = CandidateMap::load(out, bound.value);
      const SearchConfig& c = loaded.config();
      auto check = [&](const char* name, const FlexNumber& flag, std::uint64_t have) {
        if (flag.value && *flag.value != have)
          throw std::invalid_argument(std::string("--") + name + "=" + flag.raw +
                                      " does not match the checkpoint (" +
                                      std::to_string(have) + ")");
      };
      check("n", n, c.n);
      check("exclude", exclude, c.d);
      check("kmin", kmin, c.kmin);
      check("kmax", kmax, c.kmax);
      return loaded;
    }
    SearchConfig config;
    config.n = n.value.value_or(23143);
    config.d = exclude.value.value_or(43);
    if (!kmin.value || !kmax.value)
      throw std::invalid_argument("--kmin and --kmax are required for a fresh sieve");
    config.kmin = *kmin.value;
    config.kmax = *kmax.value;
    config.sieve_bound = bound.value.value_or(50'000'000'000ULL);
    return CandidateMap::fresh(config);
  }();

  const fs::path parent = fs::path(out).parent_path();
  if (!parent.empty()) fs::create_directories(parent);

  const std::uint64_t lo = map.sieved_to();
  const std::uint64_t hi = map.config().sieve_bound;
  SieveReport total;
  if (lo < hi) {
    if (jobs <= 1) {
      total = map.sieve_range(lo, hi);
    } else {
      // Partitioned sieving over private copies, merged afterwards.
      std::vector<std::pair<std::uint64_t, std::uint64_t>> parts;
      const std::uint64_t chunk = (hi - lo + jobs - 1) / jobs;
      for (std::uint64_t a = lo; a < hi; a += chunk)
        parts.push_back({a, std::min(a + chunk, hi)});
      std::vector<std::future<std::pair<CandidateMap, SieveReport>>> futs;
      for (const auto& part : parts) {
        futs.push_back(std::async(std::launch::async, [&map, part] {
          CandidateMap copy = map;
          SieveReport rep = copy.sieve_range(part.first, part.second);
          return std::make_pair(std::move(copy), rep);
        }));
      }
      for (auto& fut : futs) {
        auto [copy, rep] = fut.get();
        map = CandidateMap::merge(map, copy);
        total.primes_applied += rep.primes_applied;
        total.bits_cleared += rep.bits_cleared;
      }
    }
  }
  map.save(out);

  if (json_out) {
    json j;
    j["out"] = out;
    j["n"] = map.config().n;
    j["d"] = map.config().d;
    j["kmin"] = map.config().kmin;
    j["kmax"] = map.config().kmax;
    j["sieved_to"] = map.sieved_to();
    j["primes_applied"] = total.primes_applied;
    j["bits_cleared"] = total.bits_cleared;
    j["survivors"] = map.survivor_count();
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "checkpoint " << out << "\n"
              << "  k range        [" << group_digits(map.config().kmin) << ", "
              << group_digits(map.config().kmax) << "]\n"
              << "  sieved to      " << group_digits(map.sieved_to()) << "\n"
              << "  primes applied " << group_digits(total.primes_applied) << "\n"
              << "  bits cleared   " << group_digits(total.bits_cleared) << "\n"
              << "  survivors      " << group_digits(map.survivor_count()) << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// search
// ---------------------------------------------------------------------------

int cmd_search(const std::string& state_dir, const FlexNumber& budget,
               const std::optional<double>& budget_seconds, unsigned jobs, bool timestamps,
               bool json_out) {
  SearchState state = SearchState::open(state_dir);
  PipelineBudget b;
  b.candidates = budget.value;
  if (budget_seconds) b.wall_seconds = *budget_seconds;
  const PipelineSummary s = run_pipeline(state, b, jobs, timestamps);
  if (json_out) {
    json j;
    j["processed"] = s.processed;
    j["h_passes"] = s.h_passes;
    j["fg_tests"] = s.fg_tests;
    j["fg_passes"] = s.fg_passes;
    j["proved"] = s.proved;
    j["unproven"] = s.unproven;
    j["cursor"] = s.cursor;
    j["total_h_prp"] = state.h_prp_log().size();
    j["total_hits"] = state.hits().size();
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "processed  " << group_digits(s.processed) << "\n"
              << "h passes   " << group_digits(s.h_passes) << "\n"
              << "fg tests   " << group_digits(s.fg_tests) << "\n"
              << "fg passes  " << group_digits(s.fg_passes) << "\n"
              << "proved     " << group_digits(s.proved) << "\n"
              << "unproven   " << group_digits(s.unproven) << "\n"
              << "cursor     " << group_digits(s.cursor) << "\n"
              << "log totals " << state.h_prp_log().size() << " h-PRPs, "
              << state.hits().size() << " hits\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// prove
// ---------------------------------------------------------------------------

int cmd_prove(const FlexNumber& k, const FlexNumber& n, const FlexNumber& exclude,
              const std::string& out_dir, std::uint64_t witness_cap, bool json_out) {
  const std::uint64_t kv = *k.value;
  const std::uint64_t nv = n.value.value_or(23143);
  const std::uint64_t dv = exclude.value.value_or(43);

  const FactoredInteger M = primorial(nv, dv == 1 ? 0 : dv);
  const BigInt kb(static_cast<unsigned long>(kv));
  auto k_fact = factor_small(kb, mpz_get_ui(BigInt(isqrt(kb) + 1).get_mpz_t()));
  if (!k_fact) {
    std::cerr << "k = " << kv << " did not factor completely\n";
    return kExitVerification;
  }
  const FactoredInteger x = k_fact->times(M);

  const ProveResult ph = bls_prove_h(x);
  if (!ph.ok()) {
    std::cerr << "h-stage proof failed: " << ph.detail << "\n";
    return kExitVerification;
  }
  const ProveResult pfg = bls_prove_fg(x.value(), *ph.cert);
  if (!pfg.ok()) {
    std::cerr << "fg-stage proof failed: " << pfg.detail << "\n";
    return kExitVerification;
  }

  fs::create_directories(out_dir);
  const fs::path h_path = fs::path(out_dir) / (std::to_string(kv) + ".h.json");
  const fs::path fg_path = fs::path(out_dir) / (std::to_string(kv) + ".fg.json");
  ph.cert->save(h_path);
  pfg.cert->save(fg_path);

  if (json_out) {
    json j;
    j["k"] = kv;
    j["digits_h"] = ph.cert->N.get_str().size();
    j["digits_fg"] = pfg.cert->N.get_str().size();
    j["h_cert"] = h_path.string();
    j["fg_cert"] = fg_path.string();
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "h(x)    proved prime (" << ph.cert->N.get_str().size() << " digits) -> "
              << h_path.string() << "\n"
              << "f(g(x)) proved prime (" << pfg.cert->N.get_str().size() << " digits) -> "
              << fg_path.string() << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

int cmd_verify(const std::vector<std::string>& certs, bool json_out) {
  bool any_reject = false;
  json results = json::array();
  for (const std::string& path : certs) {
    const BLSCertificate cert = BLSCertificate::load(path);  // FormatError -> exit 3
    const Verdict v = bls_check(cert);
    if (json_out) {
      json j;
      j["cert"] = path;
      j["proved"] = v.proved;
      if (!v.proved) {
        j["condition"] = v.condition;
        j["detail"] = v.detail;
      }
      results.push_back(j);
    } else {
      if (v.proved) {
        std::cout << path << ": proved-prime (" << cert.N.get_str().size() << " digits)\n";
      } else {
        std::cout << path << ": REJECTED at " << v.condition << " (" << v.detail << ")\n";
      }
    }
    any_reject = any_reject || !v.proved;
  }
  if (json_out) std::cout << results.dump(1) << "\n";
  return any_reject ? kExitVerification : kExitOk;
}

// ---------------------------------------------------------------------------
// prp
// ---------------------------------------------------------------------------

int cmd_prp(const std::string& expr, const FlexNumber& k, const FlexNumber& n,
            const FlexNumber& exclude, const FlexNumber& base, bool json_out) {
  const std::uint64_t kv = *k.value;
  const std::uint64_t nv = n.value.value_or(23143);
  const std::uint64_t dv = exclude.value.value_or(43);
  const std::uint64_t bv = base.value.value_or(3);

  const BigInt M = primorial(nv, dv == 1 ? 0 : dv).value();
  const BigInt x = BigInt(static_cast<unsigned long>(kv)) * M;
  const BigInt N = expr == "h" ? cofactor_quadratic().eval(x) : composed_sextic().eval(x);
  const PrpResult r = fermat_prp_ex(N, BigInt(static_cast<unsigned long>(bv)));

  const std::size_t digits = N.get_str().size();
  if (json_out) {
    json j;
    j["expr"] = expr;
    j["k"] = kv;
    j["digits"] = digits;
    j["base"] = bv;
    j["probable_prime"] = r.probable_prime;
    if (!r.note.empty()) j["note"] = r.note;
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << (expr == "h" ? "h(x)" : "f(g(x))") << " with x = " << group_digits(kv)
              << " * " << group_digits(nv) << "#";
    if (dv != 1) std::cout << "/" << dv;
    std::cout << ": " << group_digits(std::uint64_t(digits)) << " digits, base " << bv
              << " Fermat test: " << (r.probable_prime ? "probable prime" : "composite");
    if (!r.note.empty()) std::cout << " (" << r.note << ")";
    std::cout << "\n";
  }
  return r.probable_prime ? kExitOk : kExitVerification;
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

int cmd_estimate(EstimateReport rep, bool exact_sieve, const std::string& out_file,
                 bool json_out) {
  compute_report(rep, exact_sieve);
  if (!out_file.empty()) {
    std::ofstream out(out_file, std::ios::trunc);
    if (!out) throw FormatError("cannot write " + out_file);
    out << rep.to_key_values();
  }
  if (json_out) {
    std::cout << rep.to_json() << "\n";
    return kExitOk;
  }
  auto years = [](long double secs) { return fmt_real(secs / kSecondsPerYear, 6); };
  auto count = [](long double v) {
    return group_digits(BigInt(std::to_string(static_cast<unsigned long long>(v + 0.5L))));
  };
  std::cout << "digit sizes           " << rep.d_small << " / " << rep.d_big << "\n"
            << "expected trials T     " << count(rep.T) << "\n"
            << "planned trials m      " << count(rep.m) << "  (multiplier "
            << fmt_real(rep.multiplier, 3) << ")\n"
            << "success prob at T     " << fmt_real(rep.success_prob_T * 100, 4) << "%\n"
            << "success prob at m     " << fmt_real(rep.success_prob_m * 100, 4) << "%\n\n"
            << "scenario     tests            cpu-years  (t_small=" << fmt_real(rep.t_small, 4)
            << "s, t_big=" << fmt_real(rep.t_big, 4) << "s)\n"
            << "raw          " << count(rep.m) << "   " << years(rep.cpu_seconds_raw) << "\n"
            << "primorial    " << count(rep.primorial_adjusted) << "       "
            << years(rep.cpu_seconds_primorial) << "\n"
            << "sieved       " << count(rep.post_sieve) << "        "
            << years(rep.cpu_seconds_sieved) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// hl
// ---------------------------------------------------------------------------

int cmd_hl(long long a, long long b, long long c, const FlexNumber& bound,
           const FlexNumber& count_limit, bool json_out) {
  QuadraticSpec quad{BigInt(static_cast<long>(a)), BigInt(static_cast<long>(b)),
                     BigInt(static_cast<long>(c))};
  const HLReport rep = hl_constant(quad, bound.value.value_or(10'000'000));

  std::optional<std::uint64_t> empirical;
  if (count_limit.value) empirical = count_prime_values(quad, *count_limit.value);

  if (json_out) {
    json j = json::parse(rep.to_json());
    if (empirical) {
      j["count_limit"] = *count_limit.value;
      j["empirical_prime_count"] = *empirical;
    }
    std::cout << j.dump(1) << "\n";
  } else {
    std::cout << "quadratic      " << quad.a.get_str() << "x^2 + " << quad.b.get_str()
              << "x + " << quad.c.get_str() << "\n"
              << "discriminant   " << group_digits(quad.discriminant()) << "\n"
              << "epsilon        " << rep.epsilon << "\n"
              << "C (p <= " << group_digits(rep.bound_used) << ")  " << fmt_real(rep.C_partial)
              << "\n"
              << "coefficient    " << fmt_real(rep.coefficient) << "\n";
    if (empirical)
      std::cout << "prime values   " << group_digits(*empirical) << " for x in [1, "
                << group_digits(*count_limit.value) << "]\n";
  }
  return kExitOk;
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"search and prove large primes of the form x^2 + x + 41"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json_out = false;
  app.add_flag("--format-json", json_out,
               "emit one JSON document on stdout instead of human output");
  std::string format;
  app.add_option("--format", format, "output format: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  // identity
  app.add_subcommand("identity", "verify the factorization identity behind the construction");

  // sieve
  auto* sv = app.add_subcommand("sieve", "build or extend a candidate-map checkpoint");
  FlexNumber sv_n, sv_exclude, sv_kmin, sv_kmax, sv_bound;
  std::string sv_out;
  bool sv_resume = false;
  unsigned sv_jobs = 1;
  add_flex_option(sv, "--n", sv_n, "primorial bound (default 23143)");
  add_flex_option(sv, "--exclude", sv_exclude, "excluded prime, 1 for none (default 43)");
  add_flex_option(sv, "--kmin", sv_kmin, "first multiplier k");
  add_flex_option(sv, "--kmax", sv_kmax, "last multiplier k");
  add_flex_option(sv, "--bound", sv_bound, "sieve primes up to this bound (default 5e10)");
  sv->add_option("--out", sv_out, "checkpoint path")->required();
  sv->add_flag("--resume", sv_resume, "extend an existing checkpoint");
  sv->add_option("--jobs", sv_jobs, "parallel sieving partitions");

  // search
  auto* se = app.add_subcommand("search", "run the sieve -> PRP -> prove pipeline");
  std::string se_dir;
  FlexNumber se_budget;
  std::optional<double> se_budget_seconds;
  unsigned se_jobs = 1;
  bool se_timestamps = false;
  se->add_option("--state-dir", se_dir, "state directory")->required();
  add_flex_option(se, "--budget", se_budget, "max candidates to process this run");
  se->add_option("--budget-seconds", se_budget_seconds, "wall-clock budget in seconds");
  se->add_option("--jobs", se_jobs, "parallel h-stage PRP tests");
  se->add_flag("--timestamps", se_timestamps, "record wall-clock timestamps in logs");

  // prove
  auto* pr = app.add_subcommand("prove", "prove one candidate end to end");
  FlexNumber pr_k, pr_n, pr_exclude;
  std::string pr_out_dir = ".";
  std::uint64_t pr_cap = 1000;
  add_flex_option(pr, "--k", pr_k, "multiplier k", true);
  add_flex_option(pr, "--n", pr_n, "primorial bound (default 23143)");
  add_flex_option(pr, "--exclude", pr_exclude, "excluded prime, 1 for none (default 43)");
  pr->add_option("--out-dir", pr_out_dir, "directory for the two certificates");
  pr->add_option("--witness-cap", pr_cap, "witness search cap (default 1000)");

  // verify
  auto* ve = app.add_subcommand("verify", "re-verify stored certificates");
  std::vector<std::string> ve_certs;
  ve->add_option("--cert", ve_certs, "certificate file (repeatable)")->required();

  // prp
  auto* pp = app.add_subcommand("prp", "single Fermat probable-prime test");
  std::string pp_expr;
  FlexNumber pp_k, pp_n, pp_exclude, pp_base;
  pp->add_option("--value-expr", pp_expr, "h or fg")
      ->required()
      ->check(CLI::IsMember({"h", "fg"}));
  add_flex_option(pp, "--k", pp_k, "multiplier k", true);
  add_flex_option(pp, "--n", pp_n, "primorial bound (default 23143)");
  add_flex_option(pp, "--exclude", pp_exclude, "excluded prime, 1 for none (default 43)");
  add_flex_option(pp, "--base", pp_base, "Fermat base (default 3)");

  // estimate
  auto* es = app.add_subcommand("estimate", "reproduce the planning arithmetic");
  FlexNumber es_dsmall, es_dbig, es_n, es_bound;
  double es_tsmall = 14, es_tbig = 123, es_mult = 3;
  bool es_exact = false;
  std::string es_out;
  add_flex_option(es, "--d-small", es_dsmall, "digits of the small member (default 20000)");
  add_flex_option(es, "--d-big", es_dbig, "digits of the big member (default 60000)");
  add_flex_option(es, "--n", es_n, "primorial bound (default 23143)");
  add_flex_option(es, "--bound", es_bound, "sieve bound (default 5e10)");
  es->add_option("--t-small", es_tsmall, "seconds per small test (default 14)");
  es->add_option("--t-big", es_tbig, "seconds per big test (default 123)");
  es->add_option("--multiplier", es_mult, "planned trials as a multiple of T (default 3)");
  es->add_flag("--exact-sieve-product", es_exact,
               "use the exact prime product instead of the Mertens asymptotic");
  es->add_option("--out", es_out, "also write a key=value report file");

  // hl
  auto* hl = app.add_subcommand("hl", "Hardy-Littlewood Conjecture F coefficient");
  long long hl_a = 1, hl_b = 1, hl_c = 41;
  FlexNumber hl_bound, hl_count;
  hl->add_option("--a", hl_a, "quadratic coefficient a")->required();
  hl->add_option("--b", hl_b, "quadratic coefficient b")->required();
  hl->add_option("--c", hl_c, "quadratic coefficient c")->required();
  add_flex_option(hl, "--bound", hl_bound, "partial-product bound (default 1e7)");
  add_flex_option(hl, "--count-limit", hl_count, "also count prime values for x up to here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }
  if (format == "json") json_out = true;

  try {
    if (app.got_subcommand("identity")) return cmd_identity(json_out);
    if (app.got_subcommand("sieve"))
      return cmd_sieve(sv_n, sv_exclude, sv_kmin, sv_kmax, sv_bound, sv_out, sv_resume, sv_jobs,
                       json_out);
    if (app.got_subcommand("search"))
      return cmd_search(se_dir, se_budget, se_budget_seconds, se_jobs, se_timestamps, json_out);
    if (app.got_subcommand("prove"))
      return cmd_prove(pr_k, pr_n, pr_exclude, pr_out_dir, pr_cap, json_out);
    if (app.got_subcommand("verify")) return cmd_verify(ve_certs, json_out);
    if (app.got_subcommand("prp"))
      return cmd_prp(pp_expr, pp_k, pp_n, pp_exclude, pp_base, json_out);
    if (app.got_subcommand("estimate")) {
      EstimateReport rep;
      if (es_dsmall.value) rep.d_small = *es_dsmall.value;
      if (es_dbig.value) rep.d_big = *es_dbig.value;
      if (es_n.value) rep.n = *es_n.value;
      if (es_bound.value) rep.sieve_bound = *es_bound.value;
      rep.t_small = es_tsmall;
      rep.t_big = es_tbig;
      rep.multiplier = es_mult;
      return cmd_estimate(rep, es_exact, es_out, json_out);
    }
    if (app.got_subcommand("hl")) return cmd_hl(hl_a, hl_b, hl_c, hl_bound, hl_count, json_out);
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitUsage;
}
