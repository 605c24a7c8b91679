#include "euler41/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "euler41/errors.hpp"
#include "euler41/poly.hpp"

namespace euler41 {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t digits10(const BigInt& v) {
  return v.get_str().size() - (v < 0 ? 1 : 0);
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out << text;
  }
  fs::rename(tmp, path);
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_config(const fs::path& path, const SearchConfig& c) {
  json j;
  j["n"] = c.n;
  j["d"] = c.d;
  j["kmin"] = c.kmin;
  j["kmax"] = c.kmax;
  j["sieve_bound"] = c.sieve_bound;
  j["prp_base"] = c.prp_base;
  write_text_atomic(path, j.dump(1) + "\n");
}

SearchConfig read_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw FormatError("config.json: " + std::string(e.what()), e.byte);
  }
  SearchConfig c;
  try {
    c.n = j.at("n").get<std::uint64_t>();
    c.d = j.at("d").get<std::uint64_t>();
    c.kmin = j.at("kmin").get<std::uint64_t>();
    c.kmax = j.at("kmax").get<std::uint64_t>();
    c.sieve_bound = j.at("sieve_bound").get<std::uint64_t>();
    c.prp_base = j.at("prp_base").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw FormatError("config.json: " + std::string(e.what()));
  }
  return c;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::uint64_t parse_u64(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError(where + ": bad integer field '" + s + "'");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// SearchState
// ---------------------------------------------------------------------------

void SearchState::load_logs() {
  h_prp_.clear();
  hits_.clear();

  std::ifstream hlog(dir_ / "h_prp.log");
  std::string line;
  while (std::getline(hlog, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() < 4) throw FormatError("h_prp.log: short record '" + line + "'");
    h_prp_.push_back({parse_u64(f[0], "h_prp.log"), parse_u64(f[1], "h_prp.log"),
                      parse_u64(f[2], "h_prp.log"), parse_u64(f[3], "h_prp.log")});
  }

  std::ifstream hitlog(dir_ / "hits.log");
  while (std::getline(hitlog, line)) {
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() < 5) throw FormatError("hits.log: short record '" + line + "'");
    HitRecord h;
    h.ordinal = parse_u64(f[0], "hits.log");
    h.k = parse_u64(f[1], "hits.log");
    h.h_cert_path = f[2] == "-" ? "" : f[2];
    h.fg_cert_path = f[3] == "-" ? "" : f[3];
    h.proved = f[4] == "proved";
    hits_.push_back(h);
  }

  cursor_ = config_.kmin - 1;
  if (fs::exists(dir_ / "cursor.json")) {
    json j = json::parse(read_text(dir_ / "cursor.json"));
    cursor_ = j.at("cursor").get<std::uint64_t>();
  }
  // Log entries past the recorded cursor mean a cursor write was lost. Only
  // the newest entry's post-append work (fg test, certificates, hit record)
  // can have been interrupted, so resume just before it; the append dedup
  // keeps the reprocess idempotent.
  std::uint64_t newest_logged = 0;
  for (const auto& e : h_prp_) newest_logged = std::max(newest_logged, e.k);
  for (const auto& h : hits_) newest_logged = std::max(newest_logged, h.k);
  if (newest_logged > 0) cursor_ = std::max(cursor_, newest_logged - 1);
}

SearchState SearchState::create(const fs::path& dir, const SearchConfig& config) {
  config.validate();
  fs::create_directories(dir / "certs");
  SearchState s;
  s.dir_ = dir;
  s.config_ = config;
  s.map_ = CandidateMap::fresh(config);
  s.map_.save(dir / "map.e41s");
  write_config(dir / "config.json", config);
  std::ofstream(dir / "h_prp.log", std::ios::app);
  std::ofstream(dir / "hits.log", std::ios::app);
  s.cursor_ = config.kmin - 1;
  write_text_atomic(dir / "cursor.json", json{{"cursor", s.cursor_}}.dump() + "\n");
  return s;
}

SearchState SearchState::open(const fs::path& dir) {
  if (!fs::exists(dir / "map.e41s"))
    throw FormatError("state directory has no map.e41s: " + dir.string());

  SearchState s;
  s.dir_ = dir;
  if (fs::exists(dir / "config.json")) {
    s.config_ = read_config(dir / "config.json");
    s.config_.validate();
    s.map_ = CandidateMap::load(dir / "map.e41s", s.config_.sieve_bound, s.config_.prp_base);
    const SearchConfig& m = s.map_.config();
    if (m.n != s.config_.n || m.d != s.config_.d || m.kmin != s.config_.kmin ||
        m.kmax != s.config_.kmax)
      throw FormatError("config.json disagrees with map.e41s header");
  } else {
    s.map_ = CandidateMap::load(dir / "map.e41s");
    s.config_ = s.map_.config();
    write_config(dir / "config.json", s.config_);
  }
  fs::create_directories(dir / "certs");
  s.load_logs();
  return s;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct PipelineRunner {
  PipelineRunner(SearchState& s, const PipelineBudget& b, unsigned j, bool ts)
      : state(s), budget(b), jobs(j), timestamps(ts) {}

  SearchState& state;
  const PipelineBudget& budget;
  unsigned jobs;
  bool timestamps;

  PipelineSummary summary;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  FactoredInteger M_fact;
  std::uint64_t last_h_logged_k = 0;
  std::uint64_t next_h_ordinal = 1;
  std::uint64_t last_hit_k = 0;
  std::uint64_t next_hit_ordinal = 1;

  std::string timestamp_field() const {
    if (!timestamps) return "-";
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
  }

  bool budget_exhausted() const {
    if (budget.candidates && summary.processed >= *budget.candidates) return true;
    if (budget.wall_seconds) {
      const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
      if (dt.count() >= *budget.wall_seconds) return true;
    }
    return false;
  }

  void append_line(const char* file, const std::string& line) {
    std::ofstream out(state.dir_ / file, std::ios::app);
    if (!out) throw FormatError(std::string("cannot append to ") + file);
    out << line << "\n";
  }

  void persist_cursor(std::uint64_t k) {
    state.cursor_ = k;
    write_text_atomic(state.dir_ / "cursor.json",
                      nlohmann::json{{"cursor", k}}.dump() + "\n");
  }

  // Proof attempt for a PRP pair; returns cert paths or nothing.
  std::optional<std::pair<std::string, std::string>> prove_hit(std::uint64_t k, const BigInt& x,
                                                               std::uint64_t hit_ordinal) {
    const BigInt kb(static_cast<unsigned long>(k));
    const BigInt bound_root = euler41::isqrt(kb) + 1;
    auto k_fact = factor_small(kb, bound_root.get_ui());
    if (!k_fact) return std::nullopt;
    const FactoredInteger x_fact = k_fact->times(M_fact);

    ProveResult ph = bls_prove_h(x_fact);
    if (!ph.ok()) return std::nullopt;
    ProveResult pfg = bls_prove_fg(x, *ph.cert);
    if (!pfg.ok()) return std::nullopt;

    char name[32];
    std::snprintf(name, sizeof name, "%04llu", static_cast<unsigned long long>(hit_ordinal));
    const std::string h_rel = std::string("certs/") + name + ".h.json";
    const std::string fg_rel = std::string("certs/") + name + ".fg.json";
    ph.cert->save(state.dir_ / h_rel);
    pfg.cert->save(state.dir_ / fg_rel);
    return std::make_pair(h_rel, fg_rel);
  }

  void process(std::uint64_t k, bool h_pass) {
    ++summary.processed;
    if (!h_pass) {
      persist_cursor(k);
      return;
    }
    ++summary.h_passes;
    const BigInt x = BigInt(static_cast<unsigned long>(k)) * state.map_.multiplier();
    const BigInt hv = cofactor_quadratic().eval(x);
    const BigInt fgv = composed_sextic().eval(x);

    std::uint64_t h_ordinal;
    if (k > last_h_logged_k) {
      h_ordinal = next_h_ordinal++;
      last_h_logged_k = k;
      std::ostringstream line;
      line << h_ordinal << "\t" << k << "\t" << digits10(hv) << "\t" << digits10(fgv) << "\t"
           << timestamp_field();
      append_line("h_prp.log", line.str());
      state.h_prp_.push_back({h_ordinal, k, digits10(hv), digits10(fgv)});
    }

    ++summary.fg_tests;
    const BigInt base(static_cast<unsigned long>(state.config_.prp_base));
    if (fermat_prp(fgv, base)) {
      ++summary.fg_passes;
      if (k > last_hit_k) {
        const std::uint64_t hit_ordinal = next_hit_ordinal++;
        last_hit_k = k;
        auto certs = prove_hit(k, x, hit_ordinal);
        HitRecord rec;
        rec.ordinal = hit_ordinal;
        rec.k = k;
        rec.proved = certs.has_value();
        if (certs) {
          rec.h_cert_path = certs->first;
          rec.fg_cert_path = certs->second;
          ++summary.proved;
        } else {
          ++summary.unproven;
        }
        std::ostringstream line;
        line << rec.ordinal << "\t" << rec.k << "\t"
             << (rec.proved ? rec.h_cert_path : "-") << "\t"
             << (rec.proved ? rec.fg_cert_path : "-") << "\t"
             << (rec.proved ? "proved" : "unproven-prp-pair");
        append_line("hits.log", line.str());
        state.hits_.push_back(rec);
      }
    }
    persist_cursor(k);
  }

  PipelineSummary run() {
    if (state.map_.sieved_to() < state.config_.sieve_bound)
      throw std::invalid_argument(
          "run_pipeline: map is sieved to " + std::to_string(state.map_.sieved_to()) +
          ", below the configured bound " + std::to_string(state.config_.sieve_bound));

    M_fact = state.config_.primorial_part();
    for (const auto& e : state.h_prp_) {
      last_h_logged_k = std::max(last_h_logged_k, e.k);
      next_h_ordinal = std::max(next_h_ordinal, e.ordinal + 1);
    }
    for (const auto& h : state.hits_) {
      last_hit_k = std::max(last_hit_k, h.k);
      next_hit_ordinal = std::max(next_hit_ordinal, h.ordinal + 1);
    }

    // Window of pending candidates; h-stage PRP tests run in parallel, all
    // log writes stay in candidate order.
    const std::size_t window = jobs > 1 ? static_cast<std::size_t>(jobs) * 8 : 1;
    std::vector<std::uint64_t> pending;
    std::uint64_t resume_from = state.cursor_ + 1;
    const BigInt base(static_cast<unsigned long>(state.config_.prp_base));

    for (;;) {
      if (budget_exhausted()) break;
      pending.clear();
      std::uint64_t remaining = budget.candidates
                                    ? *budget.candidates - summary.processed
                                    : std::numeric_limits<std::uint64_t>::max();
      const std::size_t take = static_cast<std::size_t>(
          std::min<std::uint64_t>(window, remaining));
      if (take == 0) break;
      if (resume_from > state.config_.kmax) break;
      for (std::uint64_t k = resume_from; k <= state.config_.kmax && pending.size() < take; ++k) {
        if (state.map_.alive(k)) pending.push_back(k);
      }
      if (pending.empty()) {
        // Only dead candidates remain; they are trivially complete.
        persist_cursor(state.config_.kmax);
        break;
      }
      resume_from = pending.back() + 1;

      std::vector<char> h_pass(pending.size(), 0);
      auto test_h = [&](std::size_t i) {
        const BigInt x = BigInt(static_cast<unsigned long>(pending[i])) * state.map_.multiplier();
        h_pass[i] = fermat_prp(cofactor_quadratic().eval(x), base) ? 1 : 0;
      };
      if (jobs > 1 && pending.size() > 1) {
        std::vector<std::future<void>> futs;
        std::atomic<std::size_t> next{0};
        for (unsigned t = 0; t < jobs; ++t) {
          futs.push_back(std::async(std::launch::async, [&] {
            for (std::size_t i = next.fetch_add(1); i < pending.size(); i = next.fetch_add(1))
              test_h(i);
          }));
        }
        for (auto& f : futs) f.get();
      } else {
        for (std::size_t i = 0; i < pending.size(); ++i) test_h(i);
      }

      for (std::size_t i = 0; i < pending.size(); ++i) {
        if (budget_exhausted()) break;
        process(pending[i], h_pass[i] != 0);
      }
    }

    summary.cursor = state.cursor_;
    return summary;
  }
};

PipelineSummary run_pipeline(SearchState& state, const PipelineBudget& budget, unsigned jobs,
                             bool timestamps) {
  PipelineRunner runner(state, budget, jobs, timestamps);
  return runner.run();
}

// ---------------------------------------------------------------------------
// verify_run
// ---------------------------------------------------------------------------

VerifyReport verify_run(const SearchState& state) {
  VerifyReport rep;
  const BigInt& M = state.map().multiplier();

  std::uint64_t expected_ordinal = 1;
  std::uint64_t prev_k = 0;
  for (const auto& e : state.h_prp_log()) {
    if (e.ordinal != expected_ordinal)
      rep.findings.push_back("h_prp.log: ordinal " + std::to_string(e.ordinal) +
                             " where " + std::to_string(expected_ordinal) + " was expected");
    if (e.k <= prev_k)
      rep.findings.push_back("h_prp.log: k values not strictly increasing at k=" +
                             std::to_string(e.k));
    prev_k = e.k;
    ++expected_ordinal;
  }

  std::uint64_t expected_hit_ordinal = 1;
  for (const auto& hit : state.hits()) {
    const std::string where = "hit #" + std::to_string(hit.ordinal) + " (k=" + std::to_string(hit.k) + ")";
    if (hit.ordinal != expected_hit_ordinal)
      rep.findings.push_back("hits.log: ordinal " + std::to_string(hit.ordinal) + " where " +
                             std::to_string(expected_hit_ordinal) + " was expected");
    ++expected_hit_ordinal;

    const bool in_h_log =
        std::any_of(state.h_prp_log().begin(), state.h_prp_log().end(),
                    [&](const HPrpEntry& e) { return e.k == hit.k; });
    if (!in_h_log) rep.findings.push_back(where + ": k missing from h_prp.log");

    if (!hit.proved) {
      ++rep.unproven_hits;
      continue;
    }
    const BigInt x = BigInt(static_cast<unsigned long>(hit.k)) * M;
    struct StagePlan {
      const std::string& rel;
      CertStage stage;
      BigInt expected_N;
    } plans[] = {
        {hit.h_cert_path, CertStage::h_stage, cofactor_quadratic().eval(x)},
        {hit.fg_cert_path, CertStage::fg_stage, composed_sextic().eval(x)},
    };
    bool all_ok = true;
    for (const auto& plan : plans) {
      const fs::path path = state.dir() / plan.rel;
      if (plan.rel.empty() || !fs::exists(path)) {
        rep.findings.push_back(where + ": certificate missing (" + plan.rel + "); hit is unproven");
        all_ok = false;
        continue;
      }
      try {
        const BLSCertificate cert = BLSCertificate::load(path);
        ++rep.certificates_checked;
        if (cert.stage != plan.stage)
          rep.findings.push_back(where + ": wrong stage in " + plan.rel), all_ok = false;
        if (cert.N != plan.expected_N)
          rep.findings.push_back(where + ": N does not match k in " + plan.rel), all_ok = false;
        const Verdict v = bls_check(cert);
        if (!v.proved) {
          rep.findings.push_back(where + ": " + plan.rel + " rejected at " + v.condition);
          all_ok = false;
        }
      } catch (const FormatError& e) {
        rep.findings.push_back(where + ": " + plan.rel + " unreadable: " + e.what());
        all_ok = false;
      }
    }
    if (all_ok) ++rep.proved_hits;
  }
  return rep;
}

}  // namespace euler41
