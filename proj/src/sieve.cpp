#include "euler41/sieve.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "euler41/errors.hpp"
#include "euler41/mod64.hpp"
#include "euler41/poly.hpp"

namespace euler41 {

// ---------------------------------------------------------------------------
// SearchConfig
// ---------------------------------------------------------------------------

void SearchConfig::validate() const {
  if (n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (kmin < 1 || kmin > kmax) throw std::invalid_argument("config: need 1 <= kmin <= kmax");
  if (d != 1) {
    if (d > n || !is_prime_u64(d))
      throw std::invalid_argument("config: d must be 1 or a prime <= n");
    if (d == 2) throw std::invalid_argument("config: excluding 2 would make M odd");
  }
  if (sieve_bound < 2) throw std::invalid_argument("config: sieve bound must be >= 2");
  if (prp_base < 2) throw std::invalid_argument("config: PRP base must be >= 2");
}

FactoredInteger SearchConfig::primorial_part() const {
  return primorial(n, d == 1 ? 0 : d);
}

// ---------------------------------------------------------------------------
// CRC-32 (IEEE 802.3 polynomial, as in zlib)
// ---------------------------------------------------------------------------

namespace {

std::uint32_t crc32(const std::uint8_t* data, std::size_t len) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t c = 0xFFFFFFFFu;
  for (std::size_t i = 0; i < len; ++i) c = table[(c ^ data[i]) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

constexpr char kMagic[4] = {'E', '4', '1', 'S'};
constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

// ---------------------------------------------------------------------------
// CandidateMap
// ---------------------------------------------------------------------------

CandidateMap CandidateMap::fresh(const SearchConfig& config) {
  config.validate();
  CandidateMap m;
  m.config_ = config;
  m.M_ = config.primorial_part().value();
  if (mpz_odd_p(m.M_.get_mpz_t())) throw std::invalid_argument("config: M must be even");
  const std::uint64_t range = config.kmax - config.kmin + 1;
  if (range > (std::uint64_t{1} << 32))
    throw CapacityError("candidate range exceeds 2^32 entries");
  m.bits_.assign((range + 63) / 64, ~std::uint64_t{0});
  const std::uint64_t tail = range % 64;
  if (tail) m.bits_.back() = (std::uint64_t{1} << tail) - 1;
  return m;
}

bool CandidateMap::alive(std::uint64_t k) const {
  const std::uint64_t i = k - config_.kmin;
  return bits_[i / 64] >> (i % 64) & 1;
}

void CandidateMap::clear_bit(std::uint64_t index, std::uint64_t& cleared) {
  std::uint64_t& word = bits_[index / 64];
  const std::uint64_t mask = std::uint64_t{1} << (index % 64);
  if (word & mask) {
    word &= ~mask;
    ++cleared;
  }
}

std::uint64_t CandidateMap::survivor_count() const {
  std::uint64_t c = 0;
  for (std::uint64_t w : bits_) c += static_cast<std::uint64_t>(__builtin_popcountll(w));
  return c;
}

std::vector<std::uint64_t> CandidateMap::survivors() const {
  std::vector<std::uint64_t> out;
  out.reserve(survivor_count());
  for_each_survivor([&](std::uint64_t k) {
    out.push_back(k);
    return true;
  });
  return out;
}

void CandidateMap::note_applied(std::uint64_t lo, std::uint64_t hi) {
  applied_.push_back({lo, hi});
  std::sort(applied_.begin(), applied_.end());
  std::vector<std::pair<std::uint64_t, std::uint64_t>> merged;
  for (const auto& iv : applied_) {
    if (!merged.empty() && iv.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  applied_ = std::move(merged);
}

std::uint64_t CandidateMap::sieved_to() const {
  if (!applied_.empty() && applied_.front().first <= 1) return applied_.front().second;
  return 1;
}

SieveReport CandidateMap::sieve_range(std::uint64_t p_lo, std::uint64_t p_hi) {
  if (p_hi > config_.sieve_bound)
    throw std::invalid_argument("sieve_range: p_hi exceeds the configured sieve bound");
  SieveReport report;
  if (p_hi <= p_lo) return report;

  const PolyZ& quad = cofactor_quadratic();
  const PolyZ& sextic = composed_sextic();
  for_primes(p_lo, p_hi, [&](std::uint64_t p) {
    ++report.primes_applied;
    const std::uint64_t m = mpz_fdiv_ui(M_.get_mpz_t(), p);
    // m == 0: p divides M, so h(kM) == 1 and f(g(kM)) == 43 mod p for every
    // k; nothing to eliminate.
    if (m == 0) return;

    std::vector<std::uint64_t> roots = roots_mod_p(quad, p);
    for (std::uint64_t r : roots_mod_p(sextic, p)) roots.push_back(r);
    if (roots.empty()) return;

    const std::uint64_t m_inv = invmod64(m, p);
    for (std::uint64_t r : roots) {
      const std::uint64_t target = mulmod64(r, m_inv, p);  // k == target (mod p)
      const std::uint64_t delta = (target + p - config_.kmin % p) % p;
      for (std::uint64_t k = config_.kmin + delta; k <= config_.kmax; k += p)
        clear_bit(k - config_.kmin, report.bits_cleared);
    }
  });

  note_applied(p_lo, p_hi);
  return report;
}

CandidateMap CandidateMap::merge(const CandidateMap& a, const CandidateMap& b) {
  if (!(a.config_ == b.config_))
    throw std::invalid_argument("merge: configs must be identical");
  CandidateMap out = a;
  for (std::size_t i = 0; i < out.bits_.size(); ++i) out.bits_[i] &= b.bits_[i];
  for (const auto& iv : b.applied_) out.note_applied(iv.first, iv.second);
  return out;
}

// ---------------------------------------------------------------------------
// Checkpoint I/O
// ---------------------------------------------------------------------------

void CandidateMap::save(const std::filesystem::path& path) const {
  const std::uint64_t range = size();
  const std::uint64_t map_bytes = (range + 7) / 8;

  std::vector<std::uint8_t> buf;
  buf.reserve(48 + map_bytes + 4);
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put_u32(buf, kFormatVersion);
  put_u64(buf, config_.n);
  put_u64(buf, config_.d);
  put_u64(buf, config_.kmin);
  put_u64(buf, config_.kmax);
  put_u64(buf, sieved_to());
  for (std::uint64_t i = 0; i < map_bytes; ++i) {
    std::uint8_t byte = 0;
    for (int j = 0; j < 8; ++j) {
      const std::uint64_t idx = 8 * i + j;
      if (idx < range && (bits_[idx / 64] >> (idx % 64) & 1)) byte |= std::uint8_t(1) << j;
    }
    buf.push_back(byte);
  }
  put_u32(buf, crc32(buf.data(), buf.size()));

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FormatError("cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    if (!out) throw FormatError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

CandidateMap CandidateMap::load(const std::filesystem::path& path,
                                std::optional<std::uint64_t> sieve_bound,
                                std::uint64_t prp_base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read " + path.string());
  std::vector<std::uint8_t> buf((std::istreambuf_iterator<char>(in)),
                                std::istreambuf_iterator<char>());

  if (buf.size() < 52) throw FormatError("checkpoint truncated", buf.size());
  if (std::memcmp(buf.data(), kMagic, 4) != 0) throw FormatError("bad magic", 0);
  if (get_u32(buf.data() + 4) != kFormatVersion) throw FormatError("unsupported version", 4);

  const std::uint64_t n = get_u64(buf.data() + 8);
  const std::uint64_t d = get_u64(buf.data() + 16);
  const std::uint64_t kmin = get_u64(buf.data() + 24);
  const std::uint64_t kmax = get_u64(buf.data() + 32);
  const std::uint64_t sieved_to = get_u64(buf.data() + 40);
  if (kmin > kmax || kmax - kmin + 1 > (std::uint64_t{1} << 32))
    throw FormatError("declared range invalid", 24);

  const std::uint64_t range = kmax - kmin + 1;
  const std::uint64_t map_bytes = (range + 7) / 8;
  if (buf.size() != 48 + map_bytes + 4)
    throw FormatError("declared range does not match payload length", buf.size());
  const std::uint32_t stored = get_u32(buf.data() + buf.size() - 4);
  const std::uint32_t actual = crc32(buf.data(), buf.size() - 4);
  if (stored != actual) throw FormatError("CRC mismatch", buf.size() - 4);

  SearchConfig config;
  config.n = n;
  config.d = d;
  config.kmin = kmin;
  config.kmax = kmax;
  config.sieve_bound = sieve_bound.value_or(std::max<std::uint64_t>(sieved_to, 2));
  config.prp_base = prp_base;
  CandidateMap m = fresh(config);
  for (std::uint64_t i = 0; i < range; ++i) {
    const std::uint8_t byte = buf[48 + i / 8];
    if (!(byte >> (i % 8) & 1)) {
      std::uint64_t dummy = 0;
      m.clear_bit(i, dummy);
    }
  }
  if (sieved_to > 1) m.note_applied(1, sieved_to);
  return m;
}

}  // namespace euler41
