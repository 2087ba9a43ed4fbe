#include "pmom/lambda_sieve.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <string>

#include "pmom/error.hpp"
#include "pmom/summation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmom {

namespace {

constexpr std::array<char, 8> kCacheMagic = {'P', 'P', 'O', 'W', 'C', 'H', 'E', '1'};
constexpr std::size_t kHeaderBytes = 16;
constexpr std::size_t kRecordBytes = 16;

std::vector<std::uint64_t> small_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    if (i <= limit / i)
      for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

void put_u64(char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint64_t get_u64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

std::string offset_msg(const std::filesystem::path& path, std::uint64_t offset,
                       const std::string& what) {
  return path.string() + ": " + what + " at byte offset " + std::to_string(offset);
}

}  // namespace

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && r > n / r) --r;
  while ((r + 1) <= n / (r + 1)) ++r;
  return r;
}

void validate(const SieveConfig& config) {
  if (config.limit > kMaxSieveLimit)
    fail(ErrorKind::Range, "sieve limit " + std::to_string(config.limit) + " exceeds 2^63");
  if (config.segment_size < 64)
    fail(ErrorKind::InvalidArgument, "segment_size must be at least 64");
}

// ---------------------------------------------------------------------------
// PrimePowerStream

PrimePowerStream::PrimePowerStream(std::uint64_t lo, std::uint64_t hi,
                                   std::uint64_t segment_size)
    : lo_(std::max<std::uint64_t>(lo, 2)), hi_(hi), segment_size_(segment_size) {
  validate(SieveConfig{.limit = hi, .segment_size = segment_size});
  next_segment_ = lo_;
  if (hi_ < lo_) {
    exhausted_ = true;
    return;
  }
  base_primes_ = small_primes(isqrt(hi_));
  base_logs_.reserve(base_primes_.size());
  for (const auto p : base_primes_) base_logs_.push_back(std::log(static_cast<double>(p)));

  for (std::size_t i = 0; i < base_primes_.size(); ++i) {
    const std::uint64_t p = base_primes_[i];
    if (p == 2 && lo_ <= 2) powers_.push_back({2, base_logs_[i]});
    for (std::uint64_t q = p; q <= hi_ / p;) {
      q *= p;
      if (q >= lo_) powers_.push_back({q, base_logs_[i]});
    }
  }
  if (base_primes_.empty() && lo_ <= 2 && hi_ >= 2) powers_.push_back({2, std::log(2.0)});
  std::sort(powers_.begin(), powers_.end(),
            [](const auto& a, const auto& b) { return a.n < b.n; });
}

bool PrimePowerStream::fill() {
  buffer_.clear();
  buffer_pos_ = 0;
  while (buffer_.empty()) {
    if (exhausted_) return false;
    const std::uint64_t s = next_segment_;
    const std::uint64_t e = (hi_ - s < segment_size_ - 1) ? hi_ : s + segment_size_ - 1;
    if (e == hi_)
      exhausted_ = true;
    else
      next_segment_ = e + 1;

    const std::uint64_t first_odd = s | 1;
    const std::uint64_t count = e >= first_odd ? (e - first_odd) / 2 + 1 : 0;
    composite_.assign(count, 0);
    if (count > 0 && first_odd == 1) composite_[0] = 1;
    for (const auto p : base_primes_) {
      if (p == 2) continue;
      if (p > e / p) break;
      std::uint64_t start = std::max(p * p, ((first_odd + p - 1) / p) * p);
      if ((start & 1) == 0) start += p;
      if (start > e) continue;
      for (std::uint64_t i = (start - first_odd) / 2; i < count; i += p) composite_[i] = 1;
    }

    for (std::uint64_t i = 0; i < count; ++i) {
      if (composite_[i]) continue;
      const std::uint64_t n = first_odd + 2 * i;
      while (power_pos_ < powers_.size() && powers_[power_pos_].n < n)
        buffer_.push_back(powers_[power_pos_++]);
      buffer_.push_back({n, std::log(static_cast<double>(n))});
    }
    while (power_pos_ < powers_.size() && powers_[power_pos_].n <= e)
      buffer_.push_back(powers_[power_pos_++]);
  }
  return true;
}

const PrimePowerEvent* PrimePowerStream::peek() {
  if (buffer_pos_ >= buffer_.size() && !fill()) return nullptr;
  return &buffer_[buffer_pos_];
}

std::optional<PrimePowerEvent> PrimePowerStream::next() {
  const PrimePowerEvent* e = peek();
  if (e == nullptr) return std::nullopt;
  ++buffer_pos_;
  return *e;
}

// ---------------------------------------------------------------------------
// Materialized enumeration

std::size_t EventList::upper_bound(std::uint64_t value) const {
  const auto it = std::upper_bound(events.begin(), events.end(), value,
                                   [](std::uint64_t v, const auto& e) { return v < e.n; });
  return static_cast<std::size_t>(it - events.begin());
}

namespace {

std::vector<PrimePowerEvent> sieve_range_parallel(std::uint64_t lo, std::uint64_t hi,
                                                  std::uint64_t segment_size, int threads) {
  std::vector<PrimePowerEvent> out;
  if (hi < lo) return out;
  // Blocks are fixed by the range alone so output never depends on thread count.
  const std::uint64_t block = std::max<std::uint64_t>(segment_size, std::uint64_t{1} << 22);
  const std::uint64_t nblocks = (hi - lo) / block + 1;
  std::vector<std::vector<PrimePowerEvent>> parts(nblocks);

#ifdef _OPENMP
  const int nt = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
  for (std::int64_t b = 0; b < static_cast<std::int64_t>(nblocks); ++b) {
    const std::uint64_t s = lo + static_cast<std::uint64_t>(b) * block;
    const std::uint64_t e = (hi - s < block - 1) ? hi : s + block - 1;
    PrimePowerStream stream(s, e, segment_size);
    auto& part = parts[static_cast<std::size_t>(b)];
    while (auto ev = stream.next()) part.push_back(*ev);
  }
  (void)threads;

  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  out.reserve(total);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace

EventList enumerate_prime_powers(const SieveConfig& config) {
  validate(config);
  EventList list;
  list.limit = config.limit;
  if (config.limit < 2) return list;

  if (config.cache_path && std::filesystem::exists(*config.cache_path)) {
    EventList cached = load_events(*config.cache_path);
    auto& ev = cached.events;
    ev.erase(std::upper_bound(ev.begin(), ev.end(), config.limit,
                              [](std::uint64_t v, const auto& e) { return v < e.n; }),
             ev.end());
    const std::uint64_t covered = ev.empty() ? 1 : ev.back().n;
    if (covered < config.limit) {
      auto rest = sieve_range_parallel(covered + 1, config.limit, config.segment_size,
                                       config.threads);
      ev.insert(ev.end(), rest.begin(), rest.end());
    }
    cached.limit = config.limit;
    return cached;
  }

  list.events = sieve_range_parallel(2, config.limit, config.segment_size, config.threads);
  if (config.cache_path) persist_events(list.events, *config.cache_path);
  return list;
}

EventList enumerate_prime_powers_reference(std::uint64_t limit) {
  EventList list;
  list.limit = limit;
  if (limit < 2) return list;
  if (limit > kMaxSieveLimit) fail(ErrorKind::Range, "limit exceeds 2^63");
  for (const auto p : small_primes(limit)) {
    const double w = std::log(static_cast<double>(p));
    for (std::uint64_t q = p;; q *= p) {
      list.events.push_back({q, w});
      if (q > limit / p) break;
    }
  }
  std::sort(list.events.begin(), list.events.end(),
            [](const auto& a, const auto& b) { return a.n < b.n; });
  return list;
}

double psi(double x, const EventList& events) {
  if (!(x >= 0.0)) fail(ErrorKind::Domain, "psi requires x >= 0");
  if (x >= 2.0 && x >= static_cast<double>(events.limit) + 1.0)
    fail(ErrorKind::Precondition, "event source covers n <= " + std::to_string(events.limit) +
                                      ", psi requested at " + std::to_string(x));
  CompensatedSum s;
  for (const auto& e : events.events) {
    if (static_cast<double>(e.n) > x) break;
    s.add(e.weight);
  }
  return s.value();
}

// ---------------------------------------------------------------------------
// Cache file

void persist_events(std::span<const PrimePowerEvent> events, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::Io, path.string() + ": cannot open for writing");
  char header[kHeaderBytes];
  std::memcpy(header, kCacheMagic.data(), 8);
  put_u64(header + 8, events.size());
  out.write(header, sizeof header);

  std::vector<char> chunk;
  chunk.reserve(kRecordBytes * 4096);
  std::uint64_t prev = 0;
  for (const auto& e : events) {
    if (e.n <= prev) fail(ErrorKind::InvalidArgument, "events must be strictly ascending");
    prev = e.n;
    char rec[kRecordBytes];
    std::uint64_t bits = 0;
    std::memcpy(&bits, &e.weight, 8);
    put_u64(rec, e.n);
    put_u64(rec + 8, bits);
    chunk.insert(chunk.end(), rec, rec + kRecordBytes);
    if (chunk.size() >= kRecordBytes * 4096) {
      out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
      chunk.clear();
    }
  }
  out.write(chunk.data(), static_cast<std::streamsize>(chunk.size()));
  if (!out) fail(ErrorKind::Io, path.string() + ": write failed");
}

EventList load_events(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, path.string() + ": cannot open for reading");
  unsigned char header[kHeaderBytes];
  in.read(reinterpret_cast<char*>(header), sizeof header);
  const auto got = static_cast<std::uint64_t>(in.gcount());
  if (got < 8 || std::memcmp(header, kCacheMagic.data(), 8) != 0)
    fail(ErrorKind::CorruptCache, offset_msg(path, 0, "bad magic"));
  if (got < kHeaderBytes) fail(ErrorKind::CorruptCache, offset_msg(path, got, "truncated header"));
  const std::uint64_t count = get_u64(header + 8);

  EventList list;
  list.events.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(count, 1u << 24)));
  std::uint64_t offset = kHeaderBytes;
  std::uint64_t prev = 0;
  unsigned char rec[kRecordBytes];
  for (std::uint64_t i = 0; i < count; ++i, offset += kRecordBytes) {
    in.read(reinterpret_cast<char*>(rec), kRecordBytes);
    if (static_cast<std::size_t>(in.gcount()) != kRecordBytes)
      fail(ErrorKind::CorruptCache, offset_msg(path, offset, "truncated record"));
    PrimePowerEvent e;
    e.n = get_u64(rec);
    const std::uint64_t bits = get_u64(rec + 8);
    std::memcpy(&e.weight, &bits, 8);
    if (e.n <= prev)
      fail(ErrorKind::CorruptCache, offset_msg(path, offset, "non-ascending n=" + std::to_string(e.n)));
    prev = e.n;
    list.events.push_back(e);
  }
  list.limit = list.events.empty() ? 1 : list.events.back().n;
  return list;
}

}  // namespace pmom
