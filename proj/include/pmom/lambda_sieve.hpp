#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace pmom {

// One atom of psi: a prime power n = p^a carrying von Mangoldt weight log p.
struct PrimePowerEvent {
  std::uint64_t n = 0;
  double weight = 0.0;

  friend bool operator==(const PrimePowerEvent&, const PrimePowerEvent&) = default;
};

inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kMaxSieveLimit = std::uint64_t{1} << 63;

struct SieveConfig {
  std::uint64_t limit = 2;
  std::uint64_t segment_size = kDefaultSegmentSize;
  std::optional<std::filesystem::path> cache_path;
  int threads = 0;  // 0: OpenMP default
};

void validate(const SieveConfig& config);

// Streams prime powers n in [lo, hi] in strictly increasing order. Memory is
// one segment plus the base primes up to sqrt(hi) and their powers in range.
// A stream is single-consumer; it may be moved between threads.
class PrimePowerStream {
 public:
  PrimePowerStream(std::uint64_t lo, std::uint64_t hi,
                   std::uint64_t segment_size = kDefaultSegmentSize);

  std::optional<PrimePowerEvent> next();
  const PrimePowerEvent* peek();

  std::uint64_t lo() const noexcept { return lo_; }
  std::uint64_t hi() const noexcept { return hi_; }

 private:
  bool fill();

  std::uint64_t lo_;
  std::uint64_t hi_;
  std::uint64_t segment_size_;
  std::uint64_t next_segment_ = 0;
  bool exhausted_ = false;

  std::vector<std::uint64_t> base_primes_;
  std::vector<double> base_logs_;
  std::vector<PrimePowerEvent> powers_;  // p^a with a >= 2, inside [lo, hi]
  std::size_t power_pos_ = 0;

  std::vector<std::uint8_t> composite_;
  std::vector<PrimePowerEvent> buffer_;
  std::size_t buffer_pos_ = 0;
};

// Materialized event set covering [2, limit].
struct EventList {
  std::uint64_t limit = 1;
  std::vector<PrimePowerEvent> events;

  // Index of the first event with n > value.
  std::size_t upper_bound(std::uint64_t value) const;
};

// Parallel segmented enumeration of all prime powers up to config.limit.
// Reads/writes config.cache_path when set.
EventList enumerate_prime_powers(const SieveConfig& config);

// Unsegmented serial sieve of Eratosthenes plus direct powering. Kept as the
// reference the segmented kernel is tested against.
EventList enumerate_prime_powers_reference(std::uint64_t limit);

// Chebyshev psi(x) = sum over n <= x of Lambda(n), compensated.
double psi(double x, const EventList& events);

// Binary cache: magic "PPOWCHE1", u64 count, then (u64 n, f64 weight) records,
// little-endian, strictly ascending n.
void persist_events(std::span<const PrimePowerEvent> events,
                    const std::filesystem::path& path);
EventList load_events(const std::filesystem::path& path);

std::uint64_t isqrt(std::uint64_t n);

}  // namespace pmom
