#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>

#include "oracles.hpp"
#include "pmom/error.hpp"
#include "pmom/lambda_sieve.hpp"

using namespace pmom;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / (std::string("pmom_test_") + name);
}

ErrorKind kind_of(const auto& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected pmom::Error");
  return ErrorKind::Invariant;
}

void write_raw(const std::filesystem::path& p, const std::string& magic,
               const std::vector<std::pair<std::uint64_t, double>>& recs, std::uint64_t count) {
  std::ofstream out(p, std::ios::binary);
  out.write(magic.data(), static_cast<std::streamsize>(magic.size()));
  out.write(reinterpret_cast<const char*>(&count), 8);
  for (const auto& [n, w] : recs) {
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&w), 8);
  }
}

}  // namespace

TEST_CASE("prime powers up to 10") {
  const auto e = enumerate_prime_powers({.limit = 10});
  const std::vector<PrimePowerEvent> expected = {
      {2, std::log(2.0)}, {3, std::log(3.0)}, {4, std::log(2.0)}, {5, std::log(5.0)},
      {7, std::log(7.0)}, {8, std::log(2.0)}, {9, std::log(3.0)}};
  CHECK(e.events == expected);
}

TEST_CASE("limit below 2 is empty") {
  CHECK(enumerate_prime_powers({.limit = 1}).events.empty());
  CHECK(enumerate_prime_powers({.limit = 0}).events.empty());
  CHECK(enumerate_prime_powers_reference(1).events.empty());
}

TEST_CASE("segmented sieve matches the reference sieve for every segment size") {
  const auto ref = enumerate_prime_powers_reference(200000);
  for (const std::uint64_t seg : {64u, 100u, 4096u, 65536u, 1u << 20}) {
    CAPTURE(seg);
    const auto e = enumerate_prime_powers({.limit = 200000, .segment_size = seg});
    CHECK(e.events == ref.events);
  }
}

TEST_CASE("stream over a sub-range") {
  PrimePowerStream s(1000, 1100, 64);
  const auto ref = enumerate_prime_powers_reference(1100);
  std::vector<PrimePowerEvent> got;
  while (auto ev = s.next()) got.push_back(*ev);
  std::vector<PrimePowerEvent> want;
  for (const auto& ev : ref.events)
    if (ev.n >= 1000) want.push_back(ev);
  CHECK(got == want);
}

TEST_CASE("every event matches trial division up to 1e4") {
  const auto e = enumerate_prime_powers({.limit = 10000});
  std::size_t idx = 0;
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    const double w = oracle::mangoldt(n);
    if (w == 0.0) continue;
    REQUIRE(idx < e.events.size());
    CHECK(e.events[idx].n == n);
    CHECK(e.events[idx].weight == doctest::Approx(w).epsilon(1e-15));
    ++idx;
  }
  CHECK(idx == e.events.size());
}

TEST_CASE("prime powers share the weight of their prime") {
  const auto e = enumerate_prime_powers({.limit = 100000});
  std::map<std::uint64_t, double> w;
  for (const auto& ev : e.events) w[ev.n] = ev.weight;
  for (const auto& [n, weight] : w) {
    for (std::uint64_t p = 2; p * p <= n; ++p) {
      if (n % p) continue;
      REQUIRE(w.count(p));
      CHECK(weight == w[p]);
      break;
    }
  }
}

TEST_CASE("psi values") {
  const auto e = enumerate_prime_powers({.limit = 100});
  CHECK(psi(1.0, e) == 0.0);
  CHECK(psi(2.0, e) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(psi(10.0, e) == doctest::Approx(7.832015).epsilon(1e-7));
  CHECK(psi(10.5, e) == psi(10.0, e));
}

TEST_CASE("psi agrees with trial division up to 1e4") {
  const auto e = enumerate_prime_powers({.limit = 10000});
  const auto t = oracle::psi_table(10000);
  double prev = 0.0;
  for (std::uint64_t x = 1; x <= 10000; ++x) {
    const double v = psi(static_cast<double>(x), e);
    CHECK(oracle::rel(v, static_cast<double>(t[x])) <= 1e-12);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("psi beyond the event source is a precondition error") {
  const auto e = enumerate_prime_powers({.limit = 100});
  CHECK(kind_of([&] { psi(101.0, e); }) == ErrorKind::Precondition);
}

TEST_CASE("prime count up to 1e8") {
  const auto e = enumerate_prime_powers({.limit = 100000000});
  // A prime is the only event whose weight is the log of n itself.
  std::size_t primes = 0;
  for (const auto& ev : e.events)
    if (std::fabs(ev.weight - std::log(static_cast<double>(ev.n))) < 1e-9) ++primes;
  CHECK(primes == 5761455);
}

TEST_CASE("limit and segment validation") {
  CHECK(kind_of([] { validate(SieveConfig{.limit = kMaxSieveLimit + 1}); }) == ErrorKind::Range);
  CHECK(kind_of([] { validate(SieveConfig{.limit = 100, .segment_size = 63}); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("cache roundtrip") {
  const auto p = temp_file("roundtrip.bin");
  const auto e = enumerate_prime_powers({.limit = 1000});
  persist_events(e.events, p);
  const auto back = load_events(p);
  CHECK(back.events == e.events);
  CHECK(back.limit == e.events.back().n);
  std::filesystem::remove(p);
}

TEST_CASE("cache with zero records") {
  const auto p = temp_file("empty.bin");
  write_raw(p, "PPOWCHE1", {}, 0);
  CHECK(load_events(p).events.empty());
  std::filesystem::remove(p);
}

TEST_CASE("corrupt caches") {
  const auto p = temp_file("corrupt.bin");
  SUBCASE("descending n") {
    write_raw(p, "PPOWCHE1", {{3, std::log(3.0)}, {2, std::log(2.0)}}, 2);
    try {
      load_events(p);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CorruptCache);
      CHECK(std::string(e.what()).find("offset 32") != std::string::npos);
    }
  }
  SUBCASE("bad magic") {
    write_raw(p, "PPOWCHE0", {}, 0);
    CHECK(kind_of([&] { load_events(p); }) == ErrorKind::CorruptCache);
  }
  SUBCASE("truncated record") {
    write_raw(p, "PPOWCHE1", {{2, std::log(2.0)}}, 2);
    CHECK(kind_of([&] { load_events(p); }) == ErrorKind::CorruptCache);
  }
  std::filesystem::remove(p);
}

TEST_CASE("cache file is reused and extended") {
  const auto p = temp_file("extend.bin");
  std::filesystem::remove(p);
  const auto small = enumerate_prime_powers({.limit = 5000, .cache_path = p});
  CHECK(load_events(p).events == small.events);
  const auto big = enumerate_prime_powers({.limit = 20000, .cache_path = p});
  CHECK(big.events == enumerate_prime_powers_reference(20000).events);
  const auto again = enumerate_prime_powers({.limit = 7000, .cache_path = p});
  CHECK(again.events == enumerate_prime_powers_reference(7000).events);
  std::filesystem::remove(p);
}
