#include "pmom/equivalence.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "pmom/error.hpp"
#include "pmom/predictions.hpp"
#include "pmom/quadrature.hpp"
#include "pmom/special_functions.hpp"
#include "pmom/summation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmom {

namespace {

void require_odd(int n) {
  if (n < 1 || n % 2 == 0) fail(ErrorKind::Domain, "odd positive order required, got " + std::to_string(n));
}

// Samples window excesses a_i on [1, min(X, 1e5)] and checks
// |max(a,0) - max(b,0)| <= |a-b| on consecutive and mirrored pairs.
std::pair<std::size_t, bool> lipschitz_probe(const WindowSpec& window) {
  const double X = std::min(window.X.to_double(), 1e5);
  if (X <= 1.0) return {0, true};
  const double w = window.width().to_double();
  const auto limit = static_cast<std::uint64_t>(window.is_scaled() ? X * (1.0 + w) : X + w) + 1;
  const EventList ev = enumerate_prime_powers(SieveConfig{.limit = limit});
  std::vector<double> prefix(ev.events.size() + 1, 0.0);
  CompensatedSum run;
  for (std::size_t i = 0; i < ev.events.size(); ++i) {
    run.add(ev.events[i].weight);
    prefix[i + 1] = run.value();
  }
  auto psi_at = [&](double y) {
    return prefix[ev.upper_bound(static_cast<std::uint64_t>(std::floor(y)))];
  };
  constexpr std::size_t kSamples = 4096;
  std::vector<double> a(kSamples);
  for (std::size_t i = 0; i < kSamples; ++i) {
    const double x = 1.0 + (X - 1.0) * (static_cast<double>(i) + 0.5) / kSamples;
    const double y = window.is_scaled() ? x * (1.0 + w) : x + w;
    a[i] = psi_at(y) - psi_at(x) - (window.is_scaled() ? w * x : w);
  }
  bool ok = true;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < kSamples; ++i) {
    const double p = a[i];
    const double q = a[(i + 1) % kSamples];
    const double r = a[kSamples - 1 - i];
    for (const double other : {q, r}) {
      ++pairs;
      if (std::fabs(std::max(p, 0.0) - std::max(other, 0.0)) > std::fabs(p - other)) ok = false;
    }
  }
  return {pairs, ok};
}

}  // namespace

EquivalenceReport decomposition_check(const WindowSpec& window, int n, const SweepOptions& options) {
  require_odd(n);
  validate(window);
  EquivalenceReport r;
  r.n = n;
  r.window = window;
  const double order = n;
  const SweepTotals t = sweep_moments(window, std::span<const double>(&order, 1), options);
  const OrderTotals& o = t.orders.front();
  r.absolute = o.absolute;
  r.signed_value = o.signed_value;
  r.positive_part = o.positive_part;
  r.negative_part = o.negative_part;

  if (!window.empty_range()) {
    const double X = window.X.to_double();
    const double w = window.width().to_double();
    r.normalizer = window.is_scaled() ? odd_normalizer(X, w, n) : thm1_main(X, w, n);
    r.ratio = r.signed_value / r.normalizer;
  }
  if (r.absolute > 0.0) {
    r.identity_residual = std::fabs(r.absolute + r.signed_value - 2.0 * r.positive_part) / r.absolute;
    r.negative_identity_residual =
        std::fabs(r.absolute - r.signed_value + 2.0 * r.negative_part) / r.absolute;
  }
  const auto [samples, ok] = lipschitz_probe(window);
  r.lipschitz_samples = samples;
  r.lipschitz_ok = ok;

  if (r.identity_residual > kDecompositionTolerance || r.negative_identity_residual > kDecompositionTolerance)
    fail(ErrorKind::Invariant, "max/min decomposition residual " + std::to_string(r.identity_residual) +
                                   " exceeds tolerance for " + window.describe());
  if (!r.lipschitz_ok) fail(ErrorKind::Invariant, "max{.,0} Lipschitz bound violated");
  return r;
}

double smallness_ratio(Rational X, Rational delta, int n, const SweepOptions& options) {
  require_odd(n);
  const auto w = WindowSpec::scaled(X, delta);
  validate(w);
  if (w.empty_range()) fail(ErrorKind::Domain, "smallness_ratio needs X > 1");
  const double order = n;
  const SweepTotals t = sweep_moments(w, std::span<const double>(&order, 1), options);
  return t.orders.front().signed_value / odd_normalizer(X.to_double(), delta.to_double(), n);
}

double averaged_main_term(double X, double Delta, int n) {
  require_odd(n);
  if (!(Delta > 0.0 && Delta < 1.0)) fail(ErrorKind::Domain, "Delta must lie in (0, 1)");
  const double a = n / 2.0;
  const double c = std::exp(log_gamma(n + 1.0) - log_gamma(a + 2.0) - a * std::log(2.0)) / 2.0;
  // h = X e^-t:  int_0^(Delta X) h^a log(X/h)^a dh = X^(a+1) int_t0^inf t^a e^-(a+1)t dt
  const double t0 = std::log(1.0 / Delta);
  const double span = 80.0 / (a + 1.0);
  const auto r = integrate([a, t0](double t) { return std::pow(t, a) * std::exp(-(a + 1.0) * (t - t0)); },
                           t0, t0 + span, QuadOptions{.rel_tol = 1e-12, .abs_tol = 0.0, .max_intervals = 4000});
  return c * std::exp((a + 1.0) * std::log(X) - (a + 1.0) * t0) * r.value;
}

AveragingResult saffari_vaughan_average(Rational X, double Delta, int n, int grid_points,
                                        const SweepOptions& options) {
  require_odd(n);
  const double Xd = X.to_double();
  if (grid_points < 8) fail(ErrorKind::Domain, "grid_points must be at least 8");
  if (!(Delta > 1.0 / Xd && Delta < 1.0)) fail(ErrorKind::Domain, "Delta must lie in (1/X, 1)");
  const double lo = Delta / 100.0;
  if (lo < 1e-6) fail(ErrorKind::Domain, "Delta/100 below 1e-6 cannot be represented on the 1e-9 grid");

  AveragingResult res;
  res.deltas.resize(static_cast<std::size_t>(grid_points));
  res.values.resize(res.deltas.size());
  std::vector<Rational> nodes(res.deltas.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double d = lo * std::pow(100.0, static_cast<double>(i) / (grid_points - 1));
    nodes[i] = Rational(std::llround(d * 1e9), 1'000'000'000);
    res.deltas[i] = nodes[i].to_double();
  }

  SweepOptions inner = options;
  inner.threads = 1;
  const double order = n;
  std::exception_ptr error;
#ifdef _OPENMP
  const int nt = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(nodes.size()); ++i) {
    try {
      const auto t = sweep_moments(WindowSpec::scaled(X, nodes[static_cast<std::size_t>(i)]),
                                   std::span<const double>(&order, 1), inner);
      res.values[static_cast<std::size_t>(i)] = t.orders.front().positive_part;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(pmom_sv_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  // Each panel integrates the power law through its two end values, which
  // is exact for c * delta^a.
  CompensatedSum lhs;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double d0 = res.deltas[i], d1 = res.deltas[i + 1];
    const double f0 = res.values[i], f1 = res.values[i + 1];
    if (f0 > 0.0 && f1 > 0.0) {
      const double a = std::log(f1 / f0) / std::log(d1 / d0);
      if (std::fabs(a + 1.0) > 1e-12)
        lhs.add(f0 * d0 / (a + 1.0) * (std::pow(d1 / d0, a + 1.0) - 1.0));
      else
        lhs.add(f0 * d0 * std::log(d1 / d0));
    } else {
      lhs.add(0.5 * (f0 + f1) * (d1 - d0));
    }
  }
  res.lhs = lhs.value();
  res.head_bound = res.deltas.front() * res.values.front();
  res.rhs = averaged_main_term(Xd, Delta, n);
  res.ratio = res.rhs != 0.0 ? res.lhs / res.rhs : 0.0;
  return res;
}

}  // namespace pmom
