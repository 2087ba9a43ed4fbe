#pragma once

#include <cstddef>
#include <vector>

#include "pmom/sweep.hpp"

namespace pmom {

struct EquivalenceReport {
  int n = 1;
  WindowSpec window;
  double signed_value = 0.0;
  double absolute = 0.0;
  double positive_part = 0.0;
  double negative_part = 0.0;
  double normalizer = 0.0;
  double ratio = 0.0;  // signed / normalizer
  // |abs + signed - 2 pos| / abs and |abs - signed + 2 neg| / abs
  double identity_residual = 0.0;
  double negative_identity_residual = 0.0;
  std::size_t lipschitz_samples = 0;
  bool lipschitz_ok = true;
};

inline constexpr double kDecompositionTolerance = 1e-9;

// All moment kinds of odd order n from one sweep; throws Invariant when
// abs + signed = 2 pos (or abs - signed = -2 neg) is off by more than
// kDecompositionTolerance relative to the absolute moment.
EquivalenceReport decomposition_check(const WindowSpec& window, int n, const SweepOptions& options = {});

// Signed proportional-window moment over odd_normalizer(X, delta, n).
double smallness_ratio(Rational X, Rational delta, int n, const SweepOptions& options = {});

struct AveragingResult {
  double lhs = 0.0;         // int over [Delta/100, Delta] of the positive-part moment
  double rhs = 0.0;         // leading-order h-integral
  double ratio = 0.0;       // lhs / rhs
  double head_bound = 0.0;  // bound on the omitted [0, Delta/100] piece of lhs
  std::vector<double> deltas;
  std::vector<double> values;
};

// Width-averaged positive-part moment against its main term:
//   int_0^Delta int_1^X max{psi(x+dx)-psi(x)-dx, 0}^n dx dd
//     ~ Gamma(n+1) / (2 Gamma(n/2+2) 2^(n/2)) int_0^(Delta X) h^(n/2) log(X/h)^(n/2) dh
AveragingResult saffari_vaughan_average(Rational X, double Delta, int n, int grid_points,
                                        const SweepOptions& options = {});

// Right-hand side alone.
double averaged_main_term(double X, double Delta, int n);

}  // namespace pmom
