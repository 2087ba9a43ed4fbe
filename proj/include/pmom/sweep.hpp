#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pmom/lambda_sieve.hpp"
#include "pmom/rational.hpp"

namespace pmom {

enum class MomentKind { Absolute, Signed, PositivePart, NegativePart };

std::string to_string(MomentKind kind);
MomentKind parse_kind(std::string_view text);

struct FixedWidth {
  Rational h;
};
struct ScaledWidth {
  Rational delta;  // p/q with q <= 1e9, 0 < delta < 1
};

// Integration range [1, X] plus the window geometry: (x, x+h] for fixed
// width, (x, x(1+delta)] for proportional width.
struct WindowSpec {
  Rational X;
  std::variant<FixedWidth, ScaledWidth> geometry;

  static WindowSpec fixed(Rational X, Rational h) { return {X, FixedWidth{h}}; }
  static WindowSpec scaled(Rational X, Rational delta) { return {X, ScaledWidth{delta}}; }

  bool is_scaled() const noexcept { return std::holds_alternative<ScaledWidth>(geometry); }
  Rational width() const noexcept;
  bool empty_range() const noexcept { return X <= Rational(1); }
  std::string describe() const;
};

void validate(const WindowSpec& window);
void validate_order(double order, MomentKind kind);

struct MomentRequest {
  WindowSpec window;
  std::vector<double> orders;
  MomentKind kind = MomentKind::Absolute;
};

struct MomentResult {
  double order = 0.0;
  double value = 0.0;
  std::uint64_t piece_count = 0;
  double range_lo = 1.0;
  double range_hi = 1.0;
  MomentKind kind = MomentKind::Absolute;
};

// Half-open [a, b) on which the window sum S is constant.
struct SweepPiece {
  double a = 0.0;
  double b = 0.0;
  double S = 0.0;
};

struct SweepOptions {
  int threads = 0;           // 0: OpenMP default
  std::size_t chunks = 0;    // 0: derived from X only, never from the thread count
  std::uint64_t segment_size = kDefaultSegmentSize;
  const EventList* events = nullptr;  // sieve on demand when null
};

// Every kind for one order, from a single pass. signed_value and
// negative_part are only meaningful for integer orders.
struct OrderTotals {
  double order = 0.0;
  bool integral = false;
  double absolute = 0.0;
  double signed_value = 0.0;
  double positive_part = 0.0;
  double negative_part = 0.0;

  double get(MomentKind kind) const;
};

struct SweepTotals {
  std::vector<OrderTotals> orders;
  std::uint64_t piece_count = 0;
  double covered_length = 0.0;
  std::size_t chunks = 0;
};

// Largest n whose event can influence the integral over [1, X].
std::uint64_t required_sieve_limit(const WindowSpec& window);

// Chunk-parallel event-driven sweep. Each chunk recomputes its initial window
// sum from the events, so chunks are independent; partials are merged in
// chunk order.
SweepTotals sweep_moments(const WindowSpec& window, std::span<const double> orders,
                          const SweepOptions& options = {});

// Serial reference: materializes every event coordinate, sorts them, and
// integrates each piece with the plain antiderivative difference.
SweepTotals sweep_moments_reference(const WindowSpec& window, std::span<const double> orders,
                                    const EventList& events);

std::vector<SweepPiece> sweep_pieces(const WindowSpec& window, const EventList& events);

std::vector<MomentResult> compute_moments(const MomentRequest& request,
                                          const SweepOptions& options = {});

MomentResult moment_fixed(Rational X, Rational h, double order, MomentKind kind,
                          const SweepOptions& options = {});
MomentResult moment_scaled(Rational X, Rational delta, double order, MomentKind kind,
                           const SweepOptions& options = {});

// Signed first moment by direct summation of each event's time inside the
// window, minus the linear term. Shares no code with the sweep.
double first_moment_exact(const WindowSpec& window, const EventList* events = nullptr);

// Midpoint rule on a uniform grid, sampling psi directly.
double grid_oracle(const WindowSpec& window, double order, MomentKind kind, double step,
                   const EventList* events = nullptr);

}  // namespace pmom
