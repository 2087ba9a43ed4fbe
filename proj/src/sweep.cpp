#include "pmom/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <limits>

#include "pmom/error.hpp"
#include "pmom/summation.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pmom {

std::string to_string(MomentKind kind) {
  switch (kind) {
    case MomentKind::Absolute: return "absolute";
    case MomentKind::Signed: return "signed";
    case MomentKind::PositivePart: return "positive";
    case MomentKind::NegativePart: return "negative";
  }
  return "absolute";
}

MomentKind parse_kind(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "absolute" || s == "abs") return MomentKind::Absolute;
  if (s == "signed") return MomentKind::Signed;
  if (s == "positive" || s == "positivepart" || s == "positive_part") return MomentKind::PositivePart;
  if (s == "negative" || s == "negativepart" || s == "negative_part") return MomentKind::NegativePart;
  fail(ErrorKind::InvalidArgument, "unknown moment kind '" + std::string(text) + "'");
}

Rational WindowSpec::width() const noexcept {
  return std::visit([](const auto& g) {
    if constexpr (std::is_same_v<std::decay_t<decltype(g)>, FixedWidth>)
      return g.h;
    else
      return g.delta;
  }, geometry);
}

std::string WindowSpec::describe() const {
  return "X=" + X.str() + (is_scaled() ? ", delta=" : ", h=") + width().str();
}

void validate(const WindowSpec& window) {
  if (window.X < Rational(1))
    fail(ErrorKind::InvalidWindow, "integration endpoint must satisfy X >= 1 (" + window.describe() + ")");
  const Rational w = window.width();
  if (w <= Rational(0)) fail(ErrorKind::InvalidWindow, "window width must be positive (" + window.describe() + ")");
  if (window.is_scaled()) {
    if (w >= Rational(1)) fail(ErrorKind::InvalidWindow, "delta must be below 1 (" + window.describe() + ")");
    if (w.den() > 1'000'000'000)
      fail(ErrorKind::InvalidWindow, "delta denominator exceeds 1e9 (" + window.describe() + ")");
  } else if (!window.empty_range() && w >= window.X) {
    fail(ErrorKind::InvalidWindow, "h must be below X (" + window.describe() + ")");
  }
}

void validate_order(double order, MomentKind kind) {
  if (!(order > 0.0) || !std::isfinite(order))
    fail(ErrorKind::InvalidOrder, "moment order must be a positive finite number");
  if (kind != MomentKind::Absolute && order != std::floor(order))
    fail(ErrorKind::InvalidOrder, to_string(kind) + " moments need an integer order, got " +
                                      std::to_string(order));
}

double OrderTotals::get(MomentKind kind) const {
  switch (kind) {
    case MomentKind::Absolute: return absolute;
    case MomentKind::Signed: return signed_value;
    case MomentKind::PositivePart: return positive_part;
    case MomentKind::NegativePart: return negative_part;
  }
  return absolute;
}

namespace {

// All event coordinates are integers over the common denominator D:
// x = c / D. n enters the window at c = n*K - H and leaves at c = n*D.
struct Coords {
  i128 D = 1;
  i128 K = 1;
  i128 H = 0;
  i128 start = 1;
  i128 end = 1;
  bool scaled = false;
  double width = 0.0;  // h or delta
  double Dd = 1.0;

  i128 enter(std::uint64_t n) const { return static_cast<i128>(n) * K - H; }
  i128 leave(std::uint64_t n) const { return static_cast<i128>(n) * D; }
  double to_x(i128 c) const { return static_cast<double>(c) / Dd; }
  double length(i128 a, i128 b) const { return static_cast<double>(b - a) / Dd; }
};

constexpr i128 kMaxDenominator = static_cast<i128>(1) << 62;

Coords make_coords(const WindowSpec& w) {
  Coords c;
  const Rational width = w.width();
  c.scaled = w.is_scaled();
  c.width = width.to_double();
  const i128 base = c.scaled ? static_cast<i128>(width.num()) + width.den() : width.den();
  const i128 xden = w.X.den();
  i128 g = base, t = xden;
  while (t != 0) {
    const i128 r = g % t;
    g = t;
    t = r;
  }
  c.D = base / g * xden;
  if (c.D > kMaxDenominator)
    fail(ErrorKind::Range, "common denominator of X and window width exceeds 2^62 (" + w.describe() + ")");
  if (c.scaled) {
    c.K = static_cast<i128>(width.den()) * (c.D / base);
    c.H = 0;
  } else {
    c.K = c.D;
    c.H = static_cast<i128>(width.num()) * (c.D / base);
  }
  c.start = c.D;
  c.end = static_cast<i128>(w.X.num()) * (c.D / xden);
  c.Dd = static_cast<double>(c.D);
  return c;
}

std::uint64_t limit_for(const Coords& c, i128 end) {
  // largest n with enter(n) < end
  const i128 n = (end + c.H - 1) / c.K;
  if (n > static_cast<i128>(kMaxSieveLimit))
    fail(ErrorKind::Range, "required sieve limit exceeds 2^63");
  return n < 1 ? 1 : static_cast<std::uint64_t>(n);
}

struct OrderSpec {
  double lambda = 1.0;
  double lp1 = 2.0;
  bool integral = false;
  bool odd = false;
};

std::vector<OrderSpec> make_specs(std::span<const double> orders) {
  std::vector<OrderSpec> specs;
  for (const double o : orders) {
    validate_order(o, MomentKind::Absolute);
    OrderSpec s;
    s.lambda = o;
    s.lp1 = o + 1.0;
    s.integral = o == std::floor(o);
    s.odd = s.integral && std::fmod(o, 2.0) == 1.0;
    specs.push_back(s);
  }
  return specs;
}

struct Acc {
  CompensatedSum absolute, signed_value, positive, negative;
};

// v is the integral of |u|^lambda over a sub-piece on which u has sign `sign`.
inline void accumulate(Acc& acc, const OrderSpec& o, double v, int sign) {
  acc.absolute.add(v);
  if (sign > 0) {
    acc.positive.add(v);
    if (o.integral) acc.signed_value.add(v);
  } else if (sign < 0 && o.integral) {
    const double sv = o.odd ? -v : v;
    acc.negative.add(sv);
    acc.signed_value.add(sv);
  }
}

struct ChunkResult {
  std::vector<Acc> acc;
  std::uint64_t pieces = 0;
  CompensatedSum length;
};

// Integrates one piece [a, b) with constant window sum S into every order.
class PieceIntegrator {
 public:
  PieceIntegrator(const Coords& c, const std::vector<OrderSpec>& specs)
      : c_(c), specs_(specs) {}

  void operator()(ChunkResult& out, double S, i128 a, i128 b) const {
    const double len = c_.length(a, b);
    out.length.add(len);
    ++out.pieces;
    if (!c_.scaled) {
      const double u = S - c_.width;
      if (u == 0.0) return;
      const double logu = std::log(std::fabs(u));
      const int sign = u > 0 ? 1 : -1;
      for (std::size_t k = 0; k < specs_.size(); ++k)
        accumulate(out.acc[k], specs_[k], std::exp(specs_[k].lambda * logu) * len, sign);
      return;
    }
    // u(x) = S - delta x decreases across the piece.
    const double delta = c_.width;
    const double ua = S - delta * c_.to_x(a);
    const double dl = delta * len;
    const double ub = ua - dl;
    if (ua > 0.0 && ub < 0.0) {
      monotone(out, ua, ua, 1);
      monotone(out, -ub, -ub, -1);
    } else if (ua > 0.0) {
      monotone(out, ua, dl, 1);
    } else {
      monotone(out, -ub, dl, -1);
    }
  }

 private:
  // |u| runs between M and M - drop on a sub-piece of fixed sign. The
  // integral is (M^(l+1) - (M-drop)^(l+1)) / (delta (l+1)), evaluated as
  // M^(l+1) * -expm1((l+1) log1p(-drop/M)) to avoid cancellation.
  void monotone(ChunkResult& out, double M, double drop, int sign) const {
    if (M <= 0.0) return;
    const double logM = std::log(M);
    const double r = drop >= M ? -std::numeric_limits<double>::infinity() : std::log1p(-drop / M);
    for (std::size_t k = 0; k < specs_.size(); ++k) {
      const double lp1 = specs_[k].lp1;
      const double frac = std::isinf(r) ? 1.0 : -std::expm1(lp1 * r);
      const double v = std::exp(lp1 * logM) * frac / (c_.width * lp1);
      accumulate(out.acc[k], specs_[k], v, sign);
    }
  }

  const Coords& c_;
  const std::vector<OrderSpec>& specs_;
};

struct ListCursor {
  const PrimePowerEvent* p;
  const PrimePowerEvent* end;
  const PrimePowerEvent* peek() const { return p < end ? p : nullptr; }
  void next() { ++p; }
};

struct StreamCursor {
  PrimePowerStream stream;
  const PrimePowerEvent* peek() { return stream.peek(); }
  void next() { (void)stream.next(); }
};

template <class Cursor>
void run_chunk(const Coords& c, const PieceIntegrator& integrate, i128 A, i128 B, Cursor& cursor,
               ChunkResult& out) {
  std::deque<PrimePowerEvent> window;
  CompensatedSum S;
  const PrimePowerEvent* e = nullptr;
  while ((e = cursor.peek()) != nullptr && c.enter(e->n) <= A) {
    window.push_back(*e);
    S.add(e->weight);
    cursor.next();
  }
  i128 x = A;
  while (x < B) {
    i128 nxt = B;
    if ((e = cursor.peek()) != nullptr) nxt = std::min(nxt, c.enter(e->n));
    if (!window.empty()) nxt = std::min(nxt, c.leave(window.front().n));
    if (nxt > x) {
      integrate(out, S.value(), x, nxt);
      x = nxt;
    }
    if (x >= B) break;
    while ((e = cursor.peek()) != nullptr && c.enter(e->n) == x) {
      window.push_back(*e);
      S.add(e->weight);
      cursor.next();
    }
    while (!window.empty() && c.leave(window.front().n) == x) {
      S.add(-window.front().weight);
      window.pop_front();
    }
  }
}

std::size_t default_chunks(const Coords& c) {
  const double span = c.to_x(c.end) - 1.0;
  const double k = std::ceil(span / static_cast<double>(1 << 21));
  return static_cast<std::size_t>(std::clamp(k, 1.0, 4096.0));
}

void require_coverage(const EventList& events, std::uint64_t needed) {
  if (events.limit < needed)
    fail(ErrorKind::Precondition, "event list covers n <= " + std::to_string(events.limit) +
                                      " but the window needs n <= " + std::to_string(needed));
}

SweepTotals finish(std::vector<ChunkResult>& parts, const std::vector<OrderSpec>& specs) {
  SweepTotals t;
  t.chunks = parts.size();
  std::vector<Acc> total(specs.size());
  CompensatedSum length;
  for (auto& p : parts) {
    for (std::size_t k = 0; k < specs.size(); ++k) {
      total[k].absolute.merge(p.acc[k].absolute);
      total[k].signed_value.merge(p.acc[k].signed_value);
      total[k].positive.merge(p.acc[k].positive);
      total[k].negative.merge(p.acc[k].negative);
    }
    t.piece_count += p.pieces;
    length.merge(p.length);
  }
  t.covered_length = length.value();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    OrderTotals o;
    o.order = specs[k].lambda;
    o.integral = specs[k].integral;
    o.absolute = total[k].absolute.value();
    o.positive_part = total[k].positive.value();
    o.signed_value = specs[k].integral ? total[k].signed_value.value() : 0.0;
    o.negative_part = specs[k].integral ? total[k].negative.value() : 0.0;
    t.orders.push_back(o);
  }
  return t;
}

}  // namespace

std::uint64_t required_sieve_limit(const WindowSpec& window) {
  validate(window);
  const Coords c = make_coords(window);
  return limit_for(c, c.end);
}

SweepTotals sweep_moments(const WindowSpec& window, std::span<const double> orders,
                          const SweepOptions& options) {
  validate(window);
  const auto specs = make_specs(orders);
  const Coords c = make_coords(window);
  if (c.end <= c.start) {
    std::vector<ChunkResult> none;
    return finish(none, specs);
  }
  if (options.events) require_coverage(*options.events, limit_for(c, c.end));

  const std::size_t nchunks = options.chunks > 0 ? options.chunks : default_chunks(c);
  std::vector<i128> bounds(nchunks + 1);
  for (std::size_t i = 0; i <= nchunks; ++i)
    bounds[i] = c.start + (c.end - c.start) * static_cast<i128>(i) / static_cast<i128>(nchunks);

  std::vector<ChunkResult> parts(nchunks);
  for (auto& p : parts) p.acc.resize(specs.size());
  const PieceIntegrator integrate(c, specs);
  std::exception_ptr error;

#ifdef _OPENMP
  const int nt = options.threads > 0 ? options.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 1) num_threads(nt)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(nchunks); ++i) {
    try {
      const i128 A = bounds[static_cast<std::size_t>(i)];
      const i128 B = bounds[static_cast<std::size_t>(i) + 1];
      if (B <= A) continue;
      const auto lo = static_cast<std::uint64_t>(A / c.D) + 1;
      const std::uint64_t hi = limit_for(c, B);
      auto& out = parts[static_cast<std::size_t>(i)];
      if (options.events) {
        const auto& ev = options.events->events;
        ListCursor cur{ev.data() + options.events->upper_bound(lo - 1),
                       ev.data() + options.events->upper_bound(hi)};
        run_chunk(c, integrate, A, B, cur, out);
      } else {
        StreamCursor cur{PrimePowerStream(lo, hi, options.segment_size)};
        run_chunk(c, integrate, A, B, cur, out);
      }
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical(pmom_sweep_error)
#endif
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
  return finish(parts, specs);
}

// ---------------------------------------------------------------------------
// Serial reference

namespace {

struct Delta {
  i128 coord;
  double weight;
};

struct Materialized {
  double S0 = 0.0;
  std::vector<Delta> deltas;  // sorted, strictly inside (start, end)
};

Materialized materialize(const Coords& c, const EventList& events) {
  Materialized m;
  CompensatedSum s0;
  for (const auto& e : events.events) {
    const i128 in = c.enter(e.n);
    const i128 out = c.leave(e.n);
    if (in >= c.end) break;
    if (in <= c.start && out > c.start) s0.add(e.weight);
    if (in > c.start) m.deltas.push_back({in, e.weight});
    if (out > c.start && out < c.end) m.deltas.push_back({out, -e.weight});
  }
  std::sort(m.deltas.begin(), m.deltas.end(),
            [](const Delta& a, const Delta& b) { return a.coord < b.coord; });
  m.S0 = s0.value();
  return m;
}

template <class Visit>
void walk_pieces(const Coords& c, const Materialized& m, Visit&& visit) {
  CompensatedSum S(m.S0);
  i128 x = c.start;
  std::size_t i = 0;
  while (x < c.end) {
    const i128 nxt = i < m.deltas.size() ? std::min(m.deltas[i].coord, c.end) : c.end;
    if (nxt > x) visit(x, nxt, S.value());
    x = nxt;
    while (i < m.deltas.size() && m.deltas[i].coord == x) S.add(m.deltas[i++].weight);
  }
}

}  // namespace

std::vector<SweepPiece> sweep_pieces(const WindowSpec& window, const EventList& events) {
  validate(window);
  const Coords c = make_coords(window);
  std::vector<SweepPiece> pieces;
  if (c.end <= c.start) return pieces;
  require_coverage(events, limit_for(c, c.end));
  walk_pieces(c, materialize(c, events), [&](i128 a, i128 b, double S) {
    pieces.push_back({c.to_x(a), c.to_x(b), S});
  });
  return pieces;
}

SweepTotals sweep_moments_reference(const WindowSpec& window, std::span<const double> orders,
                                    const EventList& events) {
  validate(window);
  const auto specs = make_specs(orders);
  const Coords c = make_coords(window);
  std::vector<ChunkResult> parts(1);
  parts[0].acc.resize(specs.size());
  if (c.end <= c.start) return finish(parts, specs);
  require_coverage(events, limit_for(c, c.end));

  auto& out = parts[0];
  const double delta = c.width;
  walk_pieces(c, materialize(c, events), [&](i128 a, i128 b, double S) {
    const double len = c.length(a, b);
    out.length.add(len);
    ++out.pieces;
    for (std::size_t k = 0; k < specs.size(); ++k) {
      const double lam = specs[k].lambda;
      if (!c.scaled) {
        const double u = S - c.width;
        accumulate(out.acc[k], specs[k], std::pow(std::fabs(u), lam) * len, u > 0 ? 1 : (u < 0 ? -1 : 0));
        continue;
      }
      const double ua = S - delta * c.to_x(a);
      const double ub = S - delta * c.to_x(b);
      const double lp1 = lam + 1.0;
      const double scale = delta * lp1;
      if (ua > 0 && ub < 0) {
        accumulate(out.acc[k], specs[k], std::pow(ua, lp1) / scale, 1);
        accumulate(out.acc[k], specs[k], std::pow(-ub, lp1) / scale, -1);
      } else if (ua > 0) {
        accumulate(out.acc[k], specs[k], (std::pow(ua, lp1) - std::pow(std::max(ub, 0.0), lp1)) / scale, 1);
      } else {
        accumulate(out.acc[k], specs[k], (std::pow(-ub, lp1) - std::pow(-ua, lp1)) / scale, -1);
      }
    }
  });
  return finish(parts, specs);
}

// ---------------------------------------------------------------------------
// Convenience entry points

std::vector<MomentResult> compute_moments(const MomentRequest& request, const SweepOptions& options) {
  validate(request.window);
  if (request.orders.empty()) fail(ErrorKind::InvalidOrder, "no moment orders requested");
  for (const double o : request.orders) validate_order(o, request.kind);
  const SweepTotals t = sweep_moments(request.window, request.orders, options);
  std::vector<MomentResult> out;
  for (const auto& o : t.orders) {
    MomentResult r;
    r.order = o.order;
    r.value = o.get(request.kind);
    r.piece_count = t.piece_count;
    r.range_hi = request.window.X.to_double();
    r.kind = request.kind;
    out.push_back(r);
  }
  return out;
}

MomentResult moment_fixed(Rational X, Rational h, double order, MomentKind kind,
                          const SweepOptions& options) {
  return compute_moments({WindowSpec::fixed(X, h), {order}, kind}, options).front();
}

MomentResult moment_scaled(Rational X, Rational delta, double order, MomentKind kind,
                           const SweepOptions& options) {
  return compute_moments({WindowSpec::scaled(X, delta), {order}, kind}, options).front();
}

// ---------------------------------------------------------------------------
// Oracles

double first_moment_exact(const WindowSpec& window, const EventList* events) {
  validate(window);
  if (window.empty_range()) return 0.0;
  const Coords c = make_coords(window);
  const std::uint64_t limit = limit_for(c, c.end);

  CompensatedSum inside;
  auto add = [&](const PrimePowerEvent& e) {
    const i128 lo = std::max(c.enter(e.n), c.start);
    const i128 hi = std::min(c.leave(e.n), c.end);
    if (hi > lo) inside.add(e.weight * c.length(lo, hi));
  };
  if (events) {
    require_coverage(*events, limit);
    for (const auto& e : events->events) {
      if (e.n > limit) break;
      add(e);
    }
  } else {
    PrimePowerStream stream(2, limit);
    while (auto e = stream.next()) add(*e);
  }

  const double X = window.X.to_double();
  const double linear = c.scaled ? c.width * (X * X - 1.0) / 2.0 : c.width * (X - 1.0);
  return inside.value() - linear;
}

double grid_oracle(const WindowSpec& window, double order, MomentKind kind, double step,
                   const EventList* events) {
  validate(window);
  validate_order(order, kind);
  if (window.empty_range()) return 0.0;
  const double X = window.X.to_double();
  if (!(step > 0.0) || step > (X - 1.0) / 10.0)
    fail(ErrorKind::InvalidArgument, "grid step must lie in (0, (X-1)/10]");
  const Coords c = make_coords(window);
  const std::uint64_t limit = limit_for(c, c.end);

  EventList own;
  if (!events) {
    own = enumerate_prime_powers(SieveConfig{.limit = limit});
    events = &own;
  }
  require_coverage(*events, limit);
  const auto& ev = events->events;
  std::vector<double> prefix(ev.size() + 1, 0.0);
  CompensatedSum run;
  for (std::size_t i = 0; i < ev.size(); ++i) {
    run.add(ev[i].weight);
    prefix[i + 1] = run.value();
  }

  const auto cells = static_cast<std::uint64_t>(std::ceil((X - 1.0) / step));
  const double dx = (X - 1.0) / static_cast<double>(cells);
  std::size_t lo_idx = 0, hi_idx = 0;  // counts of events with n <= y
  CompensatedSum total;
  for (std::uint64_t i = 0; i < cells; ++i) {
    const double x = 1.0 + (static_cast<double>(i) + 0.5) * dx;
    const double y = c.scaled ? x * (1.0 + c.width) : x + c.width;
    while (lo_idx < ev.size() && static_cast<double>(ev[lo_idx].n) <= x) ++lo_idx;
    while (hi_idx < ev.size() && static_cast<double>(ev[hi_idx].n) <= y) ++hi_idx;
    const double S = prefix[hi_idx] - prefix[lo_idx];
    const double u = S - (c.scaled ? c.width * x : c.width);
    double g = 0.0;
    switch (kind) {
      case MomentKind::Absolute: g = std::pow(std::fabs(u), order); break;
      case MomentKind::Signed: g = std::pow(u, order); break;
      case MomentKind::PositivePart: g = u > 0 ? std::pow(u, order) : 0.0; break;
      case MomentKind::NegativePart: g = u < 0 ? std::pow(u, order) : 0.0; break;
    }
    total.add(g);
  }
  return total.value() * dx;
}

}  // namespace pmom
