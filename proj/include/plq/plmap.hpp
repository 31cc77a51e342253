#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <variant>
#include <vector>

#include "plq/rational.hpp"

namespace plq {

// How many times a geometric base may be squared-up when hunting for a common
// scale.  Overridable per call; the CLI also reads PLQ_COMMENSURABILITY_CAP.
inline constexpr int kCommensurabilityCap = 16;

// Tail f(x) = f(T) + slope * (x - T) for x >= T.  The intercept is implied by
// continuity, so only the slope is stored.
struct AffineTail {
  Rational slope;
  bool operator==(const AffineTail&) const = default;
};

// Tail satisfying f(base * x) = base * f(x) for x >= T.  One period of the
// graph is stored explicitly: bps runs from T to base*T inclusive, vals are
// the map values there, and slopes has one entry per gap.  Consistency
// requires vals.back() == base * vals.front().
struct GeometricTail {
  Rational base;
  std::vector<Rational> bps;
  std::vector<Rational> vals;
  std::vector<Rational> slopes;
  bool operator==(const GeometricTail&) const = default;
};

using Tail = std::variant<AffineTail, GeometricTail>;

// Increasing piecewise-linear bijection of [0, inf).  The finite part lists
// breakpoints 0 = bps[0] < ... < bps[m] with cached values (vals[0] == 0) and
// the slope of each gap; the tail takes over at bps.back().  Positive slopes
// everywhere make the map a homeomorphism.  Instances are produced by
// validate() or the operations below and are kept canonical: no two adjacent
// gaps share a slope, the last finite slope differs from an affine tail's
// slope, and a geometric pattern never has a single slope (such a tail is
// stored affine).
struct PLMap {
  std::vector<Rational> bps;
  std::vector<Rational> vals;
  std::vector<Rational> slopes;
  Tail tail;

  const Rational& tail_start() const { return bps.back(); }
  const Rational& tail_value() const { return vals.back(); }
  const AffineTail* affine_tail() const {
    return std::get_if<AffineTail>(&tail);
  }
  const GeometricTail* geometric_tail() const {
    return std::get_if<GeometricTail>(&tail);
  }

  bool operator==(const PLMap&) const = default;
};

struct SlopeBounds {
  Rational min_slope;
  Rational max_slope;
  bool operator==(const SlopeBounds&) const = default;
};

// Unvalidated input for validate(): pieces as (right endpoint, slope) pairs,
// then exactly one tail.  The line fields let text-format callers attach
// source positions to validation errors; programmatic callers leave them 0.
struct RawPiece {
  Rational endpoint;
  Rational slope;
  int line = 0;
};

struct RawMap {
  std::vector<RawPiece> pieces;
  std::optional<Rational> tail_slope;
  std::optional<Rational> tail_base;
  std::vector<RawPiece> pattern;
  int tail_line = 0;
};

namespace detail {

// Index i such that xs[i] <= x <= xs[i+1], favoring the gap that starts at x.
// Requires xs sorted with at least two entries and x within range.
inline std::size_t piece_index(const std::vector<Rational>& xs,
                               const Rational& x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs.begin());
  if (i > 0) --i;
  if (i + 2 > xs.size()) i = xs.size() - 2;
  return i;
}

inline std::vector<Rational> slopes_from_points(
    const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  std::vector<Rational> out;
  out.reserve(xs.size() - 1);
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    out.push_back(Rational(ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]));
  return out;
}

// Restore the canonical-form invariants after an operation that may have
// produced mergeable gaps.  Values at surviving breakpoints are untouched, so
// the function itself never changes, only its description.
inline PLMap canonicalize(PLMap m) {
  auto merge_equal_gaps = [](std::vector<Rational>& bps,
                             std::vector<Rational>& vals,
                             std::vector<Rational>& slopes) {
    std::size_t w = 0;
    for (std::size_t i = 1; i < slopes.size(); ++i) {
      if (slopes[i] == slopes[w]) continue;
      ++w;
      bps[w] = bps[i];
      vals[w] = vals[i];
      slopes[w] = slopes[i];
    }
    if (!slopes.empty()) {
      bps[w + 1] = bps.back();
      vals[w + 1] = vals.back();
      bps.resize(w + 2);
      vals.resize(w + 2);
      slopes.resize(w + 1);
    }
  };

  merge_equal_gaps(m.bps, m.vals, m.slopes);

  if (auto* g = std::get_if<GeometricTail>(&m.tail)) {
    merge_equal_gaps(g->bps, g->vals, g->slopes);
    if (g->slopes.size() == 1) {
      // A one-slope period means f(x) = slope * x beyond T; store it affine.
      m.tail = AffineTail{g->slopes.front()};
    }
  }

  if (auto* a = std::get_if<AffineTail>(&m.tail)) {
    while (!m.slopes.empty() && m.slopes.back() == a->slope) {
      m.bps.pop_back();
      m.vals.pop_back();
      m.slopes.pop_back();
    }
  }
  return m;
}

}  // namespace detail

// Checks a raw description and builds the canonical map.  Throws Error with
// the offending piece's line attached when one is known.
inline PLMap validate(const RawMap& raw) {
  if (raw.tail_slope && raw.tail_base)
    fail(Errc::InvalidArgument, "map declares both an affine and a geometric tail",
         raw.tail_line);
  if (!raw.tail_slope && !raw.tail_base)
    fail(Errc::EmptyMap, "map declares no tail", raw.tail_line);

  PLMap m;
  m.bps.push_back(Rational(0));
  m.vals.push_back(Rational(0));
  for (const RawPiece& p : raw.pieces) {
    if (p.endpoint <= m.bps.back())
      fail(Errc::NonMonotoneBreakpoints,
           "piece endpoint " + to_string(p.endpoint) +
               " does not increase past " + to_string(m.bps.back()),
           p.line);
    if (p.slope <= 0)
      fail(Errc::NonPositiveSlope, "piece slope " + to_string(p.slope), p.line);
    m.vals.push_back(m.vals.back() + p.slope * (p.endpoint - m.bps.back()));
    m.bps.push_back(p.endpoint);
    m.slopes.push_back(p.slope);
  }

  if (raw.tail_slope) {
    if (*raw.tail_slope <= 0)
      fail(Errc::NonPositiveSlope, "tail slope " + to_string(*raw.tail_slope),
           raw.tail_line);
    m.tail = AffineTail{*raw.tail_slope};
    return detail::canonicalize(std::move(m));
  }

  const Rational& base = *raw.tail_base;
  if (base <= 1)
    fail(Errc::GeometricConsistencyViolation,
         "geometric base " + to_string(base) + " must exceed 1", raw.tail_line);
  const Rational T = m.bps.back();
  if (T == 0)
    fail(Errc::GeometricConsistencyViolation,
         "geometric tail needs a positive start; add a finite piece first",
         raw.tail_line);
  if (raw.pattern.empty())
    fail(Errc::EmptyMap, "geometric tail has no pattern pieces", raw.tail_line);

  GeometricTail t;
  t.base = base;
  t.bps.push_back(T);
  t.vals.push_back(m.vals.back());
  const Rational top = base * T;
  for (const RawPiece& p : raw.pattern) {
    if (p.endpoint <= t.bps.back())
      fail(Errc::NonMonotoneBreakpoints,
           "pattern endpoint " + to_string(p.endpoint) +
               " does not increase past " + to_string(t.bps.back()),
           p.line);
    if (p.endpoint > top)
      fail(Errc::GeometricConsistencyViolation,
           "pattern endpoint " + to_string(p.endpoint) + " exceeds base*T = " +
               to_string(top),
           p.line);
    if (p.slope <= 0)
      fail(Errc::NonPositiveSlope, "pattern slope " + to_string(p.slope),
           p.line);
    t.vals.push_back(t.vals.back() + p.slope * (p.endpoint - t.bps.back()));
    t.bps.push_back(p.endpoint);
    t.slopes.push_back(p.slope);
  }
  if (t.bps.back() != top)
    fail(Errc::GeometricConsistencyViolation,
         "pattern stops at " + to_string(t.bps.back()) +
             " instead of covering up to base*T = " + to_string(top),
         raw.tail_line);
  if (t.vals.back() != base * t.vals.front())
    fail(Errc::GeometricConsistencyViolation,
         "pattern reaches f(base*T) = " + to_string(t.vals.back()) +
             " but self-similarity requires base*f(T) = " +
             to_string(Rational(base * t.vals.front())),
         raw.tail_line);
  m.tail = std::move(t);
  return detail::canonicalize(std::move(m));
}

inline PLMap linear_map(const Rational& slope) {
  if (slope <= 0)
    fail(Errc::NonPositiveSlope, "linear map slope " + to_string(slope));
  PLMap m;
  m.bps = {Rational(0)};
  m.vals = {Rational(0)};
  m.tail = AffineTail{slope};
  return m;
}

inline PLMap identity_map() { return linear_map(Rational(1)); }

// f(T) - slope*T, the constant offset of an affine tail.  Zero means the tail
// runs along a ray through the origin.
inline Rational tail_intercept(const PLMap& f) {
  const AffineTail* a = f.affine_tail();
  if (!a) fail(Errc::InvalidArgument, "tail_intercept needs an affine tail");
  return f.tail_value() - a->slope * f.tail_start();
}

inline bool tail_is_linear(const PLMap& f) {
  return f.affine_tail() != nullptr && tail_intercept(f) == 0;
}

inline Rational evaluate(const PLMap& f, const Rational& x) {
  if (x < 0)
    fail(Errc::NegativeInput, "map evaluated at " + to_string(x));
  const Rational& T = f.tail_start();
  if (x <= T) {
    if (f.bps.size() == 1) return f.vals.front();  // x == T == 0
    std::size_t i = detail::piece_index(f.bps, x);
    return f.vals[i] + f.slopes[i] * (x - f.bps[i]);
  }
  if (const AffineTail* a = f.affine_tail())
    return f.tail_value() + a->slope * (x - T);
  const GeometricTail& t = *f.geometric_tail();
  // Divide x down into the stored period, evaluate, scale back up.
  Rational scale = 1;
  Rational xr = x;
  const Rational& top = t.bps.back();
  while (xr > top) {
    xr /= t.base;
    scale *= t.base;
  }
  std::size_t i = detail::piece_index(t.bps, xr);
  return scale * (t.vals[i] + t.slopes[i] * (xr - t.bps[i]));
}

inline SlopeBounds slope_bounds(const PLMap& f) {
  std::optional<SlopeBounds> b;
  auto feed = [&](const Rational& s) {
    if (!b) {
      b = SlopeBounds{s, s};
      return;
    }
    if (s < b->min_slope) b->min_slope = s;
    if (s > b->max_slope) b->max_slope = s;
  };
  for (const Rational& s : f.slopes) feed(s);
  if (const AffineTail* a = f.affine_tail()) {
    feed(a->slope);
  } else {
    for (const Rational& s : f.geometric_tail()->slopes) feed(s);
  }
  return *b;
}

// Smallest K with |x - y| / K <= |f(x) - f(y)| <= K |x - y|.
inline Rational bilip_constant(const PLMap& f) {
  SlopeBounds b = slope_bounds(f);
  Rational inv = Rational(1) / b.min_slope;
  return inv > b.max_slope ? inv : b.max_slope;
}

// All breakpoints of f inside [lo, hi], in increasing order.  For a geometric
// tail the scaled-up copies of the pattern's interior breakpoints count too;
// self-similarity makes their positions exact.
inline std::vector<Rational> breakpoints_in(const PLMap& f, const Rational& lo,
                                            const Rational& hi) {
  std::set<Rational> out;
  for (const Rational& b : f.bps)
    if (lo <= b && b <= hi) out.insert(b);
  if (const GeometricTail* t = f.geometric_tail()) {
    const Rational& top = t->bps.back();
    Rational scale = 1;
    while (scale * top < lo) scale *= t->base;
    while (scale * t->bps.front() <= hi) {
      for (std::size_t i = 0; i + 1 < t->bps.size(); ++i) {
        Rational q = scale * t->bps[i];
        if (lo <= q && q <= hi) out.insert(std::move(q));
      }
      scale *= t->base;
    }
  }
  return std::vector<Rational>(out.begin(), out.end());
}

}  // namespace plq
