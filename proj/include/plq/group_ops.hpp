#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plq/plmap.hpp"

namespace plq {
namespace detail {

// Smallest m in [1, cap] with base^m == target, for 1 < base <= target.
inline std::optional<int> integer_power_exponent(const Rational& base,
                                                 const Rational& target,
                                                 int cap) {
  Rational acc = base;
  for (int m = 1; m <= cap; ++m) {
    if (acc == target) return m;
    if (acc > target) return std::nullopt;
    acc *= base;
  }
  return std::nullopt;
}

// The coarser of two geometric scales when one is an integer power of the
// other; nullopt when neither divides the other that way.
inline std::optional<Rational> common_geometric_base(const Rational& a,
                                                     const Rational& b,
                                                     int cap) {
  if (a == b) return a;
  if (a < b) {
    if (integer_power_exponent(a, b, cap)) return b;
    return std::nullopt;
  }
  if (integer_power_exponent(b, a, cap)) return a;
  return std::nullopt;
}

}  // namespace detail

// The compositional inverse.  Swapping the breakpoint and value arrays and
// inverting slopes works because the map is an increasing bijection; a
// geometric tail turns into one with the same base since
// f(base*x) = base*f(x) pulls back through f^{-1}.
inline PLMap invert(const PLMap& f) {
  PLMap out;
  out.bps = f.vals;
  out.vals = f.bps;
  out.slopes.reserve(f.slopes.size());
  for (const Rational& s : f.slopes) out.slopes.push_back(Rational(1) / s);
  if (const AffineTail* a = f.affine_tail()) {
    out.tail = AffineTail{Rational(1) / a->slope};
  } else {
    const GeometricTail& t = *f.geometric_tail();
    GeometricTail r;
    r.base = t.base;
    r.bps = t.vals;
    r.vals = t.bps;
    r.slopes.reserve(t.slopes.size());
    for (const Rational& s : t.slopes) r.slopes.push_back(Rational(1) / s);
    out.tail = std::move(r);
  }
  return detail::canonicalize(std::move(out));
}

// f after g, exactly.  Breakpoints of the result are g's breakpoints plus the
// preimages under g of f's; slopes fall out of the exact values there.  The
// tail closes up when both are affine, when the affine side is linear, or
// when both are geometric with commensurable bases; the remaining mixes leak
// x-scale offsets that no single tail of either kind can describe, so they
// throw TailNotClosed.
inline PLMap compose(const PLMap& f, const PLMap& g,
                     int cap = kCommensurabilityCap) {
  const AffineTail* fa = f.affine_tail();
  const AffineTail* ga = g.affine_tail();

  bool result_affine = false;
  Rational big_base;
  if (fa && ga) {
    result_affine = true;
  } else if (fa) {
    if (tail_intercept(f) != 0)
      fail(Errc::TailNotClosed,
           "affine tail with offset " + to_string(tail_intercept(f)) +
               " after a geometric tail leaves the representable class");
    big_base = g.geometric_tail()->base;
  } else if (ga) {
    if (tail_intercept(g) != 0)
      fail(Errc::TailNotClosed,
           "geometric tail after an affine tail with offset " +
               to_string(tail_intercept(g)) +
               " leaves the representable class");
    big_base = f.geometric_tail()->base;
  } else {
    auto common = detail::common_geometric_base(f.geometric_tail()->base,
                                                g.geometric_tail()->base, cap);
    if (!common)
      fail(Errc::IncommensurableScales,
           "geometric bases " + to_string(f.geometric_tail()->base) + " and " +
               to_string(g.geometric_tail()->base) +
               " are not integer powers of a common scale (cap " +
               std::to_string(cap) + ")");
    big_base = *common;
  }

  const PLMap ginv = invert(g);
  const Rational& tf = f.tail_start();
  const Rational& tg = g.tail_start();
  // Beyond t1 both layers are in their tails: g past its own start and f past
  // g's value there.
  const Rational t1 = evaluate(g, tg) >= tf ? tg : evaluate(ginv, tf);

  auto pull_breakpoints = [&](const Rational& lo, const Rational& hi,
                              std::set<Rational>& into) {
    for (const Rational& b : breakpoints_in(g, lo, hi)) into.insert(b);
    for (const Rational& b :
         breakpoints_in(f, evaluate(g, lo), evaluate(g, hi)))
      into.insert(evaluate(ginv, b));
  };

  std::set<Rational> finite;
  pull_breakpoints(Rational(0), t1, finite);
  finite.insert(Rational(0));
  finite.insert(t1);

  PLMap out;
  for (const Rational& x : finite) {
    out.bps.push_back(x);
    out.vals.push_back(evaluate(f, evaluate(g, x)));
  }
  out.slopes = detail::slopes_from_points(out.bps, out.vals);

  if (result_affine) {
    out.tail = AffineTail{fa->slope * ga->slope};
    return detail::canonicalize(std::move(out));
  }

  // One period of f(g(.)) starting at t1.  g maps [t1, base*t1] onto
  // [g(t1), base*g(t1)] exactly, so the pulled-back breakpoints of f land
  // inside the period.
  const Rational top = big_base * t1;
  std::set<Rational> period;
  pull_breakpoints(t1, top, period);
  period.insert(t1);
  period.insert(top);

  GeometricTail t;
  t.base = big_base;
  for (const Rational& x : period) {
    t.bps.push_back(x);
    t.vals.push_back(evaluate(f, evaluate(g, x)));
  }
  t.slopes = detail::slopes_from_points(t.bps, t.vals);
  if (t.vals.back() != big_base * t.vals.front())
    throw std::logic_error("compose: geometric period failed to close");
  out.tail = std::move(t);
  return detail::canonicalize(std::move(out));
}

inline PLMap power(const PLMap& f, int r, int cap = kCommensurabilityCap) {
  if (r < 1)
    fail(Errc::InvalidArgument, "power exponent " + std::to_string(r) +
                                    " must be at least 1");
  PLMap acc = f;
  for (int i = 1; i < r; ++i) acc = compose(acc, f, cap);
  return acc;
}

// Pointwise equality as functions on [0, inf), independent of representation.
// Two affine tails must share a slope and then agree at every breakpoint up
// to the later tail start; commensurable geometric tails must agree across
// one common period, which self-similarity then propagates.  An affine tail
// can only coincide with a canonical geometric one if values separate within
// two periods, so a clean witness always exists there.  Incommensurable
// geometric pairs hunt for a witness across cap period extensions and throw
// IncommensurableScales rather than guess.
inline bool maps_equal(const PLMap& f, const PLMap& g,
                       int cap = kCommensurabilityCap) {
  if (f == g) return true;
  auto agree_on = [&](const Rational& lo, const Rational& hi) {
    std::set<Rational> probe;
    for (const Rational& b : breakpoints_in(f, lo, hi)) probe.insert(b);
    for (const Rational& b : breakpoints_in(g, lo, hi)) probe.insert(b);
    probe.insert(lo);
    probe.insert(hi);
    for (const Rational& x : probe)
      if (evaluate(f, x) != evaluate(g, x)) return false;
    return true;
  };

  const AffineTail* fa = f.affine_tail();
  const AffineTail* ga = g.affine_tail();
  const Rational m =
      f.tail_start() > g.tail_start() ? f.tail_start() : g.tail_start();

  if (fa && ga) {
    if (fa->slope != ga->slope) return false;
    return agree_on(Rational(0), m);
  }
  if (!fa && !ga) {
    const Rational& bf = f.geometric_tail()->base;
    const Rational& bg = g.geometric_tail()->base;
    auto common = detail::common_geometric_base(bf, bg, cap);
    if (common) return agree_on(Rational(0), *common * m);
    Rational grow = bf > bg ? bf : bg;
    Rational hi = grow * m;
    for (int round = 0; round < cap; ++round) {
      if (!agree_on(Rational(0), hi)) return false;
      hi *= grow;
    }
    fail(Errc::IncommensurableScales,
         "bases " + to_string(bf) + " and " + to_string(bg) +
             " are incommensurable and no pointwise witness appeared below " +
             to_string(hi));
  }
  const GeometricTail* t = fa ? g.geometric_tail() : f.geometric_tail();
  if (!agree_on(Rational(0), t->base * t->base * m)) return false;
  // A canonical geometric tail changes slope inside every period, so it can
  // never track an eventually-affine map across two full periods.
  throw std::logic_error("maps_equal: affine and geometric tails agreed on two periods");
}

}  // namespace plq
