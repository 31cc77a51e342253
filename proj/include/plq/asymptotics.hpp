#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "plq/group_ops.hpp"

namespace plq {

// The closed set of limit points of f(x)/x as x grows: a single value for an
// affine tail, an exact closed interval for a geometric one.
struct SInvariant {
  Rational lo;
  Rational hi;
  bool is_singleton() const { return lo == hi; }
  bool operator==(const SInvariant&) const = default;
};

inline SInvariant s_invariant(const PLMap& f) {
  if (const AffineTail* a = f.affine_tail()) return {a->slope, a->slope};
  // Over one period the ratio f(x)/x is monotone on each linear gap (it is
  // slope + offset/x there), so its extremes sit on pattern breakpoints, and
  // self-similarity repeats the same range forever.
  const GeometricTail& t = *f.geometric_tail();
  Rational lo = t.vals.front() / t.bps.front();
  Rational hi = lo;
  for (std::size_t i = 1; i < t.bps.size(); ++i) {
    Rational phi = t.vals[i] / t.bps[i];
    if (phi < lo) lo = phi;
    if (phi > hi) hi = phi;
  }
  return {lo, hi};
}

// Membership in the class of maps asymptotic to the identity,
// f(x)/x -> 1.
inline bool in_H(const PLMap& f) {
  SInvariant s = s_invariant(f);
  return s.is_singleton() && s.lo == 1;
}

// Representative of the class of f modulo tail-asymptotics: the tail is kept
// and the head is flattened to the single ray that meets it.  Affine tails
// collapse all the way to x -> slope * x.  Idempotent by construction.
inline PLMap normalize_mod_H(const PLMap& f) {
  if (const AffineTail* a = f.affine_tail()) return linear_map(a->slope);
  const GeometricTail& t = *f.geometric_tail();
  PLMap out;
  out.bps = {Rational(0), f.tail_start()};
  out.vals = {Rational(0), f.tail_value()};
  out.slopes = {f.tail_value() / f.tail_start()};
  out.tail = t;
  return detail::canonicalize(std::move(out));
}

// Outcome of the coset test.  On "not equivalent" the gap is a positive
// rational with |f(x_k) - g(x_k)| / x_k >= gap at every point of the
// geometric sequence x_k = seq_start * seq_ratio^k, k = 0, 1, 2, ...; the
// certificate narrates the exact quantities behind the verdict.
struct CosetDecision {
  bool equivalent = false;
  std::string certificate;
  Rational gap = 0;
  Rational seq_start = 0;
  Rational seq_ratio = 0;
};

// Decides whether f and g land in the same coset modulo H, i.e. whether
// (f - g)(x) / x -> 0.  Works on normalized representatives: their
// difference is self-similar past the later tail start, so the supremum of
// |f - g|(x) / x over one period is both exact and achieved along a
// geometric sequence.  Original maps differ from their representatives by
// head adjustments and affine offsets only; offsets shrink the guaranteed
// per-point bound by at most half once the sequence starts late enough.
inline CosetDecision coset_equivalent(const PLMap& f, const PLMap& g,
                                      int cap = kCommensurabilityCap) {
  const PLMap nf = normalize_mod_H(f);
  const PLMap ng = normalize_mod_H(g);
  const GeometricTail* tf = nf.geometric_tail();
  const GeometricTail* tg = ng.geometric_tail();

  Rational ratio;
  if (tf && tg) {
    auto common = detail::common_geometric_base(tf->base, tg->base, cap);
    if (!common)
      fail(Errc::IncommensurableScales,
           "cannot compare classes across bases " + to_string(tf->base) +
               " and " + to_string(tg->base) + " (cap " + std::to_string(cap) +
               ")");
    ratio = *common;
  } else if (tf) {
    ratio = tf->base;
  } else if (tg) {
    ratio = tg->base;
  } else {
    ratio = 2;  // both linear; any period works
  }

  Rational start = nf.tail_start() > ng.tail_start() ? nf.tail_start()
                                                     : ng.tail_start();
  if (start < 1) start = 1;

  std::set<Rational> probe;
  const Rational top = ratio * start;
  for (const Rational& b : breakpoints_in(nf, start, top)) probe.insert(b);
  for (const Rational& b : breakpoints_in(ng, start, top)) probe.insert(b);
  probe.insert(start);
  probe.insert(top);

  Rational gamma = 0;
  Rational arg = start;
  for (const Rational& p : probe) {
    Rational psi = rabs(evaluate(nf, p) - evaluate(ng, p)) / p;
    if (psi > gamma) {
      gamma = psi;
      arg = p;
    }
  }

  CosetDecision d;
  d.seq_ratio = ratio;
  if (gamma == 0) {
    d.equivalent = true;
    d.certificate =
        "normalized representatives coincide on [" + to_string(start) +
        ", inf); the remaining difference is a head of bounded span plus "
        "constant tail offsets, and both vanish against x";
    return d;
  }

  // Offsets of the originals against their representatives persist into the
  // tails; only their difference matters.
  Rational offset = 0;
  if (f.affine_tail()) offset += tail_intercept(f);
  if (g.affine_tail()) offset -= tail_intercept(g);
  offset = rabs(offset);

  Rational lo = f.tail_start() > g.tail_start() ? f.tail_start()
                                                : g.tail_start();
  Rational seq = arg;
  while (seq < lo) seq *= ratio;
  d.gap = gamma;
  if (offset != 0) {
    d.gap = gamma / 2;
    const Rational needed = 2 * offset / gamma;
    while (seq < needed) seq *= ratio;
  }
  d.seq_start = seq;
  d.equivalent = false;
  d.certificate =
      "|f - g|(x) / x approaches " + to_string(gamma) + " along x = " +
      to_string(seq) + " * " + to_string(ratio) + "^k and stays at or above " +
      to_string(d.gap) + " there";
  return d;
}

// Composition at the level of classes: normalize, compose, normalize.  Stays
// inside the representable tails for every pair of classes with commensurable
// scales, because normalized affine tails have no offset.
inline PLMap quotient_compose(const PLMap& f, const PLMap& g,
                              int cap = kCommensurabilityCap) {
  return normalize_mod_H(
      compose(normalize_mod_H(f), normalize_mod_H(g), cap));
}

// One row per exponent: the invariant of the r-th power's class and whether
// that power fell into H.
struct TorsionRow {
  int r = 0;
  SInvariant s;
  bool in_h = false;
};

inline std::vector<TorsionRow> torsion_order_check(
    const PLMap& f, int r_max, int cap = kCommensurabilityCap) {
  if (r_max < 1)
    fail(Errc::InvalidArgument,
         "torsion check needs r_max >= 1, got " + std::to_string(r_max));
  const PLMap base = normalize_mod_H(f);
  std::vector<TorsionRow> rows;
  rows.reserve(static_cast<std::size_t>(r_max));
  PLMap acc = base;
  for (int r = 1; r <= r_max; ++r) {
    rows.push_back({r, s_invariant(acc), in_H(acc)});
    if (r < r_max) acc = normalize_mod_H(compose(acc, base, cap));
  }
  return rows;
}

}  // namespace plq
