#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "plq/asymptotics.hpp"

namespace plq {

// Anchors a_1, a_2, ... with a_{k+1} = 3 f(a_k), for maps that follow a ray
// x -> s x with s > 1 beyond their tail start.  The factor 3 keeps each
// anchor's image well clear of the next anchor, which is what the
// non-commuting conjugator construction needs room for.
inline std::vector<Rational> anchor_sequence(const PLMap& f,
                                             const Rational& a1, int n) {
  if (n < 1)
    fail(Errc::InvalidArgument,
         "anchor count " + std::to_string(n) + " must be at least 1");
  if (!tail_is_linear(f))
    fail(Errc::NotLinearTail,
         "anchor sequences need a tail running along a ray through the "
         "origin");
  if (f.affine_tail()->slope <= 1)
    fail(Errc::SlopeNotAboveOne,
         "anchor sequences need tail slope above 1, got " +
             to_string(f.affine_tail()->slope));
  if (a1 <= 0 || a1 < f.tail_start())
    fail(Errc::AnchorBelowTailStart,
         "first anchor " + to_string(a1) + " must lie at or past the tail "
         "start " + to_string(f.tail_start()) + " and be positive");
  std::vector<Rational> out{a1};
  while (static_cast<int>(out.size()) < n)
    out.push_back(3 * evaluate(f, out.back()));
  return out;
}

// |f(g(a)) - g(f(a))| / a at each anchor; positive entries certify that the
// pair moves points apart relative to scale.
inline std::vector<Rational> noncommute_gap(const PLMap& f, const PLMap& g,
                                            const std::vector<Rational>& anchors) {
  std::vector<Rational> out;
  out.reserve(anchors.size());
  for (const Rational& a : anchors) {
    if (a <= 0)
      fail(Errc::InvalidArgument,
           "noncommute gap needs positive anchors, got " + to_string(a));
    out.push_back(rabs(evaluate(f, evaluate(g, a)) -
                       evaluate(g, evaluate(f, a))) / a);
  }
  return out;
}

// Everything center_witness produces: the conjugator g, the anchors where f
// and g visibly fail to commute, the per-anchor gaps, and the class-level
// verdict that [f, g] does not vanish modulo H.  inverted records that the
// construction ran against f^{-1} because f itself sank below the identity.
struct WitnessBundle {
  std::vector<Rational> anchors;
  PLMap conjugator;
  std::vector<Rational> gaps;
  CosetDecision verdict;
  bool inverted = false;
};

// For any f whose class is not the identity, produces a g with
// [f o g] != [g o f], certifying that the class of f is not central.  A ray
// class x -> s x with s > 1 gets the explicit conjugator: identity up to the
// first anchor, then one geometric period from a_1 to 3 s a_1 that drops to
// slope 1/2 across [a_1, s a_1] and recovers across [s a_1, 3 s a_1]; its
// slopes stay inside [1/2, 5/4] and it sends f(a_1) to the midpoint of
// [a_1, f(a_1)], which no map commuting with f can do.  Classes with s < 1
// run the same construction against the inverse.  Genuinely geometric
// classes instead get a plain ray partner chosen from small primes; at most
// one prime can be a power of the class's own scale, so one of them always
// separates.
inline WitnessBundle center_witness(const PLMap& f, int n_anchors = 4,
                                    int cap = kCommensurabilityCap) {
  if (n_anchors < 1)
    fail(Errc::InvalidArgument, "anchor count must be at least 1");
  const PLMap rep = normalize_mod_H(f);

  if (const AffineTail* a = rep.affine_tail()) {
    if (a->slope == 1)
      fail(Errc::SlopeNotAboveOne,
           "the class of this map is the identity and commutes with "
           "everything; no witness exists");
    const bool inverted = a->slope < 1;
    const PLMap ray = inverted ? invert(rep) : rep;
    const Rational s = ray.affine_tail()->slope;

    const Rational a1 = 1;
    RawMap raw;
    raw.pieces.push_back({a1, Rational(1)});
    raw.tail_base = 3 * s;
    raw.pattern.push_back({s * a1, Rational(1, 2)});
    raw.pattern.push_back({3 * s * a1, (5 * s - 1) / (4 * s)});
    PLMap g = validate(raw);

    WitnessBundle w;
    w.inverted = inverted;
    w.anchors = anchor_sequence(ray, a1, n_anchors);
    w.conjugator = g;
    w.gaps = noncommute_gap(ray, g, w.anchors);
    w.verdict = coset_equivalent(compose(ray, g, cap), compose(g, ray, cap), cap);
    return w;
  }

  for (int c : {2, 3, 5, 7}) {
    PLMap g = linear_map(Rational(c));
    CosetDecision verdict =
        coset_equivalent(compose(rep, g, cap), compose(g, rep, cap), cap);
    if (verdict.equivalent) continue;
    WitnessBundle w;
    w.conjugator = std::move(g);
    Rational a = verdict.seq_start;
    for (int k = 0; k < n_anchors; ++k) {
      w.anchors.push_back(a);
      a *= verdict.seq_ratio;
    }
    w.gaps = noncommute_gap(rep, w.conjugator, w.anchors);
    w.verdict = std::move(verdict);
    return w;
  }
  throw std::logic_error("center_witness: no ray partner separated a geometric class");
}

// g^{-1} f g stays in H whenever f is in H; this computes that conjugate's
// membership directly.
inline bool conjugation_check(const PLMap& f, const PLMap& g,
                              int cap = kCommensurabilityCap) {
  if (!in_H(f))
    fail(Errc::NotInH, "conjugation check expects the inner map to satisfy "
                       "f(x)/x -> 1");
  const PLMap conj = compose(invert(g), compose(f, g, cap), cap);
  return in_H(conj);
}

// The invariant of the r-th power's class together with the verdict that it
// differs from the identity class, certifying that no nontrivial class has
// finite order.  Asking for a witness when f is already in H is an error:
// its powers never leave H.
inline std::pair<SInvariant, bool> torsion_witness(const PLMap& f, int r,
                                                   int cap = kCommensurabilityCap) {
  if (r < 1)
    fail(Errc::InvalidArgument,
         "power " + std::to_string(r) + " must be at least 1");
  if (in_H(f))
    fail(Errc::InHNoWitness,
         "map lies in the asymptotic-identity class; every power does too");
  const SInvariant s = s_invariant(power(normalize_mod_H(f), r, cap));
  const bool separates = !(s.is_singleton() && s.lo == 1);
  return {s, separates};
}

enum class TailKind { affine, linear, geometric, mixed };

// Knobs for the random generator.  slope_bound is the K of the target class:
// every sampled slope lands strictly inside (1/K, K).  bases lists the
// geometric scales the sampler may pick from.
struct SampleConfig {
  std::uint64_t seed = 0;
  int max_breakpoints = 4;
  Rational slope_bound = 4;
  int denominator_bound = 6;
  TailKind tail_kind = TailKind::mixed;
  std::vector<Rational> bases = {Rational(2), Rational(3), Rational(3, 2)};
};

namespace detail {

// mt19937_64 plus modulo draws: the engine's output sequence is pinned by the
// standard, unlike the distribution classes, so samples reproduce across
// platforms.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next(std::uint64_t n) { return eng_() % n; }
  int range(int lo, int hi) {
    return lo + static_cast<int>(next(static_cast<std::uint64_t>(hi - lo + 1)));
  }

 private:
  std::mt19937_64 eng_;
};

// Uniform-ish rational strictly inside (1/K, K): pick a denominator, then an
// admissible numerator.  Denominator 1 always admits numerator 1, so this
// cannot stall.
inline Rational random_slope(SampleRng& rng, const Rational& bound,
                             int denominator_bound) {
  for (int tries = 0; tries < 64; ++tries) {
    const Integer d = rng.range(1, denominator_bound);
    // smallest integer strictly above d/K and largest strictly below d*K
    const Rational lo_r = d / bound;
    const Rational hi_r = d * bound;
    Integer lo = rfloor(lo_r) + 1;
    Integer hi = rfloor(hi_r);
    if (hi * den(hi_r) == num(hi_r)) --hi;
    if (lo > hi) continue;
    const Integer n = lo + Integer(rng.next(
        static_cast<std::uint64_t>(Integer(hi - lo + 1)
                                       .convert_to<unsigned long long>())));
    return rat(n, d);
  }
  return Rational(1);
}

inline Rational random_increment(SampleRng& rng, int denominator_bound) {
  return rat(rng.range(1, 4), rng.range(1, denominator_bound));
}

}  // namespace detail

// Draws a random canonical map with the configured tail kind, breakpoint
// budget, and slope class.  Geometric tails need their last pattern slope
// solved from the self-similarity constraint; draws whose solved slope falls
// outside the class are rejected and retried, up to a fixed budget.
inline PLMap sample_map(const SampleConfig& cfg) {
  if (cfg.slope_bound <= 1)
    fail(Errc::InvalidArgument, "slope bound must exceed 1");
  if (cfg.max_breakpoints < 1 || cfg.denominator_bound < 1 ||
      cfg.bases.empty())
    fail(Errc::InvalidArgument, "degenerate sampler configuration");
  detail::SampleRng rng(cfg.seed);
  constexpr int kAttempts = 256;

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    TailKind kind = cfg.tail_kind;
    if (kind == TailKind::mixed) {
      switch (rng.next(3)) {
        case 0: kind = TailKind::affine; break;
        case 1: kind = TailKind::linear; break;
        default: kind = TailKind::geometric; break;
      }
    }

    int pieces = rng.range(0, cfg.max_breakpoints);
    if (kind == TailKind::geometric && pieces == 0) pieces = 1;

    RawMap raw;
    Rational x = 0;
    Rational v = 0;
    for (int i = 0; i < pieces; ++i) {
      x += detail::random_increment(rng, cfg.denominator_bound);
      Rational s = detail::random_slope(rng, cfg.slope_bound,
                                        cfg.denominator_bound);
      v += s * (x - (raw.pieces.empty() ? Rational(0)
                                        : raw.pieces.back().endpoint));
      raw.pieces.push_back({x, std::move(s)});
    }

    if (kind == TailKind::affine || kind == TailKind::linear) {
      if (kind == TailKind::affine) {
        raw.tail_slope =
            detail::random_slope(rng, cfg.slope_bound, cfg.denominator_bound);
      } else {
        // Continue along the ray through (T, f(T)); with no pieces that ray
        // is a random one through the origin.
        raw.tail_slope = pieces == 0 ? detail::random_slope(
                                           rng, cfg.slope_bound,
                                           cfg.denominator_bound)
                                     : Rational(v / x);
      }
      PLMap drawn = validate(raw);
      // a draw that collapses to the identity is useless to every caller;
      // spend another attempt instead of returning it
      if (drawn == identity_map()) continue;
      return drawn;
    }

    const Rational base =
        cfg.bases[rng.next(static_cast<std::uint64_t>(cfg.bases.size()))];
    const Rational span = (base - 1) * x;
    const int interior = rng.range(1, 3);
    std::set<int> cuts;
    while (static_cast<int>(cuts.size()) < interior) cuts.insert(rng.range(1, 7));

    std::vector<Rational> ends;
    for (int c : cuts) ends.push_back(x + span * rat(c, 8));
    ends.push_back(base * x);

    // All but the last slope are free; the last must land the period on
    // base * f(T) exactly.
    Rational rise_left = (base - 1) * v;
    Rational prev = x;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < ends.size(); ++i) {
      Rational s = detail::random_slope(rng, cfg.slope_bound,
                                        cfg.denominator_bound);
      rise_left -= s * (ends[i] - prev);
      prev = ends[i];
      raw.pattern.push_back({ends[i], std::move(s)});
    }
    const Rational solved = rise_left / (ends.back() - prev);
    if (solved * cfg.slope_bound <= 1 || solved >= cfg.slope_bound) {
      raw.pattern.clear();
      continue;
    }
    raw.tail_base = base;
    raw.pattern.push_back({ends.back(), solved});
    PLMap drawn = validate(raw);
    // when every pattern slope comes out equal the period is secretly a ray
    // and canonical form demotes the tail to affine; redraw to keep the
    // promised kind
    if (drawn.geometric_tail() == nullptr) continue;
    return drawn;
  }
  fail(Errc::RejectionLimitExceeded,
       "sampler could not place a valid geometric period in 256 attempts");
}

// Random member of the asymptotic-identity class: a head of random slopes
// whose last gap is solved to bring the map back to f(T) = T, then the
// identity ray.  Rejected draws retry like sample_map.
inline PLMap sample_h_member(const SampleConfig& cfg) {
  if (cfg.slope_bound <= 1)
    fail(Errc::InvalidArgument, "slope bound must exceed 1");
  detail::SampleRng rng(cfg.seed);
  constexpr int kAttempts = 256;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    const int pieces = rng.range(2, cfg.max_breakpoints < 2
                                        ? 2
                                        : cfg.max_breakpoints);
    RawMap raw;
    Rational x = 0;
    Rational v = 0;
    for (int i = 0; i + 1 < pieces; ++i) {
      x += detail::random_increment(rng, cfg.denominator_bound);
      Rational s = detail::random_slope(rng, cfg.slope_bound,
                                        cfg.denominator_bound);
      v += s * (x - (raw.pieces.empty() ? Rational(0)
                                        : raw.pieces.back().endpoint));
      raw.pieces.push_back({x, std::move(s)});
    }
    const Rational last = x + detail::random_increment(rng,
                                                       cfg.denominator_bound);
    const Rational solved = (last - v) / (last - x);
    if (solved * cfg.slope_bound <= 1 || solved >= cfg.slope_bound) continue;
    raw.pieces.push_back({last, solved});
    raw.tail_slope = Rational(1);
    return validate(raw);
  }
  fail(Errc::RejectionLimitExceeded,
       "sampler could not solve a returning head in 256 attempts");
}

}  // namespace plq
