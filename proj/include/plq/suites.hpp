#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "plq/textio.hpp"
#include "plq/witnesses.hpp"

namespace plq {

// A suite is a named batch of deterministic property checks over sampled
// maps.  Options pin the sampling seed and volume, so two runs with the same
// options produce the same verdicts; wall_seconds is the only field that
// varies between runs.
struct SuiteOptions {
  std::uint64_t seed = 42;
  int samples = 100;
  int pairs = 100;
  int cap = kCommensurabilityCap;
};

struct SuiteFailure {
  int index = 0;
  std::string detail;
};

struct SuiteReport {
  std::string name;
  int checks = 0;
  std::vector<SuiteFailure> failures;
  double wall_seconds = 0.0;
  bool ok() const { return failures.empty(); }
};

namespace detail {

// splitmix64 step; decorrelates per-sample seeds drawn from one suite seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline SampleConfig suite_sample_config(std::uint64_t seed, TailKind kind) {
  SampleConfig cfg;
  cfg.seed = seed;
  cfg.tail_kind = kind;
  return cfg;
}

// Random evaluation point, occasionally pushed deep into the tail region so
// geometric reduction gets exercised.
inline Rational random_point(SampleRng& rng) {
  Rational x = rat(rng.range(0, 400), rng.range(1, 8));
  if (rng.next(3) == 0) x *= rational_pow(Rational(2), rng.range(3, 20));
  return x;
}

// Sampled map outside H, for torsion and center work.  Resamples with fresh
// salts; a run of 64 identity-class draws in a row does not happen with
// these samplers.
inline PLMap sample_not_in_h(std::uint64_t seed, TailKind kind) {
  for (std::uint64_t salt = 0; salt < 64; ++salt) {
    PLMap f = sample_map(suite_sample_config(mix_seed(seed, salt), kind));
    if (!in_H(f)) return f;
  }
  fail(Errc::RejectionLimitExceeded, "could not sample a map outside H");
}

template <typename Fn>
inline void run_indexed(SuiteReport& report, int count, Fn&& body) {
  for (int i = 0; i < count; ++i) {
    ++report.checks;
    try {
      std::string why = body(i);
      if (!why.empty()) report.failures.push_back({i, std::move(why)});
    } catch (const std::exception& e) {
      report.failures.push_back({i, std::string("exception: ") + e.what()});
    }
  }
}

template <typename Fn>
inline SuiteReport timed_suite(std::string name, Fn&& fill) {
  SuiteReport report;
  report.name = std::move(name);
  auto t0 = std::chrono::steady_clock::now();
  fill(report);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace detail

// Two-sided Lipschitz bounds from the slope range, exactly, at sampled pairs,
// plus the shape constraints on the limit-ratio set.
inline SuiteReport run_bilip_suite(const SuiteOptions& opts) {
  return detail::timed_suite("bilip", [&](SuiteReport& report) {
    detail::run_indexed(report, opts.samples, [&](int i) -> std::string {
      const std::uint64_t seed = detail::mix_seed(opts.seed, i);
      const PLMap f =
          sample_map(detail::suite_sample_config(seed, TailKind::mixed));
      const Rational k = bilip_constant(f);
      const SInvariant s = s_invariant(f);
      if (s.hi < s.lo) return "limit-ratio interval inverted";
      if (s.lo * k < 1 || s.hi > k)
        return "limit-ratio set escapes [1/K, K] with K = " + to_string(k);
      if (f.affine_tail() &&
          !(s.is_singleton() && s.lo == f.affine_tail()->slope))
        return "affine tail must give the singleton of its slope";
      detail::SampleRng rng(detail::mix_seed(seed, 0xF00D));
      for (int p = 0; p < opts.pairs; ++p) {
        Rational x = detail::random_point(rng);
        Rational y = detail::random_point(rng);
        if (x == y) y += rat(1, 3);
        const Rational dx = rabs(x - y);
        const Rational dv = rabs(evaluate(f, x) - evaluate(f, y));
        if (dv > k * dx || dx > k * dv)
          return "pair (" + to_string(x) + ", " + to_string(y) +
                 ") breaks the two-sided bound for K = " + to_string(k);
      }
      return "";
    });
  });
}

// H is closed under composition and inverses, contains exactly the maps with
// singleton limit ratio 1, and is proper: plain rays with slope away from 1
// sit outside it with an exact gap.
inline SuiteReport run_subgroup_suite(const SuiteOptions& opts) {
  return detail::timed_suite("subgroup", [&](SuiteReport& report) {
    detail::run_indexed(report, opts.samples, [&](int i) -> std::string {
      const std::uint64_t seed = detail::mix_seed(opts.seed, i);
      SampleConfig cfg = detail::suite_sample_config(seed, TailKind::mixed);
      const PLMap f = sample_h_member(cfg);
      cfg.seed = detail::mix_seed(seed, 1);
      const PLMap g = sample_h_member(cfg);
      if (!in_H(f) || !in_H(g)) return "sampler left the class";
      if (!in_H(compose(f, g, opts.cap))) return "class not closed under composition";
      if (!in_H(invert(f))) return "class not closed under inverse";
      if (!coset_equivalent(f, identity_map(), opts.cap).equivalent)
        return "member not equivalent to the identity";
      return "";
    });
    const Rational ks[] = {rat(3, 2), Rational(2), Rational(5)};
    for (const Rational& k : ks) {
      ++report.checks;
      const PLMap ray = linear_map(k);
      const CosetDecision d = coset_equivalent(ray, identity_map(), opts.cap);
      if (in_H(ray) || d.equivalent || d.gap != k - 1)
        report.failures.push_back(
            {report.checks - 1,
             "ray with slope " + to_string(k) +
                 " should sit outside H with gap " + to_string(Rational(k - 1)) +
                 ", got " + to_string(d.gap)});
    }
  });
}

// Conjugating a member of H by anything in the group lands back in H.
inline SuiteReport run_normal_suite(const SuiteOptions& opts) {
  return detail::timed_suite("normal", [&](SuiteReport& report) {
    detail::run_indexed(report, opts.samples, [&](int i) -> std::string {
      const std::uint64_t seed = detail::mix_seed(opts.seed, i);
      const PLMap h =
          sample_h_member(detail::suite_sample_config(seed, TailKind::mixed));
      const PLMap g = sample_map(detail::suite_sample_config(
          detail::mix_seed(seed, 2), TailKind::mixed));
      if (!conjugation_check(h, g, opts.cap))
        return "conjugate left the class";
      return "";
    });
  });
}

// No class outside H returns to H under any power up to 8.
inline SuiteReport run_torsion_suite(const SuiteOptions& opts) {
  return detail::timed_suite("torsion", [&](SuiteReport& report) {
    detail::run_indexed(report, opts.samples, [&](int i) -> std::string {
      const std::uint64_t seed = detail::mix_seed(opts.seed, i);
      const PLMap f = detail::sample_not_in_h(seed, TailKind::mixed);
      const auto rows = torsion_order_check(f, 8, opts.cap);
      for (const TorsionRow& row : rows) {
        if (row.in_h)
          return "power " + std::to_string(row.r) + " returned to H";
        if (f.affine_tail()) {
          const Rational expect =
              rational_pow(f.affine_tail()->slope, row.r);
          if (!(row.s.is_singleton() && row.s.lo == expect))
            return "power " + std::to_string(row.r) +
                   " should have singleton ratio " + to_string(expect);
        }
      }
      const auto [s, separates] = torsion_witness(f, 5, opts.cap);
      if (!separates) return "witness for the fifth power failed";
      return "";
    });
  });
}

// The constructed conjugator separates every non-identity class: fixed
// slopes get their exact anchors, slopes, and gaps checked; sampled slopes
// and geometric classes get the verdict and positivity checks.
inline SuiteReport run_center_suite(const SuiteOptions& opts) {
  return detail::timed_suite("center", [&](SuiteReport& report) {
    const Rational fixed[] = {rat(3, 2), Rational(2), Rational(3), Rational(5)};
    for (const Rational& s : fixed) {
      ++report.checks;
      try {
        const WitnessBundle w = center_witness(linear_map(s), 4, opts.cap);
        std::string why;
        const PLMap& g = w.conjugator;
        const Rational lam = 3 * s;
        const Rational half = rat(1, 2);
        const Rational recover = (5 * s - 1) / (4 * s);
        const GeometricTail* t = g.geometric_tail();
        if (!t || t->base != lam)
          why = "conjugator must repeat with scale " + to_string(lam);
        else if (t->slopes != std::vector<Rational>{half, recover})
          why = "conjugator period slopes should be 1/2 and " +
                to_string(recover);
        else if (slope_bounds(g).min_slope < half ||
                 slope_bounds(g).max_slope > rat(5, 4))
          why = "conjugator slopes left [1/2, 5/4]";
        else if (evaluate(g, rat(1, 2)) != rat(1, 2))
          why = "conjugator must fix [0, 1] pointwise";
        else if (w.verdict.equivalent || w.verdict.gap != (s - 1) / 2)
          why = "class-level gap should be " + to_string(Rational((s - 1) / 2));
        for (std::size_t k = 0; why.empty() && k < w.anchors.size(); ++k) {
          const Rational& a = w.anchors[k];
          if (a != rational_pow(lam, static_cast<int>(k))) {
            why = "anchor " + std::to_string(k) + " should be " +
                  to_string(rational_pow(lam, static_cast<int>(k)));
            break;
          }
          if (evaluate(g, a) != a) {
            why = "conjugator must fix anchor " + to_string(a);
            break;
          }
          if (evaluate(g, s * a) != (a + s * a) / 2) {
            why = "conjugator must send the anchor image to the midpoint";
            break;
          }
          if (w.gaps[k] != (s - 1) / 2) {
            why = "anchor gap should be " + to_string(Rational((s - 1) / 2));
            break;
          }
        }
        if (!why.empty())
          report.failures.push_back({report.checks - 1, std::move(why)});
      } catch (const std::exception& e) {
        report.failures.push_back(
            {report.checks - 1, std::string("exception: ") + e.what()});
      }
    }
    // reciprocal classes run against the inverse
    ++report.checks;
    try {
      const WitnessBundle w = center_witness(linear_map(rat(1, 2)), 2, opts.cap);
      if (!w.inverted || w.verdict.equivalent || w.verdict.gap != rat(1, 2))
        report.failures.push_back(
            {report.checks - 1, "reciprocal class should invert and give gap 1/2"});
    } catch (const std::exception& e) {
      report.failures.push_back(
          {report.checks - 1, std::string("exception: ") + e.what()});
    }
    detail::run_indexed(report, opts.samples, [&](int i) -> std::string {
      const std::uint64_t seed = detail::mix_seed(opts.seed, 0xCE17 + i);
      const PLMap f = detail::sample_not_in_h(seed, TailKind::mixed);
      const WitnessBundle w = center_witness(f, 3, opts.cap);
      if (w.verdict.equivalent) return "witness failed to separate";
      if (w.verdict.gap <= 0) return "gap must be positive";
      for (const Rational& gap : w.gaps)
        if (gap < 0) return "anchor gaps must be nonnegative";
      return "";
    });
    ++report.checks;
    try {
      center_witness(identity_map(), 1, opts.cap);
      report.failures.push_back(
          {report.checks - 1, "identity class must refuse a witness"});
    } catch (const Error& e) {
      if (e.kind() != Errc::SlopeNotAboveOne)
        report.failures.push_back(
            {report.checks - 1, "identity class threw the wrong kind"});
    }
  });
}

// Group laws for the exact composition, plus the quotient's own laws on
// class representatives.  Triples alternate between an affine bank and a
// scale-compatible geometric bank so every composition stays representable.
inline SuiteReport run_algebra_suite(const SuiteOptions& opts) {
  return detail::timed_suite("algebra", [&](SuiteReport& report) {
    detail::run_indexed(report, opts.samples, [&](int i) -> std::string {
      const std::uint64_t seed = detail::mix_seed(opts.seed, 0xA16 + i);
      SampleConfig cfg;
      cfg.seed = seed;
      if (i % 2 == 0) {
        cfg.tail_kind = TailKind::affine;
      } else {
        cfg.tail_kind = i % 4 == 1 ? TailKind::geometric : TailKind::linear;
        cfg.bases = {Rational(2), Rational(4)};
      }
      const PLMap f = sample_map(cfg);
      cfg.seed = detail::mix_seed(seed, 1);
      const PLMap g = sample_map(cfg);
      cfg.seed = detail::mix_seed(seed, 2);
      const PLMap h = sample_map(cfg);

      const PLMap fg = compose(f, g, opts.cap);
      if (!maps_equal(compose(fg, h, opts.cap),
                      compose(f, compose(g, h, opts.cap), opts.cap), opts.cap))
        return "composition is not associative here";
      if (!maps_equal(compose(f, invert(f), opts.cap), identity_map(), opts.cap))
        return "right inverse failed";
      if (!maps_equal(compose(invert(f), f, opts.cap), identity_map(), opts.cap))
        return "left inverse failed";
      if (!maps_equal(compose(f, identity_map(), opts.cap), f, opts.cap))
        return "identity is not neutral";

      const SlopeBounds bf = slope_bounds(f);
      const SlopeBounds bg = slope_bounds(g);
      const SlopeBounds bfg = slope_bounds(fg);
      if (bfg.min_slope < bf.min_slope * bg.min_slope ||
          bfg.max_slope > bf.max_slope * bg.max_slope)
        return "slope bounds of a composite escaped the products";

      detail::SampleRng rng(detail::mix_seed(seed, 3));
      for (int p = 0; p < 8; ++p) {
        const Rational x = detail::random_point(rng);
        if (evaluate(fg, x) != evaluate(f, evaluate(g, x)))
          return "composite disagrees with pointwise composition at " +
                 to_string(x);
        const Rational y = detail::random_point(rng);
        if (x < y && evaluate(f, x) >= evaluate(f, y))
          return "monotonicity failed";
      }

      const PLMap nf = normalize_mod_H(f);
      if (normalize_mod_H(nf) != nf) return "normalization is not idempotent";
      if (!coset_equivalent(f, nf, opts.cap).equivalent)
        return "normalization left the class";
      if (!maps_equal(
              quotient_compose(quotient_compose(f, g, opts.cap), h, opts.cap),
              quotient_compose(f, quotient_compose(g, h, opts.cap), opts.cap),
              opts.cap))
        return "class composition is not associative here";
      return "";
    });
  });
}

// Text form round-trips: parse(serialize(f)) reproduces the canonical object
// and reserializing reproduces the bytes.
inline SuiteReport run_roundtrip_suite(const SuiteOptions& opts) {
  return detail::timed_suite("roundtrip", [&](SuiteReport& report) {
    detail::run_indexed(report, opts.samples, [&](int i) -> std::string {
      const std::uint64_t seed = detail::mix_seed(opts.seed, 0x510 + i);
      const PLMap f =
          sample_map(detail::suite_sample_config(seed, TailKind::mixed));
      const std::string text = textio::serialize(f);
      const PLMap back = textio::parse(text);
      if (back != f) return "parse(serialize) changed the object";
      if (textio::serialize(back) != text) return "bytes are not stable";
      return "";
    });
  });
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "bilip", "subgroup", "normal", "torsion",
      "center", "algebra", "roundtrip"};
  return names;
}

inline SuiteReport run_suite(const std::string& name,
                             const SuiteOptions& opts) {
  if (name == "bilip") return run_bilip_suite(opts);
  if (name == "subgroup") return run_subgroup_suite(opts);
  if (name == "normal") return run_normal_suite(opts);
  if (name == "torsion") return run_torsion_suite(opts);
  if (name == "center") return run_center_suite(opts);
  if (name == "algebra") return run_algebra_suite(opts);
  if (name == "roundtrip") return run_roundtrip_suite(opts);
  fail(Errc::InvalidArgument, "unknown suite '" + name + "'");
}

inline std::string render_report(const SuiteReport& report, bool timings) {
  std::string out = "suite " + report.name + ": checks " +
                    std::to_string(report.checks) + " failures " +
                    std::to_string(report.failures.size());
  if (timings) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), " (%.3fs)", report.wall_seconds);
    out += buf;
  }
  out += '\n';
  for (const SuiteFailure& f : report.failures) {
    out += "  [" + std::to_string(f.index) + "] " + f.detail + "\n";
  }
  return out;
}

}  // namespace plq
