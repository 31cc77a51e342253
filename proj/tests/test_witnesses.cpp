#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "plq/textio.hpp"
#include "plq/witnesses.hpp"

using namespace plq;

namespace {

const char* kGeo =
    "plmap v1\npiece 1 1\ntail geometric 2\n piece 3/2 1/2\n piece 2 3/2\nend\n";

Errc thrown_kind(void (*fn)()) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  throw std::logic_error("expected an Error");
}

}  // namespace

TEST_CASE("anchor sequences triple past each image") {
  const PLMap f = linear_map(2);
  CHECK(anchor_sequence(f, 1, 4) ==
        std::vector<Rational>{1, 6, 36, 216});
  CHECK(anchor_sequence(f, rat(1, 2), 2) ==
        std::vector<Rational>{rat(1, 2), 3});

  CHECK(thrown_kind([] { anchor_sequence(linear_map(2), Rational(0), 2); }) ==
        Errc::AnchorBelowTailStart);
  CHECK(thrown_kind([] { anchor_sequence(linear_map(1), Rational(1), 2); }) ==
        Errc::SlopeNotAboveOne);
  CHECK(thrown_kind([] { anchor_sequence(linear_map(rat(1, 2)), Rational(1), 2); }) ==
        Errc::SlopeNotAboveOne);
  CHECK(thrown_kind([] {
          anchor_sequence(textio::parse("plmap v1\npiece 1 3\ntail slope 2\n"),
                          Rational(1), 2);
        }) == Errc::NotLinearTail);
  // a head below the tail start is fine, an anchor below it is not
  CHECK(thrown_kind([] {
          anchor_sequence(
              textio::parse("plmap v1\npiece 1 1/2\npiece 3 11/4\ntail slope 2\n"),
              Rational(2), 2);
        }) == Errc::AnchorBelowTailStart);
}

TEST_CASE("center witness for the doubling class, checked piece by piece") {
  const WitnessBundle w = center_witness(linear_map(2), 4);
  CHECK_FALSE(w.inverted);
  CHECK(w.anchors == std::vector<Rational>{1, 6, 36, 216});

  const PLMap& g = w.conjugator;
  REQUIRE(g.geometric_tail() != nullptr);
  CHECK(g.geometric_tail()->base == 6);
  CHECK(g.geometric_tail()->bps == std::vector<Rational>{1, 2, 6});
  CHECK(g.geometric_tail()->slopes ==
        std::vector<Rational>{rat(1, 2), rat(9, 8)});

  // fixes [0, a_1] pointwise
  CHECK(evaluate(g, rat(1, 3)) == rat(1, 3));
  CHECK(evaluate(g, 1) == 1);
  // fixes every anchor, so each [a_k, a_{k+1}] maps onto itself
  for (const Rational& a : w.anchors) CHECK(evaluate(g, a) == a);
  // sends each anchor image to the midpoint of anchor and image
  const PLMap f = linear_map(2);
  for (const Rational& a : w.anchors)
    CHECK(evaluate(g, evaluate(f, a)) == (a + evaluate(f, a)) / 2);
  // slopes stay within the commuting-obstruction window
  CHECK(slope_bounds(g).min_slope >= rat(1, 2));
  CHECK(slope_bounds(g).max_slope <= rat(5, 4));

  CHECK(w.gaps == std::vector<Rational>(4, rat(1, 2)));
  CHECK_FALSE(w.verdict.equivalent);
  CHECK(w.verdict.gap == rat(1, 2));

  // and the commutator genuinely misses H
  const PLMap fg = compose(f, g);
  const PLMap gf = compose(g, f);
  const PLMap comm = compose(fg, invert(gf));
  CHECK_FALSE(in_H(comm));
}

TEST_CASE("center witness adapts to the class") {
  // slope 3/2: recovery slope (5s-1)/(4s) = 13/12, scale 9/2
  const WitnessBundle w = center_witness(linear_map(rat(3, 2)), 3);
  CHECK(w.conjugator.geometric_tail()->base == rat(9, 2));
  CHECK(w.conjugator.geometric_tail()->slopes ==
        std::vector<Rational>{rat(1, 2), rat(13, 12)});
  CHECK(w.anchors == std::vector<Rational>{1, rat(9, 2), rat(81, 4)});
  CHECK(w.verdict.gap == rat(1, 4));

  // contracting classes run against the inverse
  const WitnessBundle wi = center_witness(linear_map(rat(1, 2)), 2);
  CHECK(wi.inverted);
  CHECK(wi.verdict.gap == rat(1, 2));
  CHECK_FALSE(wi.verdict.equivalent);

  // affine offsets do not change the class or the witness
  const WitnessBundle wa =
      center_witness(textio::parse("plmap v1\npiece 1 3\ntail slope 2\n"), 2);
  CHECK(wa.conjugator == center_witness(linear_map(2), 2).conjugator);

  // the identity class has no witness
  CHECK(thrown_kind([] { center_witness(identity_map(), 1); }) ==
        Errc::SlopeNotAboveOne);
  CHECK(thrown_kind([] {
          center_witness(
              textio::parse("plmap v1\npiece 1 2\ntail slope 1\n"), 1);
        }) == Errc::SlopeNotAboveOne);
}

TEST_CASE("center witness pairs geometric classes with a ray") {
  const PLMap g = textio::parse(kGeo);
  const WitnessBundle w = center_witness(g, 3);
  REQUIRE(w.conjugator.affine_tail() != nullptr);
  CHECK(tail_is_linear(w.conjugator));
  CHECK_FALSE(w.verdict.equivalent);
  CHECK(w.verdict.gap > 0);
  REQUIRE(w.anchors.size() == 3);
  for (std::size_t k = 0; k + 1 < w.anchors.size(); ++k)
    CHECK(w.anchors[k + 1] == w.anchors[k] * w.verdict.seq_ratio);
  // the verdict's sequence realizes the gap against the chosen partner
  const PLMap fg = compose(g, w.conjugator);
  const PLMap gf = compose(w.conjugator, g);
  for (const Rational& a : w.anchors)
    CHECK(rabs(evaluate(fg, a) - evaluate(gf, a)) >= w.verdict.gap * a);
}

TEST_CASE("conjugation keeps H members in H") {
  const PLMap h =
      textio::parse("plmap v1\npiece 1 1/2\npiece 2 3/2\ntail slope 1\n");
  CHECK(conjugation_check(h, linear_map(7)));
  CHECK(conjugation_check(h, textio::parse(kGeo)));
  CHECK(conjugation_check(h, textio::parse("plmap v1\npiece 1 3\ntail slope 2\n")));
  CHECK(thrown_kind([] {
          conjugation_check(linear_map(2), linear_map(3));
        }) == Errc::NotInH);
}

TEST_CASE("torsion witnesses separate powers from the identity class") {
  const auto [s2, ok2] = torsion_witness(linear_map(rat(3, 2)), 2);
  CHECK(ok2);
  CHECK(s2.is_singleton());
  CHECK(s2.lo == rat(9, 4));

  const auto [sg, okg] = torsion_witness(textio::parse(kGeo), 3);
  CHECK(okg);
  CHECK_FALSE((sg.is_singleton() && sg.lo == 1));

  CHECK(thrown_kind([] { torsion_witness(identity_map(), 2); }) ==
        Errc::InHNoWitness);
  CHECK(thrown_kind([] { torsion_witness(linear_map(2), 0); }) ==
        Errc::InvalidArgument);
}

TEST_CASE("samplers are deterministic and honor their class") {
  SampleConfig cfg;
  cfg.seed = 7;
  const PLMap f1 = sample_map(cfg);
  const PLMap f2 = sample_map(cfg);
  CHECK(f1 == f2);
  cfg.seed = 8;
  CHECK(sample_map(cfg) != f1);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cfg.seed = seed;
    cfg.tail_kind = TailKind::mixed;
    const PLMap f = sample_map(cfg);
    const SlopeBounds b = slope_bounds(f);
    CHECK(b.min_slope * cfg.slope_bound > 1);
    CHECK(b.max_slope < cfg.slope_bound);
    CHECK(bilip_constant(f) < cfg.slope_bound);
  }

  // every declared kind comes out as declared
  cfg.tail_kind = TailKind::geometric;
  std::set<Rational> seen_bases;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    cfg.seed = seed;
    const PLMap f = sample_map(cfg);
    REQUIRE(f.geometric_tail() != nullptr);
    seen_bases.insert(f.geometric_tail()->base);
  }
  CHECK(seen_bases.size() == cfg.bases.size());

  cfg.tail_kind = TailKind::linear;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    cfg.seed = seed;
    CHECK(tail_is_linear(sample_map(cfg)));
  }

  cfg.tail_kind = TailKind::affine;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    cfg.seed = seed;
    CHECK(sample_map(cfg).affine_tail() != nullptr);
  }
}

TEST_CASE("the H sampler lands exactly in H") {
  SampleConfig cfg;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    cfg.seed = seed;
    const PLMap h = sample_h_member(cfg);
    CHECK(in_H(h));
    CHECK(tail_is_linear(h));
    CHECK(h.affine_tail()->slope == 1);
    const SlopeBounds b = slope_bounds(h);
    CHECK(b.min_slope * cfg.slope_bound > 1);
    CHECK(b.max_slope < cfg.slope_bound);
  }
}
