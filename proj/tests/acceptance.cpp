// Acceptance gate: one line per criterion, exit 0 only if every criterion
// passes.  Volumes, tolerances, and time bounds are pinned here on purpose;
// loosening them is a contract change, not a tweak.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "plq/plq.hpp"
#include "oracle.hpp"

namespace fs = std::filesystem;
using namespace plq;

namespace {

constexpr double kRatioTolerance = 1e-9;
constexpr std::uint64_t kSeed = 42;

struct Criterion {
  int number;
  std::string name;
  bool passed;
  std::string detail;
  double seconds;
};

std::vector<Criterion> results;

template <typename Fn>
void run_criterion(int number, const std::string& name, double time_bound,
                   Fn&& body) {
  Criterion c{number, name, false, "", 0.0};
  const auto t0 = std::chrono::steady_clock::now();
  try {
    c.detail = body();
    c.passed = !c.detail.empty() && c.detail[0] != '!';
    if (!c.detail.empty() && c.detail[0] == '!') c.detail = c.detail.substr(1);
  } catch (const std::exception& e) {
    c.passed = false;
    c.detail = std::string("exception: ") + e.what();
  }
  c.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  if (time_bound > 0 && c.seconds > time_bound) {
    c.passed = false;
    c.detail += " [exceeded " + std::to_string(time_bound) + "s bound]";
  }
  results.push_back(std::move(c));
}

std::string suite_outcome(const SuiteReport& report) {
  if (report.ok())
    return std::to_string(report.checks) + " checks clean";
  std::string out = "!" + std::to_string(report.failures.size()) + " of " +
                    std::to_string(report.checks) + " checks failed; first: " +
                    report.failures.front().detail;
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PLMap reference_geo() {
  return textio::parse(
      "plmap v1\npiece 1 1\ntail geometric 2\n piece 3/2 1/2\n"
      " piece 2 3/2\nend\n");
}

}  // namespace

int main() {
  SuiteOptions opts;
  opts.seed = kSeed;

  // 1: exact two-sided Lipschitz bounds across 200 sampled maps, 100 point
  // pairs each, inside 10 seconds.
  run_criterion(1, "two-sided-bounds", 10.0, [&] {
    SuiteOptions o = opts;
    o.samples = 200;
    o.pairs = 100;
    return suite_outcome(run_bilip_suite(o));
  });

  // 2: the limit-ratio set agrees with a numeric unrolling of each of 200
  // sampled maps to within 1e-9, inside 10 seconds.
  run_criterion(2, "limit-ratio-against-oracle", 10.0, [&] {
    int checked = 0;
    for (int i = 0; i < 200; ++i) {
      SampleConfig cfg;
      cfg.seed = detail::mix_seed(kSeed, 0x5E7 + i);
      const PLMap f = sample_map(cfg);
      const SInvariant s = s_invariant(f);
      if (f.affine_tail()) {
        const double t = to_double(f.tail_start());
        const test_oracle::UnrolledOracle oracle(f, t + (1 << 20));
        const double fit =
            oracle.slope_estimate(t + (1 << 18), t + (1 << 19));
        if (std::abs(fit - to_double(s.lo)) > kRatioTolerance)
          return std::string("!affine slope fit drifted at sample ") +
                 std::to_string(i);
      } else {
        const double base = to_double(f.geometric_tail()->base);
        const double t = to_double(f.tail_start());
        const double lo = t * std::pow(base, 10);
        const double hi = t * std::pow(base, 15);
        const test_oracle::UnrolledOracle oracle(f, hi * base);
        const auto [mn, mx] = oracle.ratio_range(lo, hi, 16);
        if (std::abs(mn - to_double(s.lo)) > kRatioTolerance ||
            std::abs(mx - to_double(s.hi)) > kRatioTolerance)
          return std::string("!period extremes drifted at sample ") +
                 std::to_string(i);
      }
      ++checked;
    }
    return std::to_string(checked) + " maps against the oracle";
  });

  // 3: H is a proper normal subgroup: closure and inverses on 100 sampled
  // members, conjugation on 100 pairs, properness at slopes 3/2, 2, 5.
  run_criterion(3, "proper-normal-subgroup", 0.0, [&] {
    SuiteOptions o = opts;
    o.samples = 100;
    const SuiteReport sub = run_subgroup_suite(o);
    const SuiteReport nor = run_normal_suite(o);
    if (!sub.ok()) return suite_outcome(sub);
    if (!nor.ok()) return suite_outcome(nor);
    return std::to_string(sub.checks + nor.checks) + " checks clean";
  });

  // 4: no class outside H has a power back in H, exponents up to 8 across
  // 100 sampled maps, inside 30 seconds.
  run_criterion(4, "torsion-free-quotient", 30.0, [&] {
    SuiteOptions o = opts;
    o.samples = 100;
    return suite_outcome(run_torsion_suite(o));
  });

  // 5: the center construction is exact for slopes 3/2, 2, 3, 5; for slope 2
  // the period slopes are {1/2, 9/8}, the anchors are 1, 6, 36, 216, and
  // every gap is 1/2.
  run_criterion(5, "explicit-center-witnesses", 0.0, [&] {
    for (const Rational& s :
         {rat(3, 2), Rational(2), Rational(3), Rational(5)}) {
      const WitnessBundle w = center_witness(linear_map(s), 4);
      const GeometricTail* t = w.conjugator.geometric_tail();
      if (!t) return std::string("!conjugator lost its period at slope ") +
                     to_string(s);
      const std::vector<Rational> want_slopes{rat(1, 2), (5 * s - 1) / (4 * s)};
      if (t->slopes != want_slopes)
        return "!period slopes wrong at slope " + to_string(s);
      std::vector<Rational> want_anchors;
      Rational a = 1;
      for (int k = 0; k < 4; ++k, a *= 3 * s) want_anchors.push_back(a);
      if (w.anchors != want_anchors)
        return "!anchors wrong at slope " + to_string(s);
      if (w.gaps != std::vector<Rational>(4, (s - 1) / 2))
        return "!anchor gaps wrong at slope " + to_string(s);
      if (w.verdict.equivalent || w.verdict.gap != (s - 1) / 2)
        return "!class verdict wrong at slope " + to_string(s);
      const SlopeBounds b = slope_bounds(w.conjugator);
      if (b.min_slope < rat(1, 2) || b.max_slope > rat(5, 4))
        return "!conjugator slopes escaped [1/2, 5/4] at slope " +
               to_string(s);
    }
    const SuiteReport rep = run_center_suite(opts);
    if (!rep.ok()) return suite_outcome(rep);
    return std::string("4 explicit slopes plus ") +
           std::to_string(rep.checks) + " suite checks clean";
  });

  // 6: group laws hold exactly on 100 sampled triples, and so do the
  // quotient's laws on class representatives.
  run_criterion(6, "group-and-quotient-laws", 0.0, [&] {
    SuiteOptions o = opts;
    o.samples = 100;
    return suite_outcome(run_algebra_suite(o));
  });

  // 7: the 50-file corpus round-trips: every valid file reparses to the same
  // object with byte-stable output, every invalid file fails with its
  // documented kind.
  run_criterion(7, "corpus-round-trip", 0.0, [&] {
    const fs::path root = PLQ_CORPUS_DIR;
    int files = 0;
    for (const auto& entry : fs::directory_iterator(root / "valid")) {
      if (entry.path().extension() != ".plm") continue;
      ++files;
      const PLMap m1 = textio::parse(slurp(entry.path()));
      const std::string s1 = textio::serialize(m1);
      const PLMap m2 = textio::parse(s1);
      if (m2 != m1 || textio::serialize(m2) != s1)
        return "!round-trip failed on " + entry.path().filename().string();
    }
    std::map<std::string, std::string> expected;
    std::ifstream manifest(root / "invalid" / "manifest.txt");
    std::string file, kind;
    while (manifest >> file >> kind) expected[file] = kind;
    for (const auto& entry : fs::directory_iterator(root / "invalid")) {
      if (entry.path().extension() != ".plm") continue;
      ++files;
      const std::string name = entry.path().filename().string();
      auto it = expected.find(name);
      if (it == expected.end())
        return "!no expected kind for " + name;
      try {
        textio::parse(slurp(entry.path()));
        return "!" + name + " parsed but should fail";
      } catch (const Error& e) {
        if (errc_name(e.kind()) != it->second)
          return "!" + name + " failed as " + errc_name(e.kind()) +
                 ", expected " + it->second;
      }
    }
    if (files != 50)
      return "!corpus holds " + std::to_string(files) + " files, want 50";
    return std::string("50 files round-tripped or failed as documented");
  });

  // 8: the worked example: f(6) = 5 exactly and the limit-ratio interval is
  // [5/6, 1], confirmed against the numeric oracle.
  run_criterion(8, "worked-example-values", 0.0, [&] {
    const PLMap f = reference_geo();
    if (evaluate(f, 6) != 5) return std::string("!f(6) is not 5");
    const SInvariant s = s_invariant(f);
    if (s.lo != rat(5, 6) || s.hi != 1)
      return std::string("!limit set is not [5/6, 1]");
    const test_oracle::UnrolledOracle oracle(f, 1 << 22);
    if (std::abs(oracle.eval(6.0) - 5.0) > kRatioTolerance)
      return std::string("!oracle disagrees at x = 6");
    const auto [mn, mx] = oracle.ratio_range(1 << 10, 1 << 21, 16);
    if (std::abs(mn - to_double(s.lo)) > kRatioTolerance ||
        std::abs(mx - to_double(s.hi)) > kRatioTolerance)
      return std::string("!oracle extremes disagree with [5/6, 1]");
    return std::string("f(6) = 5 and limit set [5/6, 1], oracle agrees");
  });

  int passed = 0;
  for (const Criterion& c : results) {
    if (c.passed) ++passed;
    std::printf("criterion %d %s: %s (%s, %.2fs)\n", c.number, c.name.c_str(),
                c.passed ? "PASS" : "FAIL", c.detail.c_str(), c.seconds);
  }
  std::printf("acceptance: %d/%zu criteria passed\n", passed, results.size());
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}
