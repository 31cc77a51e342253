// plq: exact algebra of increasing piecewise-linear maps of [0, inf) with
// slope-bounded tails, their asymptotic classes, and the witnesses that the
// class group has a proper normal subgroup, no torsion, and trivial center.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plq/plq.hpp"

namespace {

int commensurability_cap() {
  const char* raw = std::getenv("PLQ_COMMENSURABILITY_CAP");
  if (!raw) return plq::kCommensurabilityCap;
  char* end = nullptr;
  long v = std::strtol(raw, &end, 10);
  if (end == raw || *end != '\0' || v < 1 || v > 4096)
    plq::fail(plq::Errc::InvalidArgument,
              "PLQ_COMMENSURABILITY_CAP must be a small positive integer");
  return static_cast<int>(v);
}

std::string read_all(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    plq::fail(plq::Errc::InvalidArgument, "cannot read '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

plq::PLMap load_map(const std::string& path) {
  return plq::textio::parse(read_all(path));
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out)
    plq::fail(plq::Errc::InvalidArgument, "cannot write '" + path + "'");
  out << text;
}

plq::Rational parse_rational_arg(const std::string& text,
                                 const std::string& what) {
  auto q = plq::try_parse_rational(text);
  if (!q)
    plq::fail(plq::Errc::InvalidArgument,
              what + " must be an integer or fraction p/q, got '" + text + "'");
  return *q;
}

std::string sinv_line(const plq::SInvariant& s) {
  if (s.is_singleton()) return "singleton " + plq::to_string(s.lo);
  return "interval " + plq::to_string(s.lo) + " " + plq::to_string(s.hi);
}

std::string describe_coset(const plq::CosetDecision& d) {
  std::string out;
  if (d.equivalent) {
    out = "equivalent: yes\n";
  } else {
    out = "equivalent: no\ngap: " + plq::to_string(d.gap) + "\nsequence: x_k = " +
          plq::to_string(d.seq_start) + " * " + plq::to_string(d.seq_ratio) +
          "^k\n";
  }
  out += "certificate: " + d.certificate + "\n";
  return out;
}

int exit_code_for(plq::Errc kind) {
  switch (kind) {
    case plq::Errc::TailNotClosed:
    case plq::Errc::IncommensurableScales:
    case plq::Errc::SlopeNotAboveOne:
    case plq::Errc::AnchorBelowTailStart:
    case plq::Errc::NotLinearTail:
    case plq::Errc::NotInH:
    case plq::Errc::InHNoWitness:
    case plq::Errc::RejectionLimitExceeded:
      return 3;
    default:
      return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact piecewise-linear maps of the half-line: group operations, "
      "asymptotic classes, and structural witnesses"};
  app.require_subcommand(1);
  int verdict = 0;  // set to 1 by commands whose answer is "no" or "failed"

  std::string f_path, g_path, out_path;
  std::string x_text;
  int r = 2;
  int anchors = 4;

  auto* eval = app.add_subcommand("eval", "evaluate a map at a point");
  eval->add_option("-f,--map", f_path, "map file, or - for stdin")->required();
  eval->add_option("-x,--at", x_text, "evaluation point (rational)")
      ->required();
  eval->callback([&] {
    const plq::PLMap f = load_map(f_path);
    std::cout << plq::to_string(
                     plq::evaluate(f, parse_rational_arg(x_text, "-x")))
              << "\n";
  });

  auto* compose_cmd = app.add_subcommand("compose", "compose two maps (f after g)");
  compose_cmd->add_option("-f,--outer", f_path, "outer map file")->required();
  compose_cmd->add_option("-g,--inner", g_path, "inner map file")->required();
  compose_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  compose_cmd->callback([&] {
    write_out(out_path,
              plq::textio::serialize(plq::compose(
                  load_map(f_path), load_map(g_path), commensurability_cap())));
  });

  auto* invert_cmd = app.add_subcommand("invert", "compositional inverse");
  invert_cmd->add_option("-f,--map", f_path, "map file")->required();
  invert_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  invert_cmd->callback([&] {
    write_out(out_path, plq::textio::serialize(plq::invert(load_map(f_path))));
  });

  auto* pow_cmd = app.add_subcommand("pow", "iterated composition f^r");
  pow_cmd->add_option("-f,--map", f_path, "map file")->required();
  pow_cmd->add_option("-r,--power", r, "exponent, at least 1")->required();
  pow_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  pow_cmd->callback([&] {
    write_out(out_path, plq::textio::serialize(plq::power(
                            load_map(f_path), r, commensurability_cap())));
  });

  auto* qcompose_cmd = app.add_subcommand(
      "qcompose", "compose asymptotic classes and print the representative");
  qcompose_cmd->add_option("-f,--outer", f_path, "outer map file")->required();
  qcompose_cmd->add_option("-g,--inner", g_path, "inner map file")->required();
  qcompose_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  qcompose_cmd->callback([&] {
    write_out(out_path, plq::textio::serialize(plq::quotient_compose(
                            load_map(f_path), load_map(g_path),
                            commensurability_cap())));
  });

  auto* sinv_cmd = app.add_subcommand(
      "sinv", "limit set of f(x)/x: singleton or closed interval");
  sinv_cmd->add_option("-f,--map", f_path, "map file")->required();
  sinv_cmd->callback([&] {
    std::cout << sinv_line(plq::s_invariant(load_map(f_path))) << "\n";
  });

  auto* inh_cmd = app.add_subcommand(
      "inh", "does f(x)/x converge to 1? exit 0 when yes, 1 when no");
  inh_cmd->add_option("-f,--map", f_path, "map file")->required();
  inh_cmd->callback([&] {
    const plq::PLMap f = load_map(f_path);
    std::cout << sinv_line(plq::s_invariant(f)) << "\n";
    if (plq::in_H(f)) {
      std::cout << "in H: yes\n";
    } else {
      std::cout << "in H: no\n";
      verdict = 1;
    }
  });

  auto* coset_cmd = app.add_subcommand(
      "coset-eq", "same class modulo H? exit 0 when yes, 1 when no");
  coset_cmd->add_option("-f,--left", f_path, "first map file")->required();
  coset_cmd->add_option("-g,--right", g_path, "second map file")->required();
  coset_cmd->callback([&] {
    const plq::CosetDecision d = plq::coset_equivalent(
        load_map(f_path), load_map(g_path), commensurability_cap());
    std::cout << describe_coset(d);
    if (!d.equivalent) verdict = 1;
  });

  auto* norm_cmd = app.add_subcommand(
      "normalize", "canonical representative of the class of f");
  norm_cmd->add_option("-f,--map", f_path, "map file")->required();
  norm_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  norm_cmd->callback([&] {
    write_out(out_path,
              plq::textio::serialize(plq::normalize_mod_H(load_map(f_path))));
  });

  auto* bilip_cmd = app.add_subcommand(
      "bilip", "smallest two-sided Lipschitz constant from the slope range");
  bilip_cmd->add_option("-f,--map", f_path, "map file")->required();
  bilip_cmd->callback([&] {
    std::cout << plq::to_string(plq::bilip_constant(load_map(f_path))) << "\n";
  });

  auto* witness = app.add_subcommand("witness", "structural witnesses");
  witness->require_subcommand(1);

  auto* wcenter = witness->add_subcommand(
      "center", "conjugator showing the class of f is not central");
  wcenter->add_option("-f,--map", f_path, "map file")->required();
  wcenter->add_option("-o,--out", out_path, "write the conjugator here");
  wcenter->add_option("--anchors", anchors, "number of anchors to derive")
      ->check(CLI::Range(1, 64));
  wcenter->callback([&] {
    const plq::WitnessBundle w = plq::center_witness(
        load_map(f_path), anchors, commensurability_cap());
    std::cout << "inverted: " << (w.inverted ? "yes" : "no") << "\n";
    std::cout << "anchors:";
    for (const plq::Rational& a : w.anchors)
      std::cout << " " << plq::to_string(a);
    std::cout << "\ngaps:";
    for (const plq::Rational& g : w.gaps)
      std::cout << " " << plq::to_string(g);
    std::cout << "\n" << describe_coset(w.verdict);
    std::cout << "conjugator:\n" << plq::textio::serialize(w.conjugator);
    if (!out_path.empty())
      write_out(out_path, plq::textio::serialize(w.conjugator));
  });

  auto* wtorsion = witness->add_subcommand(
      "torsion", "invariant of the r-th power of the class of f");
  wtorsion->add_option("-f,--map", f_path, "map file")->required();
  wtorsion->add_option("-r,--power", r, "exponent, at least 1")->required();
  wtorsion->callback([&] {
    const auto [s, separates] =
        plq::torsion_witness(load_map(f_path), r, commensurability_cap());
    std::cout << sinv_line(s) << "\n"
              << "separates from identity class: " << (separates ? "yes" : "no")
              << "\n";
    if (!separates) verdict = 1;
  });

  std::uint64_t seed = 0;
  std::string kind_text = "mixed";
  int max_breakpoints = 4;
  std::string slope_bound_text = "4";
  int denominator_bound = 6;
  auto* sample_cmd =
      app.add_subcommand("sample", "draw a random map, reproducibly");
  sample_cmd->add_option("--seed", seed, "generator seed");
  sample_cmd->add_option("--kind", kind_text, "affine|linear|geometric|mixed")
      ->check(CLI::IsMember({"affine", "linear", "geometric", "mixed"}));
  sample_cmd->add_option("--max-breakpoints", max_breakpoints,
                         "finite breakpoint budget")
      ->check(CLI::Range(1, 64));
  sample_cmd->add_option("--slope-bound", slope_bound_text,
                         "class bound K; slopes stay inside (1/K, K)");
  sample_cmd->add_option("--denominator-bound", denominator_bound,
                         "largest denominator the sampler draws")
      ->check(CLI::Range(1, 64));
  sample_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  sample_cmd->callback([&] {
    plq::SampleConfig cfg;
    cfg.seed = seed;
    cfg.max_breakpoints = max_breakpoints;
    cfg.slope_bound = parse_rational_arg(slope_bound_text, "--slope-bound");
    cfg.denominator_bound = denominator_bound;
    if (kind_text == "affine") cfg.tail_kind = plq::TailKind::affine;
    if (kind_text == "linear") cfg.tail_kind = plq::TailKind::linear;
    if (kind_text == "geometric") cfg.tail_kind = plq::TailKind::geometric;
    write_out(out_path, plq::textio::serialize(plq::sample_map(cfg)));
  });

  std::string suite_name = "all";
  int samples = 100;
  int pairs = 100;
  bool timings = false;
  std::uint64_t check_seed = 42;
  auto* check_cmd = app.add_subcommand(
      "check", "run a property suite; exit 0 only with zero failures");
  check_cmd->add_option("--suite", suite_name, "suite name or 'all'")
      ->check(CLI::IsMember({"bilip", "subgroup", "normal", "torsion",
                             "center", "algebra", "roundtrip", "all"}));
  check_cmd->add_option("--seed", check_seed, "suite seed");
  check_cmd->add_option("--samples", samples, "samples per suite")
      ->check(CLI::Range(1, 100000));
  check_cmd->add_option("--pairs", pairs, "point pairs per sampled map")
      ->check(CLI::Range(1, 100000));
  check_cmd->add_flag("--timings", timings,
                      "append wall time to each line (not deterministic)");
  check_cmd->callback([&] {
    plq::SuiteOptions opts;
    opts.seed = check_seed;
    opts.samples = samples;
    opts.pairs = pairs;
    opts.cap = commensurability_cap();
    std::vector<std::string> chosen;
    if (suite_name == "all")
      chosen = plq::suite_names();
    else
      chosen.push_back(suite_name);
    std::size_t failures = 0;
    for (const std::string& name : chosen) {
      const plq::SuiteReport report = plq::run_suite(name, opts);
      failures += report.failures.size();
      std::cout << plq::render_report(report, timings);
    }
    std::cout << "total: " << chosen.size() << " suites, " << failures
              << " failures\n";
    if (failures > 0) verdict = 1;
  });

  std::string xmax_text = "16";
  int points = 256;
  int digits = 6;
  auto* plot_cmd = app.add_subcommand(
      "plot", "CSV of x, f(x), and f(x)/x over [0, xmax]");
  plot_cmd->add_option("-f,--map", f_path, "map file")->required();
  plot_cmd->add_option("--xmax", xmax_text, "right end of the plotted range")
      ->required();
  plot_cmd->add_option("--points", points, "number of subdivisions")
      ->check(CLI::Range(1, 1000000));
  plot_cmd->add_option("--digits", digits, "decimal digits per cell")
      ->check(CLI::Range(1, 30));
  plot_cmd->add_option("-o,--out", out_path, "output file (default stdout)");
  plot_cmd->callback([&] {
    const plq::PLMap f = load_map(f_path);
    const plq::Rational xmax = parse_rational_arg(xmax_text, "--xmax");
    if (xmax <= 0)
      plq::fail(plq::Errc::InvalidArgument, "--xmax must be positive");
    std::string csv = "x,f_of_x,ratio\n";
    for (int i = 0; i <= points; ++i) {
      const plq::Rational x = xmax * plq::rat(i, points);
      const plq::Rational y = plq::evaluate(f, x);
      // the ratio column continues to its limit at x = 0
      const plq::Rational ratio =
          i == 0 ? (f.slopes.empty() ? f.affine_tail()->slope : f.slopes.front())
                 : plq::Rational(y / x);
      csv += plq::to_decimal(x, static_cast<unsigned>(digits));
      csv += ',';
      csv += plq::to_decimal(y, static_cast<unsigned>(digits));
      csv += ',';
      csv += plq::to_decimal(ratio, static_cast<unsigned>(digits));
      csv += '\n';
    }
    write_out(out_path, csv);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 4;
  } catch (const plq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
  return verdict;
}
