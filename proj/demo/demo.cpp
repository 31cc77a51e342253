// A short tour of the library: build maps, compose them, read off the
// asymptotic invariant, and ask for a witness that the quotient group has a
// trivial center.  Everything here is exact rational arithmetic.
#include <iostream>

#include "plq/plq.hpp"

int main() {
  using namespace plq;

  // f is the identity on [0, 1] and then repeats slopes {1/2, 3/2} on every
  // interval [2^k, 2^(k+1)]; g doubles everything.
  const PLMap f = textio::parse(
      "plmap v1\n"
      "piece 1 1\n"
      "tail geometric 2\n"
      " piece 3/2 1/2\n"
      " piece 2 3/2\n"
      "end\n");
  const PLMap g = linear_map(Rational(2));

  std::cout << "f(6) = " << to_string(evaluate(f, 6)) << "\n";

  const SInvariant s = s_invariant(f);
  std::cout << "f(x)/x accumulates on [" << to_string(s.lo) << ", "
            << to_string(s.hi) << "]\n";
  std::cout << "f is " << (in_H(f) ? "" : "not ") << "asymptotically trivial\n";

  // group structure: compose, invert, and compare classes modulo H
  const PLMap fg = compose(f, g);
  std::cout << "f(g(5)) = " << to_string(evaluate(fg, 5)) << "\n";
  const CosetDecision d = coset_equivalent(fg, g);
  std::cout << "[f o g] " << (d.equivalent ? "=" : "!=") << " [g] because "
            << d.certificate << "\n";

  // no nontrivial class commutes with everything; ask for the evidence
  const WitnessBundle w = center_witness(g, 3);
  std::cout << "conjugator separating [g] from the center:\n"
            << textio::serialize(w.conjugator);
  std::cout << "normalized commutator gap " << to_string(w.gaps.front())
            << " at x = " << to_string(w.anchors.front()) << "\n";
  return 0;
}
