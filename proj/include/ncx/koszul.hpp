#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncx/qcalc.hpp"

namespace ncx {

struct SequenceSpec {
  Ring ring;
  std::vector<Elem> x;
  int N = 3;

  static SequenceSpec ints(const Ring& r, const std::vector<long>& xs, int N);
  // x_1^s, ..., x_d^s
  SequenceSpec power(unsigned s) const;
  std::string str() const;
};

// Iterated cone: K(x_1..x_d) = cone(x_d : K(x_1..x_{d-1}) -> same). Cone blocks are
// ordered target first, then the shifted source summands, so no permutation is
// needed against the hand-written displays.
NComplex koszul_ring(const SequenceSpec& s);
NComplex koszul_on(const SequenceSpec& s, const FPModule& M);
// K(x;R) (x) X, needs a primitive root since X is a genuine complex
NComplex koszul_on(const SequenceSpec& s, const NComplex& X, const QContext& ctx);

// (0 :_M x) and M/xM
CanonicalFG annihilator(const FPModule& M, const std::vector<Elem>& x);
CanonicalFG quotient_by(const FPModule& M, const std::vector<Elem>& x);

struct KoszulValue {
  CanonicalFG computed;
  std::optional<CanonicalFG> predicted;  // set when a closed form covers (j, t)
  std::string formula;                   // "M/xM", "(0:x)", "0" or empty
  bool agrees() const { return !predicted || *predicted == computed; }
};
// Closed forms: H^0_t = M/xM; with d = 2k, H^{-kN}_t = (0:x) and H^{-kN-t}_t = 0;
// with d = 2k+1, H^{-kN-t}_t = (0:x) and H^{-(k+1)N}_t = 0.
KoszulValue koszul_cohomology(const SequenceSpec& s, const FPModule& M, int j, int t);

// multiplication by c on every degree
ChainMap multiplication(const NComplex& X, const Elem& c);
// K(x^{s+1}) -> K(x^s): x on the shifted summands, 1 on the base, tensored over the sequence
ChainMap koszul_ladder(const SequenceSpec& s, unsigned power);

struct Resolution {
  NComplex P;
  ChainMap aug;  // P -> D^0_1(M)
};
// Free resolution over a PID: one copy of K(d; R) per invariant factor d plus the free part
// in degree 0. Throws NotPID for IntegersMod.
Resolution resolve_module(const FPModule& M, int N);

struct DualityReport {
  bool degreewise = false;    // Sigma^d Hom(K, R) and K have the same modules degree by degree
  bool htable = false;        // same cohomology tables
  bool searched = false;      // explicit map search ran
  bool explicit_map = false;  // a quasi-isomorphism K -> Sigma^d Hom(K, R) was found
  std::string detail;
  bool pass() const { return htable && (!searched || explicit_map); }
};
DualityReport self_duality_check(const SequenceSpec& s, bool search = true);

struct AnnihilationReport {
  bool pass = true;
  size_t slots = 0;  // nonzero H^j_t examined
  std::string failure;
};
// every x_i kills every H^j_t(x; M)
AnnihilationReport annihilation_check(const SequenceSpec& s, const FPModule& M);

// Z-basis of chain maps X -> Y between complexes of free modules (over the work ring
// with the modulus as slack); entry k is one chain map
std::vector<ChainMap> chain_map_basis(const NComplex& X, const NComplex& Y);

}  // namespace ncx
