#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncx/koszul.hpp"
#include "ncx/limits.hpp"

namespace ncx {

using Slot = std::pair<int, int>;  // (degree, amplitude)

// Cech complex kept as integer coefficients plus, for every rank-one summand, the set of
// inverted generators (bit i set means x_i is inverted). A coefficient c from a summand
// with mask I to one with mask J means c times the localisation map R_I -> R_J.
struct MixedComplex {
  SequenceSpec spec;
  NComplex coeff;
  std::map<int, std::vector<unsigned>> mask;

  // base ring with the generators in `m` inverted
  Ring piece_ring(unsigned m) const;
  std::string piece_name(unsigned m) const;  // R, R_x, R_xy, ...
  // d^n as text: "1", "-1", "iota_y", "-iota_x", "0"
  std::vector<std::vector<std::string>> display(int n) const;
  // d^N = 0 on coefficients and every nonzero entry runs from I to a superset of I
  ValidationReport validate() const;
};

// d = 1: R -> R_x -> ... -> R_x; more generators by iterated cocone of the localisation
// map, which reproduces the hand-written (x, y) displays and needs no root of unity.
MixedComplex cech_ring(const SequenceSpec& s);

// Finite stage model of C(x; M). The summand with mask I holds M / Gamma_{x_I}(M); an entry
// c from I to J acts as c * (x_{J \ I})^s, so an element m at stage s stands for m / x_I^s.
NComplex cech_stage(const MixedComplex& C, const FPModule& M, unsigned s);
// stage s -> stage s+1: multiplication by x_I on the summand with mask I
ChainMap cech_stage_map(const MixedComplex& C, const FPModule& M, unsigned s);

// colimit over stages 1..S of H^j_t of the stage models
CanonicalModule cech_cohomology(const SequenceSpec& s, const FPModule& M, int j, int t, unsigned S = 8);
std::map<Slot, CanonicalModule> cech_table(const SequenceSpec& s, const FPModule& M, unsigned S = 8);

// Truncated telescope on one element: R^{s+1} in degrees 0..N-1, v(e_0) = e_0,
// v(e_i) = e_{i-1} - x e_i, then identities.
NComplex telescope(const SequenceSpec& s, unsigned stage);
// Tel_s -> Tel_{s+1}, the inclusion of the first s+1 basis vectors
ChainMap telescope_inclusion(const SequenceSpec& s, unsigned stage);
// w_s : Tel_s -> cech_stage(x; R) at stage s; e_0 -> 1 in degree 0, e_i -> x^{s-i} above
ChainMap telescope_to_cech(const SequenceSpec& s, unsigned stage);
std::map<Slot, CanonicalModule> telescope_table(const SequenceSpec& s, unsigned S = 8);

struct TelescopeComparison {
  std::vector<bool> chain_map;   // per stage 1..S
  std::vector<bool> quasi_iso;   // per stage 1..S
  unsigned stable_from = 0;      // first stage from which every w_s is a quasi-isomorphism, 0 if none
  std::map<Slot, std::pair<CanonicalModule, CanonicalModule>> colimits;  // (telescope, cech)
  bool pass = false;
  std::string detail;
};
TelescopeComparison telescope_comparison(const SequenceSpec& s, unsigned S = 8);

enum class ProVerdict { ProZero, Counterexample, Inconclusive };
std::string to_string(ProVerdict v);

struct ProStage {
  unsigned s = 0;
  CanonicalFG module;
  std::string transition;          // class of H_{s+1} -> H_s: zero, iso, injective, surjective, other; empty at s = S
  std::optional<unsigned> dies_by;  // least s' <= S with H_{s'} -> H_s zero
};
struct ProSlot {
  int i = 0, t = 0;
  std::vector<ProStage> stages;
};
struct ProReport {
  unsigned S = 0;
  std::vector<ProSlot> slots;
  ProVerdict verdict = ProVerdict::Inconclusive;
  std::optional<Slot> witness_slot;
  unsigned witness_stage = 0;
  bool ladders_commute = true;  // every ladder map validated as a chain map
  std::string summary() const;
};
// H^i_t(K(x^s; R)) for i < 0 along the ladder maps K(x^{s+1}) -> K(x^s)
ProReport proregular_probe(const SequenceSpec& s, unsigned S);

struct TableComparison {
  bool pass = true;
  std::vector<std::string> mismatches;
};
// C(x) (x) C(x) against C(x) at classification level, using C(x, x) as the tensor
TableComparison cech_self_tensor_check(const SequenceSpec& s, const FPModule& M, unsigned S = 8);
TableComparison compare_tables(const std::map<Slot, CanonicalModule>& a, const std::map<Slot, CanonicalModule>& b);

}  // namespace ncx
