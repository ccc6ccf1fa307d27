#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncx/cech.hpp"

namespace ncx {

// An ideal is given by generators; its s-th power is replaced by (x_1^s, ..., x_d^s).
using IdealSpec = SequenceSpec;

struct TorsionSubmodule {
  CanonicalFG cls;
  Matrix sigma;        // columns generate Gamma_a(M) inside M, in M's generator coordinates
  unsigned stage = 0;  // first s with (0 :_M a^s) = (0 :_M a^{s+1})
};
TorsionSubmodule torsion_submodule(const FPModule& M, const IdealSpec& a);

// Colimit over s of H^i_t(Hom(K(x^s; R), M)) along the duals of the ladder maps.
CanonicalModule local_cohomology(const IdealSpec& a, const FPModule& M, int i, int t, unsigned S = 8);
std::map<Slot, CanonicalModule> local_cohomology_table(const IdealSpec& a, const FPModule& M, unsigned S = 8);

// A tower of complexes with stages s = 1..S. Direct: map[k] goes stage k -> k+1;
// inverse: map[k] goes stage k+1 -> k.
struct Tower {
  std::vector<NComplex> stage;
  std::vector<ChainMap> map;
  bool direct = true;
};
Tower constant_tower(const NComplex& X, unsigned S, bool direct);
// stage u becomes Hom(K(x^u), X_u), written as iterated cocones of x_i^u; the result is direct
Tower rgamma_tower(const IdealSpec& a, const Tower& base);
// stage s becomes K(x^s) (x) X_s, written as iterated cones of x_i^s; the result is inverse
Tower lambda_tower(const IdealSpec& a, const Tower& base);
// every slot in the union of the stage supports
std::map<Slot, CanonicalModule> classify_tower(const Tower& T);

// derived torsion and derived completion of a bounded complex, without a root of unity
std::map<Slot, CanonicalModule> rgamma_table(const IdealSpec& a, const NComplex& X, unsigned S = 8);
std::map<Slot, CanonicalModule> lambda_table(const IdealSpec& a, const NComplex& X, unsigned S = 8);

// Divisible catalogue: Q^rationals + (Q/Z)^q_mod_z + sum Pruefer(p).
struct DivisibleModule {
  size_t rationals = 0;
  size_t q_mod_z = 0;
  std::map<Int, size_t> pruefer;
};
CanonicalModule gamma_divisible(const DivisibleModule& D, const Int& p);
// Applies Gamma_(p) to 0 -> Q/dZ -> Q/Z -1-> ... -1-> Q/Z (N-1 copies of Q/Z), which resolves Z/d.
// Each Pruefer(p) is carried as its stages Z/p^k, so the result is an independent colimit.
std::map<Slot, CanonicalModule> replay_local_cohomology(const Int& d, const Int& p, int N, unsigned S = 8);

// lim M / a^s M
CanonicalModule adic_completion(const FPModule& M, const IdealSpec& a, unsigned S = 8);
// lim over s of H^i_t(P (x) R/(x^s)) with P = resolve_module(M)
CanonicalModule derived_completion(const IdealSpec& a, const FPModule& M, int i, int t, unsigned S = 8);
std::map<Slot, CanonicalModule> derived_completion_table(const IdealSpec& a, const FPModule& M, unsigned S = 8);
// lim over s of H^i_t(Hom(Tel_s, M)); one generator only
std::map<Slot, CanonicalModule> telescope_completion_table(const IdealSpec& a, const FPModule& M, unsigned S = 8);

struct MgmSlot {
  Slot slot;
  CanonicalModule lhs, rhs;
  bool equal = false;
};
struct MgmComparison {
  std::string name;
  std::vector<MgmSlot> slots;
  bool pass = true;
};
struct MgmReport {
  std::vector<MgmComparison> comparisons;
  bool pass = true;
};
// RG(RG X) vs RG X, LL(LL X) vs LL X, LL(RG X) vs LL X, RG(LL X) vs RG X, slot by slot
MgmReport mgm_report(const IdealSpec& a, const FPModule& M, unsigned S = 8);

// inf/sup over degrees with nonzero H; nullopt prints as "none"
struct InvariantRow {
  int t = 0;
  std::optional<int> inf_rhom, inf_local, inf_koszul;
  std::optional<int> sup_tensor, sup_completion, sup_koszul;
  bool inf_equal() const { return inf_rhom == inf_local && inf_local == inf_koszul; }
  bool sup_equal() const { return sup_tensor == sup_completion && sup_completion == sup_koszul; }
};
struct InvariantsReport {
  std::vector<InvariantRow> rows;
  bool pass = true;
};
InvariantsReport invariants(const IdealSpec& a, const FPModule& M, unsigned S = 8);
std::string show(const std::optional<int>& v);

// if H^i_t(Hom(K(x), M)) = 0 then H^i_t(Hom(K(x^s), M)) = 0 for s <= max_power
struct PowerLemmaReport {
  bool pass = true;
  size_t vanishing_slots = 0;
  std::string failure;
};
PowerLemmaReport power_lemma_check(const IdealSpec& a, const FPModule& M, unsigned max_power = 4);
// every class of H(Hom(K(x), M)) is killed by each generator
AnnihilationReport hom_annihilation_check(const IdealSpec& a, const FPModule& M);

}  // namespace ncx
