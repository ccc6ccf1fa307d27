#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncx/linalg.hpp"

namespace ncx {

// Bounded N-complex. Modules outside [lo, hi] are zero; d(n) maps X^n -> X^{n+1}
// and is stored as a gens(n+1) x gens(n) matrix over the ring.
class NComplex {
 public:
  NComplex() = default;
  NComplex(int N, Ring r);
  // mods[k] sits in degree lo + k; diffs[k] is d^{lo+k} (the last one may be omitted)
  NComplex(int N, Ring r, int lo, std::vector<FPModule> mods, std::vector<Matrix> diffs);

  int N() const { return N_; }
  const Ring& ring() const { return R_; }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  bool empty() const { return lo_ > hi_; }

  const FPModule& module(int n) const;
  size_t gens(int n) const { return module(n).gens; }
  Matrix d(int n) const;
  // X^n -> X^{n+k}; identity for k = 0
  Matrix composite(int n, int k) const;
  // trims zero modules at both ends
  NComplex trimmed() const;

 private:
  int N_ = 2;
  Ring R_;
  int lo_ = 0, hi_ = -1;
  std::vector<FPModule> mods_;
  std::vector<Matrix> d_;
  FPModule zero_;
};

struct ValidationReport {
  bool ok = true;
  std::string kind;  // "relations" or "nilpotence"
  int degree = 0;
  std::string message;
};
ValidationReport validate(const NComplex& X);

class ChainMap {
 public:
  ChainMap() = default;
  ChainMap(NComplex src, NComplex dst) : src_(std::move(src)), dst_(std::move(dst)) {}
  const NComplex& source() const { return src_; }
  const NComplex& target() const { return dst_; }
  // f^n : X^n -> Y^n, zero if unset
  Matrix at(int n) const;
  void set(int n, Matrix m) { comp_[n] = std::move(m); }
  static ChainMap identity(const NComplex& X);
  static ChainMap zero(const NComplex& X, const NComplex& Y);
  ChainMap scaled(const Elem& c) const;
  ChainMap operator-(const ChainMap& o) const;
  // this o other
  ChainMap after(const ChainMap& first) const;

 private:
  NComplex src_, dst_;
  std::map<int, Matrix> comp_;
};
ValidationReport validate(const ChainMap& f);

// s^n : X^n -> Y^{n-N+1}
struct Homotopy {
  std::map<int, Matrix> s;
};
// checks g - f = sum_i d^{N-1-i} s^{n+i} d^i in every degree, modulo relations
bool verify_homotopy(const ChainMap& f, const ChainMap& g, const Homotopy& h);
std::optional<Homotopy> null_homotopy(const ChainMap& f);

// H^n_t = Z^n_t / B^n_{N-t} as a reduced subquotient of the work-ring lift of X^n
Subquotient cohomology_sq(const NComplex& X, int n, int t);
CanonicalFG cohomology(const NComplex& X, int n, int t);
// (n, t) -> H^n_t over the support; zero entries included
std::map<std::pair<int, int>, CanonicalFG> htable(const NComplex& X);
bool is_acyclic(const NComplex& X);
// matrix of H^n_t(f) in reduced coordinates
Matrix induced_map(const ChainMap& f, int n, int t, const Subquotient& src, const Subquotient& dst);

// D^j_t(M): t copies of M in degrees j-t+1..j joined by identities
NComplex disk(int N, const FPModule& M, int j, int t);
NComplex suspend(const NComplex& X, int direction);
NComplex cone(const ChainMap& f);
// X^n + Y^{n-1} + ... + Y^{n-N+1}; Fib(f) -> X -> Y -> Sigma Fib(f) is a triangle
NComplex cocone(const ChainMap& f);
NComplex direct_sum(const NComplex& X, const NComplex& Y);
// cone(f) -> cone(g) from a square g a = b f (a on sources, b on targets), acting blockwise
ChainMap cone_map(const ChainMap& f, const ChainMap& g, const ChainMap& a, const ChainMap& b);
// Y -> cone(f) -> Sigma X, degreewise split exact
ChainMap cone_inclusion(const ChainMap& f);
// cocone(f) -> cocone(g) for a square g a = b f: a on the source summand, b on the shifted ones
ChainMap cocone_map(const ChainMap& f, const ChainMap& g, const ChainMap& a, const ChainMap& b);
ChainMap cone_projection(const ChainMap& f);

struct QuasiIsoVerdict {
  bool via_induced = false;
  bool via_cone = false;
  bool agree() const { return via_induced == via_cone; }
  bool value() const { return via_induced && via_cone; }
  std::string certificate;  // first failing (n, t) or "all H^n_t iso"
};
QuasiIsoVerdict is_quasi_iso(const ChainMap& f);

enum class TruncFlavor { Stupid, Smart };
enum class TruncSide { Above, Below };  // Above keeps degrees > i (stupid) / >= i (smart)
NComplex truncate(const NComplex& X, TruncFlavor flavor, TruncSide side, int index);
// the canonical maps tau_{>i} X -> X -> tau_{<=i} X and sigma_{<=n} X -> X -> sigma_{>=n} X
ChainMap truncation_map(const NComplex& X, TruncFlavor flavor, TruncSide side, int index);

struct LesNode {
  std::string label;
  CanonicalFG value;
};
struct LesReport {
  bool input_exact = true;
  bool exact = true;
  std::string failure;  // first non-exact node, empty if none
  std::vector<LesNode> nodes;
  bool connecting_zero = true;  // every connecting map vanished
};
// 0 -> X -f-> Y -g-> Z -> 0
LesReport les_report(const ChainMap& f, const ChainMap& g, int t);

// helpers shared by the other modules
// Complexes whose degree-n module is a direct sum of components.
using Comps = std::function<std::vector<FPModule>(int)>;
// block(n, r, c): map from component c in degree n to component r in degree n+1; nullopt is zero
using Block = std::function<std::optional<Matrix>(int, size_t, size_t)>;
NComplex assemble(int N, const Ring& R, int lo, int hi, const Comps& comps, const Block& block);
// degree-n map between two component layouts; entry(r, c) maps source component c to target component r
Matrix block_map(const Ring& R, const std::vector<FPModule>& src, const std::vector<FPModule>& dst,
                 const std::function<std::optional<Matrix>(size_t, size_t)>& entry);
Matrix work(const Matrix& m);  // lift to the work ring
FPModule sub_module_presentation(const Subquotient& q);
std::string degree_label(const std::string& sym, int n, int t);

}  // namespace ncx
