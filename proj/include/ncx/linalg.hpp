#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ncx/matrix.hpp"

namespace ncx {

struct Smith {
  Matrix U, D, V;  // U * A * V = D
  size_t rank = 0;
};

// Smallest-norm pivot, ties broken by lowest (row, col). IntegersMod is
// handled through the integer lift.
Smith smith_normal_form(const Matrix& A);

// Finitely generated module in invariant-factor form.
struct CanonicalFG {
  Ring ring;
  size_t free_rank = 0;
  std::vector<Elem> factors;  // nonzero nonunits, d1 | d2 | ...

  bool is_zero() const { return free_rank == 0 && factors.empty(); }
  bool operator==(const CanonicalFG& o) const;
  bool operator!=(const CanonicalFG& o) const { return !(*this == o); }
  std::string str() const;
  // number of elements, 0 when infinite (only meaningful for finite rings/torsion)
  Int order() const;
};

// Cokernel of A acting on row vectors: R^cols / rowspace(A).
CanonicalFG classify_cokernel(const Matrix& A);
// Columns generate {v : A v = 0}; saturated over a domain.
Matrix kernel_basis(const Matrix& A);
// numerator / denominator inside R^ambient (columns); ContainmentViolation if not nested.
CanonicalFG subquotient(size_t ambient, const Matrix& numerator, const Matrix& denominator);

// Euclidean ring used for computation: integers for IntegersMod, the ring itself otherwise.
Ring work_ring(const Ring& r);
Matrix lift(const Matrix& m);
// extra relations m*I for IntegersMod, empty otherwise
Matrix modulus_relations(const Ring& r, size_t n);

class LinearSolver {
 public:
  LinearSolver() = default;
  explicit LinearSolver(const Matrix& A);
  // some X with A X = B, or nullopt
  std::optional<Matrix> solve(const Matrix& B) const;
  bool in_span(const Matrix& B) const { return solve(B).has_value(); }
  size_t rank() const { return snf_.rank; }

 private:
  Ring orig_;
  size_t n_ = 0;  // columns of A
  Smith snf_;
};

// Relation matrix over the work ring of R^k / colspace(rel) turned into invariant factors of R.
CanonicalFG classify_relations(const Ring& R, size_t gens, const Matrix& work_rel);

// Subquotient S/T of a free work-ring module, in reduced (diagonal) presentation.
// Generators are columns of `gens`; relations are diag(d_i) on the first entries.
struct Subquotient {
  Ring ring;                  // original ring
  size_t ambient = 0;
  Matrix gens;                // ambient x k, over the work ring
  std::vector<Elem> diag;     // d_i for the first diag.size() generators, rest free
  CanonicalFG cls;
  // coordinates of ambient vectors (columns, lying in S) w.r.t. the reduced generators
  Matrix coords(const Matrix& v) const;
  Matrix relations() const;   // k x diag.size(), work ring
  size_t size() const { return gens.cols(); }

  Matrix raw_gens_;           // original numerator generators
  Matrix reduce_;             // raw coordinates -> reduced coordinates
  LinearSolver solver_;
};

// S generated by `numerator`, T by `denominator`, both over the work ring.
Subquotient make_subquotient(const Ring& R, size_t ambient, const Matrix& numerator, const Matrix& denominator);

// Finitely presented module: R^gens / colspace(rel).
struct FPModule {
  Ring ring;
  size_t gens = 0;
  Matrix rel;  // gens x k over ring

  FPModule() = default;
  FPModule(Ring r, size_t g, Matrix relations);
  static FPModule free(const Ring& r, size_t n);
  static FPModule cyclic(const Ring& r, const Elem& d);
  static FPModule from_canonical(const CanonicalFG& c);

  bool is_free() const { return rel.cols() == 0 || rel.is_zero(); }
  Matrix work_rel() const;  // over the work ring, with modulus relations added
  CanonicalFG classify() const;
  bool operator==(const FPModule& o) const { return gens == o.gens && rel == o.rel; }
};

FPModule direct_sum(const FPModule& a, const FPModule& b);
FPModule localize_module(const FPModule& M, const std::vector<Int>& S);

// Map between subquotients given in reduced coordinates.
struct MapReport {
  CanonicalFG kernel, cokernel;
  bool iso() const { return kernel.is_zero() && cokernel.is_zero(); }
};
MapReport analyze_map(const Subquotient& src, const Subquotient& dst, const Matrix& F);
bool is_zero_map(const Subquotient& dst, const Matrix& F);
// true iff ker(beta) == im(alpha) at the middle module (alpha: A->B, beta: B->C in reduced coordinates)
bool exact_at(const Subquotient& A, const Subquotient& B, const Subquotient& C, const Matrix& alpha,
              const Matrix& beta);

// Build the reduced subquotient presentation of an FPModule.
Subquotient module_subquotient(const FPModule& M);

}  // namespace ncx
