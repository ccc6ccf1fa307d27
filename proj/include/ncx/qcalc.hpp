#pragma once

#include "ncx/ncomplex.hpp"

namespace ncx {

// A primitive N-th root of unity q in the ring.
struct QContext {
  Ring ring;
  Elem q;
  int N = 2;

  // throws NonPrimitiveQ unless q^N = 1 and q^k != 1 for 0 < k < N
  static QContext make(const Ring& r, const Elem& q, int N);
  // the designated root of a prime field, the adjoined root of a cyclotomic ring, or -1 when N = 2
  static QContext natural(const Ring& r, int N);
  static bool primitive(const Ring& r, const Elem& q, int N);
  // q^k for any integer k
  Elem power(int k) const;
};

// Hom(A, B) for finitely presented A, B, as a subquotient of the b*a matrices
// (row-major), with a presentation for use as a module.
struct HomModule {
  size_t a = 0, b = 0;
  Subquotient sq;
  FPModule module;
};
HomModule hom_module(const FPModule& A, const FPModule& B);
// matrix (in presentation coordinates) induced by the linear map L on row-major b*a matrices
Matrix hom_induced(const HomModule& src, const HomModule& dst, const Matrix& L);
// b x a matrix represented by presentation coordinates
Matrix hom_element(const HomModule& h, const Matrix& coords);

// General q-constructions. `checked = false` skips the primitivity precheck so that
// the failure of d^N = 0 for a bad q can be observed through validate.
NComplex q_tensor(const NComplex& X, const NComplex& Y, const QContext& ctx, bool checked = true);
NComplex q_hom(const NComplex& X, const NComplex& Y, const QContext& ctx, bool checked = true);

// Single-degree specializations, computed at q = 1 in the scalar positions. With one
// argument concentrated in one degree every differential is a unit multiple of a
// q-free map, so kernels and images do not depend on q.
NComplex module_tensor(const NComplex& X, const FPModule& M);
NComplex module_hom_into(const NComplex& X, const FPModule& M);  // Hom(X, M), degree n is Hom(X^{-n}, M)
NComplex module_hom_from(const FPModule& M, const NComplex& X);  // Hom(M, X)

// Functoriality
ChainMap tensor_map(const ChainMap& f, const NComplex& Z, const QContext& ctx, bool checked = true);  // f (x) Z
ChainMap tensor_map_left(const NComplex& Z, const ChainMap& f, const QContext& ctx, bool checked = true);
ChainMap hom_map_post(const NComplex& Z, const ChainMap& f, const QContext& ctx, bool checked = true);  // Hom(Z, f)
ChainMap hom_map_pre(const ChainMap& f, const NComplex& Z, const QContext& ctx, bool checked = true);   // Hom(f, Z)
ChainMap module_tensor_map(const ChainMap& f, const FPModule& M);
ChainMap module_hom_into_map(const ChainMap& f, const FPModule& M);  // Hom(Y, M) -> Hom(X, M)

// rank of Hom_{C_N}(X, Y), the degree-zero cycles of q_hom(X, Y), over a field
size_t chain_map_dimension(const NComplex& X, const NComplex& Y, const QContext& ctx);

struct IdentityReport {
  std::string name;
  bool pass = true;
  bool explicit_iso = false;  // the two sides have literally equal differentials
  std::string detail;         // first failing degree and values
};
// H-tables agree, and degreewise modules too when asked
IdentityReport compare_complexes(const std::string& name, const NComplex& A, const NComplex& B, bool degreewise = true);

// name: "hom-into-cone", "hom-from-cone", "tensor-cone", "tensor-cone-left", "unit-tensor", "unit-hom",
// "shift-tensor", "shift-hom", "adjunction"
IdentityReport identity_check(const std::string& name, const ChainMap& f, const NComplex& Z, const QContext& ctx);

}  // namespace ncx
