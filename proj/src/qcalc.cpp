#include "ncx/qcalc.hpp"

#include <sstream>

namespace ncx {

namespace {

Matrix back(const Matrix& m, const Ring& R) { return R.kind() == RingKind::IntegersMod ? m.over(R) : m; }

FPModule tensor_module(const FPModule& A, const FPModule& B) {
  const Ring& R = A.ring;
  Matrix rel = hstack(kron(A.rel, Matrix::identity(R, B.gens)), kron(Matrix::identity(R, A.gens), B.rel));
  return FPModule(R, A.gens * B.gens, rel);
}

std::vector<FPModule> tensor_layout(const NComplex& X, const NComplex& Y, int n) {
  std::vector<FPModule> v;
  for (int i = X.lo(); i <= X.hi(); ++i) v.push_back(tensor_module(X.module(i), Y.module(n - i)));
  return v;
}

// Hom modules of a pair of complexes, computed on demand
class HomCache {
 public:
  HomCache(const NComplex& X, const NComplex& Y) : X_(X), Y_(Y) {}
  const HomModule& get(int i, int j) {
    auto key = std::pair{i, j};
    auto it = c_.find(key);
    if (it == c_.end()) it = c_.emplace(key, hom_module(X_.module(i), Y_.module(j))).first;
    return it->second;
  }
  std::vector<FPModule> layout(int n) {
    std::vector<FPModule> v;
    for (int i = X_.lo(); i <= X_.hi(); ++i) v.push_back(get(i, i + n).module);
    return v;
  }
  int lo() const { return Y_.lo() - X_.hi(); }
  int hi() const { return Y_.hi() - X_.lo(); }

 private:
  const NComplex& X_;
  const NComplex& Y_;
  std::map<std::pair<int, int>, HomModule> c_;
};

Elem qpow(const Ring& R, const Elem& q, int N, int k) {
  int e = ((k % N) + N) % N;
  return R.pow(q, static_cast<unsigned long>(e));
}

NComplex tensor_impl(const NComplex& X, const NComplex& Y, const Elem& q) {
  const int N = X.N();
  const Ring& R = X.ring();
  if (X.empty() || Y.empty()) return NComplex(N, R);
  auto comps = [&](int n) { return tensor_layout(X, Y, n); };
  auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
    int i = X.lo() + static_cast<int>(c);
    if (r == c + 1) return kron(X.d(i), Matrix::identity(R, Y.gens(n - i)));
    if (r == c) return kron(Matrix::identity(R, X.gens(i)), Y.d(n - i)).scaled(qpow(R, q, N, i));
    return std::nullopt;
  };
  return assemble(N, R, X.lo() + Y.lo(), X.hi() + Y.hi(), comps, block);
}

NComplex hom_impl(const NComplex& X, const NComplex& Y, const Elem& q) {
  const int N = X.N();
  const Ring& R = X.ring();
  if (X.empty() || Y.empty()) return NComplex(N, R);
  HomCache cache(X, Y);
  auto comps = [&](int n) { return cache.layout(n); };
  auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
    int i = X.lo() + static_cast<int>(r);
    const HomModule& dst = cache.get(i, i + n + 1);
    if (c == r) {
      const HomModule& src = cache.get(i, i + n);
      return hom_induced(src, dst, kron(Y.d(i + n), Matrix::identity(R, X.gens(i))));
    }
    if (c == r + 1) {
      const HomModule& src = cache.get(i + 1, i + 1 + n);
      Matrix L = kron(Matrix::identity(R, Y.gens(i + n + 1)), X.d(i).transpose());
      return hom_induced(src, dst, L.scaled(R.neg(qpow(R, q, N, n))));
    }
    return std::nullopt;
  };
  return assemble(N, R, cache.lo(), cache.hi(), comps, block);
}

void require_ctx(const QContext& ctx, const NComplex& X, bool checked) {
  if (ctx.ring != X.ring()) throw MathError("RingMismatch", "q lives in a different ring");
  if (ctx.N != X.N()) throw MathError("NMismatch", "q context built for a different N");
  if (checked && !QContext::primitive(ctx.ring, ctx.q, ctx.N))
    throw MathError("NonPrimitiveQ", "q = " + ctx.ring.str(ctx.q) + " is not a primitive N-th root of unity");
}

int range_lo(const NComplex& A, const NComplex& B) {
  return std::min(A.empty() ? B.lo() : A.lo(), B.empty() ? A.lo() : B.lo());
}
int range_hi(const NComplex& A, const NComplex& B) {
  return std::max(A.empty() ? B.hi() : A.hi(), B.empty() ? A.hi() : B.hi());
}

}  // namespace

bool QContext::primitive(const Ring& r, const Elem& q, int N) {
  if (r.kind() == RingKind::IntegersMod && !r.is_unit(q)) return false;
  Elem p = q;
  for (int k = 1; k < N; ++k) {
    if (r.is_one(p)) return false;
    p = r.mul(p, q);
  }
  return r.is_one(p);
}

QContext QContext::make(const Ring& r, const Elem& q, int N) {
  if (!primitive(r, q, N))
    throw MathError("NonPrimitiveQ", "q = " + r.str(q) + " is not a primitive " + std::to_string(N) +
                                         "-th root of unity in " + r.name());
  return QContext{r, q, N};
}

QContext QContext::natural(const Ring& r, int N) {
  if (N == 2) return make(r, r.from_int(-1), N);
  if (r.kind() == RingKind::PrimeField && r.designated_root()) return make(r, r.root(), N);
  if (r.kind() == RingKind::Cyclotomic) {
    // the adjoined root has order cyclotomic_order(); its powers give the other orders that divide it
    int m = r.cyclotomic_order();
    if (m % N == 0) return make(r, r.pow(r.root(), static_cast<unsigned long>(m / N)), N);
  }
  throw MathError("NonPrimitiveQ", r.name() + " has no primitive " + std::to_string(N) + "-th root of unity");
}

Elem QContext::power(int k) const { return qpow(ring, q, N, k); }

HomModule hom_module(const FPModule& A, const FPModule& B) {
  const Ring& R = A.ring;
  const Ring W = work_ring(R);
  HomModule h;
  h.a = A.gens;
  h.b = B.gens;
  const size_t dim = h.a * h.b;
  Matrix relA = A.work_rel(), relB = B.work_rel();
  Matrix den = kron(relB, Matrix::identity(W, h.a));
  Matrix num;
  if (relA.cols() == 0 || dim == 0) {
    num = Matrix::identity(W, dim);
  } else {
    Matrix sys = hstack(kron(Matrix::identity(W, h.b), relA.transpose()),
                        -kron(relB, Matrix::identity(W, relA.cols())));
    Matrix K = kernel_basis(sys);
    num = K.block(0, 0, dim, K.cols());
  }
  h.sq = make_subquotient(R, dim, num, den);
  h.module = sub_module_presentation(h.sq);
  return h;
}

Matrix hom_induced(const HomModule& src, const HomModule& dst, const Matrix& L) {
  const Ring& R = src.sq.ring;
  const Ring W = work_ring(R);
  if (src.sq.size() == 0 || dst.sq.size() == 0) return Matrix(R, dst.sq.size(), src.sq.size());
  return back(dst.sq.coords(work(L) * src.sq.gens), R);
}

Matrix hom_element(const HomModule& h, const Matrix& coords) {
  const Ring& R = h.sq.ring;
  Matrix v = h.sq.gens * work(coords);
  Matrix out(work_ring(R), h.b, h.a);
  for (size_t i = 0; i < h.b; ++i)
    for (size_t j = 0; j < h.a; ++j) out(i, j) = v(i * h.a + j, 0);
  return back(out, R);
}

NComplex q_tensor(const NComplex& X, const NComplex& Y, const QContext& ctx, bool checked) {
  require_ctx(ctx, X, checked);
  return tensor_impl(X, Y, ctx.q);
}

NComplex q_hom(const NComplex& X, const NComplex& Y, const QContext& ctx, bool checked) {
  require_ctx(ctx, X, checked);
  return hom_impl(X, Y, ctx.q);
}

NComplex module_tensor(const NComplex& X, const FPModule& M) {
  return tensor_impl(X, disk(X.N(), M, 0, 1), X.ring().one());
}

NComplex module_hom_into(const NComplex& X, const FPModule& M) {
  return hom_impl(X, disk(X.N(), M, 0, 1), X.ring().one());
}

NComplex module_hom_from(const FPModule& M, const NComplex& X) {
  return hom_impl(disk(X.N(), M, 0, 1), X, X.ring().one());
}

namespace {

ChainMap tensor_map_impl(const ChainMap& f, const NComplex& Z, const Elem& q) {
  const NComplex &X = f.source(), &Y = f.target();
  const Ring& R = X.ring();
  NComplex A = tensor_impl(X, Z, q), B = tensor_impl(Y, Z, q);
  ChainMap g(A, B);
  if (A.empty() || B.empty()) return g;
  for (int n = range_lo(A, B); n <= range_hi(A, B); ++n) {
    auto src = tensor_layout(X, Z, n), dst = tensor_layout(Y, Z, n);
    g.set(n, block_map(R, src, dst, [&](size_t r, size_t c) -> std::optional<Matrix> {
            int i = X.lo() + static_cast<int>(c);
            if (Y.lo() + static_cast<int>(r) != i) return std::nullopt;
            return kron(f.at(i), Matrix::identity(R, Z.gens(n - i)));
          }));
  }
  return g;
}

ChainMap hom_pre_impl(const ChainMap& f, const NComplex& Z, const Elem& q) {
  const NComplex &X = f.source(), &Y = f.target();
  const Ring& R = X.ring();
  NComplex A = hom_impl(Y, Z, q), B = hom_impl(X, Z, q);
  ChainMap g(A, B);
  if (A.empty() || B.empty()) return g;
  HomCache cy(Y, Z), cx(X, Z);
  for (int n = range_lo(A, B); n <= range_hi(A, B); ++n) {
    auto src = cy.layout(n), dst = cx.layout(n);
    g.set(n, block_map(R, src, dst, [&](size_t r, size_t c) -> std::optional<Matrix> {
            int i = Y.lo() + static_cast<int>(c);
            if (X.lo() + static_cast<int>(r) != i) return std::nullopt;
            Matrix L = kron(Matrix::identity(R, Z.gens(i + n)), f.at(i).transpose());
            return hom_induced(cy.get(i, i + n), cx.get(i, i + n), L);
          }));
  }
  return g;
}

}  // namespace

ChainMap tensor_map(const ChainMap& f, const NComplex& Z, const QContext& ctx, bool checked) {
  require_ctx(ctx, Z, checked);
  return tensor_map_impl(f, Z, ctx.q);
}

ChainMap tensor_map_left(const NComplex& Z, const ChainMap& f, const QContext& ctx, bool checked) {
  require_ctx(ctx, Z, checked);
  const NComplex &X = f.source(), &Y = f.target();
  const Ring& R = X.ring();
  NComplex A = tensor_impl(Z, X, ctx.q), B = tensor_impl(Z, Y, ctx.q);
  ChainMap g(A, B);
  if (A.empty() || B.empty()) return g;
  for (int n = range_lo(A, B); n <= range_hi(A, B); ++n) {
    auto src = tensor_layout(Z, X, n), dst = tensor_layout(Z, Y, n);
    g.set(n, block_map(R, src, dst, [&](size_t r, size_t c) -> std::optional<Matrix> {
            if (r != c) return std::nullopt;
            int i = Z.lo() + static_cast<int>(c);
            return kron(Matrix::identity(R, Z.gens(i)), f.at(n - i));
          }));
  }
  return g;
}

ChainMap hom_map_post(const NComplex& Z, const ChainMap& f, const QContext& ctx, bool checked) {
  require_ctx(ctx, Z, checked);
  const NComplex &X = f.source(), &Y = f.target();
  const Ring& R = X.ring();
  NComplex A = hom_impl(Z, X, ctx.q), B = hom_impl(Z, Y, ctx.q);
  ChainMap g(A, B);
  if (A.empty() || B.empty()) return g;
  HomCache cx(Z, X), cy(Z, Y);
  for (int n = range_lo(A, B); n <= range_hi(A, B); ++n) {
    auto src = cx.layout(n), dst = cy.layout(n);
    g.set(n, block_map(R, src, dst, [&](size_t r, size_t c) -> std::optional<Matrix> {
            if (r != c) return std::nullopt;
            int i = Z.lo() + static_cast<int>(c);
            Matrix L = kron(f.at(i + n), Matrix::identity(R, Z.gens(i)));
            return hom_induced(cx.get(i, i + n), cy.get(i, i + n), L);
          }));
  }
  return g;
}

ChainMap hom_map_pre(const ChainMap& f, const NComplex& Z, const QContext& ctx, bool checked) {
  require_ctx(ctx, Z, checked);
  return hom_pre_impl(f, Z, ctx.q);
}

ChainMap module_tensor_map(const ChainMap& f, const FPModule& M) {
  const NComplex& X = f.source();
  return tensor_map_impl(f, disk(X.N(), M, 0, 1), X.ring().one());
}

ChainMap module_hom_into_map(const ChainMap& f, const FPModule& M) {
  const NComplex& X = f.source();
  return hom_pre_impl(f, disk(X.N(), M, 0, 1), X.ring().one());
}

size_t chain_map_dimension(const NComplex& X, const NComplex& Y, const QContext& ctx) {
  NComplex H = q_hom(X, Y, ctx);
  size_t g = H.gens(0);
  if (g == 0) return 0;
  const Ring W = work_ring(H.ring());
  Matrix Z;
  if (H.gens(1) == 0) {
    Z = Matrix::identity(W, g);
  } else {
    Matrix K = kernel_basis(hstack(work(H.d(0)), H.module(1).work_rel()));
    Z = K.block(0, 0, g, K.cols());
  }
  auto cls = make_subquotient(H.ring(), g, Z, H.module(0).work_rel()).cls;
  return cls.free_rank + cls.factors.size();
}

IdentityReport compare_complexes(const std::string& name, const NComplex& A, const NComplex& B, bool degreewise) {
  IdentityReport rep;
  rep.name = name;
  int lo = std::min(A.empty() ? 0 : A.lo(), B.empty() ? 0 : B.lo());
  int hi = std::max(A.empty() ? 0 : A.hi(), B.empty() ? 0 : B.hi());
  bool same = A.lo() == B.lo() && A.hi() == B.hi();
  for (int n = lo; n <= hi && rep.pass; ++n) {
    auto ma = A.module(n).classify(), mb = B.module(n).classify();
    if (degreewise && ma != mb) {
      rep.pass = false;
      rep.detail = "degree " + std::to_string(n) + ": modules " + ma.str() + " vs " + mb.str();
      break;
    }
    if (!(A.module(n) == B.module(n)) || A.d(n) != B.d(n)) same = false;
    for (int t = 1; t < A.N(); ++t) {
      auto ha = cohomology(A, n, t), hb = cohomology(B, n, t);
      if (ha != hb) {
        rep.pass = false;
        rep.detail = degree_label("-", n, t) + ": " + ha.str() + " vs " + hb.str();
        break;
      }
    }
  }
  rep.explicit_iso = rep.pass && same;
  if (rep.pass) rep.detail = rep.explicit_iso ? "equal differentials" : "degreewise modules and H-tables agree";
  return rep;
}

IdentityReport identity_check(const std::string& name, const ChainMap& f, const NComplex& Z, const QContext& ctx) {
  const NComplex& X = f.source();
  const int N = X.N();
  if (name == "hom-into-cone") return compare_complexes(name, q_hom(Z, cone(f), ctx), cone(hom_map_post(Z, f, ctx)));
  if (name == "hom-from-cone") {
    // degreewise the left side is the cocone of Hom(f, Z); the desuspended cone agrees up to homotopy
    NComplex A = q_hom(cone(f), Z, ctx);
    ChainMap h = hom_map_pre(f, Z, ctx);
    auto rep = compare_complexes(name, A, suspend(cone(h), -1), false);
    if (!rep.pass) return rep;
    auto deg = compare_complexes(name, A, cocone(h));
    if (!deg.pass) return deg;
    rep.detail = "H-tables agree; degreewise equal to the cocone of Hom(f, Z)";
    return rep;
  }
  if (name == "tensor-cone") return compare_complexes(name, q_tensor(cone(f), Z, ctx), cone(tensor_map(f, Z, ctx)));
  if (name == "tensor-cone-left")
    return compare_complexes(name, q_tensor(Z, cone(f), ctx), cone(tensor_map_left(Z, f, ctx)));
  NComplex unit = disk(N, FPModule::free(ctx.ring, 1), 0, 1);
  if (name == "unit-tensor") return compare_complexes(name, q_tensor(unit, X, ctx), X);
  if (name == "unit-hom") return compare_complexes(name, q_hom(unit, X, ctx), X);
  if (name == "shift-tensor") {
    auto a = compare_complexes(name, q_tensor(suspend(X, 1), Z, ctx), suspend(q_tensor(X, Z, ctx), 1));
    if (!a.pass) return a;
    auto b = compare_complexes(name, q_tensor(X, suspend(Z, 1), ctx), suspend(q_tensor(X, Z, ctx), 1));
    b.explicit_iso = b.explicit_iso && a.explicit_iso;
    return b;
  }
  if (name == "shift-hom") return compare_complexes(name, q_hom(X, suspend(Z, 1), ctx), suspend(q_hom(X, Z, ctx), 1));
  if (name == "adjunction") {
    const NComplex& Y = f.target();
    size_t l = chain_map_dimension(q_tensor(X, Y, ctx), Z, ctx);
    size_t r = chain_map_dimension(X, q_hom(Y, Z, ctx), ctx);
    IdentityReport rep;
    rep.name = name;
    rep.pass = l == r;
    std::ostringstream os;
    os << "dim Hom(X(x)Y, Z) = " << l << ", dim Hom(X, Hom(Y, Z)) = " << r;
    rep.detail = os.str();
    return rep;
  }
  throw MathError("UnknownCheck", "no identity check named " + name);
}

}  // namespace ncx
