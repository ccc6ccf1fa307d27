#include "ncx/linalg.hpp"

#include <sstream>

namespace ncx {

namespace {

Smith smith_euclid(const Matrix& A) {
  const Ring& R = A.ring();
  const size_t m = A.rows(), n = A.cols();
  Smith s{Matrix::identity(R, m), A, Matrix::identity(R, n), 0};
  Matrix& D = s.D;
  size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    for (;;) {
      // pivot: smallest norm, lowest (row, col)
      bool found = false;
      size_t pi = 0, pj = 0;
      Int best;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j) {
          if (R.is_zero(D(i, j))) continue;
          Int nv = R.norm(D(i, j));
          if (!found || nv < best) {
            found = true;
            best = nv;
            pi = i;
            pj = j;
          }
        }
      if (!found) {
        s.rank = t;
        return s;
      }
      D.swap_rows(t, pi);
      s.U.swap_rows(t, pi);
      D.swap_cols(t, pj);
      s.V.swap_cols(t, pj);

      bool dirty = false;
      const Elem p = D(t, t);
      for (size_t i = t + 1; i < m; ++i) {
        if (R.is_zero(D(i, t))) continue;
        auto [q, r] = R.divmod(D(i, t), p);
        Elem nq = R.neg(q);
        D.add_row(i, t, nq);
        s.U.add_row(i, t, nq);
        if (!R.is_zero(r)) dirty = true;
      }
      for (size_t j = t + 1; j < n; ++j) {
        if (R.is_zero(D(t, j))) continue;
        auto [q, r] = R.divmod(D(t, j), p);
        Elem nq = R.neg(q);
        D.add_col(j, t, nq);
        s.V.add_col(j, t, nq);
        if (!R.is_zero(r)) dirty = true;
      }
      if (dirty) continue;

      bool bad = false;
      for (size_t i = t + 1; i < m && !bad; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (!R.divides(p, D(i, j))) {
            D.add_row(t, i, R.one());
            s.U.add_row(t, i, R.one());
            bad = true;
            break;
          }
      if (!bad) break;
    }
    auto [u, c] = R.normalize(D(t, t));
    if (!R.is_one(u)) {
      D.scale_row(t, u);
      s.U.scale_row(t, u);
    }
  }
  s.rank = t;
  for (size_t i = 0; i < std::min(m, n); ++i)
    if (R.is_zero(D(i, i))) {
      s.rank = i;
      break;
    }
  return s;
}

}  // namespace

Ring work_ring(const Ring& r) { return r.kind() == RingKind::IntegersMod ? Ring::integers() : r; }

Matrix lift(const Matrix& m) {
  if (m.ring().kind() != RingKind::IntegersMod) return m;
  return m.over(Ring::integers());
}

Matrix modulus_relations(const Ring& r, size_t n) {
  if (r.kind() != RingKind::IntegersMod) return Matrix(work_ring(r), n, 0);
  return Matrix::scalar(Ring::integers(), n, Ring::integers().from_int(r.modulus()));
}

Smith smith_normal_form(const Matrix& A) {
  const Ring& R = A.ring();
  if (R.kind() != RingKind::IntegersMod) return smith_euclid(A);
  Smith z = smith_euclid(lift(A));
  Smith s{z.U.over(R), z.D.over(R), z.V.over(R), 0};
  size_t k = std::min(A.rows(), A.cols());
  for (size_t i = 0; i < k; ++i) {
    auto [u, c] = R.normalize(s.D(i, i));
    if (!R.is_one(u)) {
      s.D.scale_row(i, u);
      s.U.scale_row(i, u);
    }
    if (!R.is_zero(s.D(i, i))) s.rank = i + 1;
  }
  return s;
}

bool CanonicalFG::operator==(const CanonicalFG& o) const {
  return ring == o.ring && free_rank == o.free_rank && factors == o.factors;
}

namespace {

std::string free_symbol(const Ring& r) {
  switch (r.kind()) {
    case RingKind::Integers: return "Z";
    case RingKind::IntegersMod: return "(" + r.name() + ")";
    default: return r.name();
  }
}

}  // namespace

std::string CanonicalFG::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  if (free_rank) {
    os << free_symbol(ring) << "^" << free_rank;
    first = false;
  }
  for (const auto& d : factors) {
    if (!first) os << " + ";
    first = false;
    if (ring.kind() == RingKind::Cyclotomic && d.b != 0)
      os << ring.name() << "/(" << ring.str(d) << ")";
    else
      os << "Z/" << d.a;
  }
  return os.str();
}

Int CanonicalFG::order() const {
  Int o = 1;
  if (free_rank) {
    if (ring.kind() == RingKind::IntegersMod || ring.kind() == RingKind::PrimeField) {
      for (size_t i = 0; i < free_rank; ++i) o *= ring.modulus();
    } else {
      return 0;
    }
  }
  for (const auto& d : factors) {
    if (ring.kind() == RingKind::Cyclotomic) o *= ring.norm(d);
    else o *= d.a;
  }
  return o;
}

CanonicalFG classify_relations(const Ring& R, size_t gens, const Matrix& work_rel) {
  CanonicalFG c{R, 0, {}};
  if (gens == 0) return c;
  const Ring W = work_ring(R);
  Matrix rel = work_rel.cols() ? work_rel : Matrix(W, gens, 0);
  Smith s = smith_normal_form(rel);
  c.free_rank = gens - s.rank;
  for (size_t i = 0; i < s.rank; ++i) {
    const Elem& d = s.D(i, i);
    if (W.is_unit(d)) continue;
    if (R.kind() == RingKind::IntegersMod) {
      if (d.a == R.modulus()) c.free_rank++;
      else c.factors.push_back(R.from_int(d.a));
    } else {
      c.factors.push_back(d);
    }
  }
  return c;
}

CanonicalFG classify_cokernel(const Matrix& A) {
  const Ring& R = A.ring();
  Matrix rel = A.transpose();
  return classify_relations(R, A.cols(), hstack(lift(rel), modulus_relations(R, A.cols())));
}

Matrix kernel_basis(const Matrix& A) {
  const Ring& R = A.ring();
  if (R.kind() == RingKind::IntegersMod) {
    Matrix W = hstack(lift(A), modulus_relations(R, A.rows()));
    Smith s = smith_euclid(W);
    Matrix K = s.V.block(0, s.rank, A.cols(), W.cols() - s.rank);
    return nonzero_cols(K.over(R));
  }
  Smith s = smith_euclid(A);
  return s.V.block(0, s.rank, A.cols(), A.cols() - s.rank);
}

LinearSolver::LinearSolver(const Matrix& A) : orig_(A.ring()), n_(A.cols()) {
  Matrix W = hstack(lift(A), modulus_relations(A.ring(), A.rows()));
  snf_ = smith_euclid(W);
}

std::optional<Matrix> LinearSolver::solve(const Matrix& B) const {
  const Ring W = work_ring(orig_);
  Matrix C = snf_.U * lift(B);
  const size_t wc = snf_.V.rows();
  Matrix Y(W, wc, B.cols());
  for (size_t j = 0; j < B.cols(); ++j) {
    for (size_t i = 0; i < C.rows(); ++i) {
      const Elem& c = C(i, j);
      if (i < snf_.rank) {
        const Elem& d = snf_.D(i, i);
        if (!W.divides(d, c)) return std::nullopt;
        Y(i, j) = W.exact_div(c, d);
      } else if (!W.is_zero(c)) {
        return std::nullopt;
      }
    }
  }
  Matrix X = snf_.V * Y;
  X = X.block(0, 0, n_, B.cols());
  return orig_.kind() == RingKind::IntegersMod ? X.over(orig_) : X;
}

Matrix Subquotient::coords(const Matrix& v) const {
  auto raw = solver_.solve(v);
  if (!raw) throw MathError("NotInSubmodule", "vector does not lie in the numerator");
  return reduce_ * *raw;
}

Matrix Subquotient::relations() const {
  const Ring W = work_ring(ring);
  Matrix r(W, gens.cols(), diag.size());
  for (size_t i = 0; i < diag.size(); ++i) r(i, i) = diag[i];
  return r;
}

Subquotient make_subquotient(const Ring& R, size_t ambient, const Matrix& numerator, const Matrix& denominator) {
  const Ring W = work_ring(R);
  Subquotient q;
  q.ring = R;
  q.ambient = ambient;
  Matrix num = numerator.cols() ? numerator : Matrix(W, ambient, 0);
  Matrix den = denominator.cols() ? denominator : Matrix(W, ambient, 0);
  q.raw_gens_ = num;
  q.solver_ = LinearSolver(num);
  const size_t k = num.cols();
  if (den.cols() && !q.solver_.in_span(den))
    throw MathError("ContainmentViolation", "denominator is not contained in the numerator");

  Matrix rel(W, k, 0);
  if (k) {
    Matrix K = kernel_basis(hstack(num, den));
    rel = K.block(0, 0, k, K.cols());
  }
  Smith s = smith_euclid(rel.cols() ? rel : Matrix(W, k, 0));
  // inverse of U: solve U X = I
  Matrix Uinv = k ? *LinearSolver(s.U).solve(Matrix::identity(W, k)) : Matrix(W, 0, 0);
  Matrix G = num * Uinv;
  std::vector<size_t> keep;
  for (size_t i = 0; i < k; ++i) {
    if (i < s.rank) {
      if (W.is_unit(s.D(i, i))) continue;
      q.diag.push_back(s.D(i, i));
    }
    keep.push_back(i);
  }
  q.gens = Matrix(W, ambient, keep.size());
  q.reduce_ = Matrix(W, keep.size(), k);
  for (size_t c = 0; c < keep.size(); ++c) {
    for (size_t i = 0; i < ambient; ++i) q.gens(i, c) = G(i, keep[c]);
    for (size_t j = 0; j < k; ++j) q.reduce_(c, j) = s.U(keep[c], j);
  }
  q.cls = classify_relations(R, keep.size(), q.relations());
  return q;
}

FPModule::FPModule(Ring r, size_t g, Matrix relations) : ring(std::move(r)), gens(g), rel(std::move(relations)) {
  if (rel.rows() != gens) {
    if (rel.rows() == 0 && rel.cols() == 0) rel = Matrix(ring, gens, 0);
    else throw MathError("ShapeMismatch", "relation matrix must have one row per generator");
  }
}

FPModule FPModule::free(const Ring& r, size_t n) { return FPModule(r, n, Matrix(r, n, 0)); }

FPModule FPModule::cyclic(const Ring& r, const Elem& d) {
  Matrix m(r, 1, 1);
  m(0, 0) = d;
  return FPModule(r, 1, m);
}

FPModule FPModule::from_canonical(const CanonicalFG& c) {
  const size_t g = c.factors.size() + c.free_rank;
  Matrix rel(c.ring, g, c.factors.size());
  for (size_t i = 0; i < c.factors.size(); ++i) rel(i, i) = c.factors[i];
  return FPModule(c.ring, g, rel);
}

Matrix FPModule::work_rel() const { return hstack(lift(rel), modulus_relations(ring, gens)); }

CanonicalFG FPModule::classify() const { return classify_relations(ring, gens, work_rel()); }

FPModule direct_sum(const FPModule& a, const FPModule& b) {
  return FPModule(a.ring, a.gens + b.gens, direct_sum(a.rel, b.rel));
}

FPModule localize_module(const FPModule& M, const std::vector<Int>& S) {
  if (M.ring.kind() != RingKind::Integers) throw MathError("InvalidRing", "localize_module expects an integer module");
  if (S.empty()) throw MathError("InvalidArgument", "empty inverted set");
  Ring L = Ring::localized(S);
  return FPModule(L, M.gens, M.rel.over(L));
}

CanonicalFG subquotient(size_t ambient, const Matrix& numerator, const Matrix& denominator) {
  const Ring& R = numerator.ring();
  Matrix mod = modulus_relations(R, ambient);
  return make_subquotient(R, ambient, hstack(lift(numerator), mod), hstack(lift(denominator), mod)).cls;
}

Subquotient module_subquotient(const FPModule& M) {
  const Ring W = work_ring(M.ring);
  return make_subquotient(M.ring, M.gens, Matrix::identity(W, M.gens), M.work_rel());
}

MapReport analyze_map(const Subquotient& src, const Subquotient& dst, const Matrix& F) {
  const Ring& R = src.ring;
  const Ring W = work_ring(R);
  MapReport r;
  Matrix FR = hstack(F.cols() ? F : Matrix(W, dst.size(), src.size()), dst.relations());
  r.cokernel = classify_relations(R, dst.size(), FR);
  Matrix K = kernel_basis(FR);
  Matrix pre = K.block(0, 0, src.size(), K.cols());
  r.kernel = make_subquotient(R, src.size(), pre, src.relations()).cls;
  return r;
}

bool is_zero_map(const Subquotient& dst, const Matrix& F) {
  if (F.cols() == 0 || dst.size() == 0) return true;
  return LinearSolver(dst.relations()).in_span(F);
}

bool exact_at(const Subquotient& A, const Subquotient& B, const Subquotient& C, const Matrix& alpha,
              const Matrix& beta) {
  const Ring W = work_ring(B.ring);
  if (B.size() == 0) return true;
  Matrix al = alpha.cols() || A.size() == 0 ? alpha : Matrix(W, B.size(), A.size());
  Matrix be = beta.rows() || C.size() == 0 ? beta : Matrix(W, C.size(), B.size());
  if (A.size() && C.size() && !is_zero_map(C, be * al)) return false;
  Matrix pre;
  if (C.size()) {
    Matrix K = kernel_basis(hstack(be, C.relations()));
    pre = K.block(0, 0, B.size(), K.cols());
  } else {
    pre = Matrix::identity(W, B.size());
  }
  Matrix img = hstack(A.size() ? al : Matrix(W, B.size(), 0), B.relations());
  try {
    return make_subquotient(B.ring, B.size(), pre, img).cls.is_zero();
  } catch (const MathError&) {
    return false;
  }
}

}  // namespace ncx
