#include "ncx/ncomplex.hpp"

#include <sstream>

namespace ncx {

namespace {

Matrix back(const Matrix& m, const Ring& R) {
  return R.kind() == RingKind::IntegersMod ? m.over(R) : m;
}

bool in_rel_span(const FPModule& M, const Matrix& V) {
  if (V.rows() == 0 || V.cols() == 0 || V.is_zero()) return true;
  return LinearSolver(M.rel).in_span(V);
}

}  // namespace

NComplex assemble(int N, const Ring& R, int lo, int hi, const Comps& comps, const Block& block) {
  if (lo > hi) return NComplex(N, R);
  std::vector<std::vector<FPModule>> parts;
  std::vector<FPModule> mods;
  for (int n = lo; n <= hi + 1; ++n) {
    parts.push_back(n <= hi ? comps(n) : std::vector<FPModule>{});
    FPModule M = FPModule::free(R, 0);
    for (const auto& p : parts.back()) M = direct_sum(M, p);
    mods.push_back(M);
  }
  std::vector<Matrix> diffs;
  for (int n = lo; n < hi; ++n) {
    const auto& sp = parts[n - lo];
    const auto& tp = parts[n - lo + 1];
    Matrix D(R, mods[n - lo + 1].gens, mods[n - lo].gens);
    size_t ro = 0;
    for (size_t r = 0; r < tp.size(); ++r) {
      size_t co = 0;
      for (size_t c = 0; c < sp.size(); ++c) {
        if (tp[r].gens && sp[c].gens) {
          auto b = block(n, r, c);
          if (b) {
            if (b->rows() != tp[r].gens || b->cols() != sp[c].gens)
              throw MathError("ShapeMismatch", "block of wrong size while assembling a complex");
            D.set_block(ro, co, *b);
          }
        }
        co += sp[c].gens;
      }
      ro += tp[r].gens;
    }
    diffs.push_back(D);
  }
  mods.pop_back();
  return NComplex(N, R, lo, mods, diffs).trimmed();
}

Matrix block_map(const Ring& R, const std::vector<FPModule>& src, const std::vector<FPModule>& dst,
                 const std::function<std::optional<Matrix>(size_t, size_t)>& entry) {
  size_t rows = 0, cols = 0;
  for (const auto& m : dst) rows += m.gens;
  for (const auto& m : src) cols += m.gens;
  Matrix out(R, rows, cols);
  size_t ro = 0;
  for (size_t r = 0; r < dst.size(); ++r) {
    size_t co = 0;
    for (size_t c = 0; c < src.size(); ++c) {
      if (dst[r].gens && src[c].gens) {
        auto b = entry(r, c);
        if (b) {
          if (b->rows() != dst[r].gens || b->cols() != src[c].gens)
            throw MathError("ShapeMismatch", "block of wrong size in a component map");
          out.set_block(ro, co, *b);
        }
      }
      co += src[c].gens;
    }
    ro += dst[r].gens;
  }
  return out;
}

Matrix work(const Matrix& m) { return lift(m); }

FPModule sub_module_presentation(const Subquotient& q) {
  return FPModule(q.ring, q.size(), back(q.relations(), q.ring));
}

std::string degree_label(const std::string& sym, int n, int t) {
  std::ostringstream os;
  os << "H^" << n << "_" << t << "(" << sym << ")";
  return os.str();
}

NComplex::NComplex(int N, Ring r) : N_(N), R_(std::move(r)), zero_(FPModule::free(R_, 0)) {
  if (N < 2) throw MathError("InvalidN", "N must be at least 2");
}

NComplex::NComplex(int N, Ring r, int lo, std::vector<FPModule> mods, std::vector<Matrix> diffs)
    : N_(N), R_(std::move(r)), lo_(lo), hi_(lo + static_cast<int>(mods.size()) - 1), mods_(std::move(mods)),
      zero_(FPModule::free(R_, 0)) {
  if (N < 2) throw MathError("InvalidN", "N must be at least 2");
  if (diffs.size() > mods_.size()) throw MathError("ShapeMismatch", "more differentials than modules");
  for (size_t k = 0; k < mods_.size(); ++k) {
    size_t tgt = k + 1 < mods_.size() ? mods_[k + 1].gens : 0;
    if (k < diffs.size()) {
      if (diffs[k].rows() != tgt || diffs[k].cols() != mods_[k].gens) {
        std::ostringstream os;
        os << "differential d^" << lo + static_cast<int>(k) << " has shape " << diffs[k].rows() << "x"
           << diffs[k].cols() << ", expected " << tgt << "x" << mods_[k].gens;
        throw MathError("ShapeMismatch", os.str());
      }
      d_.push_back(diffs[k]);
    } else {
      d_.push_back(Matrix(R_, tgt, mods_[k].gens));
    }
  }
}

const FPModule& NComplex::module(int n) const {
  if (n < lo_ || n > hi_) return zero_;
  return mods_[n - lo_];
}

Matrix NComplex::d(int n) const {
  if (n < lo_ || n > hi_) return Matrix(R_, gens(n + 1), gens(n));
  return d_[n - lo_];
}

Matrix NComplex::composite(int n, int k) const {
  Matrix M = Matrix::identity(R_, gens(n));
  for (int i = 0; i < k; ++i) M = d(n + i) * M;
  return M;
}

NComplex NComplex::trimmed() const {
  int a = lo_, b = hi_;
  while (a <= b && gens(a) == 0) ++a;
  while (b >= a && gens(b) == 0) --b;
  if (a > b) return NComplex(N_, R_);
  std::vector<FPModule> mods;
  std::vector<Matrix> diffs;
  for (int n = a; n <= b; ++n) {
    mods.push_back(module(n));
    diffs.push_back(d(n));
  }
  diffs.pop_back();
  return NComplex(N_, R_, a, mods, diffs);
}

ValidationReport validate(const NComplex& X) {
  ValidationReport r;
  for (int n = X.lo(); n <= X.hi(); ++n) {
    if (!in_rel_span(X.module(n + 1), X.d(n) * X.module(n).rel)) {
      r.ok = false;
      r.kind = "relations";
      r.degree = n;
      r.message = "d^" + std::to_string(n) + " does not respect relations";
      return r;
    }
  }
  for (int n = X.lo(); n + X.N() <= X.hi(); ++n) {
    if (!in_rel_span(X.module(n + X.N()), X.composite(n, X.N()))) {
      r.ok = false;
      r.kind = "nilpotence";
      r.degree = n;
      r.message = "d^N is nonzero starting in degree " + std::to_string(n);
      return r;
    }
  }
  return r;
}

Matrix ChainMap::at(int n) const {
  auto it = comp_.find(n);
  if (it != comp_.end()) return it->second;
  return Matrix(src_.ring(), dst_.gens(n), src_.gens(n));
}

ChainMap ChainMap::identity(const NComplex& X) {
  ChainMap f(X, X);
  for (int n = X.lo(); n <= X.hi(); ++n) f.set(n, Matrix::identity(X.ring(), X.gens(n)));
  return f;
}

ChainMap ChainMap::zero(const NComplex& X, const NComplex& Y) { return ChainMap(X, Y); }

ChainMap ChainMap::scaled(const Elem& c) const {
  ChainMap f(src_, dst_);
  for (const auto& [n, m] : comp_) f.set(n, m.scaled(c));
  return f;
}

ChainMap ChainMap::operator-(const ChainMap& o) const {
  ChainMap f(src_, dst_);
  int a = std::min(src_.lo(), dst_.lo()), b = std::max(src_.hi(), dst_.hi());
  for (int n = a; n <= b; ++n) f.set(n, at(n) - o.at(n));
  return f;
}

ChainMap ChainMap::after(const ChainMap& first) const {
  ChainMap f(first.source(), dst_);
  const NComplex& A = first.source();
  for (int n = A.lo(); n <= A.hi(); ++n) f.set(n, at(n) * first.at(n));
  return f;
}

ValidationReport validate(const ChainMap& f) {
  ValidationReport r;
  const NComplex &X = f.source(), &Y = f.target();
  if (X.N() != Y.N() || X.ring() != Y.ring()) {
    r.ok = false;
    r.kind = "shape";
    r.message = "source and target differ in N or ring";
    return r;
  }
  int a = std::min(X.lo(), Y.lo()) - 1, b = std::max(X.hi(), Y.hi());
  for (int n = a; n <= b; ++n) {
    Matrix fn = f.at(n);
    if (fn.rows() != Y.gens(n) || fn.cols() != X.gens(n)) {
      r.ok = false;
      r.kind = "shape";
      r.degree = n;
      r.message = "component has the wrong shape";
      return r;
    }
    if (!in_rel_span(Y.module(n), fn * X.module(n).rel)) {
      r.ok = false;
      r.kind = "relations";
      r.degree = n;
      r.message = "f^" + std::to_string(n) + " does not respect relations";
      return r;
    }
    if (!in_rel_span(Y.module(n + 1), f.at(n + 1) * X.d(n) - Y.d(n) * fn)) {
      r.ok = false;
      r.kind = "commutation";
      r.degree = n;
      r.message = "f does not commute with d in degree " + std::to_string(n);
      return r;
    }
  }
  return r;
}

namespace {

Matrix homotopy_sum(const ChainMap& f, const Homotopy& h, int n) {
  const NComplex &X = f.source(), &Y = f.target();
  const int N = X.N();
  Matrix acc(X.ring(), Y.gens(n), X.gens(n));
  for (int i = 0; i < N; ++i) {
    auto it = h.s.find(n + i);
    if (it == h.s.end()) continue;
    acc = acc + Y.composite(n + i - N + 1, N - 1 - i) * it->second * X.composite(n, i);
  }
  return acc;
}

}  // namespace

bool verify_homotopy(const ChainMap& f, const ChainMap& g, const Homotopy& h) {
  const NComplex &X = f.source(), &Y = f.target();
  for (const auto& [m, s] : h.s)
    if (s.rows() != Y.gens(m - X.N() + 1) || s.cols() != X.gens(m)) return false;
  int a = std::min(X.lo(), Y.lo()), b = std::max(X.hi(), Y.hi());
  for (int n = a; n <= b; ++n)
    if (!in_rel_span(Y.module(n), g.at(n) - f.at(n) - homotopy_sum(f, h, n))) return false;
  return true;
}

std::optional<Homotopy> null_homotopy(const ChainMap& f) {
  const NComplex &X = f.source(), &Y = f.target();
  const Ring& R = X.ring();
  const int N = X.N();
  if (X.empty() || Y.empty()) return Homotopy{};

  // unknown layout: s^m blocks, then slack blocks
  struct Var {
    int m;
    size_t rows, cols, off;
  };
  std::vector<Var> svars;
  size_t nv = 0;
  for (int m = X.lo(); m <= X.hi(); ++m) {
    size_t a = Y.gens(m - N + 1), b = X.gens(m);
    if (a && b) {
      svars.push_back({m, a, b, nv});
      nv += a * b;
    }
  }
  auto find_s = [&](int m) -> const Var* {
    for (const auto& v : svars)
      if (v.m == m) return &v;
    return nullptr;
  };

  struct Eq {
    std::vector<std::pair<size_t, Matrix>> terms;  // column offset, coefficient block
    Matrix rhs;
  };
  std::vector<Eq> eqs;
  // f^n = sum_i A_i s^{n+i} B_i + rel_Y^n * L
  int a = std::min(X.lo(), Y.lo()), b = std::max(X.hi(), Y.hi());
  for (int n = a; n <= b; ++n) {
    size_t gy = Y.gens(n), gx = X.gens(n);
    if (!gy || !gx) continue;
    Eq e;
    Matrix fn = f.at(n);
    e.rhs = Matrix(R, gy * gx, 1);
    for (size_t i = 0; i < gy; ++i)
      for (size_t j = 0; j < gx; ++j) e.rhs(i * gx + j, 0) = fn(i, j);
    for (int i = 0; i < N; ++i) {
      const Var* v = find_s(n + i);
      if (!v) continue;
      Matrix A = Y.composite(n + i - N + 1, N - 1 - i);
      Matrix B = X.composite(n, i);
      e.terms.push_back({v->off, kron(A, B.transpose())});
    }
    const Matrix& rel = Y.module(n).rel;
    if (rel.cols()) {
      e.terms.push_back({nv, kron(rel, Matrix::identity(R, gx))});
      nv += rel.cols() * gx;
    }
    eqs.push_back(std::move(e));
  }
  // s^m rel_X^m = rel_Y^{m-N+1} * M
  for (const auto& v : svars) {
    const Matrix& rx = X.module(v.m).rel;
    if (!rx.cols()) continue;
    const Matrix& ry = Y.module(v.m - N + 1).rel;
    Eq e;
    e.rhs = Matrix(R, v.rows * rx.cols(), 1);
    e.terms.push_back({v.off, kron(Matrix::identity(R, v.rows), rx)});
    if (ry.cols()) {
      e.terms.push_back({nv, -kron(ry, Matrix::identity(R, rx.cols()))});
      nv += ry.cols() * rx.cols();
    }
    eqs.push_back(std::move(e));
  }
  size_t nr = 0;
  for (const auto& e : eqs) nr += e.rhs.rows();
  Matrix A(R, nr, nv), rhs(R, nr, 1);
  size_t ro = 0;
  for (const auto& e : eqs) {
    for (const auto& [off, blk] : e.terms) {
      // terms may share an offset only for distinct s blocks, so accumulate
      for (size_t i = 0; i < blk.rows(); ++i)
        for (size_t j = 0; j < blk.cols(); ++j) A(ro + i, off + j) = R.add(A(ro + i, off + j), blk(i, j));
    }
    rhs.set_block(ro, 0, e.rhs);
    ro += e.rhs.rows();
  }
  auto sol = LinearSolver(A).solve(rhs);
  if (!sol) return std::nullopt;
  Homotopy h;
  for (const auto& v : svars) {
    Matrix s(R, v.rows, v.cols);
    for (size_t i = 0; i < v.rows; ++i)
      for (size_t j = 0; j < v.cols; ++j) s(i, j) = (*sol)(v.off + i * v.cols + j, 0);
    h.s[v.m] = s;
  }
  if (!verify_homotopy(ChainMap::zero(X, Y), f, h))
    throw MathError("InternalError", "homotopy solver produced an invalid witness");
  return h;
}

Subquotient cohomology_sq(const NComplex& X, int n, int t) {
  const Ring& R = X.ring();
  const Ring W = work_ring(R);
  const int N = X.N();
  if (t < 1 || t >= N) throw MathError("InvalidArgument", "t must lie in 1..N-1");
  size_t g = X.gens(n);
  if (g == 0) return make_subquotient(R, 0, Matrix(W, 0, 0), Matrix(W, 0, 0));
  Matrix Z;
  if (X.gens(n + t) == 0) {
    Z = Matrix::identity(W, g);
  } else {
    Matrix K = kernel_basis(hstack(work(X.composite(n, t)), X.module(n + t).work_rel()));
    Z = K.block(0, 0, g, K.cols());
  }
  Matrix B = hstack(work(X.composite(n - (N - t), N - t)), X.module(n).work_rel());
  return make_subquotient(R, g, Z, B);
}

CanonicalFG cohomology(const NComplex& X, int n, int t) { return cohomology_sq(X, n, t).cls; }

std::map<std::pair<int, int>, CanonicalFG> htable(const NComplex& X) {
  std::map<std::pair<int, int>, CanonicalFG> out;
  for (int n = X.lo(); n <= X.hi(); ++n)
    for (int t = 1; t < X.N(); ++t) out.emplace(std::pair{n, t}, cohomology(X, n, t));
  return out;
}

bool is_acyclic(const NComplex& X) {
  for (const auto& [k, v] : htable(X))
    if (!v.is_zero()) return false;
  return true;
}

Matrix induced_map(const ChainMap& f, int n, int, const Subquotient& src, const Subquotient& dst) {
  const Ring W = work_ring(f.source().ring());
  if (src.size() == 0 || dst.size() == 0) return Matrix(W, dst.size(), src.size());
  return dst.coords(work(f.at(n)) * src.gens);
}

NComplex disk(int N, const FPModule& M, int j, int t) {
  if (t < 1 || t > N) throw MathError("InvalidArgument", "disk length must lie in 1..N");
  std::vector<FPModule> mods(t, M);
  std::vector<Matrix> diffs(t - 1, Matrix::identity(M.ring, M.gens));
  return NComplex(N, M.ring, j - t + 1, mods, diffs);
}

NComplex suspend(const NComplex& X, int direction) {
  const int N = X.N();
  if (X.empty()) return X;
  if (direction == 1) {
    auto comps = [&](int n) {
      std::vector<FPModule> v;
      for (int c = 1; c < N; ++c) v.push_back(X.module(n + c));
      return v;
    };
    auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
      if (c == r + 1) return Matrix::identity(X.ring(), X.gens(n + 1 + static_cast<int>(c)));
      if (r == static_cast<size_t>(N - 2)) {
        int deg = n + static_cast<int>(c) + 1;
        return -X.composite(deg, N - static_cast<int>(c) - 1);
      }
      return std::nullopt;
    };
    return assemble(N, X.ring(), X.lo() - N + 1, X.hi() - 1, comps, block);
  }
  if (direction == -1) {
    auto comps = [&](int n) {
      std::vector<FPModule> v;
      for (int c = 0; c < N - 1; ++c) v.push_back(X.module(n - N + 1 + c));
      return v;
    };
    auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
      if (c == r + 1) return Matrix::identity(X.ring(), X.gens(n - N + 1 + static_cast<int>(c)));
      if (c == 0) return -X.composite(n - N + 1, static_cast<int>(r) + 1);
      return std::nullopt;
    };
    return assemble(N, X.ring(), X.lo() + 1, X.hi() + N - 1, comps, block);
  }
  throw MathError("InvalidArgument", "suspension direction must be +1 or -1");
}

NComplex cone(const ChainMap& f) {
  const NComplex &X = f.source(), &Y = f.target();
  const int N = X.N();
  auto comps = [&](int n) {
    std::vector<FPModule> v{Y.module(n)};
    for (int c = 1; c < N; ++c) v.push_back(X.module(n + c));
    return v;
  };
  auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
    if (r == 0) {
      if (c == 0) return Y.d(n);
      if (c == 1) return f.at(n + 1);
      return std::nullopt;
    }
    if (c == r + 1) return Matrix::identity(X.ring(), X.gens(n + static_cast<int>(c)));
    if (r == static_cast<size_t>(N - 1) && c >= 1) return -X.composite(n + static_cast<int>(c), N - static_cast<int>(c));
    return std::nullopt;
  };
  int lo = std::min(Y.empty() ? X.lo() : Y.lo(), X.empty() ? Y.lo() : X.lo() - N + 1);
  int hi = std::max(Y.empty() ? X.hi() : Y.hi(), X.empty() ? Y.hi() : X.hi() - 1);
  if (X.empty() && Y.empty()) return NComplex(N, X.ring());
  return assemble(N, X.ring(), lo, hi, comps, block);
}

NComplex cocone(const ChainMap& f) {
  const NComplex &X = f.source(), &Y = f.target();
  const int N = X.N();
  auto comps = [&](int n) {
    std::vector<FPModule> v{X.module(n)};
    for (int c = 1; c < N; ++c) v.push_back(Y.module(n - c));
    return v;
  };
  auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
    const int ri = static_cast<int>(r), ci = static_cast<int>(c);
    if (r == 0) return c == 0 ? std::optional<Matrix>(X.d(n)) : std::nullopt;
    if (r == 1 && c == 0) return f.at(n);
    if (ci == N - 1) return -Y.composite(n - N + 1, N - ri);
    if (r >= 2 && ci == ri - 1) return Matrix::identity(X.ring(), Y.gens(n - ci));
    return std::nullopt;
  };
  if (X.empty() && Y.empty()) return NComplex(N, X.ring());
  int lo = std::min(X.empty() ? Y.lo() + 1 : X.lo(), Y.empty() ? X.lo() : Y.lo() + 1);
  int hi = std::max(X.empty() ? Y.hi() + N - 1 : X.hi(), Y.empty() ? X.hi() : Y.hi() + N - 1);
  return assemble(N, X.ring(), lo, hi, comps, block);
}

NComplex direct_sum(const NComplex& X, const NComplex& Y) {
  if (X.empty()) return Y;
  if (Y.empty()) return X;
  auto comps = [&](int n) { return std::vector<FPModule>{X.module(n), Y.module(n)}; };
  auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
    if (r != c) return std::nullopt;
    return r == 0 ? X.d(n) : Y.d(n);
  };
  return assemble(X.N(), X.ring(), std::min(X.lo(), Y.lo()), std::max(X.hi(), Y.hi()), comps, block);
}

QuasiIsoVerdict is_quasi_iso(const ChainMap& f) {
  QuasiIsoVerdict v;
  const NComplex &X = f.source(), &Y = f.target();
  v.via_induced = true;
  v.certificate = "all H^n_t iso";
  int a = std::min(X.empty() ? Y.lo() : X.lo(), Y.empty() ? X.lo() : Y.lo());
  int b = std::max(X.empty() ? Y.hi() : X.hi(), Y.empty() ? X.hi() : Y.hi());
  for (int n = a; n <= b && v.via_induced; ++n)
    for (int t = 1; t < X.N(); ++t) {
      auto s = cohomology_sq(X, n, t), d = cohomology_sq(Y, n, t);
      auto rep = analyze_map(s, d, induced_map(f, n, t, s, d));
      if (!rep.iso()) {
        v.via_induced = false;
        std::ostringstream os;
        os << "H^" << n << "_" << t << "(f): kernel " << rep.kernel.str() << ", cokernel " << rep.cokernel.str();
        v.certificate = os.str();
        break;
      }
    }
  v.via_cone = is_acyclic(cone(f));
  return v;
}

namespace {

Subquotient kernel_piece(const NComplex& X, int m, int k) {
  const Ring W = work_ring(X.ring());
  size_t g = X.gens(m);
  Matrix Z;
  if (X.gens(m + k) == 0) {
    Z = Matrix::identity(W, g);
  } else {
    Matrix K = kernel_basis(hstack(work(X.composite(m, k)), X.module(m + k).work_rel()));
    Z = K.block(0, 0, g, K.cols());
  }
  return make_subquotient(X.ring(), g, Z, X.module(m).work_rel());
}

}  // namespace

NComplex truncate(const NComplex& X, TruncFlavor flavor, TruncSide side, int index) {
  const Ring& R = X.ring();
  const int N = X.N();
  if (X.empty()) return X;
  if (flavor == TruncFlavor::Stupid) {
    int lo = side == TruncSide::Above ? std::max(X.lo(), index + 1) : X.lo();
    int hi = side == TruncSide::Above ? X.hi() : std::min(X.hi(), index);
    if (lo > hi) return NComplex(N, R);
    std::vector<FPModule> mods;
    std::vector<Matrix> diffs;
    for (int n = lo; n <= hi; ++n) {
      mods.push_back(X.module(n));
      if (n < hi) diffs.push_back(X.d(n));
    }
    return NComplex(N, R, lo, mods, diffs).trimmed();
  }
  if (side == TruncSide::Below) {
    // sigma_{<=n}: kernels Z^m_{n-m+1} near the top
    const int n = index;
    if (n < X.lo()) return NComplex(N, R);
    int lo = X.lo(), hi = n;
    std::map<int, Subquotient> sq;
    for (int m = std::max(lo, n - N + 2); m <= hi; ++m) sq.emplace(m, kernel_piece(X, m, n - m + 1));
    std::vector<FPModule> mods;
    std::vector<Matrix> diffs;
    for (int m = lo; m <= hi; ++m) {
      auto it = sq.find(m);
      mods.push_back(it == sq.end() ? X.module(m) : sub_module_presentation(it->second));
      if (m == hi) break;
      auto nt = sq.find(m + 1);
      if (nt == sq.end()) {
        diffs.push_back(X.d(m));
      } else {
        Matrix src = it == sq.end() ? Matrix::identity(work_ring(R), X.gens(m)) : it->second.gens;
        Matrix D = nt->second.size() && src.cols() ? nt->second.coords(work(X.d(m)) * src)
                                                   : Matrix(work_ring(R), nt->second.size(), src.cols());
        diffs.push_back(back(D, R));
      }
    }
    return NComplex(N, R, lo, mods, diffs).trimmed();
  }
  // sigma_{>=n}: cokernels of the incoming composites from degree n-1
  const int n = index;
  if (n > X.hi()) return NComplex(N, R);
  int lo = n, hi = X.hi();
  std::vector<FPModule> mods;
  std::vector<Matrix> diffs;
  for (int m = lo; m <= hi; ++m) {
    if (m <= n + N - 2) {
      const FPModule& M = X.module(m);
      mods.push_back(FPModule(R, M.gens, hstack(M.rel, X.composite(n - 1, m - n + 1))));
    } else {
      mods.push_back(X.module(m));
    }
    if (m < hi) diffs.push_back(X.d(m));
  }
  return NComplex(N, R, lo, mods, diffs).trimmed();
}

ChainMap truncation_map(const NComplex& X, TruncFlavor flavor, TruncSide side, int index) {
  NComplex T = truncate(X, flavor, side, index);
  const Ring& R = X.ring();
  if (flavor == TruncFlavor::Smart && side == TruncSide::Below) {
    ChainMap f(T, X);
    for (int m = T.lo(); m <= T.hi(); ++m) {
      if (m >= index - X.N() + 2) {
        f.set(m, back(kernel_piece(X, m, index - m + 1).gens, R));
      } else {
        f.set(m, Matrix::identity(R, X.gens(m)));
      }
    }
    return f;
  }
  bool into_x = flavor == TruncFlavor::Stupid && side == TruncSide::Above;
  ChainMap f = into_x ? ChainMap(T, X) : ChainMap(X, T);
  for (int m = T.lo(); m <= T.hi(); ++m) f.set(m, Matrix::identity(R, X.gens(m)));
  return f;
}

LesReport les_report(const ChainMap& f, const ChainMap& g, int t) {
  const NComplex &X = f.source(), &Y = f.target(), &Z = g.target();
  const int N = X.N();
  const Ring& R = X.ring();
  const Ring W = work_ring(R);
  LesReport rep;
  if (t < 1 || t >= N) throw MathError("InvalidArgument", "t must lie in 1..N-1");

  int a = std::min({X.empty() ? 0 : X.lo(), Y.empty() ? 0 : Y.lo(), Z.empty() ? 0 : Z.lo()});
  int b = std::max({X.empty() ? 0 : X.hi(), Y.empty() ? 0 : Y.hi(), Z.empty() ? 0 : Z.hi()});

  for (int n = a; n <= b; ++n) {
    auto A = module_subquotient(X.module(n)), B = module_subquotient(Y.module(n)),
         C = module_subquotient(Z.module(n));
    auto coords = [&](const Subquotient& s, const Subquotient& d, const Matrix& F) {
      if (s.size() == 0 || d.size() == 0) return Matrix(W, d.size(), s.size());
      return d.coords(work(F) * s.gens);
    };
    Matrix al = coords(A, B, f.at(n)), be = coords(B, C, g.at(n));
    bool inj = analyze_map(A, B, al).kernel.is_zero();
    bool sur = analyze_map(B, C, be).cokernel.is_zero();
    if (!inj || !sur || !exact_at(A, B, C, al, be)) {
      rep.input_exact = false;
      throw MathError("NotExactInput", "0 -> X -> Y -> Z -> 0 is not exact in degree " + std::to_string(n));
    }
  }

  struct Slot {
    int n, s, which;  // which: 0 X, 1 Y, 2 Z
    Subquotient h;
  };
  std::vector<Slot> slots;
  const char* sym[] = {"X", "Y", "Z"};
  const NComplex* cx[] = {&X, &Y, &Z};
  // walk n -> n + t -> n + N -> ... from below the support to above it
  int n = a - N, s = t;
  while (n <= b + N) {
    for (int w = 0; w < 3; ++w) slots.push_back({n, s, w, cohomology_sq(*cx[w], n, s)});
    n += s;
    s = N - s;
  }
  for (const auto& sl : slots) rep.nodes.push_back({degree_label(sym[sl.which], sl.n, sl.s), sl.h.cls});

  auto map_between = [&](size_t i) -> Matrix {
    const Slot &p = slots[i], &q = slots[i + 1];
    if (p.h.size() == 0 || q.h.size() == 0) return Matrix(W, q.h.size(), p.h.size());
    if (p.which == 0) return induced_map(f, p.n, p.s, p.h, q.h);
    if (p.which == 1) return induced_map(g, p.n, p.s, p.h, q.h);
    // connecting map: lift through g, apply d^s, pull back through f
    Matrix out(W, q.h.size(), p.h.size());
    LinearSolver lg(hstack(work(g.at(p.n)), Z.module(p.n).work_rel()));
    LinearSolver lf(hstack(work(f.at(q.n)), Y.module(q.n).work_rel()));
    for (size_t j = 0; j < p.h.size(); ++j) {
      auto y = lg.solve(p.h.gens.col(j));
      if (!y) throw MathError("NotExactInput", "g is not surjective");
      Matrix yv = y->block(0, 0, Y.gens(p.n), 1);
      Matrix w = work(Y.composite(p.n, p.s)) * yv;
      auto x = lf.solve(w);
      if (!x) throw MathError("NotExactInput", "diagram chase failed");
      Matrix xv = x->block(0, 0, X.gens(q.n), 1);
      out.set_block(0, j, q.h.coords(xv));
    }
    if (!is_zero_map(q.h, out)) rep.connecting_zero = false;
    return out;
  };
  std::vector<Matrix> maps;
  for (size_t i = 0; i + 1 < slots.size(); ++i) maps.push_back(map_between(i));
  for (size_t i = 1; i + 1 < slots.size(); ++i) {
    if (!exact_at(slots[i - 1].h, slots[i].h, slots[i + 1].h, maps[i - 1], maps[i])) {
      rep.exact = false;
      rep.failure = rep.nodes[i].label;
      break;
    }
  }
  return rep;
}

}  // namespace ncx

namespace ncx {

namespace {
std::vector<FPModule> cone_comps(const ChainMap& f, int n) {
  std::vector<FPModule> v{f.target().module(n)};
  for (int c = 1; c < f.source().N(); ++c) v.push_back(f.source().module(n + c));
  return v;
}
}  // namespace

ChainMap cone_map(const ChainMap& f, const ChainMap& g, const ChainMap& a, const ChainMap& b) {
  NComplex C = cone(f), D = cone(g);
  ChainMap out(C, D);
  const Ring& R = C.ring();
  for (int n = C.lo(); n <= C.hi(); ++n)
    out.set(n, block_map(R, cone_comps(f, n), cone_comps(g, n), [&](size_t r, size_t c) -> std::optional<Matrix> {
              if (r != c) return std::nullopt;
              return r == 0 ? b.at(n) : a.at(n + static_cast<int>(c));
            }));
  return out;
}

ChainMap cone_inclusion(const ChainMap& f) {
  NComplex C = cone(f);
  const NComplex& Y = f.target();
  ChainMap out(Y, C);
  for (int n = Y.lo(); n <= Y.hi(); ++n)
    out.set(n, block_map(C.ring(), {Y.module(n)}, cone_comps(f, n), [&](size_t r, size_t) -> std::optional<Matrix> {
              if (r) return std::nullopt;
              return Matrix::identity(C.ring(), Y.gens(n));
            }));
  return out;
}

ChainMap cone_projection(const ChainMap& f) {
  NComplex C = cone(f), S = suspend(f.source(), 1);
  ChainMap out(C, S);
  for (int n = C.lo(); n <= C.hi(); ++n) {
    auto src = cone_comps(f, n);
    std::vector<FPModule> dst(src.begin() + 1, src.end());
    out.set(n, block_map(C.ring(), src, dst, [&](size_t r, size_t c) -> std::optional<Matrix> {
              if (c != r + 1) return std::nullopt;
              return Matrix::identity(C.ring(), src[c].gens);
            }));
  }
  return out;
}

ChainMap cocone_map(const ChainMap& f, const ChainMap& g, const ChainMap& a, const ChainMap& b) {
  NComplex C = cocone(f), D = cocone(g);
  ChainMap out(C, D);
  const int N = C.N();
  auto comps = [N](const ChainMap& h, int n) {
    std::vector<FPModule> v{h.source().module(n)};
    for (int c = 1; c < N; ++c) v.push_back(h.target().module(n - c));
    return v;
  };
  for (int n = C.lo(); n <= C.hi(); ++n)
    out.set(n, block_map(C.ring(), comps(f, n), comps(g, n), [&](size_t r, size_t c) -> std::optional<Matrix> {
              if (r != c) return std::nullopt;
              return r == 0 ? a.at(n) : b.at(n - static_cast<int>(c));
            }));
  return out;
}

}  // namespace ncx
