#include "ncx/koszul.hpp"

#include <random>
#include <sstream>

namespace ncx {

namespace {

Elem lift_elem(const Ring& R, const Elem& x) { return lift(Matrix::scalar(R, 1, x))(0, 0); }

NComplex base_complex(const SequenceSpec& s) {
  return disk(s.N, FPModule::free(s.ring, 1), 0, 1);
}

void check_spec(const SequenceSpec& s) {
  if (s.x.empty()) throw MathError("InvalidArgument", "a Koszul sequence needs at least one element");
  if (s.N < 2) throw MathError("InvalidN", "N must be at least 2");
}

// K(x_1..x_i) for every prefix, K_0 = R in degree 0
std::vector<NComplex> prefixes(const SequenceSpec& s) {
  check_spec(s);
  std::vector<NComplex> out{base_complex(s)};
  for (const auto& xi : s.x) out.push_back(cone(multiplication(out.back(), xi)));
  return out;
}

}  // namespace

SequenceSpec SequenceSpec::ints(const Ring& r, const std::vector<long>& xs, int N) {
  SequenceSpec s{r, {}, N};
  for (long v : xs) s.x.push_back(r.from_int(v));
  return s;
}

SequenceSpec SequenceSpec::power(unsigned e) const {
  SequenceSpec s{ring, {}, N};
  for (const auto& v : x) s.x.push_back(ring.pow(v, e));
  return s;
}

std::string SequenceSpec::str() const {
  std::string o = "(";
  for (size_t i = 0; i < x.size(); ++i) o += (i ? "," : "") + ring.str(x[i]);
  return o + ")";
}

ChainMap multiplication(const NComplex& X, const Elem& c) { return ChainMap::identity(X).scaled(c); }

NComplex koszul_ring(const SequenceSpec& s) { return prefixes(s).back(); }

NComplex koszul_on(const SequenceSpec& s, const FPModule& M) {
  if (M.ring != s.ring) throw MathError("RingMismatch", "module and sequence live over different rings");
  return module_tensor(koszul_ring(s), M);
}

NComplex koszul_on(const SequenceSpec& s, const NComplex& X, const QContext& ctx) {
  return q_tensor(koszul_ring(s), X, ctx);
}

CanonicalFG annihilator(const FPModule& M, const std::vector<Elem>& x) {
  const Ring& R = M.ring;
  Matrix W = M.work_rel();
  const size_t g = M.gens, k = W.cols(), d = x.size();
  Ring wr = work_ring(R);
  // [x_i I | W in block i] v = 0  <=>  x_i v in colspace(W) for all i
  Matrix S(wr, g * d, g + k * d);
  for (size_t i = 0; i < d; ++i) {
    S.set_block(i * g, 0, Matrix::scalar(wr, g, lift_elem(R, x[i])));
    S.set_block(i * g, g + i * k, W);
  }
  Matrix ker = kernel_basis(S);
  Matrix num = ker.block(0, 0, g, ker.cols());
  return make_subquotient(R, g, hstack(num, W), W).cls;
}

CanonicalFG quotient_by(const FPModule& M, const std::vector<Elem>& x) {
  const Ring& R = M.ring;
  Matrix W = M.work_rel();
  Ring wr = work_ring(R);
  for (const auto& xi : x) W = hstack(W, Matrix::scalar(wr, M.gens, lift_elem(R, xi)));
  return classify_relations(R, M.gens, W);
}

KoszulValue koszul_cohomology(const SequenceSpec& s, const FPModule& M, int j, int t) {
  KoszulValue v;
  v.computed = cohomology(koszul_on(s, M), j, t);
  const int N = s.N, d = static_cast<int>(s.x.size()), k = d / 2;
  auto zero = CanonicalFG{M.ring, 0, {}};
  if (j == 0) {
    v.predicted = quotient_by(M, s.x);
    v.formula = "M/xM";
  } else if (d % 2 == 0 && j == -k * N) {
    v.predicted = annihilator(M, s.x);
    v.formula = "(0:x)";
  } else if (d % 2 == 0 && j == -k * N - t) {
    v.predicted = zero;
    v.formula = "0";
  } else if (d % 2 == 1 && j == -k * N - t) {
    v.predicted = annihilator(M, s.x);
    v.formula = "(0:x)";
  } else if (d % 2 == 1 && j == -(k + 1) * N) {
    v.predicted = zero;
    v.formula = "0";
  }
  return v;
}

ChainMap koszul_ladder(const SequenceSpec& s, unsigned p) {
  if (p == 0) throw MathError("InvalidArgument", "ladder maps start at power 1");
  auto hi = prefixes(s.power(p + 1)), lo = prefixes(s.power(p));
  ChainMap L = ChainMap::identity(hi[0]);
  for (size_t i = 0; i < s.x.size(); ++i) {
    const Elem& xi = s.x[i];
    ChainMap f = multiplication(hi[i], s.ring.pow(xi, p + 1));
    ChainMap g = multiplication(lo[i], s.ring.pow(xi, p));
    L = cone_map(f, g, L.scaled(xi), L);
  }
  return L;
}

Resolution resolve_module(const FPModule& M, int N) {
  const Ring& R = M.ring;
  if (!R.is_pid()) throw MathError("NotPID", "free resolutions are only built over principal ideal domains");
  std::vector<Elem> tors;
  std::vector<size_t> keep;
  Matrix Uinv = Matrix::identity(R, M.gens);
  size_t rank = 0;
  if (M.rel.cols() && !M.rel.is_zero()) {
    Smith sm = smith_normal_form(M.rel);
    rank = sm.rank;
    Uinv = *LinearSolver(sm.U).solve(Matrix::identity(R, M.gens));
    for (size_t i = 0; i < rank; ++i)
      if (!R.is_unit(sm.D(i, i))) {
        tors.push_back(sm.D(i, i));
        keep.push_back(i);
      }
  }
  for (size_t i = rank; i < M.gens; ++i) keep.push_back(i);
  const size_t k = tors.size(), g0 = keep.size();

  NComplex P;
  if (k == 0) {
    P = disk(N, FPModule::free(R, g0), 0, 1);
  } else {
    std::vector<FPModule> mods(N - 1, FPModule::free(R, k));
    mods.push_back(FPModule::free(R, g0));
    std::vector<Matrix> diffs(N - 2, Matrix::identity(R, k));
    Matrix top(R, g0, k);
    for (size_t i = 0; i < k; ++i) top(i, i) = tors[i];
    diffs.push_back(top);
    P = NComplex(N, R, -N + 1, mods, diffs);
  }
  NComplex D = disk(N, M, 0, 1);
  ChainMap aug(P, D);
  Matrix a0(R, M.gens, g0);
  for (size_t c = 0; c < g0; ++c) a0.set_block(0, c, Uinv.col(keep[c]));
  aug.set(0, a0);
  return {P, aug};
}

std::vector<ChainMap> chain_map_basis(const NComplex& X, const NComplex& Y) {
  const Ring& R = X.ring();
  Ring wr = work_ring(R);
  std::vector<ChainMap> out;
  if (X.empty() || Y.empty()) return out;
  for (int n = X.lo(); n <= X.hi(); ++n)
    if (!X.module(n).is_free()) throw MathError("InvalidArgument", "chain map search needs a free source");
  const int lo = std::max(X.lo(), Y.lo()), hi = std::min(X.hi(), Y.hi());
  std::map<int, size_t> off;
  size_t unknowns = 0;
  for (int n = lo; n <= hi; ++n) {
    off[n] = unknowns;
    unknowns += Y.gens(n) * X.gens(n);
  }
  if (unknowns == 0) return out;
  // equations f^{n+1} dX^n - dY^n f^n in Y^{n+1} modulo its relations, one block per n
  size_t eq = 0, sl = 0;
  struct Piece {
    size_t r0, c0;
    Matrix m;
  };
  std::vector<Piece> pieces;
  for (int n = lo - 1; n <= hi; ++n) {
    const size_t gy1 = Y.gens(n + 1), gx = X.gens(n);
    if (gy1 == 0 || gx == 0) continue;
    if (off.count(n + 1) && X.gens(n + 1))
      pieces.push_back({eq, off[n + 1], kron(Matrix::identity(wr, gy1), work(X.d(n)).transpose())});
    if (off.count(n) && Y.gens(n)) pieces.push_back({eq, off[n], -kron(work(Y.d(n)), Matrix::identity(wr, gx))});
    Matrix rel = Y.module(n + 1).work_rel();
    if (rel.cols()) {
      pieces.push_back({eq, unknowns + sl, kron(rel, Matrix::identity(wr, gx))});
      sl += rel.cols() * gx;
    }
    eq += gy1 * gx;
  }
  if (eq == 0) {
    for (size_t u = 0; u < unknowns; ++u) {
      ChainMap f(X, Y);
      for (int n = lo; n <= hi; ++n) {
        Matrix m(R, Y.gens(n), X.gens(n));
        for (size_t e = 0; e < Y.gens(n) * X.gens(n); ++e)
          if (off[n] + e == u) m(e / X.gens(n), e % X.gens(n)) = R.one();
        f.set(n, m);
      }
      out.push_back(f);
    }
    return out;
  }
  Matrix S(wr, eq, unknowns + sl);
  for (const auto& p : pieces) {
    Matrix cur = S.block(p.r0, p.c0, p.m.rows(), p.m.cols());
    S.set_block(p.r0, p.c0, cur + p.m);
  }
  Matrix ker = kernel_basis(S);
  for (size_t c = 0; c < ker.cols(); ++c) {
    ChainMap f(X, Y);
    bool nonzero = false;
    for (int n = lo; n <= hi; ++n) {
      const size_t gy = Y.gens(n), gx = X.gens(n);
      Matrix m(wr, gy, gx);
      for (size_t e = 0; e < gy * gx; ++e) m(e / gx, e % gx) = ker(off[n] + e, c);
      Matrix mr = m.over(R);
      if (!mr.is_zero()) nonzero = true;
      f.set(n, mr);
    }
    if (nonzero) out.push_back(f);
  }
  return out;
}

DualityReport self_duality_check(const SequenceSpec& s, bool search) {
  DualityReport rep;
  NComplex K = koszul_ring(s);
  NComplex T = module_hom_into(K, FPModule::free(s.ring, 1));
  for (size_t i = 0; i < s.x.size(); ++i) T = suspend(T, 1);
  T = T.trimmed();
  rep.degreewise = true;
  std::ostringstream os;
  const int lo = std::min(K.lo(), T.lo()), hi = std::max(K.hi(), T.hi());
  for (int n = lo; n <= hi; ++n)
    if (K.module(n).classify() != T.module(n).classify()) {
      rep.degreewise = false;
      os << "degree " << n << ": " << K.module(n).classify().str() << " vs " << T.module(n).classify().str() << "; ";
      break;
    }
  auto cmp = compare_complexes("self-duality", K, T, false);
  rep.htable = cmp.pass;
  os << (cmp.pass ? "H-tables agree" : "H-tables differ at " + cmp.detail);
  if (search && rep.htable) {
    rep.searched = true;
    auto basis = chain_map_basis(K, T);
    std::mt19937 rng(0x5eed);
    std::vector<ChainMap> cands = basis;
    if (basis.empty()) cands.push_back(ChainMap::zero(K, T));
    for (int it = 0; it < 40 && !basis.empty(); ++it) {
      ChainMap f = ChainMap::zero(K, T);
      for (const auto& b : basis) {
        long c = static_cast<long>(rng() % 3) - 1;
        if (c) f = f - b.scaled(s.ring.from_int(-c));
      }
      cands.push_back(f);
    }
    for (size_t i = 0; i < cands.size() && !rep.explicit_map; ++i)
      if (is_quasi_iso(cands[i]).value()) {
        rep.explicit_map = true;
        os << "; quasi-isomorphism found (candidate " << i << ", " << basis.size() << " basis maps)";
      }
    if (!rep.explicit_map) os << "; no quasi-isomorphism among " << cands.size() << " candidates";
  }
  rep.detail = os.str();
  return rep;
}

AnnihilationReport annihilation_check(const SequenceSpec& s, const FPModule& M) {
  AnnihilationReport rep;
  NComplex K = koszul_on(s, M);
  for (int n = K.lo(); n <= K.hi() && rep.pass; ++n)
    for (int t = 1; t < s.N && rep.pass; ++t) {
      Subquotient q = cohomology_sq(K, n, t);
      if (q.cls.is_zero()) continue;
      ++rep.slots;
      for (const auto& xi : s.x) {
        Matrix F = q.coords(q.gens.scaled(lift_elem(s.ring, xi)));
        if (!is_zero_map(q, F)) {
          rep.pass = false;
          rep.failure = s.ring.str(xi) + " acts nontrivially on " + degree_label("H", n, t);
          break;
        }
      }
    }
  return rep;
}

}  // namespace ncx
