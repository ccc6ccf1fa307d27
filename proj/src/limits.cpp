#include "ncx/limits.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ncx {

CanonicalModule CanonicalModule::finite(const CanonicalFG& c) {
  CanonicalModule m;
  m.fg = c;
  return m;
}

bool CanonicalModule::is_zero() const {
  return !opaque && fg.is_zero() && pruefer.empty() && adic.empty() && localized.empty() && divisible_rank == 0;
}

bool CanonicalModule::operator==(const CanonicalModule& o) const {
  if (opaque || o.opaque) return false;
  return fg.free_rank == o.fg.free_rank && fg.factors == o.fg.factors && pruefer == o.pruefer && adic == o.adic &&
         localized == o.localized && divisible_rank == o.divisible_rank;
}

std::string CanonicalModule::str() const {
  if (opaque) return "unclassified[" + *opaque + "]";
  std::vector<std::string> parts;
  if (!fg.is_zero()) parts.push_back(fg.str());
  for (const auto& [S, k] : localized) {
    std::string s = "Z[1/";
    for (size_t i = 0; i < S.size(); ++i) s += (i ? "," : "") + S[i].get_str();
    parts.push_back(s + "]^" + std::to_string(k));
  }
  for (const auto& [p, k] : pruefer) parts.push_back("Pruefer(" + p.get_str() + ")^" + std::to_string(k));
  for (const auto& [p, k] : adic) parts.push_back("Z" + p.get_str() + "-adic^" + std::to_string(k));
  if (divisible_rank) parts.push_back("Q^" + std::to_string(divisible_rank));
  if (parts.empty()) return "0";
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) out += (i ? " + " : "") + parts[i];
  return out;
}

std::map<Int, unsigned> factorize(Int n) {
  std::map<Int, unsigned> out;
  if (n < 0) n = -n;
  if (n <= 1) return out;
  for (Int d = 2; d * d <= n; ++d)
    while (n % d == 0) {
      ++out[d];
      n /= d;
    }
  if (n > 1) ++out[n];
  return out;
}

std::map<Int, std::vector<unsigned>> prime_powers(const CanonicalFG& c) {
  std::map<Int, std::vector<unsigned>> out;
  for (const auto& d : c.factors)
    for (const auto& [p, e] : factorize(d.a)) out[p].push_back(e);
  for (auto& [p, v] : out) std::sort(v.rbegin(), v.rend());
  return out;
}

CanonicalFG from_prime_powers(const Ring& R, size_t free_rank, const std::map<Int, std::vector<unsigned>>& exps) {
  size_t L = 0;
  for (const auto& [p, v] : exps) L = std::max(L, v.size());
  std::vector<Int> big(L, 1);  // big[0] is the largest factor
  for (const auto& [p, v] : exps) {
    auto sorted = v;
    std::sort(sorted.rbegin(), sorted.rend());
    for (size_t i = 0; i < sorted.size(); ++i) {
      Int pe;
      mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), sorted[i]);
      big[i] *= pe;
    }
  }
  CanonicalFG c{R, free_rank, {}};
  for (auto it = big.rbegin(); it != big.rend(); ++it)
    if (*it != 1) c.factors.push_back(R.from_int(*it));
  return c;
}

CanonicalModule direct_sum(const CanonicalModule& a, const CanonicalModule& b) {
  CanonicalModule m;
  if (a.opaque || b.opaque) {
    m.opaque = a.opaque ? *a.opaque : *b.opaque;
    return m;
  }
  auto ea = prime_powers(a.fg), eb = prime_powers(b.fg);
  for (const auto& [p, v] : eb) ea[p].insert(ea[p].end(), v.begin(), v.end());
  m.fg = from_prime_powers(a.fg.ring, a.fg.free_rank + b.fg.free_rank, ea);
  m.pruefer = a.pruefer;
  for (const auto& [p, k] : b.pruefer) m.pruefer[p] += k;
  m.adic = a.adic;
  for (const auto& [p, k] : b.adic) m.adic[p] += k;
  m.localized = a.localized;
  for (const auto& [S, k] : b.localized) m.localized[S] += k;
  m.divisible_rank = a.divisible_rank + b.divisible_rank;
  return m;
}

namespace {

std::string dump_stages(const std::vector<Subquotient>& st) {
  std::ostringstream os;
  for (size_t k = 0; k < st.size(); ++k) os << (k ? " | " : "") << "s=" << k + 1 << ": " << st[k].cls.str();
  return os.str();
}

bool integer_like(const Ring& R) { return R.kind() == RingKind::Integers || R.kind() == RingKind::Localized; }

Subquotient image_in(const Subquotient& dst, const Matrix& F) {
  const Ring W = work_ring(dst.ring);
  Matrix rel = dst.relations();
  Matrix num = hstack(F.cols() ? F : Matrix(W, dst.size(), 0), rel);
  return make_subquotient(dst.ring, dst.size(), num, rel);
}

// numerator columns of an image subquotient, without the relations
Matrix image_cols(const Subquotient& dst, const Matrix& F) {
  return F.cols() ? F : Matrix(work_ring(dst.ring), dst.size(), 0);
}

void check_shapes(const std::vector<Subquotient>& st, const std::vector<Matrix>& maps, bool direct) {
  if (maps.size() + 1 != st.size() && !(st.empty() && maps.empty()))
    throw MathError("InconsistentTransitions", "need one transition per consecutive pair of stages");
  for (size_t k = 0; k < maps.size(); ++k) {
    const Subquotient& src = direct ? st[k] : st[k + 1];
    const Subquotient& dst = direct ? st[k + 1] : st[k];
    const Matrix& F = maps[k];
    if (src.size() == 0 || dst.size() == 0) continue;
    if (F.rows() != dst.size() || F.cols() != src.size())
      throw MathError("InconsistentTransitions", "transition " + std::to_string(k + 1) + " has the wrong shape");
  }
}

Matrix compose_direct(const DirectSystem& sys, size_t from, size_t to) {
  const Ring W = work_ring(sys.stages[from].ring);
  Matrix C = Matrix::identity(W, sys.stages[from].size());
  for (size_t j = from; j < to; ++j) {
    if (sys.stages[j + 1].size() == 0 || C.cols() == 0) return Matrix(W, sys.stages[to].size(), sys.stages[from].size());
    C = sys.maps[j] * C;
  }
  return C;
}

Matrix compose_inverse(const InverseSystem& sys, size_t from, size_t to) {
  const Ring W = work_ring(sys.stages[from].ring);
  Matrix C = Matrix::identity(W, sys.stages[from].size());
  for (size_t j = from; j > to; --j) {
    if (sys.stages[j - 1].size() == 0 || C.cols() == 0) return Matrix(W, sys.stages[to].size(), sys.stages[from].size());
    C = sys.maps[j - 1] * C;
  }
  return C;
}

struct Growth {
  bool ok = true;
  std::map<Int, std::vector<unsigned>> stable;
  std::map<Int, size_t> growing;
};

// aligns descending p-exponent lists of three consecutive values
Growth torsion_growth(const CanonicalFG& a, const CanonicalFG& b, const CanonicalFG& c) {
  Growth g;
  auto ea = prime_powers(a), eb = prime_powers(b), ec = prime_powers(c);
  std::set<Int> primes;
  for (auto* e : {&ea, &eb, &ec})
    for (const auto& kv : *e) primes.insert(kv.first);
  for (const Int& p : primes) {
    auto A = ea[p], B = eb[p], C = ec[p];
    size_t L = std::max({A.size(), B.size(), C.size()});
    A.resize(L, 0), B.resize(L, 0), C.resize(L, 0);
    for (size_t i = 0; i < L; ++i) {
      if (A[i] == B[i] && B[i] == C[i]) {
        if (C[i]) g.stable[p].push_back(C[i]);
      } else if (A[i] < B[i] && B[i] < C[i]) {
        ++g.growing[p];
      } else {
        g.ok = false;
      }
    }
  }
  return g;
}

std::vector<Int> factor_primes(const CanonicalFG& c, size_t& nonunits) {
  std::set<Int> ps;
  nonunits = c.factors.size();
  for (const auto& d : c.factors)
    for (const auto& kv : factorize(d.a)) ps.insert(kv.first);
  return {ps.begin(), ps.end()};
}

}  // namespace

std::string DirectSystem::dump() const { return dump_stages(stages); }
std::string InverseSystem::dump() const { return dump_stages(stages); }

DirectSystem direct_system(const std::vector<NComplex>& X, const std::vector<ChainMap>& f, int n, int t) {
  DirectSystem sys;
  for (const auto& C : X) sys.stages.push_back(cohomology_sq(C, n, t));
  for (size_t k = 0; k < f.size(); ++k)
    sys.maps.push_back(induced_map(f[k], n, t, sys.stages[k], sys.stages[k + 1]));
  return sys;
}

InverseSystem inverse_system(const std::vector<NComplex>& X, const std::vector<ChainMap>& f, int n, int t) {
  InverseSystem sys;
  for (const auto& C : X) sys.stages.push_back(cohomology_sq(C, n, t));
  for (size_t k = 0; k < f.size(); ++k)
    sys.maps.push_back(induced_map(f[k], n, t, sys.stages[k + 1], sys.stages[k]));
  return sys;
}

namespace {

// vectors of H_k (reduced coordinates) sent to zero by F : H_k -> H_T
Matrix kernel_cols(const Subquotient& src, const Subquotient& dst, const Matrix& F) {
  const Ring W = work_ring(src.ring);
  if (src.size() == 0) return Matrix(W, 0, 0);
  if (dst.size() == 0) return Matrix::identity(W, src.size());
  Matrix K = kernel_basis(hstack(F, dst.relations()));
  return K.block(0, 0, src.size(), K.cols());
}

bool same_span(const Subquotient& H, const Matrix& small, const Matrix& big) {
  if (H.size() == 0) return true;
  Matrix rel = H.relations();
  return make_subquotient(H.ring, H.size(), hstack(image_cols(H, big), rel), hstack(image_cols(H, small), rel))
      .cls.is_zero();
}

// Stages k < T whose kernel towards the top has settled: ker(H_k -> H_{T-1}) = ker(H_k -> H_T).
// Classes that die late stay out, so the images compared below are honest.
std::vector<size_t> settled_stages(const DirectSystem& sys) {
  const size_t T = sys.stages.size() - 1;
  std::vector<size_t> out;
  for (size_t k = 0; k < T; ++k) {
    const Subquotient& H = sys.stages[k];
    Matrix kT = kernel_cols(H, sys.stages[T], compose_direct(sys, k, T));
    Matrix kP = kernel_cols(H, sys.stages[T - 1], compose_direct(sys, k, T - 1));
    if (same_span(H, kP, kT)) out.push_back(k);
  }
  return out;
}

// Levels k < T-1 where Mittag-Leffler is visible: im(H_T -> H_k) = im(H_{T-1} -> H_k).
std::vector<size_t> settled_levels(const InverseSystem& sys) {
  const size_t T = sys.stages.size() - 1;
  std::vector<size_t> out;
  for (size_t k = 0; k + 1 < T; ++k) {
    const Subquotient& H = sys.stages[k];
    if (same_span(H, compose_inverse(sys, T, k), compose_inverse(sys, T - 1, k))) out.push_back(k);
  }
  return out;
}

}  // namespace

std::optional<Subquotient> realize_colimit(const DirectSystem& sys) {
  check_shapes(sys.stages, sys.maps, true);
  if (sys.stages.size() < 3) return std::nullopt;
  const size_t T = sys.stages.size() - 1;
  auto E = settled_stages(sys);
  if (E.size() < 2) return std::nullopt;
  const Subquotient& top = sys.stages[T];
  Matrix lo = compose_direct(sys, E[E.size() - 2], T), hi = compose_direct(sys, E.back(), T);
  if (!same_span(top, lo, hi)) return std::nullopt;
  return image_in(top, hi);
}

std::optional<Subquotient> realize_limit(const InverseSystem& sys, size_t level) {
  check_shapes(sys.stages, sys.maps, false);
  const size_t T = sys.stages.size() - 1;
  if (level + 2 > T) return std::nullopt;
  for (size_t k : {level, level + 1}) {
    const Subquotient& H = sys.stages[k];
    if (!same_span(H, compose_inverse(sys, T, k), compose_inverse(sys, T - 1, k))) return std::nullopt;
  }
  // eventual images at level+1 and level must be isomorphic under the transition
  Subquotient up = image_in(sys.stages[level + 1], compose_inverse(sys, T, level + 1));
  Subquotient at = image_in(sys.stages[level], compose_inverse(sys, T, level));
  if (up.size() == 0 && at.size() == 0) return at;
  Matrix F = at.coords(sys.maps[level] * up.gens);
  if (!analyze_map(up, at, F).iso()) return std::nullopt;
  return at;
}

CanonicalModule classify_colimit(const DirectSystem& sys) {
  check_shapes(sys.stages, sys.maps, true);
  CanonicalModule out;
  if (sys.stages.size() < 4) {
    out.opaque = "need at least 4 stages: " + sys.dump();
    return out;
  }
  const size_t T = sys.stages.size() - 1;
  const Subquotient& top = sys.stages[T];
  const Ring& R = top.ring;
  if (top.size() == 0) {
    out.fg = CanonicalFG{R, 0, {}};
    return out;
  }
  Matrix rel = top.relations();
  auto E = settled_stages(sys);
  if (E.size() < 3) {
    out.opaque = "kernels never settle: " + sys.dump();
    return out;
  }
  const size_t a = E[E.size() - 3], b = E[E.size() - 2], c = E.back();
  Matrix Ca = image_cols(top, compose_direct(sys, a, T)), Cb = image_cols(top, compose_direct(sys, b, T)),
         Cc = image_cols(top, compose_direct(sys, c, T));
  Matrix na = hstack(Ca, rel), nb = hstack(Cb, rel), nc = hstack(Cc, rel);
  CanonicalFG ca = make_subquotient(R, top.size(), na, rel).cls;
  CanonicalFG cb = make_subquotient(R, top.size(), nb, rel).cls;
  CanonicalFG cc = make_subquotient(R, top.size(), nc, rel).cls;
  bool q1 = make_subquotient(R, top.size(), nb, na).cls.is_zero();
  bool q2 = make_subquotient(R, top.size(), nc, nb).cls.is_zero();
  if (q1 && q2) {
    out.fg = cc;
    return out;
  }
  if (!integer_like(R)) {
    out.opaque = "growth over " + R.name() + ": " + sys.dump();
    return out;
  }

  // free part: lattice spanned by the images on the free coordinates of the top stage
  const size_t t0 = top.diag.size(), nf = top.size() - t0;
  size_t k_loc = 0;
  std::vector<Int> loc_primes;
  if (nf) {
    auto free_rows = [&](const Matrix& M) { return M.block(t0, 0, nf, M.cols()); };
    CanonicalFG g1 = make_subquotient(R, nf, free_rows(Cb), free_rows(Ca)).cls;
    CanonicalFG g2 = make_subquotient(R, nf, free_rows(Cc), free_rows(Cb)).cls;
    size_t k1 = 0, k2 = 0;
    auto p1 = factor_primes(g1, k1), p2 = factor_primes(g2, k2);
    if (g1.free_rank || g2.free_rank || k1 != k2 || p1 != p2 || cc.free_rank != ca.free_rank) {
      out.opaque = "irregular free growth: " + sys.dump();
      return out;
    }
    k_loc = k2;
    loc_primes = p2;
  }
  Growth g = torsion_growth(ca, cb, cc);
  if (!g.ok) {
    out.opaque = "irregular torsion growth: " + sys.dump();
    return out;
  }
  out.fg = from_prime_powers(R, cc.free_rank - k_loc, g.stable);
  out.pruefer = g.growing;
  if (k_loc) out.localized[loc_primes] = k_loc;
  return out;
}

CanonicalModule classify_limit(const InverseSystem& sys) {
  check_shapes(sys.stages, sys.maps, false);
  CanonicalModule out;
  if (sys.stages.size() < 6) {
    out.opaque = "need at least 6 stages: " + sys.dump();
    return out;
  }
  const size_t T = sys.stages.size() - 1;
  auto E = settled_levels(sys);
  if (E.size() < 3) {
    out.opaque = "Mittag-Leffler not visible: " + sys.dump();
    return out;
  }
  const Ring& R = sys.stages[0].ring;
  CanonicalFG cls[3];
  const size_t idx[3] = {E[E.size() - 3], E[E.size() - 2], E.back()};
  for (int i = 0; i < 3; ++i) {
    const Subquotient& H = sys.stages[idx[i]];
    if (H.size() == 0) {
      cls[i] = CanonicalFG{R, 0, {}};
      continue;
    }
    Matrix rel = H.relations();
    Matrix from_top = hstack(image_cols(H, compose_inverse(sys, T, idx[i])), rel);
    cls[i] = make_subquotient(R, H.size(), from_top, rel).cls;
  }
  if (cls[0] == cls[1] && cls[1] == cls[2]) {
    out.fg = cls[2];
    return out;
  }
  if (!integer_like(R) || cls[0].free_rank != cls[2].free_rank || cls[1].free_rank != cls[2].free_rank) {
    out.opaque = "irregular tower: " + sys.dump();
    return out;
  }
  Growth g = torsion_growth(cls[0], cls[1], cls[2]);
  if (!g.ok) {
    out.opaque = "irregular torsion growth: " + sys.dump();
    return out;
  }
  out.fg = from_prime_powers(R, cls[2].free_rank, g.stable);
  out.adic = g.growing;
  return out;
}

}  // namespace ncx
