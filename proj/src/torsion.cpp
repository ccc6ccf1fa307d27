#include "ncx/torsion.hpp"

#include <algorithm>
#include <sstream>

namespace ncx {

namespace {

CanonicalModule zero_of(const Ring& R) { return CanonicalModule::finite(CanonicalFG{R, 0, {}}); }

// generators of (0 :_M a^s) as columns in M's generator coordinates
Matrix kill_set(const FPModule& M, const IdealSpec& a, unsigned s) {
  const Ring& R = M.ring;
  const Ring W = work_ring(R);
  const size_t g = M.gens, d = a.x.size();
  Matrix rel = M.work_rel();
  const size_t k = rel.cols();
  Matrix A(W, d * g, g + d * k);
  for (size_t i = 0; i < d; ++i) {
    Elem c = R.pow(a.x[i], s);
    if (R.kind() == RingKind::IntegersMod) c = W.from_int(c.a);
    A.set_block(i * g, 0, Matrix::scalar(W, g, c));
    if (k) A.set_block(i * g, g + i * k, rel);
  }
  Matrix K = kernel_basis(A);
  return K.block(0, 0, g, K.cols());
}

std::pair<int, int> degree_window(const std::vector<NComplex>& st) {
  int lo = 0, hi = -1;
  bool any = false;
  for (const auto& X : st) {
    if (X.empty()) continue;
    lo = any ? std::min(lo, X.lo()) : X.lo();
    hi = any ? std::max(hi, X.hi()) : X.hi();
    any = true;
  }
  return {lo, hi};
}

Tower make_tower(std::vector<NComplex> st, std::vector<ChainMap> mp, bool direct) {
  Tower T;
  T.stage = std::move(st);
  T.map = std::move(mp);
  T.direct = direct;
  return T;
}

NComplex cocone_power(const IdealSpec& a, const NComplex& X, unsigned u) {
  NComplex Y = X;
  for (const auto& xi : a.x) Y = cocone(multiplication(Y, a.ring.pow(xi, u)));
  return Y;
}

NComplex cone_power(const IdealSpec& a, const NComplex& X, unsigned s) {
  NComplex Y = X;
  for (const auto& xi : a.x) Y = cone(multiplication(Y, a.ring.pow(xi, s)));
  return Y;
}

// Hom(K(x^u), X) -> Hom(K(x^{u+1}), X') from phi : X -> X'
ChainMap cocone_step(const IdealSpec& a, const ChainMap& phi, unsigned u) {
  ChainMap cur = phi;
  NComplex A = phi.source(), B = phi.target();
  for (const auto& xi : a.x) {
    ChainMap f = multiplication(A, a.ring.pow(xi, u)), g = multiplication(B, a.ring.pow(xi, u + 1));
    cur = cocone_map(f, g, cur, cur.scaled(xi));
    A = cocone(f);
    B = cocone(g);
  }
  return cur;
}

// K(x^{s+1}) (x) X -> K(x^s) (x) X' from psi : X -> X'
ChainMap cone_step(const IdealSpec& a, const ChainMap& psi, unsigned s) {
  ChainMap cur = psi;
  NComplex A = psi.source(), B = psi.target();
  for (const auto& xi : a.x) {
    ChainMap f = multiplication(A, a.ring.pow(xi, s + 1)), g = multiplication(B, a.ring.pow(xi, s));
    cur = cone_map(f, g, cur.scaled(xi), cur);
    A = cone(f);
    B = cone(g);
  }
  return cur;
}

// same power on both sides: K(x^s) (x) phi, or Hom(K(x^u), phi)
ChainMap cone_same(const IdealSpec& a, const ChainMap& phi, unsigned s) {
  ChainMap cur = phi;
  NComplex A = phi.source(), B = phi.target();
  for (const auto& xi : a.x) {
    ChainMap f = multiplication(A, a.ring.pow(xi, s)), g = multiplication(B, a.ring.pow(xi, s));
    cur = cone_map(f, g, cur, cur);
    A = cone(f);
    B = cone(g);
  }
  return cur;
}

ChainMap cocone_same(const IdealSpec& a, const ChainMap& phi, unsigned u) {
  ChainMap cur = phi;
  NComplex A = phi.source(), B = phi.target();
  for (const auto& xi : a.x) {
    ChainMap f = multiplication(A, a.ring.pow(xi, u)), g = multiplication(B, a.ring.pow(xi, u));
    cur = cocone_map(f, g, cur, cur);
    A = cocone(f);
    B = cocone(g);
  }
  return cur;
}

}  // namespace

TorsionSubmodule torsion_submodule(const FPModule& M, const IdealSpec& a) {
  if (a.x.empty()) throw MathError("InvalidArgument", "empty generator list");
  const Ring& R = M.ring;
  Matrix rel = M.work_rel();
  auto numerator = [&](const Matrix& K) { return rel.cols() ? hstack(K, rel) : K; };
  Matrix prev = kill_set(M, a, 1);
  for (unsigned s = 1; s <= 64; ++s) {
    Matrix next = kill_set(M, a, s + 1);
    if (LinearSolver(numerator(prev)).in_span(next)) {
      Subquotient q = make_subquotient(R, M.gens, numerator(prev), rel);
      return {q.cls, q.gens, s};
    }
    prev = next;
  }
  throw MathError("Unstable", "torsion submodule did not stabilise by s = 64");
}

std::map<Slot, CanonicalModule> local_cohomology_table(const IdealSpec& a, const FPModule& M, unsigned S) {
  if (M.ring != a.ring) throw MathError("RingMismatch", "module and ideal live over different rings");
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (unsigned s = 1; s <= S; ++s) st.push_back(module_hom_into(koszul_ring(a.power(s)), M));
  for (unsigned s = 1; s < S; ++s) mp.push_back(module_hom_into_map(koszul_ladder(a, s), M));
  return classify_tower(make_tower(st, mp, true));
}

CanonicalModule local_cohomology(const IdealSpec& a, const FPModule& M, int i, int t, unsigned S) {
  auto tab = local_cohomology_table(a, M, S);
  auto it = tab.find({i, t});
  return it == tab.end() ? zero_of(M.ring) : it->second;
}

Tower constant_tower(const NComplex& X, unsigned S, bool direct) {
  std::vector<NComplex> st(S, X);
  std::vector<ChainMap> mp(S ? S - 1 : 0, ChainMap::identity(X));
  return make_tower(st, mp, direct);
}

Tower rgamma_tower(const IdealSpec& a, const Tower& base) {
  if (!base.direct) throw MathError("InvalidArgument", "derived torsion needs a direct tower");
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (size_t k = 0; k < base.stage.size(); ++k) st.push_back(cocone_power(a, base.stage[k], k + 1));
  for (size_t k = 0; k < base.map.size(); ++k) mp.push_back(cocone_step(a, base.map[k], k + 1));
  return make_tower(st, mp, true);
}

Tower lambda_tower(const IdealSpec& a, const Tower& base) {
  if (base.direct) throw MathError("InvalidArgument", "derived completion needs an inverse tower");
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (size_t k = 0; k < base.stage.size(); ++k) st.push_back(cone_power(a, base.stage[k], k + 1));
  for (size_t k = 0; k < base.map.size(); ++k) mp.push_back(cone_step(a, base.map[k], k + 1));
  return make_tower(st, mp, false);
}

std::map<Slot, CanonicalModule> classify_tower(const Tower& T) {
  std::map<Slot, CanonicalModule> out;
  if (T.stage.empty()) return out;
  auto [lo, hi] = degree_window(T.stage);
  const int N = T.stage[0].N();
  for (int n = lo; n <= hi; ++n)
    for (int t = 1; t < N; ++t)
      out[{n, t}] = T.direct ? classify_colimit(direct_system(T.stage, T.map, n, t))
                             : classify_limit(inverse_system(T.stage, T.map, n, t));
  return out;
}

std::map<Slot, CanonicalModule> rgamma_table(const IdealSpec& a, const NComplex& X, unsigned S) {
  return classify_tower(rgamma_tower(a, constant_tower(X, S, true)));
}

std::map<Slot, CanonicalModule> lambda_table(const IdealSpec& a, const NComplex& X, unsigned S) {
  return classify_tower(lambda_tower(a, constant_tower(X, S, false)));
}

CanonicalModule gamma_divisible(const DivisibleModule& D, const Int& p) {
  if (factorize(p).size() != 1 || factorize(p).begin()->second != 1)
    throw MathError("InvalidArgument", "gamma_divisible expects a prime");
  CanonicalModule out = zero_of(Ring::integers());
  // Q is torsion-free; the p-power torsion of Q/Z is Z[1/p]/Z; Pruefer(l) has none for l != p
  size_t k = D.q_mod_z;
  auto it = D.pruefer.find(p);
  if (it != D.pruefer.end()) k += it->second;
  if (k) out.pruefer[p] = k;
  return out;
}

std::map<Slot, CanonicalModule> replay_local_cohomology(const Int& d, const Int& p, int N, unsigned S) {
  if (d < 0) throw MathError("InvalidArgument", "d must be nonnegative");
  const Ring Z = Ring::integers();
  DivisibleModule I0 = d == 0 ? DivisibleModule{1, 0, {}} : DivisibleModule{0, 1, {}};
  DivisibleModule I1{0, 1, {}};
  const size_t m0 = gamma_divisible(I0, p).pruefer.count(p) ? gamma_divisible(I0, p).pruefer.at(p) : 0;
  const size_t m1 = gamma_divisible(I1, p).pruefer.at(p);
  // Pruefer(p) at stage k is Z/p^k with x/p^k <-> x; the map Q/dZ -> Q/Z sends d*x/p^k to d*x/p^k
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (unsigned k = 1; k <= S; ++k) {
    Int pk;
    mpz_pow_ui(pk.get_mpz_t(), p.get_mpz_t(), k);
    FPModule cyc = FPModule::cyclic(Z, Z.from_int(pk));
    FPModule A = FPModule::free(Z, 0), B = FPModule::free(Z, 0);
    for (size_t i = 0; i < m0; ++i) A = direct_sum(A, cyc);
    for (size_t i = 0; i < m1; ++i) B = direct_sum(B, cyc);
    std::vector<FPModule> mods{A};
    for (int j = 1; j < N; ++j) mods.push_back(B);
    Matrix d0(Z, B.gens, A.gens);
    for (size_t i = 0; i < std::min(A.gens, B.gens); ++i) d0(i, i) = Z.from_int(d);
    std::vector<Matrix> diffs{d0};
    for (int j = 1; j + 1 < N; ++j) diffs.push_back(Matrix::identity(Z, B.gens));
    st.emplace_back(N, Z, 0, mods, diffs);
  }
  for (unsigned k = 0; k + 1 < S; ++k) {
    ChainMap f(st[k], st[k + 1]);
    for (int n = 0; n < N; ++n) f.set(n, Matrix::scalar(Z, st[k].gens(n), Z.from_int(p)));
    mp.push_back(f);
  }
  return classify_tower(make_tower(st, mp, true));
}

CanonicalModule adic_completion(const FPModule& M, const IdealSpec& a, unsigned S) {
  InverseSystem sys;
  const Ring& R = M.ring;
  for (unsigned s = 1; s <= S; ++s) {
    Matrix rel = M.rel.cols() ? M.rel : Matrix(R, M.gens, 0);
    for (const auto& xi : a.x) rel = hstack(rel, Matrix::scalar(R, M.gens, R.pow(xi, s)));
    sys.stages.push_back(module_subquotient(FPModule(R, M.gens, rel)));
  }
  for (unsigned s = 0; s + 1 < S; ++s) {
    const Subquotient &src = sys.stages[s + 1], &dst = sys.stages[s];
    sys.maps.push_back(src.size() && dst.size() ? dst.coords(src.gens) : Matrix(work_ring(R), dst.size(), src.size()));
  }
  return classify_limit(sys);
}

std::map<Slot, CanonicalModule> derived_completion_table(const IdealSpec& a, const FPModule& M, unsigned S) {
  if (M.ring != a.ring) throw MathError("RingMismatch", "module and ideal live over different rings");
  const Ring& R = M.ring;
  NComplex P = resolve_module(M, a.N).P;
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (unsigned s = 1; s <= S; ++s) {
    Matrix rel(R, 1, a.x.size());
    for (size_t i = 0; i < a.x.size(); ++i) rel(0, i) = R.pow(a.x[i], s);
    st.push_back(module_tensor(P, FPModule(R, 1, rel)));
  }
  for (unsigned s = 0; s + 1 < S; ++s) {
    ChainMap f(st[s + 1], st[s]);
    for (int n = st[s].lo(); n <= st[s].hi(); ++n) f.set(n, Matrix::identity(R, st[s].gens(n)));
    mp.push_back(f);
  }
  return classify_tower(make_tower(st, mp, false));
}

CanonicalModule derived_completion(const IdealSpec& a, const FPModule& M, int i, int t, unsigned S) {
  auto tab = derived_completion_table(a, M, S);
  auto it = tab.find({i, t});
  return it == tab.end() ? zero_of(M.ring) : it->second;
}

std::map<Slot, CanonicalModule> telescope_completion_table(const IdealSpec& a, const FPModule& M, unsigned S) {
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (unsigned s = 1; s <= S; ++s) st.push_back(module_hom_into(telescope(a, s), M));
  for (unsigned s = 1; s < S; ++s) mp.push_back(module_hom_into_map(telescope_inclusion(a, s), M));
  return classify_tower(make_tower(st, mp, false));
}

namespace {

// lim over s of colim over u of H(K(x^s) (x) Hom(K(x^u), X)). For fixed s the colimit is
// realised inside the top u-stage, so RG should carry a few more stages than S.
std::map<Slot, CanonicalModule> lambda_after_rgamma(const IdealSpec& a, const Tower& RG, unsigned S) {
  const size_t U = RG.stage.size();
  std::vector<std::vector<NComplex>> G(S);   // G[s][u]
  std::vector<std::vector<ChainMap>> Gu(S);  // direct maps in u
  std::vector<ChainMap> Gs;                  // inverse maps in s at u = U
  for (unsigned s = 0; s < S; ++s) {
    for (size_t u = 0; u < U; ++u) G[s].push_back(cone_power(a, RG.stage[u], s + 1));
    for (size_t u = 0; u + 1 < U; ++u) Gu[s].push_back(cone_same(a, RG.map[u], s + 1));
  }
  for (unsigned s = 0; s + 1 < S; ++s) Gs.push_back(cone_step(a, ChainMap::identity(RG.stage[U - 1]), s + 1));
  std::vector<NComplex> all;
  for (const auto& row : G) all.insert(all.end(), row.begin(), row.end());
  auto [lo, hi] = degree_window(all);
  std::map<Slot, CanonicalModule> out;
  for (int n = lo; n <= hi; ++n)
    for (int t = 1; t < a.N; ++t) {
      InverseSystem inv;
      std::vector<DirectSystem> rows;
      std::string bad;
      for (unsigned s = 0; s < S && bad.empty(); ++s) {
        rows.push_back(direct_system(G[s], Gu[s], n, t));
        auto c = realize_colimit(rows.back());
        if (c)
          inv.stages.push_back(*c);
        else
          bad = "inner colimit not stable at s=" + std::to_string(s + 1) + ": " + rows.back().dump();
      }
      if (!bad.empty()) {
        CanonicalModule m;
        m.opaque = bad;
        out[{n, t}] = m;
        continue;
      }
      for (unsigned s = 0; s + 1 < S; ++s) {
        const Subquotient &A = inv.stages[s + 1], &B = inv.stages[s];
        if (A.size() == 0 || B.size() == 0) {
          inv.maps.push_back(Matrix(work_ring(a.ring), B.size(), A.size()));
          continue;
        }
        Matrix F = induced_map(Gs[s], n, t, rows[s + 1].stages.back(), rows[s].stages.back());
        inv.maps.push_back(B.coords(F * A.gens));
      }
      out[{n, t}] = classify_limit(inv);
    }
  return out;
}

// colim over u of lim over s of H(Hom(K(x^u), K(x^s) (x) X)). For fixed u the limit is the
// eventual image at level s = U+1, read against a window of U+4 further stages so classes
// that die slowly in s are gone; the u-maps preserve it.
std::map<Slot, CanonicalModule> rgamma_after_lambda(const IdealSpec& a, const NComplex& X, unsigned U) {
  const unsigned k0 = U, Ss = 2 * U + 4;
  Tower LL = lambda_tower(a, constant_tower(X, Ss, false));
  std::vector<std::vector<NComplex>> G(U);   // G[u][s - k0]
  std::vector<std::vector<ChainMap>> Gs(U);  // inverse maps in s
  std::vector<ChainMap> Gu;                  // direct maps in u at level k0
  for (unsigned u = 0; u < U; ++u)
    for (unsigned s = k0; s < Ss; ++s) {
      G[u].push_back(cocone_power(a, LL.stage[s], u + 1));
      if (s + 1 < Ss) Gs[u].push_back(cocone_same(a, LL.map[s], u + 1));
    }
  for (unsigned u = 0; u + 1 < U; ++u) Gu.push_back(cocone_step(a, ChainMap::identity(LL.stage[k0]), u + 1));
  std::vector<NComplex> all;
  for (const auto& row : G) all.insert(all.end(), row.begin(), row.end());
  auto [lo, hi] = degree_window(all);
  std::map<Slot, CanonicalModule> out;
  for (int n = lo; n <= hi; ++n)
    for (int t = 1; t < a.N; ++t) {
      DirectSystem dir;
      std::vector<Subquotient> level;
      std::string bad;
      for (unsigned u = 0; u < U && bad.empty(); ++u) {
        InverseSystem col = inverse_system(G[u], Gs[u], n, t);
        auto e = realize_limit(col, 0);
        if (e) {
          dir.stages.push_back(*e);
          level.push_back(col.stages[0]);
        } else {
          bad = "inner limit not stable at u=" + std::to_string(u + 1) + ": " + col.dump();
        }
      }
      if (!bad.empty()) {
        CanonicalModule m;
        m.opaque = bad;
        out[{n, t}] = m;
        continue;
      }
      for (unsigned u = 0; u + 1 < U; ++u) {
        const Subquotient &A = dir.stages[u], &B = dir.stages[u + 1];
        if (A.size() == 0 || B.size() == 0) {
          dir.maps.push_back(Matrix(work_ring(a.ring), B.size(), A.size()));
          continue;
        }
        Matrix F = induced_map(Gu[u], n, t, level[u], level[u + 1]);
        dir.maps.push_back(B.coords(F * A.gens));
      }
      out[{n, t}] = classify_colimit(dir);
    }
  return out;
}

MgmComparison compare(const std::string& name, const std::map<Slot, CanonicalModule>& lhs,
                      const std::map<Slot, CanonicalModule>& rhs, const Ring& R) {
  MgmComparison c;
  c.name = name;
  std::map<Slot, bool> keys;
  for (const auto& kv : lhs) keys[kv.first] = true;
  for (const auto& kv : rhs) keys[kv.first] = true;
  for (const auto& [k, _] : keys) {
    MgmSlot s;
    s.slot = k;
    s.lhs = lhs.count(k) ? lhs.at(k) : zero_of(R);
    s.rhs = rhs.count(k) ? rhs.at(k) : zero_of(R);
    s.equal = (s.lhs.is_zero() && s.rhs.is_zero()) || s.lhs == s.rhs;
    c.pass = c.pass && s.equal;
    c.slots.push_back(s);
  }
  return c;
}

}  // namespace

MgmReport mgm_report(const IdealSpec& a, const FPModule& M, unsigned S) {
  if (S < 6) throw MathError("InvalidArgument", "the MGM report needs at least 6 stages");
  const Ring& R = M.ring;
  NComplex X = disk(a.N, M, 0, 1);
  Tower RG = rgamma_tower(a, constant_tower(X, S, true));
  Tower LL = lambda_tower(a, constant_tower(X, S, false));
  auto rg = classify_tower(RG), ll = classify_tower(LL);
  MgmReport rep;
  rep.comparisons.push_back(compare("RG(RG X) = RG X", classify_tower(rgamma_tower(a, RG)), rg, R));
  rep.comparisons.push_back(compare("LL(LL X) = LL X", classify_tower(lambda_tower(a, LL)), ll, R));
  // classes on the summands inverting several generators take about d times longer to die
  const unsigned U = static_cast<unsigned>(a.x.size()) * S + 4;
  Tower RGlong = rgamma_tower(a, constant_tower(X, U, true));
  rep.comparisons.push_back(compare("LL(RG X) = LL X", lambda_after_rgamma(a, RGlong, S), ll, R));
  rep.comparisons.push_back(compare("RG(LL X) = RG X", rgamma_after_lambda(a, X, S), rg, R));
  for (const auto& c : rep.comparisons) rep.pass = rep.pass && c.pass;
  return rep;
}

std::string show(const std::optional<int>& v) { return v ? std::to_string(*v) : "none"; }

namespace {

template <class Table>
std::optional<int> extreme(const Table& tab, int t, bool lowest) {
  std::optional<int> best;
  for (const auto& [slot, v] : tab) {
    if (slot.second != t || v.is_zero()) continue;
    if (!best || (lowest ? slot.first < *best : slot.first > *best)) best = slot.first;
  }
  return best;
}

}  // namespace

InvariantsReport invariants(const IdealSpec& a, const FPModule& M, unsigned S) {
  const Ring& R = M.ring;
  Matrix gen(R, 1, a.x.size());
  for (size_t i = 0; i < a.x.size(); ++i) gen(0, i) = a.x[i];
  NComplex Pa = resolve_module(FPModule(R, 1, gen), a.N).P;
  auto rhom = htable(module_hom_into(Pa, M));
  auto local = local_cohomology_table(a, M, S);
  auto khom = htable(module_hom_into(koszul_ring(a), M));
  auto tens = htable(module_tensor(Pa, M));
  auto comp = derived_completion_table(a, M, S);
  auto kten = htable(koszul_on(a, M));
  InvariantsReport rep;
  for (int t = 1; t < a.N; ++t) {
    InvariantRow row;
    row.t = t;
    row.inf_rhom = extreme(rhom, t, true);
    row.inf_local = extreme(local, t, true);
    row.inf_koszul = extreme(khom, t, true);
    row.sup_tensor = extreme(tens, t, false);
    row.sup_completion = extreme(comp, t, false);
    row.sup_koszul = extreme(kten, t, false);
    rep.pass = rep.pass && row.inf_equal() && row.sup_equal();
    rep.rows.push_back(row);
  }
  for (const auto* tab : {&local, &comp})
    for (const auto& kv : *tab)
      if (!kv.second.classified()) throw MathError("Unclassified", "slot could not be classified: " + kv.second.str());
  return rep;
}

PowerLemmaReport power_lemma_check(const IdealSpec& a, const FPModule& M, unsigned max_power) {
  PowerLemmaReport rep;
  auto base = htable(module_hom_into(koszul_ring(a), M));
  for (unsigned s = 2; s <= max_power; ++s) {
    auto tab = htable(module_hom_into(koszul_ring(a.power(s)), M));
    for (const auto& [slot, v] : base) {
      if (!v.is_zero()) continue;
      if (s == 2) ++rep.vanishing_slots;
      auto it = tab.find(slot);
      if (it != tab.end() && !it->second.is_zero()) {
        rep.pass = false;
        std::ostringstream os;
        os << "H^" << slot.first << "_" << slot.second << " vanishes for x but is " << it->second.str() << " at s=" << s;
        rep.failure = os.str();
        return rep;
      }
    }
  }
  return rep;
}

AnnihilationReport hom_annihilation_check(const IdealSpec& a, const FPModule& M) {
  AnnihilationReport rep;
  NComplex H = module_hom_into(koszul_ring(a), M);
  for (int n = H.lo(); n <= H.hi(); ++n)
    for (int t = 1; t < a.N; ++t) {
      Subquotient q = cohomology_sq(H, n, t);
      if (q.size() == 0 || q.cls.is_zero()) continue;
      ++rep.slots;
      for (const auto& xi : a.x) {
        Matrix F = induced_map(multiplication(H, xi), n, t, q, q);
        if (!is_zero_map(q, F)) {
          rep.pass = false;
          rep.failure = "H^" + std::to_string(n) + "_" + std::to_string(t) + " is not killed by " + a.ring.str(xi);
          return rep;
        }
      }
    }
  return rep;
}

}  // namespace ncx
