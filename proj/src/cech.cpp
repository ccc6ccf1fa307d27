#include "ncx/cech.hpp"

#include <sstream>

#include "ncx/torsion.hpp"

namespace ncx {

namespace {

const char* kNames = "xyzw";

std::string gen_name(size_t i) { return i < 4 ? std::string(1, kNames[i]) : "x" + std::to_string(i + 1); }

Elem product_over(const SequenceSpec& s, unsigned m, unsigned power) {
  const Ring& R = s.ring;
  Elem c = R.one();
  for (size_t i = 0; i < s.x.size(); ++i)
    if (m & (1u << i)) c = R.mul(c, R.pow(s.x[i], power));
  return c;
}

void need_single(const SequenceSpec& s, const char* what) {
  if (s.x.size() != 1) throw MathError("InvalidArgument", std::string(what) + " is built for one element");
}

}  // namespace

Ring MixedComplex::piece_ring(unsigned m) const {
  if (m == 0) return spec.ring;
  Elem c = product_over(spec, m, 1);
  if (spec.ring.is_zero(c)) throw MathError("InvalidArgument", "inverting zero gives the zero ring");
  std::vector<Int> primes;
  for (const auto& kv : factorize(c.a)) primes.push_back(kv.first);
  if (primes.empty()) return spec.ring;
  return Ring::localized(primes);
}

std::string MixedComplex::piece_name(unsigned m) const {
  if (m == 0) return "R";
  std::string o = "R_";
  for (size_t i = 0; i < spec.x.size(); ++i)
    if (m & (1u << i)) o += gen_name(i);
  return o;
}

std::vector<std::vector<std::string>> MixedComplex::display(int n) const {
  Matrix D = coeff.d(n);
  const auto& src = mask.count(n) ? mask.at(n) : std::vector<unsigned>{};
  const auto& dst = mask.count(n + 1) ? mask.at(n + 1) : std::vector<unsigned>{};
  std::vector<std::vector<std::string>> out(D.rows(), std::vector<std::string>(D.cols()));
  for (size_t r = 0; r < D.rows(); ++r)
    for (size_t c = 0; c < D.cols(); ++c) {
      const Elem& e = D(r, c);
      if (coeff.ring().is_zero(e)) {
        out[r][c] = "0";
        continue;
      }
      unsigned extra = dst[r] & ~src[c];
      if (extra == 0) {
        out[r][c] = coeff.ring().str(e);
        continue;
      }
      std::string name = "iota_";
      for (size_t i = 0; i < spec.x.size(); ++i)
        if (extra & (1u << i)) name += gen_name(i);
      Elem neg = coeff.ring().neg(coeff.ring().one());
      if (coeff.ring().is_one(e)) out[r][c] = name;
      else if (e == neg) out[r][c] = "-" + name;
      else out[r][c] = coeff.ring().str(e) + "*" + name;
    }
  return out;
}

ValidationReport MixedComplex::validate() const {
  ValidationReport rep = ncx::validate(coeff);
  if (!rep.ok) return rep;
  for (int n = coeff.lo(); n < coeff.hi(); ++n) {
    Matrix D = coeff.d(n);
    for (size_t r = 0; r < D.rows(); ++r)
      for (size_t c = 0; c < D.cols(); ++c) {
        if (coeff.ring().is_zero(D(r, c))) continue;
        unsigned I = mask.at(n)[c], J = mask.at(n + 1)[r];
        if ((I & ~J) != 0) {
          rep.ok = false;
          rep.kind = "localisation";
          rep.degree = n;
          rep.message = "entry runs from " + piece_name(I) + " to " + piece_name(J) + ", which is not a localisation";
          return rep;
        }
      }
  }
  return rep;
}

MixedComplex cech_ring(const SequenceSpec& s) {
  if (s.x.empty()) throw MathError("InvalidArgument", "empty sequence");
  if (s.x.size() > 3) throw MathError("InvalidArgument", "Cech complexes are supported for at most three elements");
  const Ring& R = s.ring;
  MixedComplex C;
  C.spec = s;
  C.coeff = disk(s.N, FPModule::free(R, 1), 0, 1);
  C.mask[0] = {0};
  for (size_t i = 0; i < s.x.size(); ++i) {
    const NComplex prev = C.coeff;
    const auto pm = C.mask;
    C.coeff = cocone(ChainMap::identity(prev));
    C.mask.clear();
    auto at = [&](int n) { return pm.count(n) ? pm.at(n) : std::vector<unsigned>{}; };
    for (int n = C.coeff.lo(); n <= C.coeff.hi(); ++n) {
      std::vector<unsigned> v = at(n);
      for (int c = 1; c < s.N; ++c)
        for (unsigned m : at(n - c)) v.push_back(m | (1u << i));
      C.mask[n] = v;
    }
  }
  return C;
}

namespace {

// M / Gamma_{x_I}(M) for every mask that occurs
std::map<unsigned, FPModule> piece_modules(const MixedComplex& C, const FPModule& M) {
  std::map<unsigned, FPModule> out;
  for (const auto& [n, v] : C.mask)
    for (unsigned m : v) {
      if (out.count(m)) continue;
      if (m == 0) {
        out[m] = M;
        continue;
      }
      SequenceSpec one{M.ring, {product_over(C.spec, m, 1)}, C.spec.N};
      TorsionSubmodule g = torsion_submodule(M, one);
      Matrix rel = M.rel.cols() ? hstack(M.rel, g.sigma.over(M.ring)) : g.sigma.over(M.ring);
      out[m] = FPModule(M.ring, M.gens, rel);
    }
  return out;
}

std::vector<FPModule> stage_comps(const MixedComplex& C, const std::map<unsigned, FPModule>& pieces, int n) {
  std::vector<FPModule> v;
  if (!C.mask.count(n)) return v;
  for (unsigned m : C.mask.at(n)) v.push_back(pieces.at(m));
  return v;
}

NComplex stage_with(const MixedComplex& C, const std::map<unsigned, FPModule>& pieces, const FPModule& M,
                    unsigned s) {
  const Ring& R = M.ring;
  auto comps = [&](int n) { return stage_comps(C, pieces, n); };
  auto block = [&](int n, size_t r, size_t c) -> std::optional<Matrix> {
    const Elem e = C.coeff.d(n)(r, c);
    if (C.coeff.ring().is_zero(e)) return std::nullopt;
    unsigned I = C.mask.at(n)[c], J = C.mask.at(n + 1)[r];
    Elem k = R.mul(R.from_int(e.a), product_over(C.spec, J & ~I, s));
    return Matrix::scalar(R, M.gens, k);
  };
  return assemble(C.spec.N, R, C.coeff.lo(), C.coeff.hi(), comps, block);
}

ChainMap stage_map_with(const MixedComplex& C, const std::map<unsigned, FPModule>& pieces, const NComplex& A,
                        const NComplex& B, const FPModule& M) {
  ChainMap f(A, B);
  for (int n = C.coeff.lo(); n <= C.coeff.hi(); ++n) {
    auto comps = stage_comps(C, pieces, n);
    f.set(n, block_map(M.ring, comps, comps, [&](size_t r, size_t c) -> std::optional<Matrix> {
            if (r != c) return std::nullopt;
            return Matrix::scalar(M.ring, M.gens, product_over(C.spec, C.mask.at(n)[r], 1));
          }));
  }
  return f;
}

}  // namespace

NComplex cech_stage(const MixedComplex& C, const FPModule& M, unsigned s) {
  return stage_with(C, piece_modules(C, M), M, s);
}

ChainMap cech_stage_map(const MixedComplex& C, const FPModule& M, unsigned s) {
  auto pieces = piece_modules(C, M);
  return stage_map_with(C, pieces, stage_with(C, pieces, M, s), stage_with(C, pieces, M, s + 1), M);
}

std::map<Slot, CanonicalModule> cech_table(const SequenceSpec& s, const FPModule& M, unsigned S) {
  if (M.ring != s.ring) throw MathError("RingMismatch", "module and sequence live over different rings");
  MixedComplex C = cech_ring(s);
  auto pieces = piece_modules(C, M);
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (unsigned k = 1; k <= S; ++k) st.push_back(stage_with(C, pieces, M, k));
  for (unsigned k = 0; k + 1 < S; ++k) mp.push_back(stage_map_with(C, pieces, st[k], st[k + 1], M));
  std::map<Slot, CanonicalModule> out;
  for (int n = C.coeff.lo(); n <= C.coeff.hi(); ++n)
    for (int t = 1; t < s.N; ++t) out[{n, t}] = classify_colimit(direct_system(st, mp, n, t));
  return out;
}

CanonicalModule cech_cohomology(const SequenceSpec& s, const FPModule& M, int j, int t, unsigned S) {
  auto tab = cech_table(s, M, S);
  auto it = tab.find({j, t});
  if (it == tab.end()) return CanonicalModule::finite(CanonicalFG{M.ring, 0, {}});
  return it->second;
}

NComplex telescope(const SequenceSpec& s, unsigned stage) {
  need_single(s, "telescope");
  if (stage < 1) throw MathError("InvalidArgument", "telescope stage must be at least 1");
  const Ring& R = s.ring;
  const size_t r = stage + 1;
  Matrix v(R, r, r);
  v(0, 0) = R.one();
  for (size_t i = 1; i < r; ++i) {
    v(i - 1, i) = R.one();
    v(i, i) = R.neg(s.x[0]);
  }
  std::vector<FPModule> mods(s.N, FPModule::free(R, r));
  std::vector<Matrix> diffs{v};
  for (int k = 1; k + 1 < s.N; ++k) diffs.push_back(Matrix::identity(R, r));
  return NComplex(s.N, R, 0, mods, diffs);
}

ChainMap telescope_inclusion(const SequenceSpec& s, unsigned stage) {
  NComplex A = telescope(s, stage), B = telescope(s, stage + 1);
  ChainMap f(A, B);
  Matrix inc(s.ring, stage + 2, stage + 1);
  for (size_t i = 0; i <= stage; ++i) inc(i, i) = s.ring.one();
  for (int n = 0; n < s.N; ++n) f.set(n, inc);
  return f;
}

ChainMap telescope_to_cech(const SequenceSpec& s, unsigned stage) {
  need_single(s, "telescope");
  const Ring& R = s.ring;
  NComplex A = telescope(s, stage);
  NComplex B = cech_stage(cech_ring(s), FPModule::free(R, 1), stage);
  ChainMap w(A, B);
  Matrix w0(R, 1, stage + 1), w1(R, 1, stage + 1);
  w0(0, 0) = R.one();
  for (unsigned i = 0; i <= stage; ++i) w1(0, i) = R.pow(s.x[0], stage - i);
  w.set(0, w0);
  for (int n = 1; n < s.N; ++n) w.set(n, w1);
  return w;
}

std::map<Slot, CanonicalModule> telescope_table(const SequenceSpec& s, unsigned S) {
  std::vector<NComplex> st;
  std::vector<ChainMap> mp;
  for (unsigned k = 1; k <= S; ++k) st.push_back(telescope(s, k));
  for (unsigned k = 1; k < S; ++k) mp.push_back(telescope_inclusion(s, k));
  std::map<Slot, CanonicalModule> out;
  for (int n = 0; n < s.N; ++n)
    for (int t = 1; t < s.N; ++t) out[{n, t}] = classify_colimit(direct_system(st, mp, n, t));
  return out;
}

TelescopeComparison telescope_comparison(const SequenceSpec& s, unsigned S) {
  need_single(s, "telescope");
  TelescopeComparison rep;
  std::ostringstream det;
  for (unsigned k = 1; k <= S; ++k) {
    ChainMap w = telescope_to_cech(s, k);
    rep.chain_map.push_back(validate(w).ok);
    rep.quasi_iso.push_back(rep.chain_map.back() && is_quasi_iso(w).value());
  }
  for (unsigned k = S; k >= 1; --k) {
    if (!rep.quasi_iso[k - 1]) break;
    rep.stable_from = k;
  }
  auto tel = telescope_table(s, S);
  auto cech = cech_table(s, FPModule::free(s.ring, 1), S);
  bool colim_ok = true;
  for (const auto& [slot, v] : tel) {
    CanonicalModule c = cech.count(slot) ? cech.at(slot) : CanonicalModule::finite(CanonicalFG{s.ring, 0, {}});
    rep.colimits[slot] = {v, c};
    if (v != c) {
      colim_ok = false;
      det << "H^" << slot.first << "_" << slot.second << ": telescope " << v.str() << ", cech " << c.str() << "; ";
    }
  }
  bool maps_ok = true;
  for (bool b : rep.chain_map) maps_ok = maps_ok && b;
  rep.pass = maps_ok && rep.stable_from != 0 && colim_ok;
  if (!maps_ok) det << "some w_s is not a chain map; ";
  if (rep.stable_from == 0) det << "w_S is not a quasi-isomorphism; ";
  if (rep.pass) det << "w_s quasi-isomorphism from stage " << rep.stable_from << ", colimits agree";
  rep.detail = det.str();
  return rep;
}

std::string to_string(ProVerdict v) {
  switch (v) {
    case ProVerdict::ProZero: return "pro-zero";
    case ProVerdict::Counterexample: return "counterexample";
    default: return "inconclusive";
  }
}

std::string ProReport::summary() const {
  std::ostringstream os;
  os << to_string(verdict);
  if (verdict == ProVerdict::ProZero) os << " up to " << S;
  if (verdict == ProVerdict::Counterexample && witness_slot)
    os << " at s=" << witness_stage << " (H^" << witness_slot->first << "_" << witness_slot->second << ")";
  return os.str();
}

ProReport proregular_probe(const SequenceSpec& s, unsigned S) {
  if (S < 2) throw MathError("InvalidArgument", "the probe needs at least two stages");
  ProReport rep;
  rep.S = S;
  std::vector<NComplex> K;
  std::vector<ChainMap> L;  // L[k] : K[k+1] -> K[k]
  for (unsigned k = 1; k <= S; ++k) K.push_back(koszul_ring(s.power(k)));
  for (unsigned k = 1; k < S; ++k) {
    L.push_back(koszul_ladder(s, k));
    rep.ladders_commute = rep.ladders_commute && validate(L.back()).ok;
  }
  bool all_die = true;
  for (int i = K[0].lo(); i < 0; ++i)
    for (int t = 1; t < s.N; ++t) {
      InverseSystem sys = inverse_system(K, L, i, t);
      ProSlot slot{i, t, {}};
      for (unsigned k = 0; k < S; ++k) {
        ProStage st;
        st.s = k + 1;
        st.module = sys.stages[k].cls;
        if (k + 1 < S) {
          const Subquotient &src = sys.stages[k + 1], &dst = sys.stages[k];
          if (src.size() == 0 || dst.size() == 0 || is_zero_map(dst, sys.maps[k])) {
            st.transition = "zero";
          } else {
            MapReport m = analyze_map(src, dst, sys.maps[k]);
            st.transition = m.iso()               ? "iso"
                            : m.kernel.is_zero()   ? "injective"
                            : m.cokernel.is_zero() ? "surjective"
                                                   : "other";
          }
        }
        if (sys.stages[k].size() == 0 || st.module.is_zero()) {
          st.dies_by = k + 1;
        } else {
          Matrix C = Matrix::identity(work_ring(s.ring), sys.stages[k].size());
          for (unsigned j = k + 1; j < S; ++j) {
            if (sys.stages[j].size() == 0) {
              st.dies_by = j + 1;
              break;
            }
            C = C * sys.maps[j - 1];
            if (is_zero_map(sys.stages[k], C)) {
              st.dies_by = j + 1;
              break;
            }
          }
        }
        slot.stages.push_back(st);
      }
      for (unsigned k = 0; k + 1 < S; ++k) {
        if (slot.stages[k].dies_by) continue;
        all_die = false;
        bool isos = true;
        for (unsigned j = k; j + 1 < S; ++j) isos = isos && slot.stages[j].transition == "iso";
        if (isos && rep.verdict != ProVerdict::Counterexample) {
          rep.verdict = ProVerdict::Counterexample;
          rep.witness_slot = Slot{i, t};
          rep.witness_stage = k + 1;
        }
      }
      rep.slots.push_back(slot);
    }
  if (all_die) rep.verdict = ProVerdict::ProZero;
  return rep;
}

TableComparison compare_tables(const std::map<Slot, CanonicalModule>& a, const std::map<Slot, CanonicalModule>& b) {
  TableComparison rep;
  std::map<Slot, std::pair<std::string, std::string>> seen;
  auto check = [&](const Slot& k) {
    auto ia = a.find(k), ib = b.find(k);
    bool za = ia == a.end() || ia->second.is_zero(), zb = ib == b.end() || ib->second.is_zero();
    if (za && zb) return;
    if (ia != a.end() && ib != b.end() && ia->second == ib->second) return;
    rep.pass = false;
    rep.mismatches.push_back("H^" + std::to_string(k.first) + "_" + std::to_string(k.second) + ": " +
                             (ia == a.end() ? "0" : ia->second.str()) + " vs " +
                             (ib == b.end() ? "0" : ib->second.str()));
  };
  for (const auto& kv : a) check(kv.first);
  for (const auto& kv : b)
    if (!a.count(kv.first)) check(kv.first);
  return rep;
}

TableComparison cech_self_tensor_check(const SequenceSpec& s, const FPModule& M, unsigned S) {
  need_single(s, "the self-tensor check");
  SequenceSpec twice{s.ring, {s.x[0], s.x[0]}, s.N};
  return compare_tables(cech_table(twice, M, S), cech_table(s, M, S));
}

}  // namespace ncx
