#include "ncx/suites.hpp"

#include <map>

#include "ncx/koszul.hpp"
#include "ncx/qcalc.hpp"

namespace ncx {

BasisChange random_change_of_basis(const Ring& R, std::mt19937& g, size_t n, int steps) {
  BasisChange u{Matrix::identity(R, n), Matrix::identity(R, n)};
  if (n < 2) return u;
  std::uniform_int_distribution<size_t> idx(0, n - 1);
  std::uniform_int_distribution<int> c(-2, 2);
  for (int k = 0; k < steps; ++k) {
    size_t a = idx(g), b = idx(g);
    if (a == b) continue;
    Elem e = R.from_int(c(g));
    u.P.add_row(a, b, e);
    // (I + e E_ab)^{-1} = I - e E_ab, applied on the right
    u.Pinv.add_col(b, a, R.neg(e));
  }
  return u;
}

NComplex random_complex(int N, const Ring& R, std::mt19937& g, int segments, int span, bool torsion) {
  std::uniform_int_distribution<int> coef(-3, 3), len(1, N), start(-span, 0);
  NComplex X(N, R);
  for (int s = 0; s < segments; ++s) {
    int L = len(g), j = start(g);
    FPModule M = FPModule::free(R, 1);
    if (torsion && R.kind() == RingKind::Integers && g() % 3 == 0) M = FPModule::cyclic(R, R.from_int(2 + g() % 4));
    std::vector<FPModule> mods(L, M);
    std::vector<Matrix> diffs;
    for (int k = 0; k + 1 < L; ++k) {
      Matrix d(R, 1, 1);
      d(0, 0) = R.from_int(coef(g));
      diffs.push_back(d);
    }
    X = direct_sum(X, NComplex(N, R, j, mods, diffs));
  }
  if (X.empty()) return X;
  std::map<int, BasisChange> P;
  for (int n = X.lo(); n <= X.hi(); ++n) P.emplace(n, random_change_of_basis(R, g, X.gens(n)));
  std::vector<FPModule> mods;
  std::vector<Matrix> diffs;
  for (int n = X.lo(); n <= X.hi(); ++n) {
    const FPModule& M = X.module(n);
    mods.push_back(FPModule(R, M.gens, P.at(n).P * M.rel));
    if (n < X.hi()) diffs.push_back(P.at(n + 1).P * X.d(n) * P.at(n).Pinv);
  }
  return NComplex(N, R, X.lo(), mods, diffs);
}

namespace {

std::vector<long> random_sequence(std::mt19937& g, size_t d) {
  std::uniform_int_distribution<long> e(-6, 6);
  std::vector<long> xs;
  while (xs.size() < d) {
    long v = e(g);
    if (v) xs.push_back(v);
  }
  return xs;
}

// c times the inclusion X -> X + W
ChainMap random_inclusion(const NComplex& X, std::mt19937& g, bool torsion) {
  const Ring& R = X.ring();
  auto W = random_complex(X.N(), R, g, 1, 2, torsion);
  NComplex Y = direct_sum(X, W);
  ChainMap f(X, Y);
  Elem c = R.from_int(1 + static_cast<long>(g() % 3));
  for (int n = X.lo(); n <= X.hi(); ++n) {
    Matrix m(R, Y.gens(n), X.gens(n));
    for (size_t k = 0; k < X.gens(n); ++k) m(k, k) = c;
    f.set(n, m);
  }
  return f;
}

std::string les_case(std::mt19937& g) {
  const Ring Z = Ring::integers();
  const int N = 3 + static_cast<int>(g() % 2);
  ChainMap f, p;
  switch (g() % 3) {
    case 0: {  // split: X -> X + W -> W
      auto X = random_complex(N, Z, g, 2, 2);
      auto W = random_complex(N, Z, g, 2, 2);
      auto S = direct_sum(X, W);
      f = ChainMap(X, S);
      p = ChainMap(S, W);
      for (int n = S.lo(); n <= S.hi(); ++n) {
        Matrix a(Z, S.gens(n), X.gens(n)), b(Z, W.gens(n), S.gens(n));
        for (size_t k = 0; k < X.gens(n); ++k) a(k, k) = Z.one();
        for (size_t k = 0; k < W.gens(n); ++k) b(k, X.gens(n) + k) = Z.one();
        f.set(n, a);
        p.set(n, b);
      }
      break;
    }
    case 1: {  // Y -> C(c) -> Sigma X for multiplication by c on X
      auto X = random_complex(N, Z, g, 2, 2);
      auto m = multiplication(X, Z.from_int(static_cast<long>(g() % 7) - 3));
      f = cone_inclusion(m);
      p = cone_projection(m);
      break;
    }
    default: {  // Y -> C(u) -> Sigma X for a scaled inclusion u
      auto X = random_complex(N, Z, g, 2, 2);
      auto u = random_inclusion(X, g, true);
      f = cone_inclusion(u);
      p = cone_projection(u);
      break;
    }
  }
  if (!validate(f).ok || !validate(p).ok) return "input maps are not chain maps";
  for (int t = 1; t < N; ++t) {
    auto rep = les_report(f, p, t);
    if (!rep.input_exact) return "input sequence not exact";
    if (!rep.exact) return "N=" + std::to_string(N) + " t=" + std::to_string(t) + ": " + rep.failure;
  }
  return "";
}

struct Ctx {
  Ring R;
  long q;
  int N;
};

std::vector<Ctx> contexts() {
  return {{Ring::prime_field(7, Int(2)), 2, 3}, {Ring::prime_field(13, Int(5)), 5, 4}, {Ring::cyclotomic(3), 0, 3}};
}

QContext make_ctx(const Ctx& c) {
  return c.q ? QContext::make(c.R, c.R.from_int(c.q), c.N) : QContext::natural(c.R, c.N);
}

const char* const kIdentities[] = {"hom-into-cone", "hom-from-cone", "tensor-cone", "tensor-cone-left", "unit-tensor",
                                   "unit-hom",      "shift-tensor",  "shift-hom",   "adjunction"};

std::string identity_case(std::mt19937& g, size_t k) {
  const auto cs = contexts();
  const Ctx& c = cs[k % cs.size()];
  auto ctx = make_ctx(c);
  const bool small = c.N == 4 || c.R.kind() == RingKind::Cyclotomic;
  auto X = random_complex(c.N, c.R, g, 2, small ? 1 : 2);
  auto f = random_inclusion(X, g, false);
  auto Zc = random_complex(c.N, c.R, g, small ? 1 : 2, 1);
  for (const char* nm : kIdentities) {
    // the adjunction count needs a field
    if (c.R.kind() == RingKind::Cyclotomic && std::string(nm) == "adjunction") continue;
    auto rep = identity_check(nm, f, Zc, ctx);
    if (!rep.pass) return c.R.name() + " " + nm + ": " + rep.detail;
  }
  return "";
}

std::string nilpotence_case(std::mt19937& g, size_t k) {
  const auto cs = contexts();
  const Ctx& c = cs[k % cs.size()];
  auto ctx = make_ctx(c);
  auto X = random_complex(c.N, c.R, g, 2, 1);
  auto Y = random_complex(c.N, c.R, g, 2, 1);
  auto T = q_tensor(X, Y, ctx);
  auto H = q_hom(X, Y, ctx);
  auto vt = validate(T), vh = validate(H);
  if (!vt.ok) return c.R.name() + " q_tensor: " + vt.message;
  if (!vh.ok) return c.R.name() + " q_hom: " + vh.message;
  return "";
}

std::string homotopy_case(std::mt19937& g) {
  const Ring Z = Ring::integers();
  const int N = 3 + static_cast<int>(g() % 2);
  auto s = SequenceSpec::ints(Z, random_sequence(g, 1 + g() % 2), N);
  auto K = koszul_ring(s);
  for (const auto& x : s.x) {
    auto f = multiplication(K, x);
    auto h = null_homotopy(f);
    if (!h) return "no homotopy for x=" + Z.str(x) + " on " + s.str();
    if (!verify_homotopy(ChainMap::zero(K, K), f, *h)) return "witness fails for x=" + Z.str(x) + " on " + s.str();
  }
  return "";
}

std::string duality_case(std::mt19937& g) {
  const Ring Z = Ring::integers();
  const int N = 3 + static_cast<int>(g() % 2);
  auto s = SequenceSpec::ints(Z, random_sequence(g, 1 + g() % 2), N);
  auto rep = self_duality_check(s);
  return rep.pass() ? "" : s.str() + ": " + rep.detail;
}

}  // namespace

std::vector<std::string> suite_names() { return {"les", "q-identities", "homotopy", "duality", "nilpotence"}; }

SuiteReport run_suite(const std::string& name, uint64_t seed, size_t count) {
  bool known = false;
  for (const auto& n : suite_names()) known = known || n == name;
  if (!known) throw MathError("UnknownSuite", "unknown suite '" + name + "'");
  SuiteReport rep;
  rep.suite = name;
  rep.seed = seed;
  rep.count = count;
  std::mt19937 g(static_cast<std::mt19937::result_type>(seed));
  for (size_t k = 0; k < count; ++k) {
    std::string fail;
    try {
      if (name == "les") fail = les_case(g);
      else if (name == "q-identities") fail = identity_case(g, k);
      else if (name == "homotopy") fail = homotopy_case(g);
      else if (name == "duality") fail = duality_case(g);
      else fail = nilpotence_case(g, k);
    } catch (const MathError& e) {
      fail = e.code + ": " + e.what();
    }
    if (fail.empty()) ++rep.passed;
    else if (rep.failures.size() < 20) rep.failures.push_back("case " + std::to_string(k) + ": " + fail);
  }
  return rep;
}

}  // namespace ncx
