#include "doctest.h"
#include "fixtures.hpp"
#include "ncx/qcalc.hpp"

using namespace ncx;
using fx::mat;

namespace {

// random chain map X -> Y between random complexes: c * (projection onto a shared summand)
ChainMap random_map(const NComplex& X, std::mt19937& g) {
  const Ring& R = X.ring();
  auto W = fx::random_complex(X.N(), R, g, 1, 2, false);
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

ChainMap mult(const NComplex& X, long c) { return ChainMap::identity(X).scaled(X.ring().from_int(c)); }

}  // namespace

TEST_CASE("q contexts") {
  Ring F7 = Ring::prime_field(7, Int(2));
  CHECK(QContext::primitive(F7, F7.from_int(2), 3));
  CHECK(!QContext::primitive(F7, F7.from_int(1), 3));
  CHECK(!QContext::primitive(F7, F7.from_int(6), 3));
  CHECK_THROWS_AS(QContext::make(F7, F7.from_int(1), 3), MathError);
  CHECK(QContext::natural(F7, 3).q == F7.from_int(2));
  Ring C3 = Ring::cyclotomic(3);
  CHECK(QContext::natural(C3, 3).q == C3.root());
  Ring C6 = Ring::cyclotomic(6);
  CHECK(QContext::primitive(C6, QContext::natural(C6, 3).q, 3));
  CHECK_THROWS_AS(QContext::natural(Ring::integers(), 3), MathError);
}

TEST_CASE("hom modules between finitely presented modules") {
  Ring Z = Ring::integers();
  auto h = hom_module(FPModule::cyclic(Z, Z.from_int(4)), FPModule::cyclic(Z, Z.from_int(6)));
  CHECK(h.module.classify().str() == "Z/2");
  auto h2 = hom_module(FPModule::cyclic(Z, Z.from_int(3)), FPModule::free(Z, 2));
  CHECK(h2.module.classify().is_zero());
  auto h3 = hom_module(FPModule::free(Z, 2), FPModule::cyclic(Z, Z.from_int(5)));
  CHECK(h3.module.classify().str() == "Z/5 + Z/5");
}

TEST_CASE("q-tensor and q-hom validate exactly when q is primitive") {
  Ring F7 = Ring::prime_field(7, Int(2));
  std::mt19937 g(17);
  auto good = QContext::make(F7, F7.from_int(2), 3);
  QContext bad{F7, F7.one(), 3};
  CHECK_THROWS_AS(q_tensor(disk(3, FPModule::free(F7, 1), 0, 1), disk(3, FPModule::free(F7, 1), 0, 1), bad), MathError);
  bool some_failure = false;
  for (int it = 0; it < 10; ++it) {
    auto X = fx::random_complex(3, F7, g, 2, 2), Y = fx::random_complex(3, F7, g, 2, 2);
    CHECK(validate(q_tensor(X, Y, good)).ok);
    CHECK(validate(q_hom(X, Y, good)).ok);
    if (!validate(q_tensor(X, Y, bad, false)).ok) some_failure = true;
  }
  // D^0_3 (x) D^0_3 with q = 1: d^3 = 3(d (x) d^2 + d^2 (x) d) != 0 in F7
  auto D = disk(3, FPModule::free(F7, 1), 0, 3);
  CHECK(!validate(q_tensor(D, D, bad, false)).ok);
  CHECK(validate(q_tensor(D, D, good)).ok);
  CHECK(some_failure);

  Ring F13 = Ring::prime_field(13, Int(5));
  auto c13 = QContext::make(F13, F13.from_int(5), 4);
  for (int it = 0; it < 6; ++it) {
    auto X = fx::random_complex(4, F13, g, 2, 2), Y = fx::random_complex(4, F13, g, 2, 2);
    CHECK(validate(q_tensor(X, Y, c13)).ok);
  }
  Ring C3 = Ring::cyclotomic(3);
  auto cc = QContext::natural(C3, 3);
  auto E = disk(3, FPModule::free(C3, 1), 1, 2);
  CHECK(validate(q_hom(E, disk(3, FPModule::free(C3, 1), 0, 2), cc)).ok);
}

TEST_CASE("module specializations") {
  Ring Z = Ring::integers();
  // K(2;Z) (x) Z/4
  std::vector<FPModule> mods(3, FPModule::free(Z, 1));
  NComplex K(3, Z, -2, mods, {mat(Z, {{1}}), mat(Z, {{2}})});
  auto T = module_tensor(K, FPModule::cyclic(Z, Z.from_int(4)));
  CHECK(validate(T).ok);
  CHECK(cohomology(T, 0, 1).str() == "Z/2");
  CHECK(module_tensor(NComplex(3, Z), FPModule::free(Z, 1)).empty());

  auto H = module_hom_into(K, FPModule::free(Z, 1));
  CHECK(validate(H).ok);
  CHECK(H.lo() == 0);
  CHECK(H.hi() == 2);
  CHECK(cohomology(H, 1, 2).str() == "Z/2");
  CHECK(cohomology(H, 2, 1).str() == "Z/2");
  for (int t = 1; t <= 2; ++t) CHECK(cohomology(H, 0, t).is_zero());
  CHECK(cohomology(H, 1, 1).is_zero());
  CHECK(cohomology(H, 2, 2).is_zero());
  // Hom(K, M) with torsion M goes through the presentation route
  auto H4 = module_hom_into(K, FPModule::cyclic(Z, Z.from_int(4)));
  CHECK(validate(H4).ok);
  Ring R4 = Ring::integers_mod(4);
  NComplex K4(3, R4, -2, std::vector<FPModule>(3, FPModule::free(R4, 1)), {mat(R4, {{1}}), mat(R4, {{2}})});
  auto H4b = module_hom_into(K4, FPModule::free(R4, 1));
  for (int n = 0; n <= 2; ++n)
    for (int t = 1; t <= 2; ++t)
      CHECK(fx::profile(cohomology(H4, n, t), 4) == fx::profile(cohomology(H4b, n, t), 4));
}

TEST_CASE("specializations do not depend on q") {
  Ring F7 = Ring::prime_field(7, Int(2));
  std::mt19937 g(23);
  auto q2 = QContext::make(F7, F7.from_int(2), 3), q4 = QContext::make(F7, F7.from_int(4), 3);
  for (int it = 0; it < 8; ++it) {
    auto X = fx::random_complex(3, F7, g, 2, 2);
    auto D = disk(3, FPModule::free(F7, 2), 0, 1);
    CHECK(fx::same_table(q_tensor(X, D, q2), q_tensor(X, D, q4)));
    CHECK(fx::same_table(q_tensor(X, D, q2), module_tensor(X, FPModule::free(F7, 2))));
    CHECK(fx::same_table(q_hom(X, D, q2), q_hom(X, D, q4)));
    CHECK(fx::same_table(q_hom(X, D, q2), module_hom_into(X, FPModule::free(F7, 2))));
  }
}

TEST_CASE("identity checks on seeded batteries") {
  std::mt19937 g(4711);
  Ring F7 = Ring::prime_field(7, Int(2));
  auto ctx = QContext::make(F7, F7.from_int(2), 3);
  const char* names[] = {"hom-into-cone", "hom-from-cone", "tensor-cone", "tensor-cone-left", "unit-tensor", "unit-hom",
                         "shift-tensor", "shift-hom", "adjunction"};
  for (int it = 0; it < 6; ++it) {
    auto X = fx::random_complex(3, F7, g, 2, 2);
    auto f = random_map(X, g);
    REQUIRE(validate(f).ok);
    auto Zc = fx::random_complex(3, F7, g, 2, 1);
    for (const char* nm : names) {
      auto rep = identity_check(nm, f, Zc, ctx);
      INFO(std::string(nm), ": ", rep.detail);
      CHECK(rep.pass);
    }
  }
  Ring F13 = Ring::prime_field(13, Int(5));
  auto c4 = QContext::make(F13, F13.from_int(5), 4);
  for (int it = 0; it < 3; ++it) {
    auto X = fx::random_complex(4, F13, g, 2, 1);
    auto f = random_map(X, g);
    auto Zc = fx::random_complex(4, F13, g, 1, 1);
    for (const char* nm : names) {
      auto rep = identity_check(nm, f, Zc, c4);
      INFO(std::string(nm), ": ", rep.detail);
      CHECK(rep.pass);
    }
  }
}

TEST_CASE("cone tensor with f = x and Z = D^0_1(M) gives K(x;M) on the nose") {
  Ring F7 = Ring::prime_field(7, Int(2));
  auto ctx = QContext::make(F7, F7.from_int(2), 3);
  auto D = disk(3, FPModule::free(F7, 1), 0, 1);
  auto M = disk(3, FPModule::free(F7, 2), 0, 1);
  auto rep = identity_check("tensor-cone", mult(D, 3), M, ctx);
  CHECK(rep.pass);
  CHECK(rep.explicit_iso);
  // f = 0: the cone splits as Y + Sigma X
  auto z = cone(ChainMap::zero(D, D));
  CHECK(fx::same_table(z, direct_sum(D, suspend(D, 1))));
  CHECK(identity_check("hom-into-cone", ChainMap::zero(D, D), M, ctx).pass);
}
