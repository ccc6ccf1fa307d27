#pragma once
// Random generators and brute-force oracles shared by the test files.

#include <map>
#include <random>
#include <set>

#include "ncx/ncomplex.hpp"
#include "ncx/suites.hpp"

namespace fx {

using namespace ncx;

using Vec = std::vector<long>;

inline std::vector<Vec> all_vectors(long m, size_t n) {
  std::vector<Vec> out{Vec{}};
  for (size_t i = 0; i < n; ++i) {
    std::vector<Vec> nx;
    for (const auto& v : out)
      for (long c = 0; c < m; ++c) {
        Vec w = v;
        w.push_back(c);
        nx.push_back(w);
      }
    out = nx;
  }
  return out;
}

inline Vec apply(const Matrix& A, const Vec& v, long m) {
  Vec w(A.rows(), 0);
  for (size_t i = 0; i < A.rows(); ++i) {
    long s = 0;
    for (size_t j = 0; j < A.cols(); ++j) s += A(i, j).a.get_si() * v[j];
    w[i] = ((s % m) + m) % m;
  }
  return w;
}

// Brute-force H^n_t of a complex of free Z/m-modules: the quotient group as a
// torsion profile (number of cosets killed by k, for each k | m).
inline std::vector<size_t> brute_h(const NComplex& X, int n, int t, long m) {
  const int N = X.N();
  size_t g = X.gens(n);
  std::set<Vec> Z, B;
  Matrix Dt = X.composite(n, t);
  for (const auto& v : all_vectors(m, g)) {
    Vec w = apply(Dt, v, m);
    bool zero = true;
    for (long x : w) zero = zero && x == 0;
    if (zero) Z.insert(v);
  }
  Matrix Db = X.composite(n - (N - t), N - t);
  for (const auto& v : all_vectors(m, X.gens(n - (N - t)))) B.insert(apply(Db, v, m));
  std::vector<size_t> out;
  for (long k = 1; k <= m; ++k) {
    if (m % k) continue;
    size_t cnt = 0;
    for (const auto& v : Z) {
      Vec w(v.size());
      for (size_t i = 0; i < v.size(); ++i) w[i] = (k * v[i]) % m;
      if (B.count(w)) ++cnt;
    }
    out.push_back(cnt / B.size());
  }
  return out;
}

inline std::vector<size_t> profile(const CanonicalFG& c, long m) {
  std::vector<size_t> out;
  for (long k = 1; k <= m; ++k) {
    if (m % k) continue;
    size_t cnt = 1;
    for (size_t i = 0; i < c.free_rank; ++i) cnt *= std::gcd(k, m);
    for (const auto& d : c.factors) cnt *= std::gcd(k, d.a.get_si());
    out.push_back(cnt);
  }
  return out;
}

inline Matrix mat(const Ring& R, const std::vector<std::vector<long>>& rows) { return Matrix::from_ints(R, rows); }

inline bool same_table(const NComplex& A, const NComplex& B) {
  int lo = std::min(A.empty() ? 0 : A.lo(), B.empty() ? 0 : B.lo());
  int hi = std::max(A.empty() ? 0 : A.hi(), B.empty() ? 0 : B.hi());
  for (int n = lo; n <= hi; ++n)
    for (int t = 1; t < A.N(); ++t)
      if (cohomology(A, n, t) != cohomology(B, n, t)) return false;
  return true;
}

}  // namespace fx
