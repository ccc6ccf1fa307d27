#pragma once

// Hand-written Koszul displays, transcribed entry by entry as functions of the
// sequence (x, y, z). diffs[k] is the differential leaving the k-th nonzero
// module, counting from the lowest degree.

#include <cstdint>
#include <string>
#include <vector>

#include "ncx/koszul.hpp"

namespace golden {

using IntMat = std::vector<std::vector<long>>;

inline std::vector<IntMat> koszul_display(int N, int d, long x, long y, long z) {
  if (N == 3 && d == 1) return {{{1}}, {{x}}};
  if (N == 3 && d == 2) return {{{1}, {-1}}, {{y, 0}, {0, 1}, {-x, -x}}, {{1, y, 0}, {0, 0, 1}}, {{x, y}}};
  if (N == 3 && d == 3)
    return {
        {{1}, {-1}, {1}},
        {{z, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-y, -y, 0}, {1, 0, -1}, {0, x, x}},
        {{1, z, 0, 0, 0, 0},
         {-1, 0, z, 0, 0, 0},
         {0, 0, 0, 1, 0, 0},
         {0, 0, 0, 0, 1, 0},
         {0, 0, 0, 0, 0, 1},
         {0, -y, -y, -1, -y, 0},
         {0, x, x, 0, 0, -1}},
        {{y, 0, z, 0, 0, 0, 0},
         {0, 1, 0, z, 0, 0, 0},
         {-x, -x, 0, 0, z, 0, 0},
         {0, 0, 0, 0, 0, 1, 0},
         {0, 0, 0, 0, 0, 0, 1},
         {0, 0, -x, -x * y, -y, -x, -y}},
        {{1, y, 0, z, 0, 0}, {0, 0, 1, 0, z, 0}, {0, 0, 0, 0, 0, 1}},
        {{x, y, z}},
    };
  if (N == 4 && d == 1) return {{{1}}, {{1}}, {{x}}};
  if (N == 4 && d == 2)
    return {{{1}, {-1}},
            {{1, 0}, {0, 1}, {-1, -1}},
            {{y, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-x, -x, -x}},
            {{1, y, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}},
            {{1, y, 0}, {0, 0, 1}},
            {{x, y}}};
  if (N == 4 && d == 3)
    return {
        {{1}, {-1}, {1}},
        {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {-1, -1, 0}, {1, 0, -1}, {0, 1, 1}},
        {{z, 0, 0, 0, 0, 0},
         {0, 1, 0, 0, 0, 0},
         {0, 0, 1, 0, 0, 0},
         {0, 0, 0, 1, 0, 0},
         {0, 0, 0, 0, 1, 0},
         {0, 0, 0, 0, 0, 1},
         {-y, -y, 0, -y, 0, 0},
         {1, 0, -1, 0, -1, 0},
         {0, 1, 1, 0, 0, -1},
         {0, 0, 0, x, x, x}},
        {{1, z, 0, 0, 0, 0, 0, 0, 0, 0},
         {-1, 0, z, 0, 0, 0, 0, 0, 0, 0},
         {0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
         {0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
         {0, -y, -y, -y, -y, 0, -1, -y, 0, 0},
         {0, 1, 1, 0, 0, -1, 0, 0, -1, 0},
         {0, 0, 0, x, x, x, 0, 0, 0, -1}},
        {{1, 0, z, 0, 0, 0, 0, 0, 0, 0, 0, 0},
         {0, 1, 0, z, 0, 0, 0, 0, 0, 0, 0, 0},
         {-1, -1, 0, 0, z, 0, 0, 0, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
         {0, 0, -y, -y, -y, -1, -y, -y, 0, -1, -y, 0},
         {0, 0, x, x, x, 0, 0, 0, -1, 0, 0, -1}},
        {{y, 0, 0, z, 0, 0, 0, 0, 0, 0, 0, 0},
         {0, 1, 0, 0, z, 0, 0, 0, 0, 0, 0, 0},
         {0, 0, 1, 0, 0, z, 0, 0, 0, 0, 0, 0},
         {-x, -x, -x, 0, 0, 0, z, 0, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1},
         {0, 0, 0, -x, -x * y, -x * y, -y, -x, -x * y, -y, -x, -y}},
        {{1, y, 0, 0, z, 0, 0, 0, 0, 0},
         {0, 0, 1, 0, 0, z, 0, 0, 0, 0},
         {0, 0, 0, 1, 0, 0, z, 0, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 1, 0, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 1, 0},
         {0, 0, 0, 0, 0, 0, 0, 0, 0, 1}},
        {{1, y, 0, z, 0, 0}, {0, 0, 1, 0, z, 0}, {0, 0, 0, 0, 0, 1}},
        {{x, y, z}},
    };
  return {};
}

struct Mismatch {
  int degree;
  size_t row, col;
  std::string expected, got;
};

// Entry-by-entry diff of koszul_ring against the display; shape differences are
// reported as a single mismatch with row = col = SIZE_MAX.
inline std::vector<Mismatch> diff_display(int N, const std::vector<long>& xs) {
  using namespace ncx;
  Ring Z = Ring::integers();
  long x = xs[0], y = xs.size() > 1 ? xs[1] : 0, z = xs.size() > 2 ? xs[2] : 0;
  auto disp = koszul_display(N, static_cast<int>(xs.size()), x, y, z);
  NComplex K = koszul_ring(SequenceSpec::ints(Z, xs, N));
  std::vector<Mismatch> out;
  const int lo = K.lo();
  if (static_cast<int>(disp.size()) != K.hi() - K.lo()) {
    out.push_back({lo, SIZE_MAX, SIZE_MAX, std::to_string(disp.size()) + " maps", std::to_string(K.hi() - K.lo())});
    return out;
  }
  for (size_t k = 0; k < disp.size(); ++k) {
    Matrix want = Matrix::from_ints(Z, disp[k]);
    Matrix got = K.d(lo + static_cast<int>(k));
    const int deg = lo + static_cast<int>(k);
    if (want.rows() != got.rows() || want.cols() != got.cols()) {
      out.push_back({deg, SIZE_MAX, SIZE_MAX, std::to_string(want.rows()) + "x" + std::to_string(want.cols()),
                     std::to_string(got.rows()) + "x" + std::to_string(got.cols())});
      continue;
    }
    for (size_t i = 0; i < want.rows(); ++i)
      for (size_t j = 0; j < want.cols(); ++j)
        if (want(i, j) != got(i, j)) out.push_back({deg, i, j, Z.str(want(i, j)), Z.str(got(i, j))});
  }
  return out;
}

}  // namespace golden
