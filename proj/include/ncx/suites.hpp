#pragma once

// Seeded batteries shared by `ncx check` and the acceptance runner.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "ncx/ncomplex.hpp"

namespace ncx {

struct BasisChange {
  Matrix P, Pinv;
};
BasisChange random_change_of_basis(const Ring& R, std::mt19937& g, size_t n, int steps = 6);

// Direct sum of random segments M -c1-> M -c2-> ... of length <= N starting in [-span, 0], then
// a random change of basis in every degree. Segments of length <= N never violate d^N = 0.
// Coefficients lie in [-3, 3].
NComplex random_complex(int N, const Ring& R, std::mt19937& g, int segments = 3, int span = 3, bool torsion = true);

struct SuiteReport {
  std::string suite;
  uint64_t seed = 0;
  size_t count = 0;
  size_t passed = 0;
  std::vector<std::string> failures;  // "case k: detail", at most 20 kept
  bool pass() const { return passed == count; }
};

// names: "les", "q-identities", "homotopy", "duality", "nilpotence"
std::vector<std::string> suite_names();
// throws MathError("UnknownSuite") for other names
SuiteReport run_suite(const std::string& name, uint64_t seed, size_t count);

}  // namespace ncx
