#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncx/ncomplex.hpp"

namespace ncx {

// Normal form for values that need not be finitely generated:
// fg + Pruefer(p)^k + (p-adic integers)^m + Z[1/S]^r + Q^q.
struct CanonicalModule {
  CanonicalFG fg;
  std::map<Int, size_t> pruefer;
  std::map<Int, size_t> adic;
  // free summands that became divisible by the primes in the key (localization pattern)
  std::map<std::vector<Int>, size_t> localized;
  size_t divisible_rank = 0;
  std::optional<std::string> opaque;  // stage dump when no pattern matched

  static CanonicalModule finite(const CanonicalFG& c);
  bool is_zero() const;
  bool classified() const { return !opaque; }
  // opaque values never compare equal
  bool operator==(const CanonicalModule& o) const;
  bool operator!=(const CanonicalModule& o) const { return !(*this == o); }
  std::string str() const;
};

CanonicalModule direct_sum(const CanonicalModule& a, const CanonicalModule& b);

// prime factorisation by trial division; inputs here are small
std::map<Int, unsigned> factorize(Int n);
// invariant factors from p-power exponents
CanonicalFG from_prime_powers(const Ring& R, size_t free_rank, const std::map<Int, std::vector<unsigned>>& exps);
// p-power exponents of the torsion factors, descending
std::map<Int, std::vector<unsigned>> prime_powers(const CanonicalFG& c);

// maps[k] : stages[k] -> stages[k+1], in reduced coordinates
struct DirectSystem {
  std::vector<Subquotient> stages;
  std::vector<Matrix> maps;
  std::string dump() const;
};
// maps[k] : stages[k+1] -> stages[k]
struct InverseSystem {
  std::vector<Subquotient> stages;
  std::vector<Matrix> maps;
  std::string dump() const;
};

DirectSystem direct_system(const std::vector<NComplex>& X, const std::vector<ChainMap>& f, int n, int t);
InverseSystem inverse_system(const std::vector<NComplex>& X, const std::vector<ChainMap>& f, int n, int t);

// Needs at least four stages. Compares, inside the top stage, the images of the last three
// stages whose kernel towards the top has settled: no growth means the value is the eventual image; otherwise p-power exponents that grow
// give Pruefer(p), and free-lattice growth gives Z[1/S].
CanonicalModule classify_colimit(const DirectSystem& sys);
// Needs at least six stages. Uses eventual images at the last three levels where
// Mittag-Leffler is visible in the window; growing
// p-power exponents give adic(p).
CanonicalModule classify_limit(const InverseSystem& sys);

// Stable colimit as a finite object: the image of the last settled stage inside the top
// stage, provided the last two settled stages have the same image. nullopt otherwise.
std::optional<Subquotient> realize_colimit(const DirectSystem& sys);
// Eventual image at `level`, provided Mittag-Leffler is visible at level and level+1 and the
// transition between the two eventual images is an isomorphism.
std::optional<Subquotient> realize_limit(const InverseSystem& sys, size_t level);

}  // namespace ncx
