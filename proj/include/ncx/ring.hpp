#pragma once

#include <gmpxx.h>

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ncx {

using Int = mpz_class;

struct MathError : std::runtime_error {
  std::string code;
  MathError(std::string c, const std::string& msg) : std::runtime_error(msg), code(std::move(c)) {}
};

enum class RingKind { Integers, IntegersMod, PrimeField, Cyclotomic, Localized };

// Ring element. The meaning of `b` depends on the ring:
//   Cyclotomic: a + b*z with z the adjoined root of unity
//   Localized:  a / b with b > 0 a product of inverted primes
//   otherwise:  unused, kept at 0
struct Elem {
  Int a = 0;
  Int b = 0;
  bool operator==(const Elem& o) const { return a == o.a && b == o.b; }
  bool operator!=(const Elem& o) const { return !(*this == o); }
};

struct RingData {
  RingKind kind = RingKind::Integers;
  Int m = 0;                  // modulus for IntegersMod / PrimeField
  int order = 0;              // N for Cyclotomic
  std::optional<Int> root;    // designated root for PrimeField
  std::vector<Int> primes;    // inverted primes for Localized, sorted
  Int c0 = 0, c1 = 0;         // z^2 = c1*z + c0 for Cyclotomic
};

class Ring {
 public:
  Ring();
  static Ring integers();
  static Ring integers_mod(const Int& m);
  static Ring prime_field(const Int& p, std::optional<Int> root = std::nullopt);
  static Ring cyclotomic(int n);
  static Ring localized(const std::vector<Int>& inverted);

  RingKind kind() const { return d_->kind; }
  const Int& modulus() const { return d_->m; }
  int cyclotomic_order() const { return d_->order; }
  const std::optional<Int>& designated_root() const { return d_->root; }
  const std::vector<Int>& inverted_primes() const { return d_->primes; }
  bool is_domain() const { return d_->kind != RingKind::IntegersMod; }
  bool is_pid() const { return d_->kind != RingKind::IntegersMod; }
  std::string name() const;
  bool operator==(const Ring& o) const;
  bool operator!=(const Ring& o) const { return !(*this == o); }

  Elem zero() const;
  Elem one() const;
  Elem from_int(const Int& v) const;
  Elem from_int(long v) const { return from_int(Int(v)); }
  Elem cyclo(const Int& a, const Int& b) const;
  Elem frac(const Int& num, const Int& den) const;
  // the adjoined root (Cyclotomic) or the designated root (PrimeField)
  Elem root() const;

  Elem add(const Elem& x, const Elem& y) const;
  Elem sub(const Elem& x, const Elem& y) const;
  Elem neg(const Elem& x) const;
  Elem mul(const Elem& x, const Elem& y) const;
  Elem pow(const Elem& x, unsigned long e) const;
  bool is_zero(const Elem& x) const;
  bool is_one(const Elem& x) const { return x == one(); }
  bool is_unit(const Elem& x) const;
  Elem inverse(const Elem& x) const;

  // Euclidean structure (not available for IntegersMod)
  Int norm(const Elem& x) const;
  std::pair<Elem, Elem> divmod(const Elem& x, const Elem& y) const;
  bool divides(const Elem& y, const Elem& x) const;
  Elem exact_div(const Elem& x, const Elem& y) const;
  // returns (u, c) with u a unit and u*x = c the canonical associate
  std::pair<Elem, Elem> normalize(const Elem& x) const;
  int multiplicative_order(const Elem& x, int bound) const;

  std::string str(const Elem& x) const;
  bool canonical(const Elem& x) const;

  const RingData& data() const { return *d_; }

 private:
  explicit Ring(std::shared_ptr<const RingData> d) : d_(std::move(d)) {}
  Elem reduce_frac(Int num, Int den) const;
  Int sfree(const Int& v) const;
  std::shared_ptr<const RingData> d_;
};

bool is_prime(const Int& p);
std::vector<Int> prime_factors(Int v);
// multiplicity of prime p in v (v != 0)
unsigned long valuation(Int v, const Int& p);

}  // namespace ncx
