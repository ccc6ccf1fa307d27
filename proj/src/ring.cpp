#include "ncx/ring.hpp"

#include <algorithm>
#include <sstream>

namespace ncx {

bool is_prime(const Int& p) { return p > 1 && mpz_probab_prime_p(p.get_mpz_t(), 30) > 0; }

std::vector<Int> prime_factors(Int v) {
  std::vector<Int> out;
  if (v < 0) v = -v;
  for (Int d = 2; d * d <= v; ++d) {
    if (v % d == 0) {
      out.push_back(d);
      while (v % d == 0) v /= d;
    }
  }
  if (v > 1) out.push_back(v);
  return out;
}

unsigned long valuation(Int v, const Int& p) {
  unsigned long k = 0;
  if (v == 0) return 0;
  while (v % p == 0) {
    v /= p;
    ++k;
  }
  return k;
}

namespace {

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int mod_pos(const Int& a, const Int& m) {
  Int r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int gcd(const Int& a, const Int& b) {
  Int g;
  mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return g;
}

Int invert_mod(const Int& a, const Int& m) {
  Int r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
    throw MathError("NotInvertible", "element is not a unit");
  return r;
}

// nearest integer to a/b, b > 0
Int round_div(const Int& a, const Int& b) { return floor_div(2 * a + b, 2 * b); }

}  // namespace

Ring::Ring() : Ring(integers()) {}

Ring Ring::integers() {
  static const auto d = std::make_shared<const RingData>();
  return Ring(d);
}

Ring Ring::integers_mod(const Int& m) {
  if (m < 2) throw MathError("InvalidRing", "IntegersMod requires m >= 2");
  auto d = std::make_shared<RingData>();
  d->kind = RingKind::IntegersMod;
  d->m = m;
  return Ring(d);
}

Ring Ring::prime_field(const Int& p, std::optional<Int> root) {
  if (!is_prime(p)) throw MathError("InvalidRing", "PrimeField requires a prime");
  auto d = std::make_shared<RingData>();
  d->kind = RingKind::PrimeField;
  d->m = p;
  if (root) {
    Int q = mod_pos(*root, p);
    if (q == 0) throw MathError("InvalidRing", "designated root must be nonzero");
    d->root = q;
  }
  return Ring(d);
}

Ring Ring::cyclotomic(int n) {
  auto d = std::make_shared<RingData>();
  d->kind = RingKind::Cyclotomic;
  d->order = n;
  switch (n) {
    case 2: break;
    case 3: d->c1 = -1; d->c0 = -1; break;
    case 4: d->c1 = 0; d->c0 = -1; break;
    case 6: d->c1 = 1; d->c0 = -1; break;
    default: throw MathError("InvalidRing", "CyclotomicIntegers supports N in {2,3,4,6}");
  }
  return Ring(d);
}

Ring Ring::localized(const std::vector<Int>& inverted) {
  auto d = std::make_shared<RingData>();
  d->kind = RingKind::Localized;
  for (const auto& v : inverted) {
    if (v == 0) throw MathError("InvalidRing", "cannot invert zero");
    for (auto& p : prime_factors(v)) d->primes.push_back(p);
  }
  std::sort(d->primes.begin(), d->primes.end());
  d->primes.erase(std::unique(d->primes.begin(), d->primes.end()), d->primes.end());
  if (d->primes.empty()) return integers();
  return Ring(d);
}

bool Ring::operator==(const Ring& o) const {
  if (d_ == o.d_) return true;
  const auto& a = *d_;
  const auto& b = *o.d_;
  return a.kind == b.kind && a.m == b.m && a.order == b.order && a.root == b.root && a.primes == b.primes;
}

std::string Ring::name() const {
  std::ostringstream os;
  switch (kind()) {
    case RingKind::Integers: os << "Z"; break;
    case RingKind::IntegersMod: os << "Z/" << d_->m; break;
    case RingKind::PrimeField:
      os << "F" << d_->m;
      if (d_->root) os << "[q=" << *d_->root << "]";
      break;
    case RingKind::Cyclotomic: os << "Z[z" << d_->order << "]"; break;
    case RingKind::Localized: {
      os << "Z[";
      for (size_t i = 0; i < d_->primes.size(); ++i) os << (i ? "," : "") << "1/" << d_->primes[i];
      os << "]";
      break;
    }
  }
  return os.str();
}

Int Ring::sfree(const Int& v) const {
  Int r = abs(v);
  if (r == 0) return r;
  for (const auto& p : d_->primes)
    while (r % p == 0) r /= p;
  return r;
}

Elem Ring::reduce_frac(Int num, Int den) const {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  if (num == 0) return Elem{0, 1};
  Int g = gcd(num, den);
  return Elem{num / g, den / g};
}

Elem Ring::zero() const { return kind() == RingKind::Localized ? Elem{0, 1} : Elem{0, 0}; }
Elem Ring::one() const { return from_int(1); }

Elem Ring::from_int(const Int& v) const {
  switch (kind()) {
    case RingKind::IntegersMod:
    case RingKind::PrimeField: return Elem{mod_pos(v, d_->m), 0};
    case RingKind::Localized: return Elem{v, 1};
    default: return Elem{v, 0};
  }
}

Elem Ring::cyclo(const Int& a, const Int& b) const {
  if (kind() != RingKind::Cyclotomic) {
    if (b != 0) throw MathError("InvalidElement", "root coefficient outside a cyclotomic ring");
    return from_int(a);
  }
  if (d_->order == 2) return Elem{a - b, 0};
  return Elem{a, b};
}

Elem Ring::frac(const Int& num, const Int& den) const {
  if (den == 0) throw MathError("InvalidElement", "zero denominator");
  if (kind() != RingKind::Localized) {
    Elem d = from_int(den);
    return mul(from_int(num), inverse(d));
  }
  if (sfree(den) != 1) throw MathError("InvalidElement", "denominator not in the inverted set");
  return reduce_frac(num, den);
}

Elem Ring::root() const {
  if (kind() == RingKind::Cyclotomic) return d_->order == 2 ? Elem{-1, 0} : Elem{0, 1};
  if (kind() == RingKind::PrimeField && d_->root) return Elem{*d_->root, 0};
  throw MathError("NoRoot", "ring " + name() + " has no designated root of unity");
}

Elem Ring::add(const Elem& x, const Elem& y) const {
  switch (kind()) {
    case RingKind::IntegersMod:
    case RingKind::PrimeField: {
      Int s = x.a + y.a;
      if (s >= d_->m) s -= d_->m;
      return Elem{s, 0};
    }
    case RingKind::Localized:
      if (x.b == y.b) return reduce_frac(x.a + y.a, x.b);
      return reduce_frac(x.a * y.b + y.a * x.b, x.b * y.b);
    default: return Elem{x.a + y.a, x.b + y.b};
  }
}

Elem Ring::neg(const Elem& x) const {
  switch (kind()) {
    case RingKind::IntegersMod:
    case RingKind::PrimeField: return Elem{x.a == 0 ? Int(0) : Int(d_->m - x.a), 0};
    case RingKind::Localized: return Elem{-x.a, x.b};
    default: return Elem{-x.a, -x.b};
  }
}

Elem Ring::sub(const Elem& x, const Elem& y) const { return add(x, neg(y)); }

Elem Ring::mul(const Elem& x, const Elem& y) const {
  switch (kind()) {
    case RingKind::IntegersMod:
    case RingKind::PrimeField: return Elem{mod_pos(x.a * y.a, d_->m), 0};
    case RingKind::Localized: return reduce_frac(x.a * y.a, x.b * y.b);
    case RingKind::Cyclotomic: {
      Int bd = x.b * y.b;
      return Elem{x.a * y.a + bd * d_->c0, x.a * y.b + x.b * y.a + bd * d_->c1};
    }
    default: return Elem{x.a * y.a, 0};
  }
}

Elem Ring::pow(const Elem& x, unsigned long e) const {
  Elem r = one(), b = x;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

bool Ring::is_zero(const Elem& x) const { return x.a == 0 && (kind() == RingKind::Localized || x.b == 0); }

bool Ring::is_unit(const Elem& x) const {
  switch (kind()) {
    case RingKind::Integers: return abs(x.a) == 1;
    case RingKind::IntegersMod: return gcd(x.a, d_->m) == 1;
    case RingKind::PrimeField: return x.a != 0;
    case RingKind::Cyclotomic: return norm(x) == 1;
    case RingKind::Localized: return x.a != 0 && sfree(x.a) == 1;
  }
  return false;
}

Elem Ring::inverse(const Elem& x) const {
  if (!is_unit(x)) throw MathError("NotInvertible", str(x) + " is not a unit in " + name());
  switch (kind()) {
    case RingKind::Integers: return x;
    case RingKind::IntegersMod:
    case RingKind::PrimeField: return Elem{invert_mod(x.a, d_->m), 0};
    case RingKind::Cyclotomic: return Elem{x.a + x.b * d_->c1, -x.b};
    case RingKind::Localized: return reduce_frac(x.b, x.a);
  }
  return x;
}

Int Ring::norm(const Elem& x) const {
  switch (kind()) {
    case RingKind::Integers: return abs(x.a);
    case RingKind::IntegersMod: return x.a == 0 ? Int(0) : gcd(x.a, d_->m);
    case RingKind::PrimeField: return x.a == 0 ? 0 : 1;
    case RingKind::Cyclotomic: {
      Elem c{x.a + x.b * d_->c1, -x.b};
      return mul(x, c).a;
    }
    case RingKind::Localized: return sfree(x.a);
  }
  return 0;
}

std::pair<Elem, Elem> Ring::divmod(const Elem& x, const Elem& y) const {
  if (is_zero(y)) throw MathError("DivisionByZero", "division by zero");
  switch (kind()) {
    case RingKind::Integers: {
      Int q = floor_div(x.a, y.a);
      return {Elem{q, 0}, Elem{x.a - q * y.a, 0}};
    }
    case RingKind::PrimeField: return {mul(x, inverse(y)), zero()};
    case RingKind::Cyclotomic: {
      Int n = norm(y);
      Elem num = mul(x, Elem{y.a + y.b * d_->c1, -y.b});
      Elem q{round_div(num.a, n), round_div(num.b, n)};
      if (d_->order == 2) q.b = 0;
      return {q, sub(x, mul(q, y))};
    }
    case RingKind::Localized: {
      Int y0 = sfree(y.a);
      if (y0 == 1) return {mul(x, inverse(y)), zero()};
      Elem u = reduce_frac(y.a, y.b * y0);  // y / y0 is a unit
      Elem xu = mul(x, inverse(u));  // x = (xu) * u
      Int r = mod_pos(xu.a * invert_mod(xu.b, y0), y0);
      Elem rr = from_int(r);
      Elem diff = sub(xu, rr);
      Elem q0 = reduce_frac(diff.a, diff.b * y0);
      // xu = q0*y0 + r, hence x = q0*y + r*u
      return {q0, mul(rr, u)};
    }
    case RingKind::IntegersMod: break;
  }
  throw MathError("NotEuclidean", name() + " has no Euclidean division");
}

bool Ring::divides(const Elem& y, const Elem& x) const {
  if (is_zero(y)) return is_zero(x);
  if (kind() == RingKind::IntegersMod) return x.a % gcd(y.a, d_->m) == 0;
  return is_zero(divmod(x, y).second);
}

Elem Ring::exact_div(const Elem& x, const Elem& y) const {
  if (is_zero(y)) {
    if (is_zero(x)) return zero();
    throw MathError("DivisionByZero", "division by zero");
  }
  if (kind() == RingKind::IntegersMod) {
    Int g = gcd(y.a, d_->m);
    if (x.a % g != 0) throw MathError("NotDivisible", "not divisible");
    Int mg = d_->m / g;
    Int inv = mg == 1 ? Int(0) : invert_mod(mod_pos(y.a / g, mg), mg);
    return Elem{mod_pos((x.a / g) * inv, d_->m), 0};
  }
  auto [q, r] = divmod(x, y);
  if (!is_zero(r)) throw MathError("NotDivisible", str(y) + " does not divide " + str(x));
  return q;
}

std::pair<Elem, Elem> Ring::normalize(const Elem& x) const {
  switch (kind()) {
    case RingKind::Integers:
      return x.a < 0 ? std::pair{Elem{-1, 0}, Elem{-x.a, 0}} : std::pair{one(), x};
    case RingKind::PrimeField:
      if (x.a == 0) return {one(), x};
      return {inverse(x), one()};
    case RingKind::IntegersMod: {
      if (x.a == 0) return {one(), x};
      Int g = gcd(x.a, d_->m);
      Int mg = d_->m / g;
      Int u = mg == 1 ? Int(1) : invert_mod(mod_pos(x.a / g, mg), mg);
      while (gcd(u, d_->m) != 1) u += mg;
      return {Elem{mod_pos(u, d_->m), 0}, Elem{g, 0}};
    }
    case RingKind::Cyclotomic: {
      if (is_zero(x)) return {one(), x};
      std::vector<Elem> units;
      Elem z = root(), p = one();
      for (int k = 0; k < 6; ++k) {
        units.push_back(p);
        units.push_back(neg(p));
        p = mul(p, z);
      }
      std::pair<Elem, Elem> best{one(), x};
      for (const auto& u : units) {
        Elem c = mul(u, x);
        if (c.a > best.second.a || (c.a == best.second.a && c.b > best.second.b)) best = {u, c};
      }
      return best;
    }
    case RingKind::Localized: {
      if (x.a == 0) return {one(), zero()};
      Elem c = from_int(sfree(x.a));
      if (c.a < 0) c.a = -c.a;
      return {reduce_frac(c.a * x.b, x.a), c};
    }
  }
  return {one(), x};
}

int Ring::multiplicative_order(const Elem& x, int bound) const {
  Elem p = x;
  for (int k = 1; k <= bound; ++k) {
    if (is_one(p)) return k;
    p = mul(p, x);
  }
  return 0;
}

std::string Ring::str(const Elem& x) const {
  std::ostringstream os;
  switch (kind()) {
    case RingKind::Cyclotomic:
      if (x.b == 0) {
        os << x.a;
      } else {
        if (x.a != 0) os << x.a << (x.b > 0 ? "+" : "");
        if (x.b == -1) os << "-";
        else if (x.b != 1) os << x.b;
        os << "z";
      }
      break;
    case RingKind::Localized:
      os << x.a;
      if (x.b != 1) os << "/" << x.b;
      break;
    default: os << x.a;
  }
  return os.str();
}

bool Ring::canonical(const Elem& x) const {
  switch (kind()) {
    case RingKind::IntegersMod:
    case RingKind::PrimeField: return x.b == 0 && x.a >= 0 && x.a < d_->m;
    case RingKind::Localized: return x.b > 0 && sfree(x.b) == 1 && gcd(x.a, x.b) == 1;
    case RingKind::Cyclotomic: return d_->order != 2 || x.b == 0;
    default: return x.b == 0;
  }
}

}  // namespace ncx
