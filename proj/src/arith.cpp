#include "cuspbasis/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cuspbasis/errors.hpp"

namespace cuspbasis {

i64 gcd(i64 a, i64 b) { return std::gcd(a, b); }

i64 lcm(i64 a, i64 b) { return std::lcm(a, b); }

i64 extended_gcd(i64 a, i64 b, i64& x, i64& y) {
  i64 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    i64 q = old_r / r;
    std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
    std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    std::tie(old_t, t) = std::make_pair(t, old_t - q * t);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

i64 ipow(i64 base, int exp) {
  i64 r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

Rational rpow(i64 base, int exp) {
  Integer z;
  mpz_pow_ui(z.get_mpz_t(), Integer(static_cast<long>(base)).get_mpz_t(),
             static_cast<unsigned long>(exp < 0 ? -exp : exp));
  if (exp >= 0) return Rational(z);
  Rational q(Integer(1), z);
  q.canonicalize();
  return q;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e > 0) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool miller_rabin_witness(u64 n, u64 a, u64 d, int s) {
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int r = 1; r < s; ++r) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

void require_positive(i64 n, const char* what) {
  if (n < 1) throw PreconditionError(std::string(what) + " requires a positive integer");
}

}  // namespace

bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  u64 d = static_cast<u64>(n) - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (miller_rabin_witness(static_cast<u64>(n), a, d, s)) return false;
  }
  return true;
}

Factorization factor(i64 n) {
  require_positive(n, "factor");
  Factorization out;
  auto take = [&](i64 p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.push_back({p, e});
  };
  take(2);
  for (i64 p = 3; p * p <= n; p += 2) {
    take(p);
    if (n > 1 && p > 1000 && is_prime(n)) break;
  }
  if (n > 1) out.push_back({n, 1});
  return out;
}

std::vector<i64> prime_divisors(i64 n) {
  std::vector<i64> out;
  for (const auto& pe : factor(n)) out.push_back(pe.prime);
  return out;
}

std::vector<i64> primes_up_to(i64 bound) {
  std::vector<i64> out;
  if (bound < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(bound) + 1, false);
  for (i64 p = 2; p <= bound; ++p) {
    if (composite[p]) continue;
    out.push_back(p);
    for (i64 q = p * p; q <= bound; q += p) composite[q] = true;
  }
  return out;
}

std::vector<i64> divisors(i64 n) {
  std::vector<i64> out{1};
  for (const auto& [p, e] : factor(n)) {
    std::size_t count = out.size();
    i64 pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < count; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int valuation(i64 n, i64 p) {
  require_positive(n, "valuation");
  int v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

i64 sigma0(i64 n) {
  require_positive(n, "sigma0");
  i64 r = 1;
  for (const auto& pe : factor(n)) r *= pe.exponent + 1;
  return r;
}

std::vector<i64> sigma0_table(i64 bound) {
  std::vector<i64> t(static_cast<std::size_t>(std::max<i64>(bound, 0)) + 1, 0);
  for (i64 d = 1; d <= bound; ++d) {
    for (i64 m = d; m <= bound; m += d) ++t[m];
  }
  return t;
}

i64 sigma1(i64 n) {
  require_positive(n, "sigma1");
  i64 r = 1;
  for (const auto& [p, e] : factor(n)) r *= (ipow(p, e + 1) - 1) / (p - 1);
  return r;
}

i64 euler_phi(i64 n) {
  require_positive(n, "euler_phi");
  i64 r = n;
  for (const auto& pe : factor(n)) r = r / pe.prime * (pe.prime - 1);
  return r;
}

i64 carmichael(i64 n) {
  require_positive(n, "carmichael");
  i64 r = 1;
  for (const auto& [p, e] : factor(n)) {
    i64 l = ipow(p, e - 1) * (p - 1);
    if (p == 2 && e >= 3) l /= 2;
    r = lcm(r, l);
  }
  return r;
}

Rational index_gamma0(i64 N, i64 M) {
  require_positive(N, "index_gamma0");
  require_positive(M, "index_gamma0");
  if (M % N != 0) {
    throw PreconditionError("index_gamma0: " + std::to_string(N) + " does not divide " +
                            std::to_string(M));
  }
  Rational r(M / N);
  for (i64 p : prime_divisors(M)) {
    if (N % p != 0) r *= Rational(p + 1, p);
  }
  r.canonicalize();
  return r;
}

i64 index_sl2(i64 M) {
  Rational r = index_gamma0(1, M);
  return r.get_num().get_si();
}

Rational local_factor_product(i64 n, i64 N) {
  require_positive(n, "local_factor_product");
  require_positive(N, "local_factor_product");
  Rational r(1);
  for (i64 p : prime_divisors(n)) {
    if (N % p != 0) r *= Rational(p + 1, p);
  }
  r.canonicalize();
  return r;
}

int kronecker_symbol(i64 a, i64 n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  int v = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v;
  }
  if (v > 0) {
    if (a % 2 == 0) return 0;
    if (v % 2 == 1) {
      i64 r8 = mod(a, 8);
      if (r8 == 3 || r8 == 5) result = -result;
    }
  }
  // Jacobi symbol (a/n) with n odd positive.
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      i64 r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

// ---------------------------------------------------------------------------

RootOfUnity RootOfUnity::make(i64 exponent, i64 order) {
  if (order < 1) throw PreconditionError("root of unity needs a positive order");
  exponent = mod(exponent, order);
  i64 g = gcd(exponent, order);
  if (exponent == 0) return {1, 0};
  return {order / g, exponent / g};
}

RootOfUnity RootOfUnity::operator*(const RootOfUnity& o) const {
  i64 l = lcm(order, o.order);
  return make(exponent * (l / order) + o.exponent * (l / o.order), l);
}

Scalar RootOfUnity::scalar() const {
  if ((4 * exponent) % order == 0) {
    switch ((4 * exponent) / order) {
      case 0:
        return Scalar(1);
      case 1:
        return Scalar(GaussianRational{Rational(0), Rational(1)});
      case 2:
        return Scalar(-1);
      default:
        return Scalar(GaussianRational{Rational(0), Rational(-1)});
    }
  }
  return Scalar(value<Real>());
}

DirichletCharacter DirichletCharacter::trivial(i64 modulus) {
  require_positive(modulus, "character modulus");
  return DirichletCharacter(Kind::trivial, modulus, 1, 0, {});
}

DirichletCharacter DirichletCharacter::kronecker(i64 d, i64 modulus) {
  if (d == 0) throw PreconditionError("kronecker character needs d != 0");
  i64 natural = (mod(d, 4) == 0 || mod(d, 4) == 1) ? std::abs(d) : 4 * std::abs(d);
  if (modulus == 0) modulus = natural;
  require_positive(modulus, "character modulus");
  DirichletCharacter chi(Kind::kronecker, modulus, modulus, d, {});
  // (d/.) must be periodic and multiplicative on units mod `modulus`.
  if (modulus % natural != 0) {
    for (i64 a = 1; a < modulus; ++a) {
      if (gcd(a, modulus) != 1) continue;
      if (kronecker_symbol(d, a) != kronecker_symbol(d, a + modulus)) {
        throw PreconditionError("kronecker(" + std::to_string(d) + ") is not a character mod " +
                                std::to_string(modulus));
      }
    }
  }
  chi.base_modulus_ = modulus;
  return chi;
}

DirichletCharacter DirichletCharacter::table(i64 modulus,
                                             std::vector<std::optional<RootOfUnity>> values) {
  require_positive(modulus, "character modulus");
  if (static_cast<i64>(values.size()) != modulus) {
    throw PreconditionError("character table must have one value per residue");
  }
  for (i64 a = 0; a < modulus; ++a) {
    bool unit = gcd(a, modulus) == 1;
    if (unit != values[a].has_value()) {
      throw PreconditionError("character value at " + std::to_string(a) +
                              (unit ? " must be a root of unity" : " must be zero"));
    }
  }
  if (!values[1 % modulus] || !values[1 % modulus]->is_one()) {
    throw PreconditionError("character must satisfy chi(1) = 1");
  }
  for (i64 a = 0; a < modulus; ++a) {
    if (!values[a]) continue;
    for (i64 b = a; b < modulus; ++b) {
      if (!values[b]) continue;
      if (!(*values[(a * b) % modulus] == *values[a] * *values[b])) {
        throw PreconditionError("character table is not multiplicative at (" + std::to_string(a) +
                                ", " + std::to_string(b) + ")");
      }
    }
  }
  return DirichletCharacter(Kind::table, modulus, modulus, 0, std::move(values));
}

DirichletCharacter DirichletCharacter::from_complex_table(
    i64 modulus, const std::vector<std::complex<double>>& values) {
  require_positive(modulus, "character modulus");
  if (static_cast<i64>(values.size()) != modulus) {
    throw PreconditionError("character table must have one value per residue");
  }
  const i64 order = carmichael(modulus);
  std::vector<std::optional<RootOfUnity>> roots(values.size());
  for (i64 a = 0; a < modulus; ++a) {
    std::complex<double> v = values[a];
    if (std::abs(v) < 1e-9) continue;
    double turns = std::arg(v) / (2 * pi_v<double>());
    auto e = static_cast<i64>(std::llround(turns * static_cast<double>(order)));
    RootOfUnity r = RootOfUnity::make(e, order);
    if (std::abs(v - std::complex<double>(r.value<double>().re, r.value<double>().im)) > 1e-9) {
      throw PreconditionError("character value at " + std::to_string(a) +
                              " is not a root of unity of order dividing " +
                              std::to_string(order));
    }
    roots[a] = r;
  }
  return table(modulus, std::move(roots));
}

std::optional<RootOfUnity> DirichletCharacter::base_value(i64 a) const {
  switch (kind_) {
    case Kind::trivial:
      return RootOfUnity{};
    case Kind::kronecker: {
      int k = kronecker_symbol(d_, a);
      if (k == 0) return std::nullopt;
      return k == 1 ? RootOfUnity{} : RootOfUnity{2, 1};
    }
    case Kind::table:
      return table_[mod(a, base_modulus_)];
  }
  return std::nullopt;
}

std::optional<RootOfUnity> DirichletCharacter::value(i64 a) const {
  if (gcd(mod(a, modulus_), modulus_) != 1) return std::nullopt;
  return base_value(a);
}

Scalar DirichletCharacter::scalar(i64 a) const {
  auto v = value(a);
  return v ? v->scalar() : Scalar(0);
}

bool DirichletCharacter::is_real() const {
  if (kind_ != Kind::table) return true;
  return std::all_of(table_.begin(), table_.end(),
                     [](const auto& v) { return !v || v->order <= 2; });
}

bool DirichletCharacter::is_trivial() const { return conductor() == 1; }

bool DirichletCharacter::is_even() const {
  auto v = value(modulus_ - 1);
  return !v || v->is_one();
}

i64 DirichletCharacter::conductor() const {
  for (i64 q : divisors(modulus_)) {
    bool factors = true;
    for (i64 a = 1; a < modulus_ && factors; ++a) {
      if (gcd(a, modulus_) != 1 || a % q != 1 % q) continue;
      factors = value(a)->is_one();
    }
    if (factors) return q;
  }
  return modulus_;
}

DirichletCharacter DirichletCharacter::induce(i64 M) const {
  require_positive(M, "induce_character");
  if (M % modulus_ != 0) {
    throw PreconditionError("induce_character: modulus " + std::to_string(modulus_) +
                            " does not divide " + std::to_string(M));
  }
  DirichletCharacter out = *this;
  out.modulus_ = M;
  return out;
}

bool DirichletCharacter::same_values(const DirichletCharacter& other) const {
  i64 m = lcm(modulus_, other.modulus_);
  for (i64 a = 1; a <= m; ++a) {
    if (gcd(a, m) != 1) continue;
    if (!(*value(a) == *other.value(a))) return false;
  }
  return true;
}

std::string DirichletCharacter::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::trivial:
      os << "trivial mod " << modulus_;
      break;
    case Kind::kronecker:
      os << "kronecker(" << d_ << ") mod " << modulus_;
      break;
    case Kind::table:
      os << "table mod " << base_modulus_ << " induced to " << modulus_;
      break;
  }
  return os.str();
}

}  // namespace cuspbasis
