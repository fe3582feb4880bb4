#pragma once

// Elementary multiplicative number theory and Dirichlet characters.

#include <optional>
#include <string>
#include <vector>

#include "cuspbasis/numeric.hpp"

namespace cuspbasis {

struct PrimePower {
  i64 prime;
  int exponent;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime powers in strictly increasing prime order. Empty for n = 1.
using Factorization = std::vector<PrimePower>;

i64 gcd(i64 a, i64 b);
i64 lcm(i64 a, i64 b);
/// Returns g = gcd(a, b) and sets x, y with a*x + b*y = g.
i64 extended_gcd(i64 a, i64 b, i64& x, i64& y);
i64 mod(i64 a, i64 m);
i64 ipow(i64 base, int exp);
/// base^exp without overflow; exp may be negative.
Rational rpow(i64 base, int exp);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(i64 n);
/// Trial division with Miller-Rabin certification of the cofactor.
Factorization factor(i64 n);
std::vector<i64> prime_divisors(i64 n);
std::vector<i64> primes_up_to(i64 bound);
/// Positive divisors in ascending order.
std::vector<i64> divisors(i64 n);
/// v_p(n).
int valuation(i64 n, i64 p);

i64 sigma0(i64 n);
/// sigma0(n) for n = 0..bound (entry 0 unused).
std::vector<i64> sigma0_table(i64 bound);
i64 sigma1(i64 n);
i64 euler_phi(i64 n);
/// Exponent of (Z/nZ)^*.
i64 carmichael(i64 n);

/// (Gamma0(N) : Gamma0(M)) = (M/N) prod_{p | M, p not dividing N} (1 + 1/p).
Rational index_gamma0(i64 N, i64 M);
/// (SL2(Z) : Gamma0(M)).
i64 index_sl2(i64 M);
/// prod_{p | n, p not dividing N} (1 + 1/p).
Rational local_factor_product(i64 n, i64 N);

/// Kronecker symbol (a/n) for any integer a and n.
int kronecker_symbol(i64 a, i64 n);

// ---------------------------------------------------------------------------

/// exp(2 pi i exponent / order), kept exact. Normalized so 0 <= exponent < order.
struct RootOfUnity {
  i64 order = 1;
  i64 exponent = 0;

  static RootOfUnity make(i64 exponent, i64 order);
  RootOfUnity operator*(const RootOfUnity& o) const;
  RootOfUnity conj() const { return make(-exponent, order); }
  bool is_one() const { return exponent == 0; }
  /// Exact for order dividing 4, float otherwise.
  Scalar scalar() const;
  template <class T>
  Complex<T> value() const;
  friend bool operator==(const RootOfUnity&, const RootOfUnity&) = default;
};

class DirichletCharacter {
 public:
  enum class Kind { trivial, kronecker, table };

  DirichletCharacter() : DirichletCharacter(trivial(1)) {}

  static DirichletCharacter trivial(i64 modulus);
  /// n -> (d/n). With modulus 0 the natural modulus |d| (d = 0,1 mod 4) or 4|d| is used.
  static DirichletCharacter kronecker(i64 d, i64 modulus = 0);
  /// values[a] for a = 0..modulus-1; nullopt marks a zero value.
  static DirichletCharacter table(i64 modulus, std::vector<std::optional<RootOfUnity>> values);
  /// Values given as complex numbers; each is snapped to an exact root of unity.
  static DirichletCharacter from_complex_table(i64 modulus,
                                               const std::vector<std::complex<double>>& values);

  i64 modulus() const { return modulus_; }
  Kind kind() const { return kind_; }
  i64 kronecker_d() const { return d_; }
  const std::vector<std::optional<RootOfUnity>>& table_values() const { return table_; }

  /// nullopt when gcd(a, modulus) > 1.
  std::optional<RootOfUnity> value(i64 a) const;
  Scalar scalar(i64 a) const;
  template <class T>
  Complex<T> complex_value(i64 a) const {
    auto v = value(a);
    return v ? v->template value<T>() : Complex<T>();
  }

  bool is_real() const;
  bool is_trivial() const;
  i64 conductor() const;
  /// Character mod M with the same values on residues prime to M.
  DirichletCharacter induce(i64 M) const;
  /// True if both agree on every residue prime to lcm of the moduli.
  bool same_values(const DirichletCharacter& other) const;
  bool is_even() const;

  std::string describe() const;

 private:
  DirichletCharacter(Kind kind, i64 modulus, i64 base_modulus, i64 d,
                     std::vector<std::optional<RootOfUnity>> table)
      : kind_(kind), modulus_(modulus), base_modulus_(base_modulus), d_(d), table_(std::move(table)) {}

  std::optional<RootOfUnity> base_value(i64 a) const;

  Kind kind_;
  i64 modulus_;
  i64 base_modulus_;  // modulus the defining data lives on; divides modulus_
  i64 d_;
  std::vector<std::optional<RootOfUnity>> table_;
};

template <class T>
Complex<T> RootOfUnity::value() const {
  using std::cos;
  using std::sin;
  switch ((4 * exponent) % order == 0 ? (4 * exponent) / order : -1) {
    case 0:
      return Complex<T>(T(1), T(0));
    case 1:
      return Complex<T>(T(0), T(1));
    case 2:
      return Complex<T>(T(-1), T(0));
    case 3:
      return Complex<T>(T(0), T(-1));
    default:
      break;
  }
  T angle = 2 * pi_v<T>() * T(exponent) / T(order);
  return Complex<T>(T(cos(angle)), T(sin(angle)));
}

}  // namespace cuspbasis
