#include "doctest.h"

#include "cuspbasis/arith.hpp"
#include "cuspbasis/errors.hpp"

using namespace cuspbasis;

namespace {

i64 naive_sigma0(i64 n) {
  i64 c = 0;
  for (i64 d = 1; d <= n; ++d) c += n % d == 0;
  return c;
}

// Euler's criterion, p an odd prime.
int legendre_by_euler(i64 a, i64 p) {
  i64 r = 1, base = mod(a, p), e = (p - 1) / 2;
  while (e > 0) {
    if (e & 1) r = r * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return r == 0 ? 0 : (r == 1 ? 1 : -1);
}

void check_multiplicative(const DirichletCharacter& chi) {
  const i64 m = chi.modulus();
  for (i64 a = 0; a < m; ++a) {
    auto va = chi.value(a);
    CHECK(va.has_value() == (gcd(a, m) == 1));
    for (i64 b = 0; b < m; ++b) {
      auto vb = chi.value(b);
      auto vab = chi.value(a * b);
      if (va && vb) {
        REQUIRE(vab.has_value());
        CHECK(*vab == *va * *vb);
      } else {
        CHECK_FALSE(vab.has_value());
      }
    }
  }
  CHECK(chi.value(1)->is_one());
}

}  // namespace

TEST_CASE("sigma0 values") {
  CHECK(sigma0(1) == 1);
  CHECK(sigma0(12) == 6);
  for (i64 p : primes_up_to(200)) CHECK(sigma0(p) == 2);
  CHECK_THROWS_AS(sigma0(0), PreconditionError);
  auto table = sigma0_table(500);
  for (i64 n = 1; n <= 500; ++n) CHECK(table[n] == naive_sigma0(n));
}

TEST_CASE("sigma0 is multiplicative on coprime pairs") {
  for (i64 m = 1; m <= 100; ++m) {
    for (i64 n = 1; n <= 100; ++n) {
      if (gcd(m, n) == 1) CHECK(sigma0(m * n) == sigma0(m) * sigma0(n));
    }
  }
}

TEST_CASE("factorization reconstructs its input") {
  for (i64 n : {1LL, 2LL, 360LL, 1000003LL, 999999999989LL, 600851475143LL, 1LL << 40}) {
    i64 prod = 1;
    i64 last = 1;
    for (const auto& [p, e] : factor(n)) {
      CHECK(is_prime(p));
      CHECK(p > last);
      last = p;
      prod *= ipow(p, e);
    }
    CHECK(prod == n);
  }
  CHECK(is_prime(999999999989LL));
  CHECK_FALSE(is_prime(3215031751LL));  // strong pseudoprime to bases 2, 3, 5, 7
}

TEST_CASE("index_gamma0") {
  CHECK(index_gamma0(1, 2) == 3);
  CHECK(index_gamma0(2, 4) == 2);
  CHECK(index_gamma0(1, 11) == 12);
  CHECK_THROWS_AS(index_gamma0(3, 4), PreconditionError);
  CHECK(index_sl2(6) == 12);
}

TEST_CASE("index_gamma0 is multiplicative in towers") {
  for (i64 L = 1; L <= 120; ++L) {
    for (i64 M : divisors(L)) {
      for (i64 N : divisors(M)) {
        Rational a = index_gamma0(N, M) * index_gamma0(M, L);
        CHECK(a == index_gamma0(N, L));
        CHECK(index_gamma0(N, M).get_den() == 1);
      }
    }
  }
}

TEST_CASE("local_factor_product") {
  CHECK(local_factor_product(1, 7) == 1);
  CHECK(local_factor_product(2, 1) == Rational(3, 2));
  CHECK(local_factor_product(12, 3) == Rational(3, 2));
}

TEST_CASE("kronecker symbol agrees with Euler's criterion") {
  for (i64 p : primes_up_to(60)) {
    if (p == 2) continue;
    for (i64 a = -70; a <= 70; ++a) CHECK(kronecker_symbol(a, p) == legendre_by_euler(a, p));
  }
  CHECK(kronecker_symbol(-4, 3) == -1);
  CHECK(kronecker_symbol(5, 2) == -1);
  CHECK(kronecker_symbol(1, 2) == 1);
}

TEST_CASE("induced characters") {
  auto triv = DirichletCharacter::trivial(1).induce(4);
  CHECK(triv.value(1)->is_one());
  CHECK(triv.value(3)->is_one());
  CHECK_FALSE(triv.value(2).has_value());
  CHECK_FALSE(triv.value(4).has_value());

  // (-4/n) is 1 for n = 1 mod 4 and -1 for n = 3 mod 4.
  auto chi = DirichletCharacter::kronecker(-4).induce(8);
  CHECK(chi.modulus() == 8);
  for (i64 n : {1, 3, 5, 7}) {
    int expect = n % 4 == 1 ? 1 : -1;
    CHECK(chi.scalar(n) == Scalar(expect));
  }

  // The character mod 5 with chi(2) = i.
  std::vector<std::optional<RootOfUnity>> vals(5);
  vals[1] = RootOfUnity::make(0, 4);
  vals[2] = RootOfUnity::make(1, 4);
  vals[4] = RootOfUnity::make(2, 4);
  vals[3] = RootOfUnity::make(3, 4);
  auto tab = DirichletCharacter::table(5, vals);
  auto lifted = tab.induce(10);
  CHECK(*lifted.value(7) == *tab.value(2));
  CHECK_FALSE(lifted.value(2).has_value());
  CHECK_THROWS_AS(tab.induce(12), PreconditionError);
  CHECK(tab.conductor() == 5);
  CHECK_FALSE(tab.is_real());
}

TEST_CASE("constructed characters are completely multiplicative") {
  check_multiplicative(DirichletCharacter::trivial(12));
  for (i64 d : {-4, -3, 5, 8, -8, 12, -7, 13}) {
    auto chi = DirichletCharacter::kronecker(d);
    check_multiplicative(chi);
    check_multiplicative(chi.induce(chi.modulus() * 3));
  }
  std::vector<std::complex<double>> v(7);
  // Order-6 character mod 7 generated by 3.
  i64 g = 1;
  for (int e = 0; e < 6; ++e) {
    v[g] = std::polar(1.0, 2 * pi_v<double>() * e / 6);
    g = g * 3 % 7;
  }
  auto chi7 = DirichletCharacter::from_complex_table(7, v);
  check_multiplicative(chi7);
  CHECK(chi7.conductor() == 7);
  CHECK(DirichletCharacter::kronecker(-4).induce(12).conductor() == 4);
}

TEST_CASE("malformed character tables are rejected") {
  std::vector<std::optional<RootOfUnity>> vals(4);
  vals[1] = RootOfUnity{};
  vals[3] = RootOfUnity{3, 1};
  CHECK_THROWS_AS(DirichletCharacter::table(4, vals), PreconditionError);
  vals[3] = RootOfUnity{2, 1};
  vals[2] = RootOfUnity{};
  CHECK_THROWS_AS(DirichletCharacter::table(4, vals), PreconditionError);
}
