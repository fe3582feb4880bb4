#include "doctest.h"

#include <cmath>
#include <random>

#include "cuspbasis/errors.hpp"
#include "cuspbasis/qseries.hpp"

using namespace cuspbasis;

namespace {

// q^h prod_i prod_n (1 - q^{s_i n})^{e_i}, e_i >= 0, by schoolbook multiplication.
std::vector<Integer> naive_eta(const std::vector<EtaFactor>& spec, i64 T) {
  i64 h24 = 0;
  for (auto [s, e] : spec) h24 += s * e;
  const i64 h = h24 / 24;
  std::vector<Integer> c(T + 1);
  c[0] = 1;
  for (auto [s, e] : spec) {
    for (i64 r = 0; r < e; ++r) {
      for (i64 n = 1; s * n <= T; ++n) {
        std::vector<Integer> next = c;
        for (i64 j = s * n; j <= T; ++j) next[j] -= c[j - s * n];
        c = std::move(next);
      }
    }
  }
  std::vector<Integer> out(T + 1);
  for (i64 j = 0; j + h <= T; ++j) out[j + h] = c[j];
  return out;
}

QSeries random_series(std::mt19937_64& rng, i64 T) {
  std::uniform_int_distribution<int> num(-50, 50), den(1, 9);
  std::vector<Scalar> a(T + 1);
  for (i64 n = 1; n <= T; ++n) a[n] = Scalar(Rational(num(rng), den(rng)));
  return QSeries(std::move(a), Rational(4), 1, DirichletCharacter::trivial(1));
}

bool same_coeffs(const QSeries& f, const QSeries& g, i64 upto) {
  for (i64 n = 0; n <= upto; ++n) {
    if (!(f.coeff(n) == g.coeff(n))) return false;
  }
  return true;
}

const QSeries& delta_series() {
  static const QSeries d = eta_product({{1, 24}}, 1200);
  return d;
}

}  // namespace

TEST_CASE("eta products match schoolbook multiplication") {
  const auto& delta = delta_series();
  const long expect[] = {0, 1, -24, 252, -1472, 4830, -6048, -16744};
  for (int n = 0; n <= 7; ++n) CHECK(delta.coeff(n) == Scalar(expect[n]));
  auto oracle = naive_eta({{1, 24}}, 60);
  for (i64 n = 0; n <= 60; ++n) CHECK(delta.coeff(n) == Scalar(oracle[n]));
  CHECK(delta.level() == 1);
  CHECK(delta.integral_weight() == 12);

  auto f11 = eta_product({{1, 2}, {11, 2}}, 80);
  const long expect11[] = {0, 1, -2, -1, 2, 1, 2, -2};
  for (int n = 0; n <= 7; ++n) CHECK(f11.coeff(n) == Scalar(expect11[n]));
  auto oracle11 = naive_eta({{1, 2}, {11, 2}}, 80);
  for (i64 n = 0; n <= 80; ++n) CHECK(f11.coeff(n) == Scalar(oracle11[n]));
  CHECK(f11.level() == 11);
  CHECK(f11.character().is_trivial());

  auto d2 = eta_product({{2, 24}}, 10);
  CHECK(d2.coeff(1).is_zero());
  CHECK(d2.coeff(2) == Scalar(1));
  CHECK(d2.coeff(4) == Scalar(-24));
}

TEST_CASE("eta quotients divide by the pentagonal series") {
  // eta^30 / eta^6 = eta^24.
  auto quotient = eta_product({{1, 30}, {1, -6}}, 40);
  auto delta = eta_product({{1, 24}}, 40);
  CHECK(same_coeffs(quotient, delta, 40));
}

TEST_CASE("eta_product rejects bad specifications") {
  CHECK_THROWS_AS(eta_product({{1, 3}}, 10), PreconditionError);    // weight 3/2
  CHECK_THROWS_AS(eta_product({{1, 2}}, 10), PreconditionError);    // leading power 1/12
  CHECK_THROWS_AS(eta_product({{1, -24}}, 10), PreconditionError);  // negative weight
}

TEST_CASE("V and U shift indices") {
  const auto& delta = delta_series();
  CHECK(same_coeffs(apply_V(delta, 1), delta, delta.truncation()));
  auto v2 = apply_V(delta, 2);
  CHECK(v2.coeff(2) == Scalar(1));
  CHECK(v2.coeff(3).is_zero());
  CHECK(v2.coeff(4) == Scalar(-24));
  CHECK(v2.truncation() == 2 * delta.truncation());
  CHECK(v2.level() == 2);

  std::vector<Scalar> a(10);
  a[1] = Scalar(1);
  a[3] = Scalar(5);
  QSeries g(a, Rational(2), 1, DirichletCharacter::trivial(1));
  auto u3 = apply_U(g, 3);
  CHECK(u3.truncation() == 3);
  CHECK(u3.coeff(1) == Scalar(5));
  CHECK(u3.coeff(2).is_zero());
  CHECK(u3.coeff(3).is_zero());

  auto back = apply_U(apply_V(delta, 4), 4);
  CHECK(same_coeffs(back, delta, delta.truncation()));
}

TEST_CASE("U and V composition laws on random series") {
  std::mt19937_64 rng(20240611);
  const i64 T = 300;
  for (int trial = 0; trial < 3; ++trial) {
    auto f = random_series(rng, T);
    for (i64 m = 1; m <= 20; ++m) {
      CHECK(same_coeffs(apply_U(apply_V(f, m), m), f, T));
    }
    for (i64 m = 1; m <= 12; ++m) {
      for (i64 n = 1; n <= 12; ++n) {
        auto vv = apply_V(apply_V(f, m), n);
        auto v = apply_V(f, m * n);
        CHECK(vv.truncation() == v.truncation());
        CHECK(same_coeffs(vv, v, v.truncation()));
        auto uu = apply_U(apply_U(f, m), n);
        auto u = apply_U(f, m * n);
        CHECK(uu.truncation() == u.truncation());
        CHECK(same_coeffs(uu, u, u.truncation()));
        // U on a V image with a partially cancelling stride.
        auto mixed = apply_U(apply_V(f, m), n);
        for (i64 k = 1; k <= mixed.truncation(); ++k) {
          Scalar expect = (k * n) % m == 0 ? f.coeff(k * n / m) : Scalar(0);
          CHECK(mixed.coeff(k) == expect);
        }
      }
    }
  }
}

TEST_CASE("Hecke operators on eta products") {
  const auto& delta = delta_series();
  auto t2 = hecke_Tp(delta, 2);
  CHECK(t2.truncation() == 600);
  for (i64 n = 1; n <= 50; ++n) CHECK(t2.coeff(n) == Scalar(-24) * delta.coeff(n));

  auto f11 = eta_product({{1, 2}, {11, 2}}, 60);
  CHECK(hecke_Tp(f11, 2).coeff(1) == Scalar(-2));
  // p | N: only the a(pn) term survives.
  auto t11 = hecke_Tp(f11, 11);
  CHECK(t11.coeff(1) == f11.coeff(11));
  CHECK(t11.coeff(2) == f11.coeff(22));
}

TEST_CASE("Hecke operators for distinct primes commute") {
  auto f11 = eta_product({{1, 2}, {11, 2}}, 200 * 35);
  const auto& delta = eta_product({{1, 24}}, 200 * 15);
  for (auto [p, q] : {std::pair{2, 3}, {3, 5}, {2, 5}}) {
    auto a = hecke_Tp(hecke_Tp(delta, p), q);
    auto b = hecke_Tp(hecke_Tp(delta, q), p);
    CHECK(same_coeffs(a, b, 200));
  }
  for (auto [p, q] : {std::pair{2, 3}, {5, 7}, {3, 7}}) {
    auto a = hecke_Tp(hecke_Tp(f11, p), q);
    auto b = hecke_Tp(hecke_Tp(f11, q), p);
    CHECK(same_coeffs(a, b, 200));
  }
}

TEST_CASE("growth constants bound stored coefficients") {
  const auto& delta = delta_series();
  CHECK(delta.measured_growth() <= 1 + 1e-9);
  CHECK(delta.growth() == doctest::Approx(2 * delta.measured_growth()));
  auto u = apply_U(delta, 6);
  CHECK(u.growth() >= u.measured_growth());
  auto t = hecke_Tp(delta, 3);
  CHECK(t.growth() >= t.measured_growth());
  std::vector<Scalar> a(4);
  a[1] = Scalar(10);
  CHECK_THROWS_AS(QSeries(a, Rational(2), 1, DirichletCharacter::trivial(1), 1.0),
                  PreconditionError);
}

TEST_CASE("evaluation") {
  auto zero = QSeries::zero(50, Rational(12), 1, DirichletCharacter::trivial(1));
  auto c0 = evaluate(zero, ComplexReal(Real(0), Real(1)), 1e-10);
  CHECK(c0.value.re == 0);
  CHECK(c0.tail == 0);

  // Direct 200-term sum at z = i.
  auto oracle = naive_eta({{1, 24}}, 200);
  long double direct = 0;
  for (int n = 1; n <= 200; ++n) {
    direct += oracle[n].get_d() * std::exp(-2 * 3.14159265358979323846L * n);
  }
  CHECK(static_cast<double>(direct) == doctest::Approx(0.00178536985064).epsilon(1e-10));

  const auto& delta = delta_series();
  auto c = evaluate(delta, ComplexReal(Real(0), Real(1)), 1e-12);
  CHECK(c.value.re.convert_to<double>() == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
  CHECK(abs(c.value.im) < 1e-30);
  CHECK(c.tail < 1e-12);
  CHECK(c.terms < 20);

  auto short_delta = delta.with_truncation(100);
  CHECK_THROWS_AS(evaluate(short_delta, ComplexReal(Real(0), Real("0.01")), 1e-6), TruncationError);
  CHECK_THROWS_AS(evaluate(delta, ComplexReal(Real(0), Real(0)), 1e-6), DomainError);

  // Conjugate symmetry for real coefficients.
  for (double x : {0.1, -0.37, 0.5}) {
    auto a = evaluate(delta, ComplexReal(Real(x), Real("0.3")), 1e-20);
    auto b = evaluate(delta, ComplexReal(Real(-x), Real("0.3")), 1e-20);
    CHECK(abs(a.value - conj(b.value)) < 1e-25);
  }
}

TEST_CASE("double and multiprecision evaluation agree") {
  const auto& delta = delta_series();
  SeriesEvaluator<double> ed(apply_V(delta, 3));
  SeriesEvaluator<Real> er(apply_V(delta, 3));
  Complex<double> zd(0.21, 0.17);
  ComplexReal zr(Real("0.21"), Real("0.17"));
  auto vd = ed(zd, 1e-14);
  auto vr = er(zr, 1e-14);
  CHECK(vd.re == doctest::Approx(vr.re.convert_to<double>()).epsilon(1e-9));
  CHECK(vd.im == doctest::Approx(vr.im.convert_to<double>()).epsilon(1e-9));
}

TEST_CASE("tail plan is minimal") {
  for (double y : {0.05, 0.3, 1.0, 4.0}) {
    auto plan = plan_terms(2.0, 12, y, 1e-15);
    CHECK(plan.tail < 1e-15);
    if (plan.terms > static_cast<i64>(std::ceil(12 / (4 * pi_v<double>() * y)))) {
      auto before = plan_terms(2.0, 12, y, plan.tail * 1.0000001);
      CHECK(before.terms <= plan.terms);
    }
  }
}
