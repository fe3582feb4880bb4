#include "doctest.h"

#include <cmath>

#include "cuspbasis/errors.hpp"
#include "cuspbasis/petersson.hpp"

using namespace cuspbasis;

namespace {

// <Delta, Delta> with measure dx dy / y^2 over SL2(Z) \ H, to 19 digits.
constexpr double kDeltaNorm = 1.0353620568043209223e-6;

const QSeries& delta() { return *embedded("delta").qexp; }
const QSeries& f11() { return *embedded("11a").qexp; }

double re(const PeterssonResult& r) { return r.value.re.convert_to<double>(); }
double im(const PeterssonResult& r) { return r.value.im.convert_to<double>(); }

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {1, 2, 5, 12, 33}) {
    auto [x, w] = gauss_legendre<double>(n);
    double sw = 0;
    for (double v : w) sw += v;
    CHECK(sw == doctest::Approx(2).epsilon(1e-14));
    // Exact for degree 2n - 1.
    for (int d = 0; d < 2 * n; ++d) {
      double s = 0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(std::abs(s - exact) < 1e-13);
    }
    for (std::size_t i = 1; i < x.size(); ++i) CHECK(x[i - 1] < x[i]);
  }
  PrecisionGuard g(160);
  auto [x, w] = gauss_legendre<Real>(16);
  Real s = 0;
  for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * pow(x[i], 30);
  CHECK(abs(s - Real(2) / 31) < Real(1e-44));
  CHECK_THROWS_AS(gauss_legendre<double>(0), PreconditionError);
}

TEST_CASE("norm of Delta is independent of the level") {
  for (i64 M : {1, 2, 3, 6}) {
    auto r = petersson_product(delta(), delta(), M);
    CAPTURE(M);
    CHECK(std::abs(re(r) / kDeltaNorm - 1) < 1e-15);
    CHECK(im(r) == 0);
    CHECK(r.index == index_sl2(M));
    CHECK(r.error < 1e-12 * kDeltaNorm * 100);
    CHECK(std::abs(re(r) - kDeltaNorm) <= r.error + 1e-30);
  }
}

TEST_CASE("node doubling is stable") {
  QuadratureConfig a, b;
  a.nodes = 16;
  b.nodes = 32;
  for (const auto& [f, M] : {std::pair{&delta(), i64{6}}, std::pair{&f11(), i64{22}}}) {
    const double x = re(petersson_product(*f, *f, M, a));
    const double y = re(petersson_product(*f, *f, M, b));
    CHECK(std::abs(x - y) / std::abs(y) < 1e-6);
  }
}

TEST_CASE("sesquilinear structure") {
  const QSeries g = apply_V(delta(), 2);
  auto fg = petersson_product(delta(), g, 2);
  auto gf = petersson_product(g, delta(), 2);
  CHECK(re(fg) == doctest::Approx(re(gf)).epsilon(1e-20));
  CHECK(im(fg) == doctest::Approx(-im(gf)).epsilon(1e-20));
  CHECK(re(petersson_product(g, g, 2)) > 0);

  // <f + 3i g, f> = <f, f> + 3i <g, f>.
  const QSeries h = linear_combination({{Scalar(1), delta()}, {Scalar(GaussianRational{0, 3}), g}});
  auto m = petersson_matrix({delta(), g, h}, 2);
  const ComplexReal lhs = m[2][0].value;
  const ComplexReal rhs = m[0][0].value + ComplexReal(Real(0), Real(3)) * m[1][0].value;
  CHECK(abs(lhs - rhs).convert_to<double>() < 1e-25);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) CHECK(abs(m[i][j].value - conj(m[j][i].value)).convert_to<double>() == 0);
  }

  auto zero = petersson_product(delta(), QSeries::zero(100, Rational(12), 1, DirichletCharacter::trivial(1)), 1);
  CHECK(zero.value.re == 0);
  CHECK(zero.value.im == 0);
  CHECK(zero.error == 0);
}

TEST_CASE("numeric Gram entries") {
  for (i64 M : {2, 3, 6}) {
    std::vector<std::pair<i64, i64>> pairs;
    for (auto [m, n] : std::vector<std::pair<i64, i64>>{{1, 2}, {2, 2}, {1, 3}, {2, 3}}) {
      if (M % m == 0 && M % n == 0) pairs.emplace_back(m, n);
    }
    auto rep = verify_gram_numeric(embedded("delta"), M, pairs);
    CAPTURE(M);
    CHECK(rep.passes());
    CHECK(std::abs(re(rep.norm) / kDeltaNorm - 1) < 1e-15);
    for (const auto& r : rep.rows) CHECK(r.relative_deviation < 1e-15);
  }
  auto r11 = verify_gram_numeric(embedded("11a"), 22, {{1, 2}, {2, 2}});
  CHECK(r11.passes());
  CHECK(r11.rows[0].predicted.rational() == Rational(-1, 3));
  for (const auto& r : r11.rows) CHECK(r.relative_deviation < 1e-15);

  CHECK_THROWS_AS(verify_gram_numeric(embedded("delta"), 6, {{1, 4}}), PreconditionError);
  CHECK_THROWS_AS(verify_gram_numeric(embedded("11a"), 12, {{1, 1}}), PreconditionError);
}

TEST_CASE("odd weight with a nontrivial character") {
  const NewformRecord rec = record_from_expansion("16a", eta_product({{4, 6}}, 8000));
  auto rep = verify_gram_numeric(rec, 32, {{1, 2}, {2, 2}});
  CHECK(rep.passes());
  CHECK(re(rep.norm) > 0);
  for (const auto& r : rep.rows) CHECK(r.relative_deviation < 1e-12);
}

TEST_CASE("hardware doubles agree with MPFR") {
  QuadratureConfig d;
  d.precision_bits = 53;
  auto x = petersson_product(delta(), apply_V(delta(), 3), 3, d);
  auto y = petersson_product(delta(), apply_V(delta(), 3), 3);
  CHECK(std::abs(re(x) - re(y)) < 1e-12 * kDeltaNorm);
}

TEST_CASE("trace adjointness") {
  auto rep = verify_trace_skp(delta(), apply_V(delta(), 2), 1, 2);
  CHECK(rep.pass);
  CHECK(rep.relative_deviation < 1e-15);
  CHECK(re(rep.lhs) / kDeltaNorm == doctest::Approx(-1.0 / 256).epsilon(1e-14));

  auto r11 = verify_trace_skp(f11(), apply_V(f11(), 2), 11, 22);
  CHECK(r11.pass);
  CHECK(r11.relative_deviation < 1e-15);
  CHECK_THROWS_AS(verify_trace_skp(delta(), delta(), 2, 3), PreconditionError);
}

TEST_CASE("preconditions") {
  QuadratureConfig bad;
  bad.Y = 1.5;
  CHECK_THROWS_AS(petersson_product(delta(), delta(), 1, bad), PreconditionError);
  bad = {};
  bad.nodes = 1;
  CHECK_THROWS_AS(petersson_product(delta(), delta(), 1, bad), PreconditionError);
  CHECK_THROWS_AS(petersson_product(delta(), f11(), 11, {}), PreconditionError);       // weights
  CHECK_THROWS_AS(petersson_product(f11(), f11(), 12, {}), PreconditionError);         // level
  CHECK_THROWS_AS(petersson_product(delta(), delta(), 211, {}), PreconditionError);    // index 212
  // A short expansion fails before integrating and reports the height.
  try {
    petersson_product(delta().with_truncation(6), delta().with_truncation(6), 6);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.height() < 1);
    CHECK(e.available() == 6);
  }
}
