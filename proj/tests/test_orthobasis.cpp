#include "doctest.h"

#include <cmath>
#include <complex>

#include "cuspbasis/errors.hpp"
#include "cuspbasis/orthobasis.hpp"

using namespace cuspbasis;

namespace {

Rational q(long a, long b = 1) { return Rational(a, b); }

// eta(4z)^6: weight 3, level 16, odd quadratic character. Exercises the
// irrational factors p^{jk/2}.
const NewformRecord& weight3() {
  static const NewformRecord rec = record_from_expansion("16a", eta_product({{4, 6}}, 2000));
  return rec;
}

std::vector<NewformRecord> all_forms() {
  std::vector<NewformRecord> out;
  for (const auto& n : embedded_names()) out.push_back(embedded(n));
  out.push_back(weight3());
  return out;
}

}  // namespace

TEST_CASE("prime basis examples") {
  EigenvalueSystem delta(embedded("delta"));
  auto b1 = prime_basis(delta, 2, 1);
  REQUIRE(b1.size() == 2);
  CHECK(b1[0].coefficient(0) == Scalar(1));
  CHECK(b1[0].norm_sq == Scalar(1));
  CHECK(b1[1].coefficient(1) == Scalar(64));
  CHECK(b1[1].coefficient(0) == Scalar(q(1, 4)));
  CHECK(b1[1].norm_sq == Scalar(q(15, 16)));

  auto b2 = prime_basis(delta, 2, 2);
  REQUIRE(b2.size() == 3);
  CHECK(b2[2].coefficient(2) == Scalar(4096));
  CHECK(b2[2].coefficient(1) == Scalar(24));
  CHECK(b2[2].coefficient(0) == Scalar(q(1, 2)));
  CHECK(b2[2].norm_sq == Scalar(q(45, 64)));

  EigenvalueSystem f11(embedded("11a"));
  auto c = prime_basis(f11, 11, 1);
  REQUIRE(c.size() == 2);
  CHECK(c[1].coefficient(1) == Scalar(11));
  CHECK(c[1].coefficient(0) == Scalar(q(-1, 11)));
  CHECK(c[1].norm_sq == Scalar(q(120, 121)));

  auto z = prime_basis(f11, 3, 0);
  REQUIRE(z.size() == 1);
  CHECK(z[0].norm_sq == Scalar(1));
  CHECK_THROWS_AS(prime_basis(f11, 4, 1), PreconditionError);
}

TEST_CASE("prime basis structure") {
  for (const auto& rec : all_forms()) {
    EigenvalueSystem sys(rec);
    for (i64 p : {2, 3, 5, 7, 11}) {
      auto b = prime_basis(sys, p, 5);
      for (const auto& g : b) {
        CAPTURE(rec.id);
        CAPTURE(p);
        CAPTURE(g.j);
        CHECK(g.values.size() <= 3);
        CHECK(g.values.back().first == g.j);
        CHECK(g.values.back().second == Scalar(1));
        CHECK(g.scale_sq == rpow(p, g.j * sys.weight()));
        CHECK(g.norm_sq.abs() > 0);
        CHECK(g.norm_sq.to_complex().real() > 0);
      }
    }
  }
  // Odd weight: the leading coefficient 2^{3/2} is irrational.
  EigenvalueSystem w3(weight3());
  auto b = prime_basis(w3, 5, 1);
  CHECK_FALSE(b[1].coefficient(1).is_exact());
  CHECK(b[1].coefficient(1).abs() == doctest::Approx(std::pow(5.0, 1.5)));
}

TEST_CASE("assembled bases") {
  std::vector<NewformRecord> delta = {embedded("delta")};
  auto m2 = assemble_full_basis(delta, 2, 12, DirichletCharacter::trivial(1));
  REQUIRE(m2.elements.size() == 2);
  CHECK(m2.elements[0].coefficients() == std::map<i64, Scalar>{{1, Scalar(1)}});
  CHECK(m2.elements[1].coefficient(2) == Scalar(64));
  CHECK(m2.elements[1].coefficient(1) == Scalar(q(1, 4)));

  auto m6 = assemble_full_basis(delta, 6, 12, DirichletCharacter::trivial(1));
  REQUIRE(m6.elements.size() == 4);
  using Ex = std::vector<std::pair<i64, int>>;
  CHECK(m6.elements[0].exponents == Ex{{2, 0}, {3, 0}});
  CHECK(m6.elements[1].exponents == Ex{{2, 0}, {3, 1}});
  CHECK(m6.elements[2].exponents == Ex{{2, 1}, {3, 0}});
  CHECK(m6.elements[3].exponents == Ex{{2, 1}, {3, 1}});
  CHECK(m6.elements[3].coefficient(6) == Scalar(64 * 729));
  // Tensor product: coefficients multiply, norms multiply.
  EigenvalueSystem sys(delta[0]);
  auto g2 = prime_basis(sys, 2, 1)[1];
  auto g3 = prime_basis(sys, 3, 1)[1];
  CHECK(m6.elements[3].coefficient(3) == g2.coefficient(0) * g3.coefficient(1));
  CHECK(m6.elements[3].coefficient(1) == g2.coefficient(0) * g3.coefficient(0));
  CHECK(m6.elements[3].norm_sq == g2.norm_sq * g3.norm_sq);

  std::vector<NewformRecord> f11 = {embedded("11a")};
  auto m11 = assemble_full_basis(f11, 11, 2, DirichletCharacter::trivial(1));
  REQUIRE(m11.elements.size() == 1);
  CHECK(m11.elements[0].exponents.empty());
  CHECK(m11.elements[0].norm_sq == Scalar(1));

  // Element count equals the translate count.
  for (i64 M : {11, 22, 33, 44, 88, 132}) {
    auto b = assemble_full_basis(f11, M, 2, DirichletCharacter::trivial(1));
    CHECK(b.elements.size() == translates_basis(f11, M, 2, DirichletCharacter::trivial(1)).dimension());
  }
}

TEST_CASE("exact orthogonality for M/N <= 48") {
  for (const auto& rec : all_forms()) {
    EigenvalueSystem sys(rec);
    for (i64 Q = 1; Q <= 48; ++Q) {
      const i64 M = Q * rec.level;
      auto G = gram_matrix(sys, M);
      auto basis = form_basis(sys, M);
      REQUIRE(basis.size() == G.size());
      auto rep = gram_schmidt_check(G, basis);
      CAPTURE(rec.id);
      CAPTURE(M);
      CHECK(rep.exact);
      CHECK(rep.all_zero());
      CHECK(rep.count == basis.size());
    }
  }
}

TEST_CASE("the named levels") {
  EigenvalueSystem delta(embedded("delta"));
  for (i64 M : {1, 2, 3, 4, 6, 8, 12, 16, 24, 48}) {
    auto rep = gram_schmidt_check(gram_matrix(delta, M), form_basis(delta, M));
    CHECK(rep.all_zero());
  }
  EigenvalueSystem f11(embedded("11a"));
  for (i64 Q : {1, 2, 4}) {
    auto rep = gram_schmidt_check(gram_matrix(f11, 11 * Q), form_basis(f11, 11 * Q));
    CHECK(rep.all_zero());
  }
}

TEST_CASE("fault injection") {
  EigenvalueSystem delta(embedded("delta"));
  auto G = gram_matrix(delta, 12);
  auto basis = form_basis(delta, 12);
  auto bad = basis;
  bad[2].values[1] += Scalar(q(1, 1000));
  auto rep = gram_schmidt_check(G, bad);
  CHECK_FALSE(rep.all_zero());
  CHECK(rep.nonzero_off_diagonal > 0);
  CHECK(rep.max_off_diagonal > 0);

  auto wrong_norm = basis;
  wrong_norm[1].norm_sq = Scalar(q(1, 2));
  auto rn = gram_schmidt_check(G, wrong_norm);
  CHECK(rn.nonzero_norm_discrepancy == 1);
  CHECK(rn.nonzero_off_diagonal == 0);

  auto foreign = form_basis(delta, 5);
  CHECK_THROWS_AS(gram_schmidt_check(G, foreign), PreconditionError);
}

TEST_CASE("flags agree with numeric Gram-Schmidt") {
  // Classical Gram-Schmidt on f~|V_{p^i}, i = 0..r, in double precision.
  for (const auto& rec : all_forms()) {
    EigenvalueSystem sys(rec);
    for (i64 p : {2, 3, 5}) {
      const int r = 4;
      const i64 M = rec.level * ipow(p, r);
      auto G = gram_matrix(sys, M);
      REQUIRE(G.size() == static_cast<std::size_t>(r + 1));
      // Work in the rescaled basis p^{ik/2} f~|V_{p^i} so every entry is O(1).
      std::vector<double> s(r + 1);
      for (int i = 0; i <= r; ++i) s[i] = std::pow(static_cast<double>(p), i * sys.weight() / 2.0);
      using C = std::complex<double>;
      auto ip = [&](const std::vector<C>& a, const std::vector<C>& b) {
        C acc = 0;
        for (int i = 0; i <= r; ++i) {
          for (int j = 0; j <= r; ++j) acc += a[i] * s[i] * G.entries[i][j].to_complex() * s[j] * std::conj(b[j]);
        }
        return acc;
      };
      std::vector<std::vector<C>> u;
      for (int j = 0; j <= r; ++j) {
        std::vector<C> v(r + 1, 0);
        v[j] = 1;
        for (const auto& w : u) {
          C c = ip(v, w) / ip(w, w);
          for (int i = 0; i <= r; ++i) v[i] -= c * w[i];
        }
        u.push_back(v);
      }
      auto basis = prime_basis(sys, p, r);
      for (int j = 0; j <= r; ++j) {
        // Exact flag: g_j is supported on i <= j with a nonzero top coefficient.
        std::vector<C> c(r + 1, 0);
        for (const auto& [i, v] : basis[j].values) {
          CHECK(i <= j);
          c[i] = basis[j].coefficient(i).to_complex() / s[i];
        }
        CHECK(std::abs(c[j]) > 0);
        // Parallel to the numeric Gram-Schmidt vector: |<c,u>|^2 = <c,c><u,u>.
        const double lhs = std::norm(ip(c, u[j]));
        const double rhs = (ip(c, c) * ip(u[j], u[j])).real();
        CAPTURE(rec.id);
        CAPTURE(p);
        CAPTURE(j);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
        CHECK(ip(c, c).real() == doctest::Approx(basis[j].norm_sq.to_complex().real()).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("orthonormalize") {
  EigenvalueSystem delta(embedded("delta"));
  auto basis = form_basis(delta, 2);
  auto rel = orthonormalize(basis, BasisMode::relative);
  CHECK(rel[0].coefficient(1) == Scalar(1));
  CHECK(rel[0].norm_sq == Scalar(1));
  const double s = std::sqrt(15.0 / 16.0);
  CHECK(rel[1].coefficient(2).to_complex().real() == doctest::Approx(64 / s).epsilon(1e-14));
  CHECK(rel[1].coefficient(1).to_complex().real() == doctest::Approx(0.25 / s).epsilon(1e-14));
  CHECK(rel[1].scale_sq == Rational(4096) / q(15, 16));
  auto rep = gram_schmidt_check(gram_matrix(delta, 2), rel);
  CHECK(rep.exact);
  CHECK(rep.all_zero());

  const double norm = 1.035362e-6;
  auto abs_mode = orthonormalize(basis, BasisMode::absolute, {{"delta", norm}});
  CHECK(abs_mode[1].coefficient(2).to_complex().real() ==
        doctest::Approx(64 / (s * std::sqrt(norm))).epsilon(1e-14));
  CHECK(abs_mode[0].coefficient(1).to_complex().real() == doctest::Approx(1 / std::sqrt(norm)).epsilon(1e-14));
  CHECK_THROWS_AS(orthonormalize(basis, BasisMode::absolute), PreconditionError);
  CHECK_THROWS_AS(gram_schmidt_check(gram_matrix(delta, 2), abs_mode), PreconditionError);
  CHECK_THROWS_AS(orthonormalize(rel, BasisMode::relative), PreconditionError);
}

TEST_CASE("basis JSON") {
  EigenvalueSystem delta(embedded("delta"));
  std::string js = basis_to_json(form_basis(delta, 2));
  CHECK(js.find("\"norm_sq\": \"15/16\"") != std::string::npos);
  CHECK(js.find("\"1/4\"") != std::string::npos);
  CHECK(js.find("\"2\": \"64\"") != std::string::npos);
  CHECK(js.find("\"form_id\": \"delta\"") != std::string::npos);
}
