#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "cuspbasis/errors.hpp"
#include "cuspbasis/modgroup.hpp"

using namespace cuspbasis;

namespace {

ComplexReal cz(double x, double y) { return ComplexReal(Real(x), Real(y)); }

double dist(const ComplexReal& a, const ComplexReal& b) { return abs(a - b).convert_to<double>(); }

const QSeries& delta() { return *embedded("delta").qexp; }
const QSeries& f11() { return *embedded("11a").qexp; }

// Random element of Gamma0(M) from a random bottom row (c, d) with M | c.
UnimodularMatrix random_gamma0(std::mt19937& rng, i64 M) {
  // |c| <= M keeps the direct evaluation within the stored truncation.
  std::uniform_int_distribution<i64> u(-1, 1), v(-4, 4);
  while (true) {
    i64 c = M * u(rng), d = v(rng);
    i64 x, y;
    if (gcd(c, d) != 1) continue;
    extended_gcd(d, c, x, y);
    return {x, -y, c, d};
  }
}

}  // namespace

TEST_CASE("coset representative examples") {
  auto c12 = coset_reps(1, 2);
  REQUIRE(c12.size() == 3);
  std::set<std::pair<i64, i64>> rows;
  for (const auto& g : c12.reps) rows.emplace(mod(g.c, 2), mod(g.d, 2));
  CHECK(rows == std::set<std::pair<i64, i64>>{{0, 1}, {1, 0}, {1, 1}});
  CHECK(c12.reps[0] == UnimodularMatrix{});

  auto c24 = coset_reps(2, 4);
  REQUIRE(c24.size() == 2);
  for (const auto& g : c24.reps) CHECK(g.c % 2 == 0);
  CHECK(coset_reps(1, 11).size() == 12);
  CHECK_THROWS_AS(coset_reps(2, 3), PreconditionError);
}

TEST_CASE("coset invariants for N | M <= 60") {
  for (i64 M = 1; M <= 60; ++M) {
    for (i64 N : divisors(M)) {
      auto cs = coset_reps(N, M);
      CAPTURE(N);
      CAPTURE(M);
      CHECK(Rational(static_cast<long>(cs.size())) == index_gamma0(N, M));
      for (std::size_t i = 0; i < cs.size(); ++i) {
        const auto& g = cs.reps[i];
        CHECK(g.det() == 1);
        CHECK(g.c % N == 0);
        CHECK(g.c >= 0);
        for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(same_coset(g, cs.reps[j], M));
      }
    }
  }
}

TEST_CASE("P1 classes and cusp families") {
  for (i64 L = 1; L <= 60; ++L) {
    CHECK(static_cast<i64>(p1_classes(L).size()) == index_sl2(L));
    auto fams = cusp_families(L, DirichletCharacter::trivial(1));
    i64 total = 0;
    for (const auto& f : fams) total += f.width;
    CHECK(total == index_sl2(L));
    // Every coset gamma T^j lies in a distinct class.
    std::vector<UnimodularMatrix> all;
    for (const auto& f : fams) {
      for (i64 j = 0; j < f.width; ++j) all.push_back(f.base * translation(j));
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) CHECK_FALSE(same_coset(all[i], all[j], L));
    }
  }
  std::multiset<i64> w11, w4;
  for (const auto& f : cusp_families(11, DirichletCharacter::trivial(1))) w11.insert(f.width);
  for (const auto& f : cusp_families(4, DirichletCharacter::trivial(1))) w4.insert(f.width);
  CHECK(w11 == std::multiset<i64>{1, 11});
  CHECK(w4 == std::multiset<i64>{1, 1, 4});
}

TEST_CASE("slash examples") {
  const ComplexReal i1 = cz(0, 1);
  auto id = slash_evaluate(delta(), UnimodularMatrix{}, i1, 1e-25);
  CHECK(dist(id.value, evaluate(delta(), i1, 1e-25).value) == 0);

  auto shifted = slash_evaluate(delta(), translation(1), i1, 1e-25);
  CHECK(dist(shifted.value, evaluate(delta(), cz(1, 1), 1e-25).value) < 1e-24);

  // Level one modularity: Delta|S = Delta.
  const UnimodularMatrix S{0, -1, 1, 0};
  auto s = slash_evaluate(delta(), S, cz(0, 2), 1e-30);
  auto direct = evaluate(delta(), cz(0, 2), 1e-30);
  CHECK(dist(s.value, direct.value) < 1e-29);
  CHECK(dist(slash_evaluate(delta(), S, cz(0.3, 0.9), 1e-25).value, evaluate(delta(), cz(0.3, 0.9), 1e-25).value) <
        1e-24);

  CHECK_THROWS_AS(slash_evaluate(delta(), UnimodularMatrix{2, 0, 0, 1}, i1, 1e-10), PreconditionError);
  CHECK_THROWS_AS(slash_evaluate(delta(), S, cz(0, -1), 1e-10), DomainError);
  // Tiny transformed height exhausts the truncation and names the height.
  try {
    slash_evaluate(delta(), UnimodularMatrix{1, 0, 400, 1}, cz(0, 1), 1e-20);
    FAIL("expected a truncation error");
  } catch (const TruncationError& e) {
    CHECK(e.height() < 1e-5);
  }
}

TEST_CASE("reduced evaluation agrees with direct slashing") {
  std::mt19937 rng(7);
  // 11a: level 11, trivial character.
  SlashEvaluator<Real> ev(f11());
  for (const auto& p : seeded_points(5, 11)) {
    const ComplexReal z = cz(p.real(), p.imag());
    for (const auto& g : coset_reps(1, 11).reps) {
      double tail = 0;
      ComplexReal a = ev(g, z, 1e-25, &tail);
      ComplexReal b = slash_evaluate(f11(), g, z, 1e-25).value;
      CHECK(dist(a, b) < 1e-22);
      // Left multiplication by Gamma0(11) leaves f|gamma unchanged.
      const UnimodularMatrix h = random_gamma0(rng, 11) * g;
      ComplexReal c = slash_evaluate(f11(), h, z, 1e-25).value;
      CHECK(dist(a, c) < 1e-22);
    }
  }
  // eta(4z)^6: level 16, odd character, so f|(delta gamma) = chi(d) f|gamma.
  const QSeries w3 = eta_product({{4, 6}}, 40000);
  SlashEvaluator<Real> e3(w3);
  for (const auto& p : seeded_points(3, 3)) {
    const ComplexReal z = cz(p.real(), p.imag());
    for (const auto& g : coset_reps(1, 16).reps) {
      const UnimodularMatrix delta16 = random_gamma0(rng, 16);
      ComplexReal lhs = slash_evaluate(w3, delta16 * g, z, 1e-25).value;
      ComplexReal rhs = w3.character().complex_value<Real>(delta16.d) * e3(g, z, 1e-25);
      CHECK(dist(lhs, rhs) < 1e-22);
    }
  }
}

TEST_CASE("cusp shifts") {
  const QSeries w3 = eta_product({{4, 6}}, 40000);
  SlashEvaluator<Real> ev(w3);
  const ComplexReal z = cz(0.1, 1.1);
  for (const auto& fam : cusp_families(16, w3.character())) {
    ComplexReal h0 = ev(fam.base, z, 1e-25);
    ComplexReal hw = ev(fam.base * translation(fam.width), z, 1e-25);
    CHECK(dist(hw, fam.shift.value<Real>() * h0) < 1e-22);
  }
}

TEST_CASE("trace operator") {
  const ComplexReal z = cz(0.2, 1.0);
  // N = M: the identity.
  auto same = trace_evaluate(delta(), 1, 1, DirichletCharacter::trivial(1), z, 1e-25);
  CHECK(dist(same.value, evaluate(delta(), z, 1e-25).value) < 1e-24);
  // A level-N form viewed at level M is fixed.
  for (i64 M : {2, 3, 6}) {
    auto t = trace_evaluate(delta().with_level(M), 1, M, DirichletCharacter::trivial(1), z, 1e-25);
    CHECK(dist(t.value, evaluate(delta(), z, 1e-25).value) < 1e-22);
  }
  auto t11 = trace_evaluate(f11().with_level(22), 11, 22, DirichletCharacter::trivial(11), z, 1e-25);
  CHECK(dist(t11.value, evaluate(f11(), z, 1e-25).value) < 1e-22);

  // Independence of the representatives: twisted sums over delta_i alpha_i.
  std::mt19937 rng(99);
  const QSeries g = apply_V(delta(), 2);
  auto cs = coset_reps(1, 2);
  ComplexReal acc;
  for (const auto& a : cs.reps) acc += slash_evaluate(g, random_gamma0(rng, 2) * a, z, 1e-25).value;
  acc /= Real(3);
  auto tr = trace_evaluate(g, 1, 2, DirichletCharacter::trivial(1), z, 1e-25);
  CHECK(dist(acc, tr.value) < 1e-22);
  CHECK_THROWS_AS(trace_evaluate(g, 1, 3, DirichletCharacter::trivial(1), z, 1e-25), PreconditionError);
}

TEST_CASE("trace and Hecke") {
  auto pts = seeded_points(5, 2024);
  for (const auto& p : pts) CHECK(p.imag() >= 0.8);
  const auto& drec = embedded("delta");
  for (i64 d : {1, 2, 3, 4}) {
    auto rep = verify_trace_hecke(drec, d, pts, 1e-20);
    CAPTURE(d);
    CHECK(rep.passes());
    for (const auto& r : rep.rows) CHECK(r.deviation < 1e-15);
  }
  auto r11 = verify_trace_hecke(embedded("11a"), 11, pts, 1e-20);
  CHECK(r11.passes());
  auto r2 = verify_trace_hecke(embedded("11a"), 2, pts, 1e-20);
  CHECK(r2.passes());

  auto one = verify_trace_hecke(drec, 2, {{0.2, 1.0}}, 1e-20);
  CHECK(one.rows.size() == 1);
  CHECK(one.rows[0].deviation < 1e-15);

  // A wrong eigenvalue breaks the identity.
  NewformRecord bad = drec;
  bad.eigenvalues[2] = Scalar(-23);
  CHECK_FALSE(verify_trace_hecke(bad, 2, pts, 1e-20).passes());
}
