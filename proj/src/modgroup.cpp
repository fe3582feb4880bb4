#include "cuspbasis/modgroup.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cuspbasis/errors.hpp"

namespace cuspbasis {

std::string UnimodularMatrix::str() const {
  std::ostringstream os;
  os << "[[" << a << ", " << b << "], [" << c << ", " << d << "]]";
  return os.str();
}

bool same_coset(const UnimodularMatrix& alpha, const UnimodularMatrix& beta, i64 M) {
  return (alpha * beta.inverse()).in_gamma0(M);
}

namespace {

// Class index of every pair (c, d) mod M, -1 for non-primitive pairs, plus
// the lexicographically least member of each class.
struct P1Table {
  i64 M;
  std::vector<int> cls;
  std::vector<std::pair<i64, i64>> reps;

  explicit P1Table(i64 m) : M(m), cls(static_cast<std::size_t>(m * m), -1) {
    std::vector<i64> units;
    for (i64 u = 1; u <= M; ++u) {
      if (gcd(u, M) == 1) units.push_back(u % M);
    }
    for (i64 c = 0; c < M; ++c) {
      for (i64 d = 0; d < M; ++d) {
        if (gcd(gcd(c, d), M) != 1 || cls[c * M + d] >= 0) continue;
        const int id = static_cast<int>(reps.size());
        reps.emplace_back(c, d);
        for (i64 u : units) cls[(u * c % M) * M + u * d % M] = id;
      }
    }
  }

  int of(i64 c, i64 d) const { return cls[mod(c, M) * M + mod(d, M)]; }
};

// Some integer matrix of determinant 1 whose bottom row lies in the class of (c, d) mod M.
UnimodularMatrix lift(i64 c, i64 d, i64 M) {
  if (mod(c, M) == 0) c = M;
  while (gcd(c, d) != 1) d += M;
  i64 x, y;
  extended_gcd(d, c, x, y);  // d x + c y = 1
  return {x, -y, c, d};
}

UnimodularMatrix normalized(UnimodularMatrix m) {
  if (m.c < 0 || (m.c == 0 && m.d < 0)) m = {-m.a, -m.b, -m.c, -m.d};
  // Left multiplication by a translation keeps the coset; take the shortest top row.
  const double n = static_cast<double>(m.c) * m.c + static_cast<double>(m.d) * m.d;
  const i64 t = std::llround(-(static_cast<double>(m.a) * m.c + static_cast<double>(m.b) * m.d) / n);
  m.a += t * m.c;
  m.b += t * m.d;
  return m;
}

}  // namespace

std::vector<std::pair<i64, i64>> p1_classes(i64 M) {
  if (M < 1) throw PreconditionError("P^1(Z/M) needs M >= 1");
  return P1Table(M).reps;
}

Reduction reduce_representative(const UnimodularMatrix& beta, i64 L, const DirichletCharacter& chi,
                                std::complex<double> z) {
  if (beta.det() != 1) throw PreconditionError("matrix " + beta.str() + " is not unimodular");
  if (!(z.imag() > 0)) throw DomainError("reduction needs Im z > 0");
  const double zr = z.real(), zi2 = z.imag() * z.imag();
  struct V {
    i64 x, y;
  };
  auto dot = [&](const V& u, const V& v) {
    return (u.x * zr + u.y) * (v.x * zr + v.y) + static_cast<double>(u.x) * v.x * zi2;
  };
  // Bottom rows of Gamma0(L) beta: the primitive vectors of span{(c, d), L (a, b)}.
  V v1{beta.c, beta.d}, v2{L * beta.a, L * beta.b};
  double q1 = dot(v1, v1), q2 = dot(v2, v2);
  for (int iter = 0; iter < 200; ++iter) {
    if (q2 < q1) {
      std::swap(v1, v2);
      std::swap(q1, q2);
    }
    const i64 mu = std::llround(dot(v1, v2) / q1);
    if (mu == 0) break;
    v2 = {v2.x - mu * v1.x, v2.y - mu * v1.y};
    q2 = dot(v2, v2);
    if (q2 >= q1) break;
  }
  V best{beta.c, beta.d};
  double best_q = dot(best, best);
  for (i64 s = -3; s <= 3; ++s) {
    for (i64 t = -3; t <= 3; ++t) {
      V v{s * v1.x + t * v2.x, s * v1.y + t * v2.y};
      if (v.x < 0 || (v.x == 0 && v.y <= 0) || gcd(v.x, v.y) != 1) continue;
      const double q = dot(v, v);
      const bool better = q < best_q * (1 - 1e-12) ||
                          (q <= best_q * (1 + 1e-12) && std::make_pair(v.x, std::abs(v.y)) <
                                                            std::make_pair(best.x, std::abs(best.y)));
      if (better) {
        best = v;
        best_q = q;
      }
    }
  }
  i64 p, q;
  extended_gcd(best.y, best.x, p, q);  // y p + x q = 1
  Reduction r;
  r.alpha = normalized({p, -q, best.x, best.y});
  const UnimodularMatrix delta = r.alpha * beta.inverse();
  if (!delta.in_gamma0(L)) throw Error("internal: reduction left the coset of " + beta.str());
  // f|beta = f|(delta^{-1} alpha) = chi(a_delta) f|alpha.
  auto v = chi.value(delta.a);
  if (!v) throw PreconditionError("character modulus must divide the level");
  r.phase = *v;
  return r;
}

CosetSystem coset_reps(i64 N, i64 M) {
  if (N < 1 || M < 1 || M % N != 0) throw PreconditionError("coset_reps needs N | M");
  CosetSystem cs;
  cs.N = N;
  cs.M = M;
  const DirichletCharacter one = DirichletCharacter::trivial(1);
  for (const auto& [c, d] : p1_classes(M)) {
    if (c % N != 0) continue;
    cs.reps.push_back(reduce_representative(lift(c, d, M), M, one, {0.0, 1.0}).alpha);
  }
  if (Rational(static_cast<long>(cs.size())) != index_gamma0(N, M)) {
    throw Error("internal: coset count differs from the index");
  }
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (cs.reps[i].det() != 1 || !cs.reps[i].in_gamma0(N)) throw Error("internal: bad coset representative");
    for (std::size_t j = 0; j < i; ++j) {
      if (same_coset(cs.reps[i], cs.reps[j], M)) throw Error("internal: equivalent coset representatives");
    }
  }
  return cs;
}

std::vector<CuspFamily> cusp_families(i64 L, const DirichletCharacter& chi) {
  if (L < 1 || L % chi.modulus() != 0) throw PreconditionError("cusp_families needs the character modulus to divide L");
  const P1Table table(L);
  std::vector<char> seen(table.reps.size(), 0);
  std::vector<CuspFamily> out;
  std::size_t covered = 0;
  for (std::size_t id = 0; id < table.reps.size(); ++id) {
    if (seen[id]) continue;
    const auto [c0, d0] = table.reps[id];
    CuspFamily fam;
    fam.base = reduce_representative(lift(c0, d0, L), L, DirichletCharacter::trivial(1), {0.0, 1.0}).alpha;
    const i64 c = fam.base.c;
    fam.width = L / gcd(mod(c * c, L), L);
    for (i64 j = 0; j < fam.width; ++j) {
      const int k = table.of(c, fam.base.d + j * c);
      if (seen[k]) throw Error("internal: cusp orbit overlaps");
      seen[k] = 1;
      ++covered;
    }
    // gamma T^w gamma^{-1} = [[1 - wac, w a^2], [-w c^2, 1 + wac]] lies in Gamma0(L).
    auto v = chi.value(1 + fam.width * fam.base.a * c);
    if (!v) throw Error("internal: cusp stabilizer outside Gamma0(L)");
    fam.shift = *v;
    out.push_back(fam);
  }
  if (static_cast<i64>(covered) != index_sl2(L)) throw Error("internal: cusp families do not cover the cosets");
  return out;
}

// ---------------------------------------------------------------------------

EvalCertificate slash_evaluate(const QSeries& f, const UnimodularMatrix& gamma, const ComplexReal& z, double eps) {
  if (gamma.det() != 1) throw PreconditionError("matrix " + gamma.str() + " is not unimodular");
  if (!(z.im > 0)) throw DomainError("evaluation needs Im z > 0");
  const int k = f.integral_weight();
  const ComplexReal j = gamma.factor(z);
  const double absj_k = std::pow(abs(j).convert_to<double>(), k);
  EvalCertificate inner = evaluate(f, gamma.act(z), eps * absj_k);
  EvalCertificate out;
  out.value = inner.value / ipow(j, k);
  out.tail = inner.tail / absj_k;
  out.terms = inner.terms;
  return out;
}

template <class T>
SlashEvaluator<T>::SlashEvaluator(const QSeries& f) : ev_(f), k_(f.integral_weight()) {}

template <class T>
Complex<T> SlashEvaluator<T>::operator()(const UnimodularMatrix& beta, const Complex<T>& z, double eps,
                                         double* tail) const {
  const QSeries& f = ev_.series();
  const std::complex<double> zd(to_double(z.re), to_double(z.im));
  const Reduction red = reduce_representative(beta, f.level(), f.character(), zd);
  const Complex<T> j = red.alpha.factor(z);
  const double absj_k = std::pow(std::abs(static_cast<double>(red.alpha.c) * zd + static_cast<double>(red.alpha.d)), k_);
  TailPlan plan;
  Complex<T> v = ev_(red.alpha.act(z), eps * absj_k, &plan);
  if (tail) *tail += plan.tail / absj_k;
  return v / ipow(j, k_) * red.phase.template value<T>();
}

template class SlashEvaluator<double>;
template class SlashEvaluator<Real>;

namespace {

template <class T>
EvalCertificate trace_impl(const QSeries& f, const CosetSystem& cs, const DirichletCharacter& chi,
                           const ComplexReal& z, double eps) {
  SlashEvaluator<T> ev(f);
  const Complex<T> zt = to_float<T>(z);
  Complex<T> acc;
  double tail = 0;
  for (const auto& alpha : cs.reps) {
    acc += conj(chi.complex_value<T>(alpha.d)) * ev(alpha, zt, eps, &tail);
  }
  const T n(static_cast<double>(cs.size()));
  EvalCertificate out;
  out.value = ComplexReal(Real(acc.re / n), Real(acc.im / n));
  out.tail = tail / static_cast<double>(cs.size());
  return out;
}

}  // namespace

EvalCertificate trace_evaluate(const QSeries& f, i64 N, i64 M, const DirichletCharacter& chi,
                               const ComplexReal& z, double eps) {
  if (M % f.level() != 0) throw PreconditionError("trace_evaluate: the form's level must divide M");
  if (N % chi.modulus() != 0) throw PreconditionError("trace_evaluate: character modulus must divide N");
  if (!chi.induce(M).same_values(f.character().induce(M))) {
    throw PreconditionError("trace_evaluate: character differs from the form's character");
  }
  const CosetSystem cs = coset_reps(N, M);
  if (precision_bits() <= 53) return trace_impl<double>(f, cs, chi, z, eps);
  return trace_impl<Real>(f, cs, chi, z, eps);
}

bool TraceHeckeReport::passes() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

TraceHeckeReport verify_trace_hecke(const NewformRecord& rec, i64 d, const std::vector<std::complex<double>>& points,
                                    double eps, double slack) {
  if (!rec.qexp) throw PreconditionError("record " + rec.id + " has no q-expansion");
  if (d < 1) throw PreconditionError("verify_trace_hecke needs d >= 1");
  const QSeries& f = *rec.qexp;
  const i64 N = rec.level;
  const int k = rec.weight;
  EigenvalueSystem sys(rec);
  const Scalar coef = sys.lambda(d).conj() / Scalar(rpow(d, k - 1));
  const ComplexReal c = coef.approx();
  const double idx = index_gamma0(N, N * d).get_d();
  const QSeries g = apply_V(f, d);

  TraceHeckeReport rep;
  rep.identity = "index * (f|V_d)|tr_N^{Nd} = d^(1-k) conj(lambda(1,d)) f";
  rep.form_id = rec.id;
  rep.d = d;
  rep.slack = slack;
  for (const auto& p : points) {
    const ComplexReal z(Real(p.real()), Real(p.imag()));
    TraceHeckeRow row;
    row.point = p;
    EvalCertificate tr = trace_evaluate(g, N, N * d, rec.character, z, eps);
    EvalCertificate fz = evaluate(f, z, eps);
    row.lhs = tr.value * Real(idx);
    row.rhs = c * fz.value;
    row.deviation = abs(row.lhs - row.rhs).convert_to<double>();
    row.certificate = idx * tr.tail + coef.abs() * fz.tail;
    row.pass = row.deviation <= row.certificate + slack;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<std::complex<double>> seeded_points(std::size_t count, unsigned seed, double y_min) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(-0.5, 0.5), uy(y_min, y_min + 0.6);
  std::vector<std::complex<double>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const double x = ux(rng);
    out.emplace_back(x, uy(rng));
  }
  return out;
}

}  // namespace cuspbasis
