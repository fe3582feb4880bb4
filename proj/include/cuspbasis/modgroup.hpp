#pragma once

// Right cosets of Gamma0(M) in Gamma0(N), cusp families of Gamma0(M) in
// SL2(Z), the weight-k slash action and the trace operator.

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "cuspbasis/newforms.hpp"

namespace cuspbasis {

struct UnimodularMatrix {
  i64 a = 1, b = 0, c = 0, d = 1;

  i64 det() const { return a * d - b * c; }
  UnimodularMatrix inverse() const { return {d, -b, -c, a}; }
  bool in_gamma0(i64 L) const { return mod(c, L) == 0; }
  std::string str() const;

  friend UnimodularMatrix operator*(const UnimodularMatrix& x, const UnimodularMatrix& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
  }
  friend bool operator==(const UnimodularMatrix&, const UnimodularMatrix&) = default;

  template <class T>
  Complex<T> factor(const Complex<T>& z) const {  // cz + d
    return Complex<T>(T(z.re * T(c) + T(d)), T(z.im * T(c)));
  }
  template <class T>
  Complex<T> act(const Complex<T>& z) const {
    return Complex<T>(T(z.re * T(a) + T(b)), T(z.im * T(a))) / factor(z);
  }
};

/// Translation z -> z + t.
inline UnimodularMatrix translation(i64 t) { return {1, t, 0, 1}; }

/// Gamma0(M) alpha = Gamma0(M) beta, i.e. alpha beta^{-1} in Gamma0(M).
bool same_coset(const UnimodularMatrix& alpha, const UnimodularMatrix& beta, i64 M);

/// One primitive (c, d) per class of P^1(Z/M), c and d in [0, M).
std::vector<std::pair<i64, i64>> p1_classes(i64 M);

struct CosetSystem {
  i64 N = 1;
  i64 M = 1;
  std::vector<UnimodularMatrix> reps;

  std::size_t size() const { return reps.size(); }
};

/// Gamma0(N) = disjoint union of Gamma0(M) alpha_i. Each alpha_i has the
/// bottom row of least c^2 + d^2 in its class and c >= 0.
CosetSystem coset_reps(i64 N, i64 M);

/// The element of Gamma0(L) beta with the largest Im(alpha z), up to the
/// search window of a reduced lattice basis. For f in S_k(Gamma0(L), chi)
/// f|beta = phase * f|alpha.
struct Reduction {
  UnimodularMatrix alpha;
  RootOfUnity phase;
};
Reduction reduce_representative(const UnimodularMatrix& beta, i64 L, const DirichletCharacter& chi,
                                std::complex<double> z);

/// Cosets gamma T^j, j = 0..width-1, of Gamma0(L) in SL2(Z). On them
/// h = f|gamma satisfies h(z + width) = e^{2 pi i shift} h(z).
struct CuspFamily {
  UnimodularMatrix base;
  i64 width = 1;
  RootOfUnity shift;
};
std::vector<CuspFamily> cusp_families(i64 L, const DirichletCharacter& chi);

// ---------------------------------------------------------------------------
// Slash action

/// (f|_k gamma)(z) = (cz + d)^{-k} f(gamma z), evaluated with gamma as given.
EvalCertificate slash_evaluate(const QSeries& f, const UnimodularMatrix& gamma, const ComplexReal& z, double eps);

/// (f|_k beta)(z) for a form of level f.level() and character f.character(),
/// evaluated through the representative of Gamma0(level) beta that is best at z.
template <class T>
class SlashEvaluator {
 public:
  explicit SlashEvaluator(const QSeries& f);
  const QSeries& series() const { return ev_.series(); }
  /// Absolute error at most eps; the certified bound is added to *tail.
  Complex<T> operator()(const UnimodularMatrix& beta, const Complex<T>& z, double eps, double* tail = nullptr) const;

 private:
  SeriesEvaluator<T> ev_;
  int k_;
};

/// f|_k tr_N^M (z) = (1/index) sum_i conj(chi(alpha_i)) (f|_k alpha_i)(z).
EvalCertificate trace_evaluate(const QSeries& f, i64 N, i64 M, const DirichletCharacter& chi,
                               const ComplexReal& z, double eps);

struct TraceHeckeRow {
  std::complex<double> point;
  ComplexReal lhs;  // index * (f|V_d)|tr_N^{Nd} (z)
  ComplexReal rhs;  // d^{1-k} conj(lambda(1, d)) f(z)
  double deviation = 0;
  double certificate = 0;
  bool pass = false;
};

struct TraceHeckeReport {
  std::string identity;
  std::string form_id;
  i64 d = 1;
  double slack = 0;
  std::vector<TraceHeckeRow> rows;

  bool passes() const;
};

/// Compares both sides of index * (f|V_d)|tr_N^{Nd} = d^{1-k} conj(lambda(1,d)) f
/// at each point; a row passes when deviation <= certificate + slack.
TraceHeckeReport verify_trace_hecke(const NewformRecord& rec, i64 d, const std::vector<std::complex<double>>& points,
                                    double eps, double slack = 1e-8);

/// count points x + iy with x in [-1/2, 1/2), y in [y_min, y_min + 0.6), from a seeded generator.
std::vector<std::complex<double>> seeded_points(std::size_t count, unsigned seed, double y_min = 0.8);

}  // namespace cuspbasis
