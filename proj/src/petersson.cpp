#include "cuspbasis/petersson.hpp"

#include <algorithm>
#include <boost/math/special_functions/expint.hpp>
#include <cmath>

#include "cuspbasis/errors.hpp"

namespace cuspbasis {

void QuadratureConfig::validate() const {
  if (!(Y >= 2)) throw PreconditionError("quadrature: Y must be at least 2");
  if (nodes < 2) throw PreconditionError("quadrature: at least 2 nodes per cell");
  if (cells_x < 1 || cells_y < 1) throw PreconditionError("quadrature: cell counts must be positive");
  if (!(eps > 0)) throw PreconditionError("quadrature: eps must be positive");
  if (precision_bits < 24) throw PreconditionError("quadrature: precision below 24 bits");
}

template <class T>
std::pair<std::vector<T>, std::vector<T>> gauss_legendre(int n) {
  using std::abs;
  using std::cos;
  if (n < 1) throw PreconditionError("gauss_legendre needs n >= 1");
  std::vector<T> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
  const T pi = pi_v<T>();
  const T tol = std::is_same_v<T, double> ? T(1e-15) : T(ldexp(1.0, 8 - precision_bits()));
  for (int i = 0; i < (n + 1) / 2; ++i) {
    T r = cos(T(pi * (i + 0.75) / (n + 0.5)));
    T dp;
    for (int it = 0; it < 100; ++it) {
      // Three-term recurrence for P_n(r) and P_{n-1}(r).
      T p0(1), p1 = r;
      for (int m = 2; m <= n; ++m) {
        T p2 = ((2 * m - 1) * r * p1 - (m - 1) * p0) / m;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      if (n == 1) p0 = T(1);
      dp = n * (r * p1 - p0) / (r * r - 1);
      if (n == 1) dp = T(1);
      T step = p1 / dp;
      r -= step;
      if (abs(step) < tol) break;
    }
    // Recompute the derivative at the converged root.
    T p0(1), p1 = r;
    for (int m = 2; m <= n; ++m) {
      T p2 = ((2 * m - 1) * r * p1 - (m - 1) * p0) / m;
      p0 = std::move(p1);
      p1 = std::move(p2);
    }
    dp = n == 1 ? T(1) : T(n * (r * p1 - p0) / (r * r - 1));
    const T wt = 2 / ((1 - r * r) * dp * dp);
    x[static_cast<std::size_t>(i)] = -r;
    x[static_cast<std::size_t>(n - 1 - i)] = r;
    w[static_cast<std::size_t>(i)] = wt;
    w[static_cast<std::size_t>(n - 1 - i)] = wt;
  }
  return {x, w};
}

template std::pair<std::vector<double>, std::vector<double>> gauss_legendre<double>(int);
template std::pair<std::vector<Real>, std::vector<Real>> gauss_legendre<Real>(int);

namespace {

template <class T>
struct Node {
  std::size_t family;
  Complex<T> z;  // evaluate h_family at z; Re z in [j - 1/2, j + 1/2]
  T w;           // includes y^{k-2}
};

// Samples of one family on Im z = Y over a full period, and the Parseval
// kernel J(n + kappa) for each DFT bin.
template <class T>
struct Spectrum {
  std::size_t family;
  i64 L = 0;
  std::vector<Complex<T>> z;
  std::vector<Complex<T>> untwist;  // e^{-2 pi i kappa x_m / w}
  std::vector<Complex<T>> roots;    // e^{-2 pi i r / L}
  std::vector<T> kernel;            // zero where n + kappa = 0
};

// int_0^infty (Y + t)^{k-2} e^{-beta t} dt.
template <class T>
T parseval_kernel(int k, const T& Y, const T& beta) {
  using std::exp;
  using std::pow;
  if (k >= 2) {
    T acc(0), binom(1), fact(1);
    const int e = k - 2;
    for (int j = 0; j <= e; ++j) {
      if (j > 0) {
        binom = binom * (e - j + 1) / j;
        fact *= j;
      }
      acc += binom * T(pow(Y, e - j)) * fact / T(pow(beta, j + 1));
    }
    return acc;
  }
  // k = 1: e^{beta Y} E_1(beta Y).
  const T by = beta * Y;
  return T(exp(by) * boost::math::expint(1, by));
}

template <class T>
struct Layout {
  i64 M = 1;
  int k = 0;
  double Y = 6;
  std::vector<CuspFamily> families;
  std::vector<Node<T>> fine, coarse;
  std::vector<Spectrum<T>> spectra;
};

template <class T>
void add_rule(std::vector<Node<T>>& out, std::size_t fam, i64 width, int k, const T& Y, int n, int cx, int cy) {
  using std::pow;
  using std::sqrt;
  const auto [gx, gw] = gauss_legendre<T>(n);
  auto cell_nodes = [&](const T& a, const T& b, auto&& emit) {
    const T half = (b - a) / 2, mid = (a + b) / 2;
    for (std::size_t i = 0; i < gx.size(); ++i) emit(T(mid + half * gx[i]), T(half * gw[i]));
  };
  const T one(1);
  for (int c = 0; c < cx; ++c) {
    const T xa = T(-0.5) + T(c) / cx, xb = T(-0.5) + T(c + 1) / cx;
    cell_nodes(xa, xb, [&](const T& x, const T& wx) {
      const T y0 = sqrt(T(1 - x * x));
      auto emit_y = [&](const T& y, const T& wy) {
        const T wt = wx * wy * T(pow(y, k - 2));
        for (i64 j = 0; j < width; ++j) out.push_back({fam, Complex<T>(T(x + T(static_cast<double>(j))), y), wt});
      };
      cell_nodes(y0, one, emit_y);
      for (int d = 0; d < cy; ++d) {
        cell_nodes(T(one + (Y - one) * d / cy), T(one + (Y - one) * (d + 1) / cy), emit_y);
      }
    });
  }
}

template <class T>
Layout<T> make_layout(i64 M, int k, const DirichletCharacter& chi, const QuadratureConfig& cfg) {
  Layout<T> lay;
  lay.M = M;
  lay.k = k;
  lay.Y = cfg.Y;
  lay.families = cusp_families(M, chi);
  const T Y(cfg.Y);
  const T two_pi = 2 * pi_v<T>();
  const double logeps = std::log(1 / std::min(cfg.eps, 1e-10)) + 5;
  for (std::size_t f = 0; f < lay.families.size(); ++f) {
    const CuspFamily& fam = lay.families[f];
    add_rule(lay.fine, f, fam.width, k, Y, cfg.nodes, cfg.cells_x, cfg.cells_y);
    add_rule(lay.coarse, f, fam.width, k, Y, std::max(2, cfg.nodes / 2), cfg.cells_x, cfg.cells_y);

    // Modes beyond n_max are below eps relative to the leading one.
    const double n_max = static_cast<double>(fam.width) * logeps / (2 * M_PI * cfg.Y);
    i64 L = std::max<i64>(16, 2 * static_cast<i64>(std::ceil(n_max)) + 4);
    L += L % 2;
    Spectrum<T> sp;
    sp.family = f;
    sp.L = L;
    const T w(static_cast<double>(fam.width));
    const T kappa = T(static_cast<double>(fam.shift.exponent)) / T(static_cast<double>(fam.shift.order));
    for (i64 m = 0; m < L; ++m) {
      const T x = w * T(static_cast<double>(m)) / T(static_cast<double>(L));
      sp.z.emplace_back(x, Y);
      sp.untwist.push_back(e2pii(Complex<T>(T(-kappa * x / w), T(0))));
      sp.roots.push_back(e2pii(Complex<T>(T(-T(static_cast<double>(m)) / T(static_cast<double>(L))), T(0))));
    }
    for (i64 n = 0; n < L; ++n) {
      const T nu = T(static_cast<double>(n)) + kappa;
      if (n == 0 && fam.shift.exponent == 0) {
        sp.kernel.emplace_back(0);
      } else {
        sp.kernel.push_back(parseval_kernel(k, Y, T(2 * two_pi * nu / w)));
      }
    }
    lay.spectra.push_back(std::move(sp));
  }
  return lay;
}

// sum_t coef_t (f | m_t beta)(z): a plain form has one term, a trace one per coset.
template <class T>
struct Integrand {
  SlashEvaluator<T> ev;
  std::vector<std::pair<UnimodularMatrix, Complex<T>>> terms;

  Complex<T> operator()(const UnimodularMatrix& beta, const Complex<T>& z, double eps, double* tail) const {
    Complex<T> acc;
    for (const auto& [m, c] : terms) {
      double t = 0;
      acc += c * ev(m * beta, z, eps, &t);
      *tail += to_double(abs(c)) * t;
    }
    return acc;
  }
};

template <class T>
struct Values {
  std::vector<Complex<T>> fine, coarse;
  std::vector<double> fine_tail;
  std::vector<std::vector<Complex<T>>> spectrum;  // DFT bins per family
  std::vector<double> spectrum_tail;              // max sample error per family
};

// Fails before integrating if some node needs more terms than any series has.
template <class T>
void check_truncation(const Layout<T>& lay, const Integrand<T>& g, double eps) {
  const QSeries& f = g.ev.series();
  const double k = f.weight_d();
  double worst_h = 1e300;
  std::string where;
  auto visit = [&](const UnimodularMatrix& base, const Complex<T>& z) {
    const std::complex<double> zd(to_double(z.re), to_double(z.im));
    for (const auto& term : g.terms) {
      const UnimodularMatrix beta = term.first * base;
      const Reduction red = reduce_representative(beta, f.level(), f.character(), zd);
      const std::complex<double> j = static_cast<double>(red.alpha.c) * zd + static_cast<double>(red.alpha.d);
      const double h = zd.imag() / std::norm(j);
      if (h < worst_h) {
        worst_h = h;
        where = beta.str();
        const TailPlan plan = plan_terms(f.growth(), k, h, eps * std::pow(std::abs(j), k));
        if (plan.terms > f.truncation()) {
          throw TruncationError(plan.terms, f.truncation(), h);
        }
      }
    }
  };
  for (const auto& n : lay.fine) visit(lay.families[n.family].base, n.z);
  for (const auto& sp : lay.spectra) {
    for (const auto& z : sp.z) visit(lay.families[sp.family].base, z);
  }
}

template <class T>
Values<T> evaluate_on(const Layout<T>& lay, const Integrand<T>& g, double eps) {
  check_truncation(lay, g, eps);
  Values<T> v;
  v.fine.reserve(lay.fine.size());
  for (const auto& n : lay.fine) {
    double t = 0;
    v.fine.push_back(g(lay.families[n.family].base, n.z, eps, &t));
    v.fine_tail.push_back(t);
  }
  for (const auto& n : lay.coarse) {
    double t = 0;
    v.coarse.push_back(g(lay.families[n.family].base, n.z, eps, &t));
  }
  for (const auto& sp : lay.spectra) {
    const auto& base = lay.families[sp.family].base;
    std::vector<Complex<T>> u;
    double worst = 0;
    for (std::size_t m = 0; m < sp.z.size(); ++m) {
      double t = 0;
      u.push_back(g(base, sp.z[m], eps, &t) * sp.untwist[m]);
      worst = std::max(worst, t);
    }
    const i64 L = sp.L;
    std::vector<Complex<T>> c(static_cast<std::size_t>(L));
    for (i64 n = 0; n < L; ++n) {
      Complex<T> acc;
      for (i64 m = 0; m < L; ++m) acc += u[static_cast<std::size_t>(m)] * sp.roots[static_cast<std::size_t>((n * m) % L)];
      c[static_cast<std::size_t>(n)] = acc / T(static_cast<double>(L));
    }
    v.spectrum.push_back(std::move(c));
    v.spectrum_tail.push_back(worst);
  }
  return v;
}

template <class T>
PeterssonResult pair_product(const Layout<T>& lay, const Values<T>& a, const Values<T>& b) {
  Complex<T> fine, coarse, spec;
  double cert = 0, spec_err = 0;
  for (std::size_t i = 0; i < lay.fine.size(); ++i) {
    fine += lay.fine[i].w * (a.fine[i] * conj(b.fine[i]));
    const double w = to_double(lay.fine[i].w);
    const double ta = a.fine_tail[i], tb = b.fine_tail[i];
    cert += w * (ta * to_double(abs(b.fine[i])) + tb * to_double(abs(a.fine[i])) + ta * tb);
  }
  for (std::size_t i = 0; i < lay.coarse.size(); ++i) coarse += lay.coarse[i].w * (a.coarse[i] * conj(b.coarse[i]));
  for (std::size_t s = 0; s < lay.spectra.size(); ++s) {
    const auto& sp = lay.spectra[s];
    const double w = static_cast<double>(lay.families[sp.family].width);
    const auto& ca = a.spectrum[s];
    const auto& cb = b.spectrum[s];
    const double da = a.spectrum_tail[s], db = b.spectrum_tail[s];
    Complex<T> acc;
    for (i64 n = 0; n < sp.L; ++n) {
      const auto i = static_cast<std::size_t>(n);
      const double J = to_double(sp.kernel[i]);
      const double ma = to_double(abs(ca[i])), mb = to_double(abs(cb[i]));
      if (sp.kernel[i] == 0) {
        // A constant term cannot occur for a cusp form; what appears is aliasing.
        spec_err += w * (ma + mb);
        continue;
      }
      acc += sp.kernel[i] * (ca[i] * conj(cb[i]));
      spec_err += w * J * (da * mb + db * ma + da * db);
      if (2 * n >= sp.L) spec_err += w * J * ma * mb;
    }
    spec += T(w) * acc;
  }
  const double idx = static_cast<double>(index_sl2(lay.M));
  PeterssonResult r;
  r.index = index_sl2(lay.M);
  const Complex<T> total = (fine + spec) / T(idx);
  r.value = ComplexReal(Real(total.re), Real(total.im));
  r.refinement = to_double(abs(fine - coarse)) / idx;
  r.certificate = cert / idx;
  r.spectral = spec_err / idx;
  r.error = r.refinement + r.certificate + r.spectral;
  return r;
}

void check_compatible(const QSeries& f, const QSeries& g, i64 M) {
  if (M < 1) throw PreconditionError("petersson: level must be positive");
  if (f.weight() != g.weight()) throw PreconditionError("petersson: weights differ");
  (void)f.integral_weight();
  if (M % f.level() != 0 || M % g.level() != 0) {
    throw PreconditionError("petersson: form levels must divide M = " + std::to_string(M));
  }
  if (!f.character().induce(M).same_values(g.character().induce(M))) {
    throw PreconditionError("petersson: characters differ");
  }
  if (index_sl2(M) > 200) {
    throw PreconditionError("petersson: index " + std::to_string(index_sl2(M)) + " of Gamma0(" + std::to_string(M) +
                            ") exceeds 200");
  }
}

template <class T>
Integrand<T> plain(const QSeries& f) {
  return Integrand<T>{SlashEvaluator<T>(f), {{UnimodularMatrix{}, Complex<T>(T(1))}}};
}

template <class T>
std::vector<std::vector<PeterssonResult>> matrix_impl(const std::vector<Integrand<T>>& fs, i64 M,
                                                      const DirichletCharacter& chi, int k,
                                                      const QuadratureConfig& cfg) {
  const Layout<T> lay = make_layout<T>(M, k, chi, cfg);
  std::vector<Values<T>> vals;
  for (const auto& f : fs) vals.push_back(evaluate_on(lay, f, cfg.eps));
  const std::size_t n = fs.size();
  std::vector<std::vector<PeterssonResult>> out(n, std::vector<PeterssonResult>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      out[i][j] = pair_product(lay, vals[i], vals[j]);
      if (j != i) {
        out[j][i] = out[i][j];
        out[j][i].value = conj(out[i][j].value);
      }
    }
  }
  return out;
}

std::vector<std::vector<PeterssonResult>> run_plain(const std::vector<QSeries>& fs, i64 M,
                                                    const QuadratureConfig& cfg) {
  cfg.validate();
  if (fs.empty()) return {};
  for (const auto& f : fs) check_compatible(fs.front(), f, M);
  const DirichletCharacter chi = fs.front().character().induce(M);
  const int k = fs.front().integral_weight();
  if (cfg.precision_bits <= 53) {
    std::vector<Integrand<double>> in;
    for (const auto& f : fs) in.push_back(plain<double>(f));
    return matrix_impl(in, M, chi, k, cfg);
  }
  PrecisionGuard guard(cfg.precision_bits);
  std::vector<Integrand<Real>> in;
  for (const auto& f : fs) in.push_back(plain<Real>(f));
  return matrix_impl(in, M, chi, k, cfg);
}

}  // namespace

PeterssonResult petersson_product(const QSeries& f, const QSeries& g, i64 M, const QuadratureConfig& cfg) {
  cfg.validate();
  check_compatible(f, g, M);
  if (f.is_zero() || g.is_zero()) {
    PeterssonResult r;
    r.index = index_sl2(M);
    return r;
  }
  return run_plain({f, g}, M, cfg)[0][1];
}

std::vector<std::vector<PeterssonResult>> petersson_matrix(const std::vector<QSeries>& fs, i64 M,
                                                          const QuadratureConfig& cfg) {
  return run_plain(fs, M, cfg);
}

PeterssonNorm numeric_norm(const NewformRecord& rec, const QuadratureConfig& cfg) {
  if (!rec.qexp) throw PreconditionError("record " + rec.id + " has no q-expansion");
  const PeterssonResult r = petersson_product(*rec.qexp, *rec.qexp, rec.level, cfg);
  return {r.value.re.convert_to<double>(), NormProvenance::numeric};
}

bool GramNumericReport::passes() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.pass; });
}

GramNumericReport verify_gram_numeric(const NewformRecord& rec, i64 M, const std::vector<std::pair<i64, i64>>& pairs,
                                      const QuadratureConfig& cfg, double tolerance) {
  if (!rec.qexp) throw PreconditionError("record " + rec.id + " has no q-expansion");
  if (M % rec.level != 0) throw PreconditionError("verify_gram_numeric: the form's level must divide M");
  const i64 D = M / rec.level;
  std::vector<i64> ells{1};
  for (const auto& [m, n] : pairs) {
    for (i64 l : {m, n}) {
      if (l < 1 || D % l != 0) {
        throw PreconditionError("verify_gram_numeric: " + std::to_string(l) + " does not divide M/N = " +
                                std::to_string(D));
      }
      if (std::find(ells.begin(), ells.end(), l) == ells.end()) ells.push_back(l);
    }
  }
  std::vector<QSeries> fs;
  for (i64 l : ells) fs.push_back(apply_V(*rec.qexp, l));
  const auto P = petersson_matrix(fs, M, cfg);
  auto pos = [&](i64 l) { return static_cast<std::size_t>(std::find(ells.begin(), ells.end(), l) - ells.begin()); };

  EigenvalueSystem sys(rec);
  GramNumericReport rep;
  rep.form_id = rec.id;
  rep.M = M;
  rep.tolerance = tolerance;
  rep.norm = P[0][0];
  const double nf = to_double(rep.norm.value.re);
  for (const auto& [m, n] : pairs) {
    GramNumericRow row;
    row.m = m;
    row.n = n;
    row.predicted = gram_entry(sys, m, n);
    const PeterssonResult& r = P[pos(m)][pos(n)];
    row.numeric = r.value / rep.norm.value.re;
    const ComplexReal pred = row.predicted.approx();
    double scale = abs(pred).convert_to<double>();
    if (scale == 0) {
      scale = std::sqrt(gram_entry(sys, m, m).abs() * gram_entry(sys, n, n).abs());
    }
    row.relative_deviation = abs(row.numeric - pred).convert_to<double>() / scale;
    row.error = (r.error + abs(row.numeric).convert_to<double>() * rep.norm.error) / std::abs(nf) / scale;
    row.pass = row.relative_deviation < tolerance;
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

template <class T>
std::vector<std::vector<PeterssonResult>> skp_impl(const QSeries& f, const QSeries& g, i64 N, i64 M,
                                                   const QuadratureConfig& cfg) {
  const DirichletCharacter chi = f.character().induce(M);
  const int k = f.integral_weight();
  // Level M: f and g as they are.
  auto at_m = matrix_impl<T>({plain<T>(f), plain<T>(g)}, M, chi, k, cfg);
  // Level N: f against the pointwise trace of g.
  // chi(alpha) is read mod N: alpha lies in Gamma0(N), not Gamma0(M).
  const DirichletCharacter chi_n = f.character().induce(N);
  const CosetSystem cs = coset_reps(N, M);
  Integrand<T> tr{SlashEvaluator<T>(g), {}};
  const T inv = T(1) / T(static_cast<double>(cs.size()));
  for (const auto& alpha : cs.reps) tr.terms.emplace_back(alpha, conj(chi_n.complex_value<T>(alpha.d)) * inv);
  auto at_n = matrix_impl<T>({plain<T>(f), tr}, N, chi_n, k, cfg);
  return {at_m[0], at_m[1], at_n[0]};
}

}  // namespace

TraceSkpReport verify_trace_skp(const QSeries& f, const QSeries& g, i64 N, i64 M, const QuadratureConfig& cfg,
                                double tolerance) {
  cfg.validate();
  if (N < 1 || M % N != 0) throw PreconditionError("verify_trace_skp: N must divide M");
  if (N % f.level() != 0) throw PreconditionError("verify_trace_skp: f must have level dividing N");
  check_compatible(f, g, M);
  if (N % f.character().conductor() != 0) throw PreconditionError("verify_trace_skp: character not defined mod N");
  check_compatible(f, f, N);
  std::vector<std::vector<PeterssonResult>> rows;
  if (cfg.precision_bits <= 53) {
    rows = skp_impl<double>(f, g, N, M, cfg);
  } else {
    PrecisionGuard guard(cfg.precision_bits);
    rows = skp_impl<Real>(f, g, N, M, cfg);
  }
  TraceSkpReport rep;
  rep.lhs = rows[0][1];
  rep.rhs = rows[2][1];
  rep.tolerance = tolerance;
  rep.deviation = abs(rep.lhs.value - rep.rhs.value).convert_to<double>();
  // Cauchy-Schwarz scale, meaningful also when <f, g> vanishes.
  const double scale = std::sqrt(std::abs(rows[0][0].value.re.convert_to<double>()) *
                                 std::abs(rows[1][1].value.re.convert_to<double>()));
  rep.relative_deviation = scale > 0 ? rep.deviation / scale : rep.deviation;
  rep.pass = rep.relative_deviation < tolerance;
  return rep;
}

}  // namespace cuspbasis
