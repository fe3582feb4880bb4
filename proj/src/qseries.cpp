#include "cuspbasis/qseries.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "cuspbasis/errors.hpp"

namespace cuspbasis {

namespace {

double coefficient_scale(i64 n, double half_km1, const std::vector<i64>& s0) {
  return static_cast<double>(s0[n]) * std::pow(static_cast<double>(n), half_km1);
}

double measure(const std::vector<Scalar>& b, i64 stride, i64 T, double weight) {
  const double half_km1 = (weight - 1) / 2;
  const auto s0 = sigma0_table(T);
  double worst = 0;
  for (i64 j = 1; j * stride <= T; ++j) {
    worst = std::max(worst, b[j].abs() / coefficient_scale(j * stride, half_km1, s0));
  }
  return worst;
}

bool all_exact(const std::vector<Scalar>& v) {
  for (const auto& c : v) {
    if (!c.is_exact()) return false;
  }
  return true;
}

bool all_real(const std::vector<Scalar>& v) {
  for (const auto& c : v) {
    if (c.is_exact() ? !c.exact().is_real() : c.approx().im != 0) return false;
  }
  return true;
}

}  // namespace

QSeries::QSeries(std::vector<Scalar> coeffs, Rational weight, i64 level, DirichletCharacter chi,
                 std::optional<double> growth)
    : stride_(1),
      truncation_(static_cast<i64>(coeffs.size()) - 1),
      weight_(std::move(weight)),
      level_(level),
      chi_(std::move(chi)) {
  if (coeffs.empty()) throw PreconditionError("q-series needs at least the constant term");
  if (!coeffs[0].is_zero()) throw PreconditionError("cusp form must have a(0) = 0");
  if (weight_ <= 0) throw PreconditionError("weight must be positive");
  if (level_ < 1) throw PreconditionError("level must be positive");
  if (level_ % chi_.modulus() != 0) {
    throw PreconditionError("character modulus " + std::to_string(chi_.modulus()) +
                            " does not divide level " + std::to_string(level_));
  }
  chi_ = chi_.induce(level_);
  block_ = std::make_shared<Block>();
  block_->exact = all_exact(coeffs);
  block_->real = all_real(coeffs);
  block_->b = std::move(coeffs);
  double measured = measured_growth();
  growth_ = growth ? *growth : 2 * measured;
  if (growth_ < measured * (1 - 1e-12)) {
    throw PreconditionError("growth constant " + std::to_string(growth_) +
                            " is smaller than the measured " + std::to_string(measured));
  }
  growth_ = std::max(growth_, measured);
}

QSeries QSeries::zero(i64 truncation, Rational weight, i64 level, DirichletCharacter chi) {
  return QSeries(std::vector<Scalar>(static_cast<std::size_t>(truncation) + 1), std::move(weight),
                 level, std::move(chi), 0.0);
}

int QSeries::integral_weight() const {
  if (weight_.get_den() != 1) throw PreconditionError("operation needs integral weight");
  return static_cast<int>(weight_.get_num().get_si());
}

double QSeries::measured_growth() const {
  if (!block_) return 0;
  return measure(block_->b, stride_, truncation_, weight_d());
}

bool QSeries::is_exact() const { return !block_ || block_->exact; }

bool QSeries::is_real() const { return !block_ || block_->real; }

bool QSeries::is_zero() const {
  for (i64 j = 1; j * stride_ <= truncation_; ++j) {
    if (!block_->b[j].is_zero()) return false;
  }
  return true;
}

Scalar QSeries::coeff(i64 n) const {
  if (n < 0 || n > truncation_) {
    throw PreconditionError("coefficient index " + std::to_string(n) + " outside 0.." +
                            std::to_string(truncation_));
  }
  if (n % stride_ != 0) return Scalar(0);
  return block_->b[n / stride_];
}

std::vector<Scalar> QSeries::coefficients() const {
  std::vector<Scalar> out(static_cast<std::size_t>(truncation_) + 1);
  for (i64 j = 1; j * stride_ <= truncation_; ++j) out[j * stride_] = block_->b[j];
  return out;
}

QSeries QSeries::with_truncation(i64 T) const {
  if (T > truncation_ || T < 0) {
    throw PreconditionError("cannot extend truncation from " + std::to_string(truncation_) +
                            " to " + std::to_string(T));
  }
  QSeries g = *this;
  g.truncation_ = T;
  return g;
}

QSeries QSeries::with_level(i64 level) const {
  if (level % level_ != 0) throw PreconditionError("new level must be a multiple of the old one");
  QSeries g = *this;
  g.level_ = level;
  g.chi_ = chi_.induce(level);
  return g;
}

template <>
std::shared_ptr<const std::vector<Complex<double>>> QSeries::float_block<double>() const {
  std::lock_guard lock(block_->mu);
  if (!block_->as_double) {
    auto v = std::make_shared<std::vector<Complex<double>>>();
    v->reserve(block_->b.size());
    for (const auto& c : block_->b) {
      auto z = c.to_complex();
      v->emplace_back(z.real(), z.imag());
    }
    block_->as_double = std::move(v);
  }
  return block_->as_double;
}

template <>
std::shared_ptr<const std::vector<ComplexReal>> QSeries::float_block<Real>() const {
  std::lock_guard lock(block_->mu);
  if (!block_->as_real || block_->real_bits != precision_bits()) {
    auto v = std::make_shared<std::vector<ComplexReal>>();
    v->reserve(block_->b.size());
    for (const auto& c : block_->b) v->push_back(c.approx());
    block_->as_real = std::move(v);
    block_->real_bits = precision_bits();
  }
  return block_->as_real;
}

// ---------------------------------------------------------------------------

QSeries apply_V(const QSeries& f, i64 ell) {
  if (ell < 1) throw PreconditionError("apply_V needs l >= 1");
  QSeries g = f;
  g.stride_ = f.stride_ * ell;
  g.truncation_ = f.truncation_ * ell;
  g.level_ = f.level_ * ell;
  g.chi_ = f.chi_.induce(g.level_);
  return g;
}

QSeries apply_U(const QSeries& f, i64 m) {
  if (m < 1) throw PreconditionError("apply_U needs m >= 1");
  if (m == 1) return f;
  const i64 g = gcd(f.stride_, m);
  const i64 new_stride = f.stride_ / g;
  const i64 step = m / g;
  const i64 T = f.truncation_ / m;
  std::vector<Scalar> b(static_cast<std::size_t>(T / new_stride) + 1);
  for (i64 j = 1; j * new_stride <= T; ++j) b[j] = f.block_->b[j * step];

  QSeries out = f;
  out.block_ = std::make_shared<QSeries::Block>();
  out.block_->exact = f.block_->exact;
  out.block_->real = f.block_->real;
  out.block_->b = std::move(b);
  out.stride_ = new_stride;
  out.truncation_ = T;
  out.level_ = lcm(f.level_, m);
  out.chi_ = f.chi_.induce(out.level_);
  // sigma0(nm) <= sigma0(n) sigma0(m).
  out.growth_ = f.growth_ * static_cast<double>(sigma0(m)) *
                std::pow(static_cast<double>(m), (f.weight_d() - 1) / 2);
  return out;
}

QSeries hecke_Tp(const QSeries& f, i64 p) { return hecke_Tp(f, p, f.integral_weight(), f.character()); }

QSeries hecke_Tp(const QSeries& f, i64 p, int k, const DirichletCharacter& chi) {
  if (!is_prime(p)) throw PreconditionError("hecke_Tp needs a prime, got " + std::to_string(p));
  const i64 T = f.truncation() / p;
  Integer pk1;
  mpz_ui_pow_ui(pk1.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k - 1));
  const Scalar second = chi.scalar(p) * Scalar(pk1);
  std::vector<Scalar> out(static_cast<std::size_t>(T) + 1);
  for (i64 n = 1; n <= T; ++n) {
    out[n] = f.coeff(p * n);
    if (n % p == 0 && !second.is_zero()) out[n] += second * f.coeff(n / p);
  }
  double growth = 3 * f.growth() * std::pow(static_cast<double>(p), (k - 1) / 2.0);
  QSeries g(std::move(out), Rational(k), f.level(), f.character(), std::max(growth, 0.0));
  return g;
}

QSeries linear_combination(const std::vector<std::pair<Scalar, QSeries>>& terms) {
  if (terms.empty()) throw PreconditionError("empty linear combination");
  const QSeries& first = terms.front().second;
  i64 T = first.truncation();
  i64 level = first.level();
  double growth = 0;
  for (const auto& [c, f] : terms) {
    if (f.weight() != first.weight()) throw PreconditionError("linear combination of mixed weights");
    if (!f.character().same_values(first.character())) {
      throw PreconditionError("linear combination of forms with different characters");
    }
    T = std::min(T, f.truncation());
    level = lcm(level, f.level());
    growth += c.abs() * f.growth();
  }
  std::vector<Scalar> out(static_cast<std::size_t>(T) + 1);
  for (const auto& [c, f] : terms) {
    if (c.is_zero()) continue;
    for (i64 n = f.stride(); n <= T; n += f.stride()) out[n] += c * f.coeff(n);
  }
  growth = std::max(growth, measure(out, 1, T, first.weight_d()));
  return QSeries(std::move(out), first.weight(), level, first.character().induce(level), growth);
}

QSeries scale(const QSeries& f, const Scalar& c) { return linear_combination({{c, f}}); }

// ---------------------------------------------------------------------------

QSeries eta_product(const std::vector<EtaFactor>& spec, i64 T) {
  if (spec.empty()) throw PreconditionError("empty eta product");
  i64 weight2 = 0, lead24 = 0, scale_lcm = 1;
  Rational inverse_sum(0);
  i64 odd_part = 1;  // square class of prod s^e
  for (const auto& [s, e] : spec) {
    if (s < 1) throw PreconditionError("eta scale must be positive");
    weight2 += e;
    lead24 += s * e;
    scale_lcm = lcm(scale_lcm, s);
    inverse_sum += Rational(e, s);
    if (e % 2 != 0) {
      // Square class of s, accumulated as a squarefree integer.
      for (const auto& [p, v] : factor(s)) {
        if (v % 2 == 0) continue;
        odd_part = odd_part % p == 0 ? odd_part / p : odd_part * p;
      }
    }
  }
  if (weight2 <= 0 || weight2 % 2 != 0) {
    throw PreconditionError("eta product weight " + std::to_string(weight2) + "/2 is not a positive integer");
  }
  if (lead24 <= 0 || lead24 % 24 != 0) {
    throw PreconditionError("eta product leading power " + std::to_string(lead24) +
                            "/24 is not a positive integer");
  }
  const int k = static_cast<int>(weight2 / 2);
  const i64 h = lead24 / 24;

  // Level: least multiple N of the scales with N * sum(e/s) = 0 mod 24.
  i64 level = scale_lcm;
  while (true) {
    Rational t = inverse_sum * level;
    t.canonicalize();
    if (t.get_den() == 1 && mpz_class(t.get_num() % 24) == 0) break;
    level += scale_lcm;
  }
  const i64 disc = (k % 2 == 0 ? 1 : -1) * odd_part;
  DirichletCharacter chi = disc == 1 ? DirichletCharacter::trivial(level)
                                     : DirichletCharacter::kronecker(disc, level);

  std::vector<Scalar> coeffs(static_cast<std::size_t>(std::max<i64>(T, 0)) + 1);
  if (T >= h) {
    const i64 L = T - h;  // c[j] is the coefficient of q^{h+j}
    std::vector<Integer> c(static_cast<std::size_t>(L) + 1);
    c[0] = 1;
    for (const auto& [s, e] : spec) {
      // Pentagonal exponents s*m(3m-1)/2 with sign (-1)^m, m != 0.
      std::vector<std::pair<i64, int>> pent;
      for (i64 m = 1;; ++m) {
        i64 a = s * m * (3 * m - 1) / 2;
        i64 b = s * m * (3 * m + 1) / 2;
        if (a > L) break;
        int sign = m % 2 == 0 ? 1 : -1;
        pent.emplace_back(a, sign);
        if (b <= L) pent.emplace_back(b, sign);
      }
      for (i64 r = 0; r < std::abs(e); ++r) {
        if (e > 0) {
          for (i64 j = L; j >= 1; --j) {
            for (const auto& [off, sign] : pent) {
              if (off > j) break;
              if (sign > 0) {
                c[j] += c[j - off];
              } else {
                c[j] -= c[j - off];
              }
            }
          }
        } else {
          for (i64 j = 1; j <= L; ++j) {
            for (const auto& [off, sign] : pent) {
              if (off > j) break;
              if (sign > 0) {
                c[j] -= c[j - off];
              } else {
                c[j] += c[j - off];
              }
            }
          }
        }
      }
    }
    for (i64 j = 0; j <= L; ++j) coeffs[h + j] = Scalar(c[j]);
  }
  return QSeries(std::move(coeffs), Rational(k), level, chi);
}

// ---------------------------------------------------------------------------

namespace {

// log of 2C Gamma(s, x) / (2 pi y)^s with s = k/2 + 1, x = 2 pi y t.
double log_tail(double growth, double k, double y, double t) {
  const double s = k / 2 + 1;
  const double a = 2 * pi_v<double>() * y;
  const double x = a * t;
  double log_gamma;
  if (x < 600) {
    log_gamma = std::log(boost::math::tgamma(s, x));
  } else {
    // Gamma(s, x) <= x^{s-1} e^{-x} / (1 - (s-1)/x) for x > s - 1.
    log_gamma = (s - 1) * std::log(x) - x - std::log1p(-(s - 1) / x);
  }
  return std::log(2 * growth) + log_gamma - s * std::log(a);
}

}  // namespace

TailPlan plan_terms(double growth, double weight, double y, double eps) {
  if (!(y > 0)) throw DomainError("evaluation needs Im z > 0");
  if (!(eps > 0)) throw PreconditionError("evaluation tolerance must be positive");
  if (growth == 0) return {0, 0};
  const double target = std::log(eps);
  const double start = std::max(1.0, std::ceil(weight / (4 * pi_v<double>() * y)));
  if (start > 4e18) return {std::numeric_limits<i64>::max(), 0};
  i64 lo = static_cast<i64>(start);
  double lo_tail = log_tail(growth, weight, y, static_cast<double>(lo));
  if (lo_tail < target) return {lo, std::exp(lo_tail)};
  i64 hi = lo;
  double hi_tail = lo_tail;
  while (hi_tail >= target) {
    lo = hi;
    if (hi > (i64{1} << 60)) return {std::numeric_limits<i64>::max(), 0};
    hi *= 2;
    hi_tail = log_tail(growth, weight, y, static_cast<double>(hi));
  }
  // tail(lo) >= eps > tail(hi)
  while (hi - lo > 1) {
    i64 mid = lo + (hi - lo) / 2;
    double t = log_tail(growth, weight, y, static_cast<double>(mid));
    if (t < target) {
      hi = mid;
      hi_tail = t;
    } else {
      lo = mid;
    }
  }
  return {hi, std::exp(hi_tail)};
}

template <class T>
SeriesEvaluator<T>::SeriesEvaluator(const QSeries& f) : f_(f), b_(f.template float_block<T>()) {}

template <class T>
Complex<T> SeriesEvaluator<T>::partial(const Complex<T>& z, i64 terms) const {
  const i64 s = f_.stride();
  const i64 J = std::min(terms, f_.truncation()) / s;
  if (J < 1) return Complex<T>();
  const Complex<T> Q = e2pii(Complex<T>(T(z.re * T(s)), T(z.im * T(s))));
  const auto& b = *b_;
  Complex<T> acc = b[J];
  for (i64 j = J - 1; j >= 1; --j) {
    acc *= Q;
    acc += b[j];
  }
  return acc * Q;
}

template <class T>
Complex<T> SeriesEvaluator<T>::operator()(const Complex<T>& z, double eps, TailPlan* plan) const {
  const double y = to_double(z.im);
  if (!(y > 0)) throw DomainError("evaluation needs Im z > 0");
  TailPlan p = plan_terms(f_.growth(), f_.weight_d(), y, eps);
  if (p.terms > f_.truncation()) throw TruncationError(p.terms, f_.truncation(), y);
  if (plan) *plan = p;
  return partial(z, p.terms);
}

template class SeriesEvaluator<double>;
template class SeriesEvaluator<Real>;

EvalCertificate evaluate(const QSeries& f, const ComplexReal& z, double eps) {
  EvalCertificate cert;
  TailPlan plan;
  if (precision_bits() <= 53) {
    SeriesEvaluator<double> ev(f);
    auto v = ev(to_float<double>(z), eps, &plan);
    cert.value = from_double(v);
  } else {
    SeriesEvaluator<Real> ev(f);
    cert.value = ev(z, eps, &plan);
  }
  cert.tail = plan.tail;
  cert.terms = plan.terms;
  return cert;
}

}  // namespace cuspbasis
