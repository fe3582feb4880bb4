#pragma once

// Truncated q-expansions of cusp forms, the shift operators V and U, eta
// products, and certified pointwise evaluation in the upper half-plane.

#include <memory>
#include <mutex>
#include <optional>
#include <utility>
#include <vector>

#include "cuspbasis/arith.hpp"
#include "cuspbasis/numeric.hpp"

namespace cuspbasis {

struct EvalCertificate {
  ComplexReal value;
  double tail = 0;  // |f(z) - value| <= tail
  i64 terms = 0;    // highest index summed
};

/// f = sum_{1 <= n <= T} a(n) q^n. Coefficients are stored with a stride s:
/// a(n) = 0 unless s | n, so V_l is a relabelling that shares storage.
/// Immutable once built; copies share the coefficient block.
class QSeries {
 public:
  QSeries() = default;

  /// coeffs[n] = a(n) for n = 0..T; coeffs[0] must be zero.
  /// The growth constant is measured from the data and doubled unless given.
  QSeries(std::vector<Scalar> coeffs, Rational weight, i64 level, DirichletCharacter chi,
          std::optional<double> growth = std::nullopt);

  static QSeries zero(i64 truncation, Rational weight, i64 level, DirichletCharacter chi);

  i64 truncation() const { return truncation_; }
  i64 stride() const { return stride_; }
  const Rational& weight() const { return weight_; }
  double weight_d() const { return weight_.get_d(); }
  /// Integral weight; throws for half-integral series.
  int integral_weight() const;
  i64 level() const { return level_; }
  const DirichletCharacter& character() const { return chi_; }
  /// |a(n)| <= C sigma0(n) n^{(k-1)/2} for every n, stored or not.
  double growth() const { return growth_; }
  /// max over stored n of |a(n)| / (sigma0(n) n^{(k-1)/2}).
  double measured_growth() const;

  bool is_exact() const;
  /// All coefficients real.
  bool is_real() const;
  bool is_zero() const;

  /// a(n) for 0 <= n <= T.
  Scalar coeff(i64 n) const;
  std::vector<Scalar> coefficients() const;

  QSeries with_truncation(i64 T) const;
  QSeries with_level(i64 level) const;

  /// Floats of a(s j), j = 0..T/s, cached per (type, precision).
  template <class T>
  std::shared_ptr<const std::vector<Complex<T>>> float_block() const;

 private:
  struct Block {
    std::vector<Scalar> b;  // b[j] = a(stride * j)
    bool exact = true;
    bool real = true;
    std::mutex mu;
    std::shared_ptr<const std::vector<Complex<double>>> as_double;
    int real_bits = 0;
    std::shared_ptr<const std::vector<ComplexReal>> as_real;
  };

  friend QSeries apply_V(const QSeries&, i64);
  friend QSeries apply_U(const QSeries&, i64);

  std::shared_ptr<Block> block_;
  i64 stride_ = 1;
  i64 truncation_ = 0;
  Rational weight_{0};
  i64 level_ = 1;
  DirichletCharacter chi_;
  double growth_ = 0;
};

/// f(l z): a(n/l) when l | n. Level multiplies by l.
QSeries apply_V(const QSeries& f, i64 ell);
/// n -> a(n m). Truncation floor(T/m); level becomes lcm(level, m).
QSeries apply_U(const QSeries& f, i64 m);
/// a(pn) + chi(p) p^{k-1} a(n/p), with f's weight and character.
QSeries hecke_Tp(const QSeries& f, i64 p);
QSeries hecke_Tp(const QSeries& f, i64 p, int k, const DirichletCharacter& chi);

/// sum c_i f_i. All terms need equal weight; truncation is the minimum, level the lcm.
QSeries linear_combination(const std::vector<std::pair<Scalar, QSeries>>& terms);
QSeries scale(const QSeries& f, const Scalar& c);

struct EtaFactor {
  i64 scale;
  i64 exponent;
};

/// prod eta(scale z)^exponent through q^T with exact integer coefficients.
/// Requires integral positive weight and integral positive leading power.
QSeries eta_product(const std::vector<EtaFactor>& spec, i64 T);

// ---------------------------------------------------------------------------
// Evaluation

struct TailPlan {
  i64 terms = 0;
  double tail = 0;
};

/// Smallest T' with 2C Gamma(k/2+1, 2 pi y T') / (2 pi y)^{k/2+1} < eps,
/// over T' >= k/(4 pi y) where the summand bound is decreasing.
TailPlan plan_terms(double growth, double weight, double y, double eps);

/// Horner evaluation of one series in a fixed floating type.
template <class T>
class SeriesEvaluator {
 public:
  explicit SeriesEvaluator(const QSeries& f);

  const QSeries& series() const { return f_; }

  /// Throws DomainError for Im z <= 0 and TruncationError if T is too short.
  Complex<T> operator()(const Complex<T>& z, double eps, TailPlan* plan = nullptr) const;
  /// Sum through a fixed number of terms (no certificate).
  Complex<T> partial(const Complex<T>& z, i64 terms) const;

 private:
  QSeries f_;
  std::shared_ptr<const std::vector<Complex<T>>> b_;
};

EvalCertificate evaluate(const QSeries& f, const ComplexReal& z, double eps);

}  // namespace cuspbasis
