#pragma once

// Half-integral weight k = kappa + 1/2 on Gamma0(4N): the predicted products
// <f, f|V_{p^2}> and <f, f|U(p^2)> of a T(p^2)-eigenform, and the
// coefficient maps U(m^2) and V_{m^2}.
//
// The U formula is taken with the double coset normalization
// U(p^2) = (p^2)^{k/2 - 1} sum_b f|alpha_b*, while halfint_U_V_coeffs applies
// the plain index map sum a(n) q^n -> sum a(n m^2) q^n. Every report carries
// kNormalizationNote so the two conventions are not mixed silently.

#include <optional>
#include <string>
#include <utility>

#include "cuspbasis/qseries.hpp"

namespace cuspbasis {

extern const char* const kNormalizationNote;

struct HalfIntegralFormSpec {
  int kappa = 1;  // weight kappa + 1/2
  i64 level = 4;  // 4N
  DirichletCharacter character;
  std::map<i64, Scalar> lambda;  // T(p^2) eigenvalue for p not dividing the level
  std::optional<QSeries> qexp;

  Rational weight() const { return Rational(2 * kappa + 1, 2); }
  /// Throws PreconditionError unless kappa >= 1, 4 | level and the q-expansion matches.
  void validate() const;
};

/// lambda_p / ((p^2 + p) p^{2(k-1)}), the predicted <f, f|V_{p^2}> / <f, f>.
/// Requires p prime, p not dividing level, 4 | level.
Scalar predicted_product_V(i64 p, int kappa, const Scalar& lambda_p, i64 level = 4);

/// p^2 lambda_p, the predicted <f, f|U(p^2)> / <f, f>.
Scalar predicted_product_U(i64 p, const Scalar& lambda_p, i64 level = 4);

/// 1 / ((p^2 + p) p^{2k-2} p^2), the quotient of the two predictions at lambda_p = 1.
Rational predicted_ratio_V_over_U(i64 p, int kappa);

/// (f|U(m^2), f|V_{m^2}). U keeps the level lcm(level, m), V multiplies it by m^2.
std::pair<QSeries, QSeries> halfint_U_V_coeffs(const QSeries& f, i64 m);

struct HalfIntReport {
  std::string op;  // "V" or "U"
  i64 p = 3;
  int kappa = 1;
  i64 level = 4;
  Scalar lambda;
  Scalar value;

  std::string to_json(int indent = 2) const;
};

HalfIntReport halfint_predict(const std::string& op, i64 p, int kappa, const Scalar& lambda_p, i64 level = 4);

}  // namespace cuspbasis
