#include "cuspbasis/halfint.hpp"

#include "cuspbasis/errors.hpp"
#include "json.hpp"

namespace cuspbasis {

const char* const kNormalizationNote =
    "U(p^2) follows the double coset normalization (p^2)^(k/2-1) sum_b f|alpha_b*; the coefficient map "
    "sum a(n) q^n -> sum a(n p^2) q^n agrees with it only for p dividing the level.";

namespace {

void check_prime_off_level(i64 p, i64 level) {
  if (level < 4 || level % 4 != 0) {
    throw PreconditionError("half-integral weight needs a level divisible by 4, got " + std::to_string(level));
  }
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  if (level % p == 0) {
    throw PreconditionError("p = " + std::to_string(p) + " divides the level " + std::to_string(level));
  }
}

}  // namespace

void HalfIntegralFormSpec::validate() const {
  if (kappa < 1) throw PreconditionError("half-integral weight needs kappa >= 1");
  if (level < 4 || level % 4 != 0) throw PreconditionError("half-integral level must be divisible by 4");
  if (level % character.modulus() != 0 && character.modulus() % level != 0) {
    throw PreconditionError("character modulus incompatible with the level");
  }
  for (const auto& [p, lam] : lambda) check_prime_off_level(p, level);
  if (qexp) {
    if (qexp->weight() != weight()) throw PreconditionError("q-expansion weight differs from kappa + 1/2");
    if (level % qexp->level() != 0) throw PreconditionError("q-expansion level must divide the level");
  }
}

Scalar predicted_product_V(i64 p, int kappa, const Scalar& lambda_p, i64 level) {
  check_prime_off_level(p, level);
  if (kappa < 1) throw PreconditionError("half-integral weight needs kappa >= 1");
  // p^{2(k-1)} = p^{2 kappa - 1}.
  return lambda_p / Scalar(Rational(p * p + p) * rpow(p, 2 * kappa - 1));
}

Scalar predicted_product_U(i64 p, const Scalar& lambda_p, i64 level) {
  check_prime_off_level(p, level);
  return Scalar(p * p) * lambda_p;
}

Rational predicted_ratio_V_over_U(i64 p, int kappa) {
  return 1 / (Rational(p * p + p) * rpow(p, 2 * kappa - 1) * Rational(p * p));
}

std::pair<QSeries, QSeries> halfint_U_V_coeffs(const QSeries& f, i64 m) {
  if (f.level() % 4 != 0) throw PreconditionError("half-integral weight needs a level divisible by 4");
  if (m < 1) throw PreconditionError("halfint_U_V_coeffs needs m >= 1");
  if (m == 1) return {f, f};
  const QSeries u = apply_U(f, m * m);
  // U(m^2) raises the level only to lcm(level, m).
  const i64 level = lcm(f.level(), m);
  QSeries u_level(u.coefficients(), u.weight(), level, f.character().induce(level), u.growth());
  return {u_level, apply_V(f, m * m)};
}

std::string HalfIntReport::to_json(int indent) const {
  nlohmann::json j;
  j["op"] = op;
  j["p"] = p;
  j["kappa"] = kappa;
  j["weight"] = std::to_string(2 * kappa + 1) + "/2";
  j["level"] = level;
  j["lambda"] = lambda.str(30);
  j["value"] = value.str(30);
  j["normalization_note"] = kNormalizationNote;
  return j.dump(indent);
}

HalfIntReport halfint_predict(const std::string& op, i64 p, int kappa, const Scalar& lambda_p, i64 level) {
  HalfIntReport r;
  r.op = op;
  r.p = p;
  r.kappa = kappa;
  r.level = level;
  r.lambda = lambda_p;
  if (op == "V") {
    r.value = predicted_product_V(p, kappa, lambda_p, level);
  } else if (op == "U") {
    r.value = predicted_product_U(p, lambda_p, level);
  } else {
    throw PreconditionError("unknown half-integral operator '" + op + "', expected V or U");
  }
  return r;
}

}  // namespace cuspbasis
