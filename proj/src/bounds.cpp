#include "cuspbasis/bounds.hpp"

#include <algorithm>

#include "cuspbasis/errors.hpp"
#include "cuspbasis/orthobasis.hpp"
#include "json.hpp"

namespace cuspbasis {

namespace {

int bound_bits() { return std::max(64, precision_bits()); }

// Relative slack covering the accumulated rounding of a few dozen operations.
Real round_up(const Real& x) { return x * (1 + ldexp(Real(1), 10 - bound_bits())); }
Real round_down(const Real& x) { return x * (1 - ldexp(Real(1), 10 - bound_bits())); }

}  // namespace

std::string to_string(BoundVariant v) {
  switch (v) {
    case BoundVariant::orthonormal_element:
      return "orthonormal-element";
    case BoundVariant::general_form:
      return "general-form";
    case BoundVariant::general_form_coprime:
      return "general-form-coprime";
  }
  return "?";
}

Real bound_constant() {
  PrecisionGuard g(bound_bits());
  const Real pi = pi_v<Real>();
  return Real(2 * sqrt(pi) * exp(2 * pi));
}

Real local_bound_factor(i64 M, bool coprime) {
  if (M < 1) throw PreconditionError("local_bound_factor: M must be positive");
  PrecisionGuard g(bound_bits());
  Real acc(1);
  for (i64 p : prime_divisors(M)) {
    const Real one_plus = 1 + Real(1) / p;
    const Real up = coprime ? one_plus : Real(one_plus * one_plus * one_plus);
    acc *= up / sqrt(1 - Real(1) / (Real(p) * p * p * p));
  }
  return acc;
}

Real hi_bound(i64 n, int k, i64 M, bool coprime) {
  if (n < 1 || k < 1 || M < 1) throw PreconditionError("hi_bound needs n, k, M >= 1");
  if (coprime && gcd(n, M) != 1) {
    throw PreconditionError("the coprime bound needs gcd(n, M) = 1, got n = " + std::to_string(n) +
                            ", M = " + std::to_string(M));
  }
  PrecisionGuard g(bound_bits());
  const Real v = bound_constant() * Real(sigma0(n)) * pow(Real(n), Real(k - 1) / 2) * sqrt(Real(M)) *
                 local_bound_factor(M, coprime);
  return round_up(v);
}

BoundReport F_bound(i64 n, int k, i64 M, double norm_F, i64 dim, bool coprime) {
  if (!(norm_F > 0)) throw PreconditionError("F_bound: norm must be positive");
  if (dim < 1) throw PreconditionError("F_bound: dimension must be positive");
  PrecisionGuard g(bound_bits());
  BoundReport r;
  r.n = n;
  r.k = k;
  r.M = M;
  r.variant = coprime ? BoundVariant::general_form_coprime : BoundVariant::general_form;
  r.norm = norm_F;
  r.dim = dim;
  r.value = round_up(hi_bound(n, k, M, coprime) * sqrt(Real(norm_F) * dim));
  return r;
}

std::string BoundReport::to_json(int indent) const {
  nlohmann::json j;
  j["n"] = n;
  j["k"] = k;
  j["M"] = M;
  j["variant"] = to_string(variant);
  j["bound"] = format_real(value, 20);
  if (norm) j["norm"] = *norm;
  if (dim) j["dim"] = *dim;
  return j.dump(indent);
}

Real petersson_lower_bound(i64 N) {
  if (N < 1) throw PreconditionError("petersson_lower_bound needs N >= 1");
  PrecisionGuard g(bound_bits());
  const Real pi = pi_v<Real>();
  const Real index = to_float<Real>(index_gamma0(1, N));
  return round_down(Real(1 / (4 * pi * exp(4 * pi) * index)));
}

i64 checked_dimension(const std::vector<NewformRecord>& records, i64 M, int k, const DirichletCharacter& chi,
                      std::optional<i64> supplied) {
  const auto d = static_cast<i64>(translates_basis(records, M, k, chi).dimension());
  if (supplied && *supplied != d) {
    throw DataError("dimension " + std::to_string(*supplied) + " supplied, but the newform data give " +
                    std::to_string(d) + " translates at level " + std::to_string(M) + "; the data are incomplete");
  }
  return d;
}

bool EmpiricalReport::passes() const {
  return !rows.empty() &&
         std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.violations == 0 && r.eigen_ok; });
}

std::string EmpiricalReport::to_json(int indent) const {
  nlohmann::json j;
  j["M"] = M;
  j["k"] = k;
  j["n_max"] = n_max;
  j["eigen_tolerance"] = eigen_tolerance;
  j["pass"] = passes();
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json e;
    e["form_id"] = r.form_id;
    nlohmann::json ex = nlohmann::json::array();
    for (const auto& [p, jp] : r.exponents) ex.push_back({p, jp});
    e["exponents"] = ex;
    e["max_ratio"] = r.max_ratio;
    e["worst_n"] = r.worst_n;
    e["violations"] = r.violations;
    e["max_eigen_residual"] = r.max_eigen_residual;
    e["eigen_ok"] = r.eigen_ok;
    arr.push_back(e);
  }
  j["rows"] = arr;
  return j.dump(indent);
}

EmpiricalReport empirical_check(const std::vector<NewformRecord>& records, i64 M, int k,
                                const DirichletCharacter& chi, i64 n_max, double eigen_tolerance) {
  if (n_max < 1) throw PreconditionError("empirical_check needs n_max >= 1");
  std::map<std::string, double> norms;
  std::map<std::string, const NewformRecord*> by_id;
  for (const auto& r : records) {
    if (!r.norm) throw PreconditionError("empirical_check: record " + r.id + " has no Petersson norm");
    if (!r.qexp || r.qexp->truncation() < n_max) {
      throw PreconditionError("empirical_check: record " + r.id + " needs a q-expansion through " +
                              std::to_string(n_max));
    }
    norms[r.id] = r.norm->value;
    by_id[r.id] = &r;
  }
  const FullBasis basis = assemble_full_basis(records, M, k, chi);
  const auto elements = orthonormalize(basis.elements, BasisMode::absolute, norms);

  EmpiricalReport rep;
  rep.M = M;
  rep.k = k;
  rep.n_max = n_max;
  rep.eigen_tolerance = eigen_tolerance;
  const auto s0 = sigma0_table(n_max);
  const DirichletCharacter chi_m = chi.induce(M);
  const Real c = bound_constant() * sqrt(Real(M)) * local_bound_factor(M, false);
  for (const auto& h : elements) {
    const NewformRecord& rec = *by_id.at(h.form_id);
    const QSeries& f = *rec.qexp;
    // a(h, n) = sum_l c_l a(f, n / l).
    std::vector<ComplexReal> a(static_cast<std::size_t>(n_max + 1));
    for (const auto& [ell, coef] : h.coefficients()) {
      const ComplexReal cz = coef.approx();
      for (i64 m = 1; m * ell <= n_max; ++m) {
        const Scalar am = f.coeff(m);
        if (!am.is_zero()) a[static_cast<std::size_t>(m * ell)] += cz * am.approx();
      }
    }
    EmpiricalRow row;
    row.form_id = h.form_id;
    row.exponents = h.exponents;
    for (i64 n = 1; n <= n_max; ++n) {
      // Same constant as hi_bound, rounded up once per element.
      const Real bound = round_up(c * Real(s0[static_cast<std::size_t>(n)]) * pow(Real(n), Real(k - 1) / 2));
      const Real absn = abs(a[static_cast<std::size_t>(n)]);
      const double ratio = Real(absn / bound).convert_to<double>();
      if (ratio > row.max_ratio) {
        row.max_ratio = ratio;
        row.worst_n = n;
      }
      if (absn > bound) ++row.violations;
    }
    EigenvalueSystem sys(rec);
    Real scale(0);
    for (const auto& v : a) scale = max(scale, abs(v));
    for (i64 p : primes_up_to(7)) {
      if (M % p == 0) continue;
      const ComplexReal lam = sys.lambda(p).approx();
      const ComplexReal chip = chi_m.complex_value<Real>(p);
      const Real pk1 = pow(Real(p), k - 1);
      const Real tol = eigen_tolerance * (1 + abs(lam)) * pk1 * scale;
      for (i64 n = 1; n * p <= n_max; ++n) {
        ComplexReal t = a[static_cast<std::size_t>(n * p)];
        if (n % p == 0) t += chip * pk1 * a[static_cast<std::size_t>(n / p)];
        const Real res = abs(t - lam * a[static_cast<std::size_t>(n)]);
        const double rel = scale > 0 ? Real(res / ((1 + abs(lam)) * pk1 * scale)).convert_to<double>() : 0.0;
        row.max_eigen_residual = std::max(row.max_eigen_residual, rel);
        if (res > tol) row.eigen_ok = false;
      }
    }
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace cuspbasis
