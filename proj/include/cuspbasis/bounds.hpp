#pragma once

// Explicit bounds for Fourier coefficients of orthonormal basis elements and
// of arbitrary cusp forms, the lower bound for the norm of a primitive form,
// and an empirical check of the coefficient bound on synthesized bases.
//
// Every bound is computed at no less than 64 bits and then rounded up, so a
// reported value never falls below the exact one.

#include <string>
#include <vector>

#include "cuspbasis/newforms.hpp"

namespace cuspbasis {

enum class BoundVariant { orthonormal_element, general_form, general_form_coprime };

std::string to_string(BoundVariant v);

/// 2 sqrt(pi) e^{2 pi}.
Real bound_constant();

/// prod_{p | M} (1 + 1/p)^e / sqrt(1 - 1/p^4) with e = 3, or e = 1 for the coprime variant.
Real local_bound_factor(i64 M, bool coprime);

/// 2 sqrt(pi) e^{2 pi} sigma0(n) n^{(k-1)/2} M^{1/2} local_bound_factor(M, coprime).
/// The coprime variant requires gcd(n, M) = 1.
Real hi_bound(i64 n, int k, i64 M, bool coprime = false);

struct BoundReport {
  i64 n = 1;
  int k = 0;
  i64 M = 1;
  Real value;
  BoundVariant variant = BoundVariant::orthonormal_element;
  std::optional<double> norm;  // <F, F>
  std::optional<i64> dim;

  std::string to_json(int indent = 2) const;
};

/// hi_bound (or its coprime variant) times sqrt(norm_F dim).
BoundReport F_bound(i64 n, int k, i64 M, double norm_F, i64 dim, bool coprime = false);

/// 1 / (4 pi e^{4 pi} N prod_{p | N} (1 + 1/p)), rounded down.
Real petersson_lower_bound(i64 N);

/// Translate count at (M, k, chi); a supplied dimension must agree with it.
i64 checked_dimension(const std::vector<NewformRecord>& records, i64 M, int k, const DirichletCharacter& chi,
                      std::optional<i64> supplied = std::nullopt);

struct EmpiricalRow {
  std::string form_id;
  std::vector<std::pair<i64, int>> exponents;
  double max_ratio = 0;        // max over n of |a(h, n)| / hi_bound(n)
  i64 worst_n = 1;
  std::size_t violations = 0;  // n with |a(h, n)| > hi_bound(n)
  double max_eigen_residual = 0;  // relative T(p) residual over p not dividing M, p <= 7
  bool eigen_ok = true;
};

struct EmpiricalReport {
  i64 M = 1;
  int k = 0;
  i64 n_max = 0;
  double eigen_tolerance = 0;
  std::vector<EmpiricalRow> rows;

  bool passes() const;
  std::string to_json(int indent = 2) const;
};

/// Synthesizes each orthonormal basis element h (absolute mode, from the
/// records' norms) through n_max and compares |a(h, n)| with hi_bound.
/// Also checks T(p) h = lambda(1, p) h for primes p <= 7 not dividing M.
/// Throws PreconditionError when a record lacks a norm or a long enough expansion.
EmpiricalReport empirical_check(const std::vector<NewformRecord>& records, i64 M, int k,
                                const DirichletCharacter& chi, i64 n_max, double eigen_tolerance = 1e-10);

}  // namespace cuspbasis
