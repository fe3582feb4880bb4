#pragma once

// Closed-form Petersson products of translates of one primitive form:
// G[m, n] = <f~|V_m, f~|V_n> with f~ = f / sqrt(<f, f>).

#include <string>
#include <vector>

#include "cuspbasis/newforms.hpp"

namespace cuspbasis {

struct GramMatrix {
  std::string form_id;
  i64 level = 1;               // M
  std::vector<i64> index;      // divisors l of M/N, ascending
  std::vector<std::vector<Scalar>> entries;

  std::size_t size() const { return index.size(); }
  bool is_exact() const;
  /// Position of l in the index; throws if absent.
  std::size_t position(i64 ell) const;
};

/// lambda(1, n/d) conj(lambda(1, m/d)) / ((mn/d)^k prod_{p | mn/d^2, p not dividing N} (1 + 1/p)),
/// d = gcd(m, n).
Scalar gram_entry(const EigenvalueSystem& sys, i64 m, i64 n);

GramMatrix gram_matrix(const EigenvalueSystem& sys, i64 M);

/// G[m1, m1'] G[m2, m2'] == G[m1 m2, m1' m2'] (exactly, or to 4 ulps for floats).
/// Requires gcd(m1 m1', m2 m2') = 1.
bool product_decomposition_check(const EigenvalueSystem& sys, i64 m1, i64 m1p, i64 m2, i64 m2p);

bool is_hermitian(const GramMatrix& G);

/// Leading principal minors det G[0..r, 0..r], r = 0..size-1, by exact elimination
/// when G is exact.
std::vector<Scalar> leading_minors(const GramMatrix& G);

/// a^T G conj(b) for coefficient vectors aligned with G.index.
Scalar bilinear(const GramMatrix& G, const std::vector<Scalar>& a, const std::vector<Scalar>& b);

std::string gram_to_json(const GramMatrix& G, int indent = 2);
std::string gram_to_csv(const GramMatrix& G, int digits = 20);

/// Scientific decimal text for a scalar; exact values are rounded, not printed as fractions.
std::string decimal_string(const Scalar& s, int digits);

}  // namespace cuspbasis
