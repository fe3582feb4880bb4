#pragma once

// Explicit orthogonal bases of the span of the translates f~|V_l, l | M/N.
//
// Every coefficient is stored as sqrt(scale_sq) * value with scale_sq and
// value exact whenever the eigenvalues are rational. For odd weight the
// factors p^{jk/2} are irrational, and this split keeps the orthogonality
// checks exact.

#include <map>
#include <string>
#include <vector>

#include "cuspbasis/gram.hpp"

namespace cuspbasis {

struct PrimeBasisElement {
  i64 p = 2;
  int j = 0;
  Rational scale_sq;                            // p^{jk}
  std::vector<std::pair<int, Scalar>> values;   // (i, value) on f~|V_{p^i}, i ascending
  Scalar norm_sq;

  /// sqrt(scale_sq) * value at i; exact when scale_sq is a square.
  Scalar coefficient(int i) const;
};

/// g_0..g_r spanning the translates f~|V_{p^i}, i <= r.
std::vector<PrimeBasisElement> prime_basis(const EigenvalueSystem& sys, i64 p, int r);

enum class BasisMode {
  orthogonal,  // norm_sq as computed, coefficients on f~|V_l
  relative,    // unit norm, coefficients on f~|V_l
  absolute,    // unit norm, coefficients on f|V_l
};

struct OrthoBasisElement {
  std::string form_id;
  i64 form_level = 1;
  std::vector<std::pair<i64, int>> exponents;  // (p, j_p) for p | M/N, p ascending
  Rational scale_sq{1};
  std::map<i64, Scalar> values;                // l -> value
  Scalar norm_sq{1};
  BasisMode mode = BasisMode::orthogonal;

  Scalar coefficient(i64 ell) const;
  std::map<i64, Scalar> coefficients() const;
};

struct FullBasis {
  std::vector<OrthoBasisElement> elements;
  std::vector<std::string> warnings;
};

/// One element per (record, exponent vector); exponent vectors run
/// lexicographically with the smallest prime most significant.
FullBasis assemble_full_basis(const std::vector<NewformRecord>& records, i64 M, int k,
                              const DirichletCharacter& chi);

/// Orthogonal basis of the translates of a single form at level M.
std::vector<OrthoBasisElement> form_basis(const EigenvalueSystem& sys, i64 M);

struct OrthogonalityReport {
  std::string form_id;
  std::size_t count = 0;
  bool exact = true;                  // every product was computed exactly
  double max_off_diagonal = 0;        // max |<g_a, g_b>|, a != b
  double max_norm_discrepancy = 0;    // max |<g_a, g_a> - norm_sq(a)|
  std::size_t nonzero_off_diagonal = 0;
  std::size_t nonzero_norm_discrepancy = 0;

  bool all_zero() const { return nonzero_off_diagonal == 0 && nonzero_norm_discrepancy == 0; }
  /// Exact zeros, or float residuals below tol relative to the norms.
  bool passes(double tol) const;
};

/// Pairwise products c_a^T G conj(c_b) for the elements belonging to G's form.
/// Throws when an element uses a translate outside G's index or is in absolute mode.
OrthogonalityReport gram_schmidt_check(const GramMatrix& G, const std::vector<OrthoBasisElement>& elements);

/// Divides each element by sqrt(norm_sq). In absolute mode it also divides by
/// sqrt(<f, f>) taken from norms[form_id], so the coefficients refer to f|V_l.
std::vector<OrthoBasisElement> orthonormalize(std::vector<OrthoBasisElement> elements, BasisMode mode,
                                              const std::map<std::string, double>& norms = {});

std::string basis_to_json(const std::vector<OrthoBasisElement>& elements, int indent = 2);

}  // namespace cuspbasis
