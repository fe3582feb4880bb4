#pragma once

// Numerical Petersson products
//   <f, g> = (1/index) sum_i int_F (f|gamma_i) conj(g|gamma_i) y^{k-2} dx dy
// over the standard SL2(Z) domain F, with gamma_i running over Gamma0(M) \ SL2(Z).
//
// The cosets are grouped into cusp families gamma T^j, whose translates of
// F tile the half-strip above each cusp. Below the height Y the integral
// uses a Gauss-Legendre tensor rule on each translate, with the arc boundary
// in the limits. Above Y it is summed by Parseval from the expansion
// h(z) = sum_n c_n e^{2 pi i (n + kappa)(z - iY)/w}, whose coefficients come
// from a discrete Fourier transform of samples on Im z = Y.
//
// The error estimate is heuristic: the change from a rule with half the
// nodes, plus evaluation certificates, plus the energy in the upper half of
// each sampled spectrum.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cuspbasis/gram.hpp"
#include "cuspbasis/modgroup.hpp"

namespace cuspbasis {

struct QuadratureConfig {
  double Y = 6;              // height where quadrature hands over to Parseval
  int nodes = 20;            // Gauss-Legendre nodes per cell and direction
  int cells_x = 1;           // cells across each translate of F
  int cells_y = 4;           // cells on [1, Y]
  double eps = 1e-25;        // absolute error per pointwise evaluation
  int precision_bits = 128;  // at most 53 selects hardware doubles

  /// Throws PreconditionError unless Y >= 2, nodes >= 2, cells >= 1, eps > 0.
  void validate() const;
};

struct PeterssonResult {
  ComplexReal value;
  double error = 0;
  i64 index = 1;
  double refinement = 0;   // |fine - coarse| quadrature
  double certificate = 0;  // pointwise evaluation errors
  double spectral = 0;     // Parseval truncation and aliasing
};

/// <f, g> at level M; f and g need equal weight, levels dividing M and the same character.
PeterssonResult petersson_product(const QSeries& f, const QSeries& g, i64 M, const QuadratureConfig& cfg = {});

/// All products <fs[i], fs[j]> from one set of evaluations.
std::vector<std::vector<PeterssonResult>> petersson_matrix(const std::vector<QSeries>& fs, i64 M,
                                                          const QuadratureConfig& cfg = {});

struct GramNumericRow {
  i64 m = 1, n = 1;
  Scalar predicted;
  ComplexReal numeric;        // <f|V_m, f|V_n> / <f, f>
  double relative_deviation = 0;
  double error = 0;           // propagated quadrature estimate, relative
  bool pass = false;
};

struct GramNumericReport {
  std::string form_id;
  i64 M = 1;
  double tolerance = 0;
  PeterssonResult norm;  // <f, f>
  std::vector<GramNumericRow> rows;

  bool passes() const;
};

/// <f, f> at the form's own level, tagged as a numeric value.
PeterssonNorm numeric_norm(const NewformRecord& rec, const QuadratureConfig& cfg = {});

/// Numeric <f|V_m, f|V_n> / <f, f> against gram_entry for each pair.
GramNumericReport verify_gram_numeric(const NewformRecord& rec, i64 M, const std::vector<std::pair<i64, i64>>& pairs,
                                      const QuadratureConfig& cfg = {}, double tolerance = 1e-3);

struct TraceSkpReport {
  PeterssonResult lhs;  // <f, g> at level M
  PeterssonResult rhs;  // <f, g|tr_N^M> at level N
  double deviation = 0;
  double relative_deviation = 0;
  double tolerance = 0;
  bool pass = false;
};

/// <f, g> = <f, g|tr_N^M> for f of level N and g of level M, the trace
/// evaluated pointwise inside the level-N integrand.
TraceSkpReport verify_trace_skp(const QSeries& f, const QSeries& g, i64 N, i64 M, const QuadratureConfig& cfg = {},
                                double tolerance = 1e-3);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
template <class T>
std::pair<std::vector<T>, std::vector<T>> gauss_legendre(int n);

}  // namespace cuspbasis
