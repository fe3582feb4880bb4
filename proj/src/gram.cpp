#include "cuspbasis/gram.hpp"

#include <algorithm>
#include <sstream>

#include "cuspbasis/errors.hpp"
#include "json.hpp"

namespace cuspbasis {

bool GramMatrix::is_exact() const {
  for (const auto& row : entries) {
    for (const auto& v : row) {
      if (!v.is_exact()) return false;
    }
  }
  return true;
}

std::size_t GramMatrix::position(i64 ell) const {
  auto it = std::lower_bound(index.begin(), index.end(), ell);
  if (it == index.end() || *it != ell) {
    throw PreconditionError("index " + std::to_string(ell) + " is not a divisor in the Gram index");
  }
  return static_cast<std::size_t>(it - index.begin());
}

Scalar gram_entry(const EigenvalueSystem& sys, i64 m, i64 n) {
  if (m < 1 || n < 1) throw PreconditionError("gram_entry needs m, n >= 1");
  const i64 d = gcd(m, n);
  const i64 mp = m / d, np = n / d;
  Rational den = rpow(d * mp * np, sys.weight()) * local_factor_product(mp * np, sys.level());
  return sys.lambda(np) * sys.lambda(mp).conj() / Scalar(den);
}

GramMatrix gram_matrix(const EigenvalueSystem& sys, i64 M) {
  if (M < 1 || M % sys.level() != 0) {
    throw PreconditionError("gram_matrix: level " + std::to_string(sys.level()) +
                            " does not divide " + std::to_string(M));
  }
  GramMatrix G;
  G.form_id = sys.record().id;
  G.level = M;
  G.index = divisors(M / sys.level());
  const std::size_t r = G.index.size();
  G.entries.assign(r, std::vector<Scalar>(r));
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) {
      G.entries[i][j] = gram_entry(sys, G.index[i], G.index[j]);
      if (j != i) G.entries[j][i] = G.entries[i][j].conj();
    }
  }
  return G;
}

namespace {

bool close_ulps(const Scalar& a, const Scalar& b, double ulps) {
  if (a.is_exact() && b.is_exact()) return a == b;
  ComplexReal x = a.approx(), y = b.approx();
  Real scale = std::max(abs(x), abs(y));
  Real eps = ldexp(Real(1), -precision_bits());
  return abs(x - y) <= ulps * eps * scale;
}

}  // namespace

bool product_decomposition_check(const EigenvalueSystem& sys, i64 m1, i64 m1p, i64 m2, i64 m2p) {
  if (gcd(m1 * m1p, m2 * m2p) != 1) {
    throw PreconditionError("product decomposition needs gcd(m1 m1', m2 m2') = 1");
  }
  Scalar lhs = gram_entry(sys, m1, m1p) * gram_entry(sys, m2, m2p);
  Scalar rhs = gram_entry(sys, m1 * m2, m1p * m2p);
  return close_ulps(lhs, rhs, 4);
}

bool is_hermitian(const GramMatrix& G) {
  for (std::size_t i = 0; i < G.size(); ++i) {
    for (std::size_t j = 0; j < G.size(); ++j) {
      if (!(G.entries[i][j] == G.entries[j][i].conj())) return false;
    }
  }
  return true;
}

namespace {

// Determinant of the leading n x n block by elimination with nonzero pivots.
Scalar leading_determinant(const std::vector<std::vector<Scalar>>& m, std::size_t n) {
  std::vector<std::vector<Scalar>> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i].assign(m[i].begin(), m[i].begin() + n);
  Scalar det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && b[piv][c].is_zero()) ++piv;
    if (piv == n) return Scalar(0);
    if (piv != c) {
      std::swap(b[piv], b[c]);
      det = -det;
    }
    det *= b[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      Scalar f = b[i][c] / b[c][c];
      for (std::size_t j = c; j < n; ++j) b[i][j] -= f * b[c][j];
    }
  }
  return det;
}

}  // namespace

std::vector<Scalar> leading_minors(const GramMatrix& G) {
  // Without pivoting the r-th minor is the product of the first r pivots; a
  // zero pivot breaks that, and the remaining minors are computed one by one.
  const std::size_t n = G.size();
  std::vector<Scalar> out;
  std::vector<std::vector<Scalar>> a = G.entries;
  Scalar det(1);
  for (std::size_t r = 0; r < n; ++r) {
    if (a[r][r].is_zero()) {
      for (std::size_t s = r; s < n; ++s) out.push_back(leading_determinant(G.entries, s + 1));
      return out;
    }
    det *= a[r][r];
    out.push_back(det);
    for (std::size_t i = r + 1; i < n; ++i) {
      Scalar f = a[i][r] / a[r][r];
      for (std::size_t j = r; j < n; ++j) a[i][j] -= f * a[r][j];
    }
  }
  return out;
}

Scalar bilinear(const GramMatrix& G, const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.size() != G.size() || b.size() != G.size()) {
    throw PreconditionError("coefficient vectors do not match the Gram index");
  }
  Scalar s(0);
  for (std::size_t i = 0; i < G.size(); ++i) {
    if (a[i].is_zero()) continue;
    Scalar row(0);
    for (std::size_t j = 0; j < G.size(); ++j) {
      if (!b[j].is_zero()) row += G.entries[i][j] * b[j].conj();
    }
    s += a[i] * row;
  }
  return s;
}

std::string decimal_string(const Scalar& s, int digits) {
  if (s.is_exact()) {
    PrecisionGuard guard(std::max(precision_bits(), static_cast<int>(digits * 3.33) + 16));
    return Scalar(s.approx()).str(digits);
  }
  return s.str(digits);
}

std::string gram_to_json(const GramMatrix& G, int indent) {
  nlohmann::json j;
  j["form"] = G.form_id;
  j["level"] = G.level;
  j["index"] = G.index;
  j["exact"] = G.is_exact();
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : G.entries) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& v : row) r.push_back(v.str(30));
    rows.push_back(r);
  }
  j["entries"] = rows;
  return j.dump(indent);
}

std::string gram_to_csv(const GramMatrix& G, int digits) {
  std::ostringstream os;
  os << "ell";
  for (i64 l : G.index) os << ',' << l;
  os << '\n';
  for (std::size_t i = 0; i < G.size(); ++i) {
    os << G.index[i];
    for (const auto& v : G.entries[i]) os << ',' << decimal_string(v, digits);
    os << '\n';
  }
  return os.str();
}

}  // namespace cuspbasis
