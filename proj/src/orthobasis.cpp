#include "cuspbasis/orthobasis.hpp"

#include <algorithm>
#include <cmath>

#include "cuspbasis/errors.hpp"
#include "json.hpp"

namespace cuspbasis {

namespace {

Scalar scaled(const Scalar& value, const Rational& scale_sq) {
  Rational root;
  if (exact_sqrt(scale_sq, root)) return value * Scalar(root);
  return value * Scalar(ComplexReal(sqrt_real(scale_sq)));
}

}  // namespace

Scalar PrimeBasisElement::coefficient(int i) const {
  for (const auto& [idx, v] : values) {
    if (idx == i) return scaled(v, scale_sq);
  }
  return Scalar(0);
}

std::vector<PrimeBasisElement> prime_basis(const EigenvalueSystem& sys, i64 p, int r) {
  if (r < 0) throw PreconditionError("prime_basis needs r >= 0");
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  const int k = sys.weight();
  const Rational pk = rpow(p, k);
  std::vector<PrimeBasisElement> out;
  out.push_back({p, 0, Rational(1), {{0, Scalar(1)}}, Scalar(1)});
  if (r == 0) return out;

  const Scalar lambda = sys.lambda(p);
  const Scalar lbar = lambda.conj();
  const Scalar abs_sq = lambda.norm();
  if (sys.level() % p == 0) {
    // g_j = p^{jk/2} (f~|V_{p^j} - conj(lambda)/p^k f~|V_{p^{j-1}}), norm 1 - |lambda|^2/p^k.
    const Scalar c = -lbar / Scalar(pk);
    const Scalar norm = Scalar(1) - abs_sq / Scalar(pk);
    for (int j = 1; j <= r; ++j) {
      out.push_back({p, j, rpow(p, j * k), {{j - 1, c}, {j, Scalar(1)}}, norm});
    }
    return out;
  }

  // p does not divide N.
  const Rational local = 1 + Rational(1, p);
  const Scalar norm1 = Scalar(1) - abs_sq / Scalar(Rational(pk * local * local));
  out.push_back({p, 1, pk, {{0, -lbar / Scalar(Rational(pk * local))}, {1, Scalar(1)}}, norm1});
  const Scalar c1 = -lbar / Scalar(pk);
  const Scalar c2 = sys.character().scalar(p).conj() / Scalar(Rational(pk * p));
  const Scalar norm = Scalar(Rational(1 - Rational(1, p * p))) * norm1;
  for (int j = 2; j <= r; ++j) {
    out.push_back({p, j, rpow(p, j * k), {{j - 2, c2}, {j - 1, c1}, {j, Scalar(1)}}, norm});
  }
  return out;
}

Scalar OrthoBasisElement::coefficient(i64 ell) const {
  auto it = values.find(ell);
  return it == values.end() ? Scalar(0) : scaled(it->second, scale_sq);
}

std::map<i64, Scalar> OrthoBasisElement::coefficients() const {
  std::map<i64, Scalar> out;
  for (const auto& [ell, v] : values) out.emplace(ell, scaled(v, scale_sq));
  return out;
}

std::vector<OrthoBasisElement> form_basis(const EigenvalueSystem& sys, i64 M) {
  if (M < 1 || M % sys.level() != 0) {
    throw PreconditionError("form level " + std::to_string(sys.level()) + " does not divide " +
                            std::to_string(M));
  }
  const auto fac = factor(M / sys.level());
  std::vector<std::vector<PrimeBasisElement>> local;
  for (const auto& [p, e] : fac) local.push_back(prime_basis(sys, p, e));

  std::vector<OrthoBasisElement> out;
  std::vector<int> js(fac.size(), 0);
  while (true) {
    OrthoBasisElement el;
    el.form_id = sys.record().id;
    el.form_level = sys.level();
    el.values = {{1, Scalar(1)}};
    for (std::size_t t = 0; t < fac.size(); ++t) {
      const PrimeBasisElement& g = local[t][js[t]];
      el.exponents.emplace_back(g.p, g.j);
      el.scale_sq *= g.scale_sq;
      el.norm_sq *= g.norm_sq;
      std::map<i64, Scalar> next;
      for (const auto& [ell, v] : el.values) {
        for (const auto& [i, w] : g.values) next[ell * ipow(g.p, i)] += v * w;
      }
      el.values = std::move(next);
    }
    std::erase_if(el.values, [](const auto& kv) { return kv.second.is_zero(); });
    out.push_back(std::move(el));
    // Odometer with the last prime fastest.
    std::size_t t = fac.size();
    while (t > 0) {
      --t;
      if (js[t] < fac[t].exponent) {
        ++js[t];
        break;
      }
      js[t] = 0;
      if (t == 0) return out;
    }
    if (fac.empty()) return out;
  }
}

FullBasis assemble_full_basis(const std::vector<NewformRecord>& records, i64 M, int k,
                              const DirichletCharacter& chi) {
  const TranslateBasis translates = translates_basis(records, M, k, chi);
  FullBasis out;
  out.warnings = translates.warnings;
  std::size_t last = records.size();
  for (const auto& t : translates.items) {
    if (t.record == last) continue;
    last = t.record;
    auto part = form_basis(EigenvalueSystem(records[t.record]), M);
    out.elements.insert(out.elements.end(), std::make_move_iterator(part.begin()),
                        std::make_move_iterator(part.end()));
  }
  return out;
}

bool OrthogonalityReport::passes(double tol) const {
  if (exact) return all_zero();
  return max_off_diagonal <= tol && max_norm_discrepancy <= tol;
}

OrthogonalityReport gram_schmidt_check(const GramMatrix& G, const std::vector<OrthoBasisElement>& elements) {
  OrthogonalityReport rep;
  rep.form_id = G.form_id;
  std::vector<const OrthoBasisElement*> mine;
  std::vector<std::vector<Scalar>> vecs;
  for (const auto& el : elements) {
    if (el.form_id != G.form_id) continue;
    if (el.mode == BasisMode::absolute) {
      throw PreconditionError("gram_schmidt_check needs coefficients on normalized translates");
    }
    std::vector<Scalar> v(G.size());
    for (const auto& [ell, x] : el.values) v[G.position(ell)] = x;
    mine.push_back(&el);
    vecs.push_back(std::move(v));
  }
  rep.count = mine.size();
  for (std::size_t a = 0; a < mine.size(); ++a) {
    for (std::size_t b = a; b < mine.size(); ++b) {
      const Scalar raw = bilinear(G, vecs[a], vecs[b]);
      rep.exact = rep.exact && raw.is_exact();
      if (a == b) {
        const Scalar diff = Scalar(mine[a]->scale_sq) * raw - mine[a]->norm_sq;
        rep.exact = rep.exact && diff.is_exact();
        if (!diff.is_zero()) {
          ++rep.nonzero_norm_discrepancy;
          rep.max_norm_discrepancy = std::max(rep.max_norm_discrepancy, diff.abs());
        }
      } else if (!raw.is_zero()) {
        ++rep.nonzero_off_diagonal;
        const double mag =
            std::sqrt(to_float<double>(Rational(mine[a]->scale_sq * mine[b]->scale_sq))) * raw.abs();
        rep.max_off_diagonal = std::max(rep.max_off_diagonal, mag);
      }
    }
  }
  return rep;
}

std::vector<OrthoBasisElement> orthonormalize(std::vector<OrthoBasisElement> elements, BasisMode mode,
                                              const std::map<std::string, double>& norms) {
  for (auto& el : elements) {
    if (el.mode != BasisMode::orthogonal) throw PreconditionError("element is already normalized");
    const ComplexReal n = el.norm_sq.approx();
    if (!(n.re > 0) || n.im != 0) {
      throw PreconditionError("element of " + el.form_id + " has a non-positive squared norm");
    }
    if (mode == BasisMode::orthogonal) continue;
    if (mode == BasisMode::relative) {
      if (el.norm_sq.is_rational()) {
        el.scale_sq /= el.norm_sq.rational();
      } else {
        using std::sqrt;
        const Scalar inv(ComplexReal(Real(1 / sqrt(n.re))));
        for (auto& [ell, v] : el.values) v *= inv;
      }
    } else {
      auto it = norms.find(el.form_id);
      if (it == norms.end() || !(it->second > 0)) {
        throw PreconditionError("absolute normalization needs <f, f> for " + el.form_id);
      }
      using std::sqrt;
      const Real factor = sqrt(to_float<Real>(el.scale_sq) / (n.re * Real(it->second)));
      for (auto& [ell, v] : el.values) v *= Scalar(ComplexReal(factor));
      el.scale_sq = 1;
    }
    el.norm_sq = Scalar(1);
    el.mode = mode;
  }
  return elements;
}

namespace {

nlohmann::json scalar_json(const Scalar& s) {
  if (s.is_rational()) return s.rational().get_str();
  const int digits = static_cast<int>(std::ceil(precision_bits() * 0.30103)) + 2;
  if (s.is_exact()) return nlohmann::json::array({s.exact().re.get_str(), s.exact().im.get_str()});
  const ComplexReal z = s.approx();
  if (z.im == 0) return format_real(z.re, digits);
  return nlohmann::json::array({format_real(z.re, digits), format_real(z.im, digits)});
}

const char* mode_name(BasisMode m) {
  switch (m) {
    case BasisMode::orthogonal:
      return "orthogonal";
    case BasisMode::relative:
      return "relative";
    case BasisMode::absolute:
      return "absolute";
  }
  return "";
}

}  // namespace

std::string basis_to_json(const std::vector<OrthoBasisElement>& elements, int indent) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& el : elements) {
    nlohmann::json e;
    e["form_id"] = el.form_id;
    e["mode"] = mode_name(el.mode);
    nlohmann::json ex = nlohmann::json::object();
    for (const auto& [p, j] : el.exponents) ex[std::to_string(p)] = j;
    e["exponents"] = ex;
    nlohmann::json cs = nlohmann::json::object();
    for (const auto& [ell, c] : el.coefficients()) cs[std::to_string(ell)] = scalar_json(c);
    e["coefficients"] = cs;
    // Exact data behind irrational coefficients: coefficient = sqrt(scale_sq) * value.
    e["scale_sq"] = el.scale_sq.get_str();
    nlohmann::json vs = nlohmann::json::object();
    for (const auto& [ell, v] : el.values) vs[std::to_string(ell)] = scalar_json(v);
    e["values"] = vs;
    e["norm_sq"] = scalar_json(el.norm_sq);
    arr.push_back(e);
  }
  return arr.dump(indent);
}

}  // namespace cuspbasis
