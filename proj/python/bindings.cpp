// pybind11 module _cuspbasis. Exact values cross the boundary as strings
// ("p/q" or "re + im*i"); the Python package turns them into Fractions.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cuspbasis/bounds.hpp"
#include "cuspbasis/errors.hpp"
#include "cuspbasis/gram.hpp"
#include "cuspbasis/halfint.hpp"
#include "cuspbasis/orthobasis.hpp"
#include "cuspbasis/petersson.hpp"

namespace py = pybind11;
using namespace cuspbasis;

namespace {

QuadratureConfig quadrature(int nodes, double Y, int precision_bits) {
  QuadratureConfig cfg;
  cfg.nodes = nodes;
  cfg.Y = Y;
  cfg.precision_bits = precision_bits;
  cfg.validate();
  return cfg;
}

std::vector<NewformRecord> embedded_of_weight(int k) {
  std::vector<NewformRecord> out;
  for (const auto& name : embedded_names()) {
    NewformRecord r = embedded(name);
    if (r.weight == k) out.push_back(std::move(r));
  }
  return out;
}

std::string basis_json(i64 M, int k, const std::string& mode) {
  const auto recs = embedded_of_weight(k);
  const FullBasis basis = assemble_full_basis(recs, M, k, DirichletCharacter::trivial(1));
  if (mode == "orthogonal") return basis_to_json(basis.elements);
  if (mode == "relative") return basis_to_json(orthonormalize(basis.elements, BasisMode::relative));
  if (mode != "absolute") throw PreconditionError("mode must be orthogonal, relative or absolute");
  std::map<std::string, double> norms;
  QuadratureConfig cfg;
  cfg.precision_bits = 53;
  for (const auto& r : recs) {
    if (M % r.level == 0) norms[r.id] = numeric_norm(r, cfg).value;
  }
  return basis_to_json(orthonormalize(basis.elements, BasisMode::absolute, norms));
}

py::dict orthogonality(const std::string& id, i64 M) {
  const EigenvalueSystem sys(embedded(id));
  const auto rep = gram_schmidt_check(gram_matrix(sys, M), form_basis(sys, M));
  py::dict d;
  d["count"] = rep.count;
  d["exact"] = rep.exact;
  d["all_zero"] = rep.all_zero();
  d["max_off_diagonal"] = rep.max_off_diagonal;
  return d;
}

std::pair<double, double> norm_with_error(const std::string& id, int nodes, double Y, int bits) {
  const NewformRecord r = embedded(id);
  if (!r.qexp) throw DataError("form " + id + " has no q-expansion");
  const PeterssonResult p = petersson_product(*r.qexp, *r.qexp, r.level, quadrature(nodes, Y, bits));
  return {to_double(p.value.re), p.error};
}

// Numeric <f~|V_m, f~|V_n> at level M, with f~ = f / sqrt(<f, f>).
std::pair<std::complex<double>, double> gram_numeric(const std::string& id, i64 M, i64 m, i64 n, int nodes, double Y,
                                                     int bits) {
  const auto rep = verify_gram_numeric(embedded(id), M, {{m, n}}, quadrature(nodes, Y, bits), 1e-3);
  const auto& r = rep.rows.at(0);
  return {{to_double(r.numeric.re), to_double(r.numeric.im)}, r.error};
}

}  // namespace

PYBIND11_MODULE(_cuspbasis, m) {
  m.doc() = "Orthogonal bases of cusp form spaces from newform data";

  static py::exception<Error> base(m, "Error", PyExc_RuntimeError);
  py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<SchemaError>(m, "SchemaError", base.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());

  m.def("embedded_names", &embedded_names);
  m.def("form_info", [](const std::string& id) {
    const NewformRecord r = embedded(id);
    py::dict d;
    d["id"] = r.id;
    d["level"] = r.level;
    d["weight"] = r.weight;
    d["character"] = r.character.describe();
    d["max_prime"] = r.max_prime();
    return d;
  });
  m.def(
      "coefficients",
      [](const std::string& id, i64 count) {
        const NewformRecord r = embedded(id);
        if (!r.qexp || count > r.qexp->truncation()) throw DataError("expansion shorter than " + std::to_string(count));
        std::vector<std::string> out;
        for (i64 n = 1; n <= count; ++n) out.push_back(r.qexp->coeff(n).str(30));
        return out;
      },
      py::arg("id"), py::arg("count"), "a(1), ..., a(count) as exact strings");
  m.def(
      "eigenvalue", [](const std::string& id, i64 n) { return EigenvalueSystem(embedded(id)).lambda(n).str(30); },
      py::arg("id"), py::arg("n"), "lambda(1, n)");
  m.def(
      "gram_entry", [](const std::string& id, i64 a, i64 b) { return gram_entry(EigenvalueSystem(embedded(id)), a, b).str(30); },
      py::arg("id"), py::arg("m"), py::arg("n"), "<f~|V_m, f~|V_n> in closed form");
  m.def(
      "gram_json", [](const std::string& id, i64 M) { return gram_to_json(gram_matrix(EigenvalueSystem(embedded(id)), M)); },
      py::arg("id"), py::arg("level"));
  m.def("basis_json", &basis_json, py::arg("level"), py::arg("weight"), py::arg("mode") = "orthogonal");
  m.def("orthogonality", &orthogonality, py::arg("id"), py::arg("level"));
  m.def("petersson_norm", &norm_with_error, py::arg("id"), py::arg("nodes") = 20, py::arg("Y") = 6.0,
        py::arg("precision_bits") = 53, "(<f, f>, error estimate)");
  m.def("petersson_gram_entry", &gram_numeric, py::arg("id"), py::arg("level"), py::arg("m"), py::arg("n"),
        py::arg("nodes") = 20, py::arg("Y") = 6.0, py::arg("precision_bits") = 53);

  m.def("bound_constant", [] { return to_double(bound_constant()); });
  m.def(
      "hi_bound", [](i64 n, int k, i64 M, bool coprime) { return to_double(hi_bound(n, k, M, coprime)); },
      py::arg("n"), py::arg("k"), py::arg("level"), py::arg("coprime") = false);
  m.def(
      "petersson_lower_bound", [](i64 N) { return to_double(petersson_lower_bound(N)); }, py::arg("level"));
  m.def(
      "halfint_predict",
      [](const std::string& op, i64 p, int kappa, const std::string& lambda, i64 level) {
        return halfint_predict(op, p, kappa, Scalar(parse_rational(lambda)), level).value.str(30);
      },
      py::arg("op"), py::arg("p"), py::arg("kappa"), py::arg("lambda_p"), py::arg("level") = 4);
  m.attr("normalization_note") = kNormalizationNote;
}
