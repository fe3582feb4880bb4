// Command-line front end: ingestion, bases, Gram matrices, numeric products,
// bounds, half-integral predictions and the verification suites.
//
// Every command builds a JSON document; csv and pretty output are renderings
// of it. Exit status is 0 iff every check the command ran passed.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "cuspbasis/bounds.hpp"
#include "cuspbasis/errors.hpp"
#include "cuspbasis/gram.hpp"
#include "cuspbasis/halfint.hpp"
#include "cuspbasis/modgroup.hpp"
#include "cuspbasis/orthobasis.hpp"
#include "cuspbasis/petersson.hpp"
#include "json.hpp"

using namespace cuspbasis;
using nlohmann::json;

namespace {

constexpr const char* kPrecisionEnv = "CUSPBASIS_PRECISION";

struct Options {
  int precision = 128;
  std::string format = "json";
  std::vector<std::string> data;
  unsigned seed = 2024;
  i64 kronecker = 1;  // character n -> (D/n); 1 is trivial
  i64 truncation = 0;  // 0 keeps each expansion's own length
  QuadratureConfig quad;
};

int env_precision() {
  const char* v = std::getenv(kPrecisionEnv);
  if (!v || !*v) return 128;
  try {
    return std::stoi(v);
  } catch (const std::exception&) {
    throw PreconditionError(std::string(kPrecisionEnv) + " is not an integer: " + v);
  }
}

// Leaves of a JSON document as (path, scalar text) pairs.
void flatten(const json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(*it, path.empty() ? it.key() : path + "." + it.key(), out);
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else {
    out.emplace_back(path, j.is_string() ? j.get<std::string>() : j.dump());
  }
}

void emit(const json& j, const Options& o) {
  if (o.format == "json") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(j, "", rows);
  if (o.format == "csv") {
    std::cout << "key,value\n";
    for (const auto& [k, v] : rows) std::cout << k << "," << v << "\n";
  } else {
    std::size_t w = 0;
    for (const auto& r : rows) w = std::max(w, r.first.size());
    for (const auto& [k, v] : rows) std::cout << k << std::string(w + 2 - k.size(), ' ') << v << "\n";
  }
}

DirichletCharacter character(const Options& o) {
  return o.kronecker == 1 ? DirichletCharacter::trivial(1) : DirichletCharacter::kronecker(o.kronecker);
}

NewformRecord truncated(NewformRecord rec, const Options& o) {
  if (o.truncation > 0 && rec.qexp) rec.qexp = rec.qexp->with_truncation(o.truncation);
  return rec;
}

NewformRecord embedded_form(const Options& o, const std::string& id) { return truncated(embedded(id), o); }

std::vector<NewformRecord> load_records(const Options& o) {
  std::vector<NewformRecord> recs;
  for (const auto& name : embedded_names()) recs.push_back(embedded_form(o, name));
  for (const auto& path : o.data) {
    IngestResult r = ingest_file(path);
    if (!r.ok()) throw DataError("dataset " + path + " failed validation; run `ingest` for details");
    for (auto& rec : r.records) recs.push_back(truncated(std::move(rec), o));
  }
  return recs;
}

// The dataset mixes weights; the basis routines take one weight at a time.
std::vector<NewformRecord> of_weight(std::vector<NewformRecord> recs, int k) {
  std::erase_if(recs, [k](const NewformRecord& r) { return r.weight != k; });
  return recs;
}

const NewformRecord& find_form(const std::vector<NewformRecord>& recs, const std::string& id) {
  for (const auto& r : recs) {
    if (r.id == id) return r;
  }
  throw PreconditionError("no form with id '" + id + "'");
}

// Decimal digits carried by the working precision.
int digits(int bits) { return std::max(17, static_cast<int>(bits * 0.30103)); }

json result_json(const PeterssonResult& r, int bits) {
  return {{"re", format_real(r.value.re, digits(bits))},
          {"im", format_real(r.value.im, digits(bits))},
          {"error", r.error},
          {"index", r.index},
          {"refinement", r.refinement},
          {"certificate", r.certificate},
          {"spectral", r.spectral}};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_ingest(const Options& o, const std::string& path, i64 hecke_through) {
  IngestResult r = ingest_file(path);
  json recs = json::array(), reports = json::array();
  bool ok = true;
  for (const auto& rec : r.records) {
    recs.push_back({{"id", rec.id},
                    {"level", rec.level},
                    {"weight", rec.weight},
                    {"character", rec.character.describe()},
                    {"max_prime", rec.max_prime()},
                    {"truncation", rec.qexp ? rec.qexp->truncation() : 0}});
    const ValidationReport v = validate_record(rec, hecke_through);
    json issues = json::array();
    for (const auto& i : v.issues) issues.push_back({{"check", i.check}, {"where", i.where}, {"detail", i.detail}});
    reports.push_back({{"id", rec.id}, {"ok", v.ok()}, {"issues", issues}});
    ok = ok && v.ok();
  }
  emit({{"path", path}, {"records", recs}, {"reports", reports}, {"ok", ok}}, o);
  return ok ? 0 : 1;
}

int cmd_basis(const Options& o, i64 M, int k, const std::string& mode_name, const std::string& out_dir) {
  const auto recs = of_weight(load_records(o), k);
  const DirichletCharacter chi = character(o);
  FullBasis basis = assemble_full_basis(recs, M, k, chi);
  if (basis.elements.empty()) {
    throw DataError("no newform data for level " + std::to_string(M) + ", weight " + std::to_string(k));
  }

  json grams = json::object(), checks = json::array();
  bool pass = true;
  std::set<std::string> ids;
  for (const auto& e : basis.elements) ids.insert(e.form_id);
  std::map<std::string, double> norms;
  for (const auto& id : ids) {
    const NewformRecord& rec = find_form(recs, id);
    const GramMatrix G = gram_matrix(EigenvalueSystem(rec), M);
    grams[id] = json::parse(gram_to_json(G));
    const OrthogonalityReport rep = gram_schmidt_check(G, basis.elements);
    const bool ok = rep.exact ? rep.all_zero() : rep.passes(1e-20);
    pass = pass && ok;
    checks.push_back({{"form_id", id},
                      {"count", rep.count},
                      {"exact", rep.exact},
                      {"nonzero_off_diagonal", rep.nonzero_off_diagonal},
                      {"nonzero_norm_discrepancy", rep.nonzero_norm_discrepancy},
                      {"max_off_diagonal", rep.max_off_diagonal},
                      {"max_norm_discrepancy", rep.max_norm_discrepancy},
                      {"pass", ok}});
    if (mode_name == "absolute") {
      norms[id] = rec.norm ? rec.norm->value : numeric_norm(rec, o.quad).value;
    }
  }

  std::vector<OrthoBasisElement> elements = basis.elements;
  if (mode_name == "relative") elements = orthonormalize(elements, BasisMode::relative);
  if (mode_name == "absolute") elements = orthonormalize(elements, BasisMode::absolute, norms);

  json doc = {{"level", M},
              {"weight", k},
              {"character", chi.describe()},
              {"dimension", elements.size()},
              {"mode", mode_name},
              {"elements", json::parse(basis_to_json(elements))},
              {"gram", grams},
              // Translates of distinct newforms are orthogonal, so the blocks between forms vanish.
              {"cross_form_blocks", "zero"},
              {"checks", checks},
              {"warnings", basis.warnings},
              {"pass", pass}};
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir + "/basis.json") << doc["elements"].dump(2) << "\n";
    for (auto it = grams.begin(); it != grams.end(); ++it) {
      std::ofstream(out_dir + "/gram_" + it.key() + ".json") << it->dump(2) << "\n";
    }
    std::ofstream(out_dir + "/checks.json") << checks.dump(2) << "\n";
  }
  emit(doc, o);
  return pass ? 0 : 1;
}

int cmd_gram(const Options& o, const std::string& id, i64 M) {
  auto recs = load_records(o);
  const GramMatrix G = gram_matrix(EigenvalueSystem(find_form(recs, id)), M);
  if (o.format == "csv") {
    std::cout << gram_to_csv(G);
  } else {
    emit(json::parse(gram_to_json(G)), o);
  }
  return 0;
}

// <f, f|V_m> at level M; m = 1 gives the norm.
int cmd_petersson(const Options& o, const std::string& id, i64 M, const std::string& with) {
  i64 m = 1;
  if (!with.empty()) {
    if (with.rfind("V=", 0) != 0) throw PreconditionError("--with expects V=<m>, got '" + with + "'");
    try {
      m = std::stoll(with.substr(2));
    } catch (const std::exception&) {
      throw PreconditionError("--with expects V=<m>, got '" + with + "'");
    }
    if (m < 1 || M % m != 0) throw PreconditionError("V=" + std::to_string(m) + " needs m | M");
  }
  auto recs = load_records(o);
  const NewformRecord& rec = find_form(recs, id);
  if (!rec.qexp) throw PreconditionError("form " + id + " has no q-expansion");
  const PeterssonResult r = petersson_product(*rec.qexp, apply_V(*rec.qexp, m), M, o.quad);
  json j = result_json(r, o.precision);
  j["value"] = {j["re"], j["im"]};
  j.erase("re");
  j.erase("im");
  j["form_id"] = id;
  j["level"] = M;
  j["with"] = "V=" + std::to_string(m);
  j["nodes"] = o.quad.nodes;
  j["Y"] = o.quad.Y;
  j["precision"] = o.precision;
  // Against the closed form <f~, f~|V_m> = G[1, m] once divided by <f, f>.
  if (m > 1) {
    const PeterssonResult n = petersson_product(*rec.qexp, *rec.qexp, rec.level, o.quad);
    const ComplexReal ratio = r.value / n.value.re;
    j["normalized"] = {format_real(ratio.re, digits(o.precision)), format_real(ratio.im, digits(o.precision))};
    j["predicted"] = gram_entry(EigenvalueSystem(rec), 1, m).str(digits(o.precision));
  }
  emit(j, o);
  return 0;
}

int cmd_bound(const Options& o, i64 M, int k, i64 n, bool coprime, std::optional<double> norm,
              std::optional<i64> dim) {
  if (!norm) {
    BoundReport r;
    r.n = n;
    r.k = k;
    r.M = M;
    r.value = hi_bound(n, k, M, coprime);
    json j = json::parse(r.to_json());
    j["coprime"] = coprime;
    emit(j, o);
    return 0;
  }
  const auto recs = of_weight(load_records(o), k);
  const i64 known = checked_dimension(recs, M, k, character(o));
  std::string source = "newform data";
  i64 d = known;
  if (dim) {
    if (known == 0) {
      d = *dim;
      source = "supplied (no newform data at this level and weight to cross-check)";
    } else {
      checked_dimension(recs, M, k, character(o), dim);
      source = "supplied, matches newform data";
    }
  } else if (known == 0) {
    throw DataError("no newform data at level " + std::to_string(M) + ", weight " + std::to_string(k) +
                    "; pass --dim");
  }
  json j = json::parse(F_bound(n, k, M, *norm, d, coprime).to_json());
  j["dim_source"] = source;
  emit(j, o);
  return 0;
}

int cmd_halfint(const Options& o, i64 p, int kappa, const std::string& lambda, const std::string& op, i64 level) {
  emit(json::parse(halfint_predict(op, p, kappa, Scalar(parse_rational(lambda)), level).to_json()), o);
  return 0;
}

// ---------------------------------------------------------------------------
// Verification suites

json suite_trace_hecke(const Options& o, std::size_t points, bool& pass) {
  const auto pts = seeded_points(points, o.seed);
  json rows = json::array();
  auto run = [&](const std::string& id, i64 d) {
    const auto rep = verify_trace_hecke(embedded_form(o, id), d, pts, 1e-20, 1e-8);
    for (const auto& r : rep.rows) {
      rows.push_back({{"identity", rep.identity},
                      {"form", id},
                      {"d", d},
                      {"point", {r.point.real(), r.point.imag()}},
                      {"lhs", {format_real(r.lhs.re, digits(o.precision)), format_real(r.lhs.im, digits(o.precision))}},
                      {"rhs", {format_real(r.rhs.re, digits(o.precision)), format_real(r.rhs.im, digits(o.precision))}},
                      {"deviation", r.deviation},
                      {"certificate", r.certificate},
                      {"pass", r.pass}});
    }
    pass = pass && rep.passes();
  };
  for (i64 d : {2, 3, 4}) run("delta", d);
  run("11a", 11);
  return rows;
}

json suite_trace_skp(const Options& o, bool& pass) {
  json rows = json::array();
  auto run = [&](const std::string& id, i64 N, i64 d) {
    const QSeries f = *embedded_form(o, id).qexp;
    const auto rep = verify_trace_skp(f, apply_V(f, d), N, N * d, o.quad);
    rows.push_back({{"form", id},
                    {"N", N},
                    {"M", N * d},
                    {"lhs", result_json(rep.lhs, o.precision)},
                    {"rhs", result_json(rep.rhs, o.precision)},
                    {"relative_deviation", rep.relative_deviation},
                    {"pass", rep.pass}});
    pass = pass && rep.pass;
  };
  run("delta", 1, 2);
  run("11a", 11, 2);
  return rows;
}

json suite_gram_numeric(const Options& o, bool& pass) {
  json rows = json::array();
  auto run = [&](const std::string& id, i64 M, std::vector<std::pair<i64, i64>> pairs) {
    const auto rep = verify_gram_numeric(embedded_form(o, id), M, pairs, o.quad, 1e-3);
    for (const auto& r : rep.rows) {
      rows.push_back({{"form", id},
                      {"level", M},
                      {"m", r.m},
                      {"n", r.n},
                      {"predicted", r.predicted.str(20)},
                      {"numeric", format_real(r.numeric.re, 20)},
                      {"relative_deviation", r.relative_deviation},
                      {"pass", r.pass}});
    }
    pass = pass && rep.passes();
  };
  run("delta", 2, {{1, 2}, {2, 2}});
  run("delta", 3, {{1, 3}});
  run("delta", 6, {{1, 2}, {2, 2}, {1, 3}, {2, 3}});
  run("11a", 22, {{1, 2}});
  return rows;
}

json suite_bounds(const Options& o, bool& pass) {
  json rows = json::array();
  const auto triv = DirichletCharacter::trivial(1);
  auto run = [&](const std::string& id, i64 M, int k) {
    NewformRecord rec = embedded_form(o, id);
    rec.norm = numeric_norm(rec, o.quad);
    const auto rep = empirical_check({rec}, M, k, triv, 1000);
    json j = json::parse(rep.to_json());
    j["form"] = id;
    j["norm"] = rec.norm->value;
    rows.push_back(j);
    pass = pass && rep.passes();
  };
  run("delta", 1, 12);
  run("delta", 2, 12);
  run("11a", 11, 2);
  return rows;
}

int cmd_verify(const Options& o, const std::string& suite, std::size_t points) {
  json doc = {{"suite", suite}, {"precision", o.precision}, {"seed", o.seed}};
  bool pass = true;
  json results = json::object();
  const bool all = suite == "all";
  if (all || suite == "trace-hecke") results["trace-hecke"] = suite_trace_hecke(o, points, pass);
  if (all || suite == "trace-skp") results["trace-skp"] = suite_trace_skp(o, pass);
  if (all || suite == "gram-numeric") results["gram-numeric"] = suite_gram_numeric(o, pass);
  if (all || suite == "bounds-empirical") results["bounds-empirical"] = suite_bounds(o, pass);
  doc["results"] = results;
  doc["pass"] = pass;
  emit(doc, o);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orthogonal bases of cusp form spaces from newform data"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  try {
    o.precision = env_precision();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  app.add_option("--precision", o.precision, std::string("Working precision in bits (default from ") + kPrecisionEnv +
                                                 ", else 128)")
      ->check(CLI::Range(53, 4096));
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "csv", "pretty"}));
  app.add_option("--data", o.data, "Newform dataset JSON files added to the embedded forms");
  app.add_option("--seed", o.seed, "Seed for test points");
  app.add_option("--kronecker", o.kronecker, "Character n -> (D/n); 1 for trivial");
  app.add_option("--nodes", o.quad.nodes, "Gauss-Legendre nodes per cell")->check(CLI::Range(2, 200));
  app.add_option("--Y", o.quad.Y, "Quadrature height")->check(CLI::Range(2.0, 50.0));
  app.add_option("--cells-y", o.quad.cells_y, "Cells on [1, Y]")->check(CLI::Range(1, 100));
  app.add_option("--truncation", o.truncation, "Shorten every q-expansion to this many terms")
      ->check(CLI::PositiveNumber);

  std::string path;
  i64 hecke_through = 0;
  auto* ingest = app.add_subcommand("ingest", "Parse and validate a newform dataset");
  ingest->add_option("file", path, "Dataset JSON")->required();
  ingest->add_option("--hecke-through", hecke_through, "Check T(p) f = lambda f through this index (0: all)");

  i64 level = 1, n = 1;
  int weight = 2;
  std::string mode = "relative", out_dir, form, with;
  auto* basis = app.add_subcommand("basis", "Orthogonal basis of S_k(Gamma0(M), chi)");
  basis->add_option("--level", level)->required();
  basis->add_option("--weight", weight)->required();
  basis->add_option("--mode", mode)->check(CLI::IsMember({"orthogonal", "relative", "absolute"}));
  basis->add_option("--out", out_dir, "Directory for basis, Gram and check files");

  auto* gram = app.add_subcommand("gram", "Exact Gram matrix of the translates of one form");
  gram->add_option("--form", form)->required();
  gram->add_option("--level", level)->required();

  auto* pet = app.add_subcommand("petersson", "Numeric <f, f|V_m> at level M");
  pet->add_option("--form", form)->required();
  pet->add_option("--level", level)->required();
  pet->add_option("--with", with, "V=<m> pairs f with f|V_m");
  pet->add_option("--prec", o.precision, "Working precision in bits")->check(CLI::Range(53, 4096));

  bool coprime = false;
  std::optional<double> norm;
  std::optional<i64> dim;
  auto* bound = app.add_subcommand("bound", "Fourier coefficient bound");
  bound->add_option("--level", level)->required();
  bound->add_option("--weight", weight)->required();
  bound->add_option("--n", n)->required();
  bound->add_flag("--coprime", coprime, "Use the bound for gcd(n, M) = 1");
  bound->add_option("--norm", norm, "<F, F> for the general-form bound");
  bound->add_option("--dim", dim, "dim S_k(Gamma0(M), chi), cross-checked against the newform data");

  i64 p = 3, hlevel = 4;
  int kappa = 1;
  std::string lambda = "1", op = "V";
  auto* half = app.add_subcommand("halfint", "Half-integral weight predictions");
  auto* predict = half->add_subcommand("predict", "Predicted <f, f|V_{p^2}> or <f, f|U(p^2)> over <f, f>");
  half->require_subcommand(1);
  predict->add_option("--p", p)->required();
  predict->add_option("--kappa", kappa)->required();
  predict->add_option("--lambda", lambda)->required();
  predict->add_option("--op", op)->check(CLI::IsMember({"V", "U"}));
  predict->add_option("--level", hlevel, "Level 4N");

  std::string suite;
  std::size_t points = 5;
  auto* verify = app.add_subcommand("verify", "Run a verification suite on the embedded forms");
  verify->add_option("--suite", suite)
      ->required()
      ->check(CLI::IsMember({"trace-hecke", "trace-skp", "gram-numeric", "bounds-empirical", "all"}));
  verify->add_option("--points", points, "Seeded points for trace-hecke");

  CLI11_PARSE(app, argc, argv);

  try {
    if (o.precision < 53) throw PreconditionError("precision must be at least 53 bits");
    set_precision_bits(o.precision);
    o.quad.precision_bits = o.precision;
    if (*ingest) return cmd_ingest(o, path, hecke_through);
    if (*basis) return cmd_basis(o, level, weight, mode, out_dir);
    if (*gram) return cmd_gram(o, form, level);
    if (*pet) return cmd_petersson(o, form, level, with);
    if (*bound) return cmd_bound(o, level, weight, n, coprime, norm, dim);
    if (*half) return cmd_halfint(o, p, kappa, lambda, op, hlevel);
    if (*verify) return cmd_verify(o, suite, points);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
