#include "cuspbasis/newforms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>

#include "cuspbasis/errors.hpp"
#include "json.hpp"

namespace cuspbasis {

using nlohmann::json;

i64 NewformRecord::max_prime() const { return eigenvalues.empty() ? 1 : eigenvalues.rbegin()->first; }

// ---------------------------------------------------------------------------

EigenvalueSystem::EigenvalueSystem(NewformRecord rec) : rec_(std::move(rec)) {
  rational_ = std::all_of(rec_.eigenvalues.begin(), rec_.eigenvalues.end(),
                          [](const auto& kv) { return kv.second.is_rational(); }) &&
              rec_.character.is_real();
  cache_.emplace(1, Scalar(1));
}

bool EigenvalueSystem::is_rational() const { return rational_; }

Scalar EigenvalueSystem::prime_value(i64 p) const {
  auto it = rec_.eigenvalues.find(p);
  if (it == rec_.eigenvalues.end()) {
    throw DataError("form " + rec_.id + ": no eigenvalue for p = " + std::to_string(p) +
                    " (data covers p <= " + std::to_string(rec_.max_prime()) + ")");
  }
  return it->second;
}

Scalar EigenvalueSystem::prime_power(i64 p, int e) const {
  const i64 pe = ipow(p, e);
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(pe); it != cache_.end()) return it->second;
  }
  const Scalar lp = prime_value(p);
  Scalar out;
  if (rec_.level % p == 0) {
    out = Scalar(1);
    for (int i = 0; i < e; ++i) out *= lp;
  } else {
    const int k = rec_.weight;
    const Scalar chi_p = rec_.character.scalar(p);
    const Rational pk2 = rpow(p, k - 2);
    const Scalar pk1 = Scalar(Rational(pk2 * p)) * chi_p;
    // lambda(1,p^2) = lambda(1,p)^2 - (p+1) p^{k-2} chi(p);
    // lambda(1,p^j) = lambda(1,p) lambda(1,p^{j-1}) - p^{k-1} chi(p) lambda(1,p^{j-2}).
    Scalar prev2 = Scalar(1);
    Scalar prev1 = lp;
    if (e == 0) out = prev2;
    if (e == 1) out = prev1;
    for (int j = 2; j <= e; ++j) {
      Scalar next = j == 2 ? lp * lp - Scalar(Rational(pk2 * (p + 1))) * chi_p
                           : lp * prev1 - pk1 * prev2;
      prev2 = std::move(prev1);
      prev1 = std::move(next);
      if (j == e) out = prev1;
    }
  }
  std::lock_guard lock(mu_);
  cache_.emplace(pe, out);
  return out;
}

Scalar EigenvalueSystem::lambda(i64 n) const {
  if (n < 1) throw PreconditionError("lambda(1, n) needs n >= 1");
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(n); it != cache_.end()) return it->second;
  }
  Scalar out(1);
  for (const auto& [p, e] : factor(n)) out *= prime_power(p, e);
  std::lock_guard lock(mu_);
  cache_.emplace(n, out);
  return out;
}

// ---------------------------------------------------------------------------

bool ValidationReport::has(const std::string& check) const {
  return std::any_of(issues.begin(), issues.end(), [&](const auto& i) { return i.check == check; });
}

namespace {

bool scalars_close(const Scalar& a, const Scalar& b) {
  if (a.is_exact() && b.is_exact()) return a == b;
  return std::abs(a.to_complex() - b.to_complex()) <= 1e-9 * (1 + a.abs() + b.abs());
}

}  // namespace

ValidationReport validate_record(const NewformRecord& rec, i64 hecke_through) {
  ValidationReport rep;
  rep.id = rec.id;
  auto issue = [&](std::string check, i64 where, std::string detail) {
    rep.issues.push_back({std::move(check), where, std::move(detail)});
  };

  if (rec.level < 1 || rec.weight < 1) {
    issue("level", 0, "level and weight must be positive");
    return rep;
  }
  if (rec.level % rec.character.modulus() != 0) {
    issue("character", rec.character.modulus(),
          "character modulus " + std::to_string(rec.character.modulus()) + " does not divide level");
  } else if (rec.level % rec.character.conductor() != 0) {
    issue("character", rec.character.conductor(), "conductor does not divide level");
  }
  if (rec.character.is_even() != (rec.weight % 2 == 0)) {
    issue("character", -1, "chi(-1) must equal (-1)^k");
  }

  const double half = (rec.weight - 1) / 2.0;
  for (const auto& [p, lp] : rec.eigenvalues) {
    if (!is_prime(p)) {
      issue("eigenvalues", p, "key is not prime");
      continue;
    }
    const bool bad = rec.level % p == 0;
    const double bound = (bad ? 1.0 : 2.0) * std::pow(static_cast<double>(p), half) + 1e-6;
    if (lp.abs() > bound) {
      std::ostringstream os;
      os << "|lambda(1," << p << ")| = " << lp.abs() << " exceeds " << bound;
      issue("ramanujan", p, os.str());
    }
    if (!bad) {
      Scalar lhs = rec.character.scalar(p) * lp.conj();
      if (!scalars_close(lhs, lp)) issue("self-dual", p, "chi(p) conj(lambda(1,p)) != lambda(1,p)");
    }
  }
  for (i64 p : primes_up_to(rec.max_prime())) {
    if (!rec.eigenvalues.count(p)) {
      issue("eigenvalues", p, "missing eigenvalue below the largest stored prime");
      break;
    }
  }

  if (!rec.qexp) return rep;
  const QSeries& f = *rec.qexp;
  if (f.integral_weight() != rec.weight) issue("expansion", 0, "expansion weight differs from record");
  if (f.truncation() < 1 || !(f.coeff(1) == Scalar(1))) {
    issue("normalization", 1, "a(1) must be 1");
    return rep;
  }
  const double measured = f.measured_growth();
  if (measured > 1 + 1e-9) {
    issue("growth", 0,
          "|a(n)| / (sigma0(n) n^((k-1)/2)) reaches " + std::to_string(measured) + " > 1");
  }

  const i64 T = hecke_through > 0 ? std::min(hecke_through, f.truncation()) : f.truncation();
  const auto coeffs = f.coefficients();
  for (const auto& [p, lp] : rec.eigenvalues) {
    if (p > T || !is_prime(p)) continue;
    Integer pk1;
    mpz_ui_pow_ui(pk1.get_mpz_t(), static_cast<unsigned long>(p),
                  static_cast<unsigned long>(rec.weight - 1));
    const Scalar second = rec.character.scalar(p) * Scalar(pk1);
    for (i64 n = 1; n * p <= T; ++n) {
      Scalar lhs = coeffs[p * n];
      if (n % p == 0 && !second.is_zero()) lhs += second * coeffs[n / p];
      Scalar rhs = lp * coeffs[n];
      if (!scalars_close(lhs, rhs)) {
        issue("hecke", n,
              "T(" + std::to_string(p) + ") f differs from lambda(1," + std::to_string(p) +
                  ") f at n = " + std::to_string(n));
        break;
      }
    }
  }
  return rep;
}

bool IngestResult::ok() const {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.ok(); });
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return std::to_string(line) + ":" + std::to_string(col);
}

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw SchemaError(path.empty() ? "/" : path, what);
}

const json& field(const json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

i64 as_int(const json& v, const std::string& path, i64 min_value) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  i64 x = v.get<i64>();
  if (x < min_value) fail(path, "must be >= " + std::to_string(min_value) + ", got " + std::to_string(x));
  return x;
}

Rational as_rational(const json& v, const std::string& path) {
  try {
    if (v.is_string()) return parse_rational(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<long>());
  } catch (const PreconditionError& e) {
    fail(path, e.what());
  }
  fail(path, "expected a rational string such as \"-24\" or \"3/2\"");
}

Real as_real(const json& v, const std::string& path) {
  if (v.is_number()) return Real(v.get<double>());
  if (v.is_string()) {
    try {
      return to_float<Real>(parse_rational(v.get<std::string>()));
    } catch (const PreconditionError& e) {
      fail(path, e.what());
    }
  }
  fail(path, "expected a decimal number or string");
}

Scalar as_value(const json& v, const std::string& path) {
  if (v.is_array()) {
    if (v.size() != 2) fail(path, "complex values are [re, im] pairs");
    return Scalar(ComplexReal(as_real(v[0], path + "/0"), as_real(v[1], path + "/1")));
  }
  return Scalar(as_rational(v, path));
}

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  for (const auto& [k, _] : obj.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* s) { return k == s; })) {
      fail(path + "/" + k, "unknown field");
    }
  }
}

DirichletCharacter parse_character(const json& c, const std::string& path) {
  if (!c.is_object()) fail(path, "expected an object");
  reject_unknown(c, path, {"kind", "modulus", "d", "values"});
  const json& kind = field(c, path, "kind");
  if (!kind.is_string()) fail(path + "/kind", "expected a string");
  const i64 modulus = as_int(field(c, path, "modulus"), path + "/modulus", 1);
  const std::string k = kind.get<std::string>();
  try {
    if (k == "trivial") return DirichletCharacter::trivial(modulus);
    if (k == "kronecker") {
      i64 d = as_int(field(c, path, "d"), path + "/d", std::numeric_limits<i64>::min());
      return DirichletCharacter::kronecker(d, modulus);
    }
    if (k == "table") {
      const json& vals = field(c, path, "values");
      if (!vals.is_array() || static_cast<i64>(vals.size()) != modulus) {
        fail(path + "/values", "expected " + std::to_string(modulus) + " [re, im] pairs");
      }
      std::vector<std::complex<double>> z;
      for (std::size_t i = 0; i < vals.size(); ++i) {
        const std::string p = path + "/values/" + std::to_string(i);
        if (!vals[i].is_array() || vals[i].size() != 2) fail(p, "expected an [re, im] pair");
        z.emplace_back(as_real(vals[i][0], p + "/0").convert_to<double>(),
                       as_real(vals[i][1], p + "/1").convert_to<double>());
      }
      return DirichletCharacter::from_complex_table(modulus, z);
    }
  } catch (const PreconditionError& e) {
    fail(path, e.what());
  }
  fail(path + "/kind", "must be one of trivial, kronecker, table");
}

NewformRecord parse_record(const json& r, const std::string& path) {
  if (!r.is_object()) fail(path, "expected an object");
  reject_unknown(r, path, {"id", "level", "weight", "character", "eigenvalues", "qexp", "petersson_norm"});
  NewformRecord rec;
  const json& id = field(r, path, "id");
  if (!id.is_string() || id.get<std::string>().empty()) fail(path + "/id", "expected a nonempty string");
  rec.id = id.get<std::string>();
  rec.level = as_int(field(r, path, "level"), path + "/level", 1);
  rec.weight = static_cast<int>(as_int(field(r, path, "weight"), path + "/weight", 1));
  rec.character = parse_character(field(r, path, "character"), path + "/character");
  if (rec.level % rec.character.modulus() != 0) {
    fail(path + "/character/modulus", "must divide the level");
  }
  rec.character = rec.character.induce(rec.level);

  const json& ev = field(r, path, "eigenvalues");
  if (!ev.is_object()) fail(path + "/eigenvalues", "expected an object keyed by primes");
  for (const auto& [key, v] : ev.items()) {
    const std::string p = path + "/eigenvalues/" + key;
    i64 prime = 0;
    try {
      std::size_t used = 0;
      prime = std::stoll(key, &used);
      if (used != key.size()) prime = 0;
    } catch (const std::exception&) {
    }
    if (!is_prime(prime)) fail(p, "key must be a prime");
    rec.eigenvalues.emplace(prime, as_value(v, p));
  }

  if (auto it = r.find("qexp"); it != r.end()) {
    const std::string p = path + "/qexp";
    if (!it->is_object()) fail(p, "expected an object");
    reject_unknown(*it, p, {"truncation", "coeffs"});
    const i64 T = as_int(field(*it, p, "truncation"), p + "/truncation", 1);
    const json& cs = field(*it, p, "coeffs");
    if (!cs.is_array() || static_cast<i64>(cs.size()) != T) {
      fail(p + "/coeffs", "expected " + std::to_string(T) + " coefficients a(1)..a(T)");
    }
    std::vector<Scalar> a(static_cast<std::size_t>(T) + 1);
    for (i64 n = 1; n <= T; ++n) a[n] = as_value(cs[n - 1], p + "/coeffs/" + std::to_string(n - 1));
    rec.qexp = QSeries(std::move(a), Rational(rec.weight), rec.level, rec.character);
  }

  if (auto it = r.find("petersson_norm"); it != r.end()) {
    const std::string p = path + "/petersson_norm";
    if (!it->is_object()) fail(p, "expected an object");
    reject_unknown(*it, p, {"value", "provenance"});
    const json& v = field(*it, p, "value");
    if (!v.is_number() || !(v.get<double>() > 0)) fail(p + "/value", "expected a positive number");
    const json& prov = field(*it, p, "provenance");
    if (prov != "numeric" && prov != "external") fail(p + "/provenance", "must be numeric or external");
    rec.norm = PeterssonNorm{v.get<double>(),
                             prov == "numeric" ? NormProvenance::numeric : NormProvenance::external};
  }
  return rec;
}

json value_json(const Scalar& s) {
  if (s.is_rational()) return s.rational().get_str();
  auto z = s.approx();
  int digits = static_cast<int>(std::ceil(precision_bits() * 0.30103)) + 2;
  return json::array({format_real(z.re, digits), format_real(z.im, digits)});
}

json character_json(const DirichletCharacter& chi) {
  json c;
  c["modulus"] = chi.modulus();
  switch (chi.kind()) {
    case DirichletCharacter::Kind::trivial:
      c["kind"] = "trivial";
      break;
    case DirichletCharacter::Kind::kronecker:
      c["kind"] = "kronecker";
      c["d"] = chi.kronecker_d();
      break;
    case DirichletCharacter::Kind::table: {
      c["kind"] = "table";
      json vals = json::array();
      for (i64 a = 0; a < chi.modulus(); ++a) {
        auto v = chi.complex_value<double>(a);
        vals.push_back({format_double(v.re), format_double(v.im)});
      }
      c["values"] = vals;
      break;
    }
  }
  return c;
}

}  // namespace

IngestResult ingest_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SchemaError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), e.what());
  }
  if (!doc.is_array()) fail("", "top level must be an array of records");
  IngestResult out;
  std::set<std::tuple<i64, int, std::string, std::string>> seen;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string path = "/" + std::to_string(i);
    NewformRecord rec = parse_record(doc[i], path);
    auto key = std::make_tuple(rec.level, rec.weight, rec.character.describe(), rec.id);
    if (!seen.insert(key).second) fail(path, "duplicate record '" + rec.id + "'");
    out.reports.push_back(validate_record(rec));
    out.records.push_back(std::move(rec));
  }
  return out;
}

IngestResult ingest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PreconditionError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ingest_json(ss.str());
}

std::string to_json_text(const std::vector<NewformRecord>& records, int indent) {
  json arr = json::array();
  for (const auto& rec : records) {
    json r;
    r["id"] = rec.id;
    r["level"] = rec.level;
    r["weight"] = rec.weight;
    r["character"] = character_json(rec.character);
    json ev = json::object();
    for (const auto& [p, v] : rec.eigenvalues) ev[std::to_string(p)] = value_json(v);
    r["eigenvalues"] = ev;
    if (rec.qexp) {
      json cs = json::array();
      for (i64 n = 1; n <= rec.qexp->truncation(); ++n) cs.push_back(value_json(rec.qexp->coeff(n)));
      r["qexp"] = {{"truncation", rec.qexp->truncation()}, {"coeffs", cs}};
    }
    if (rec.norm) {
      r["petersson_norm"] = {
          {"value", rec.norm->value},
          {"provenance", rec.norm->provenance == NormProvenance::numeric ? "numeric" : "external"}};
    }
    arr.push_back(r);
  }
  return arr.dump(indent);
}

NewformRecord record_from_expansion(std::string id, const QSeries& f) {
  NewformRecord rec;
  rec.id = std::move(id);
  rec.level = f.level();
  rec.weight = f.integral_weight();
  rec.character = f.character();
  // a(p) is the coefficient at n = 1 of T(p) f.
  for (i64 p : primes_up_to(f.truncation())) rec.eigenvalues.emplace(p, f.coeff(p));
  rec.qexp = f;
  return rec;
}

// ---------------------------------------------------------------------------

TranslateBasis translates_basis(const std::vector<NewformRecord>& records, i64 M, int k,
                                const DirichletCharacter& chi) {
  if (M < 1) throw PreconditionError("level must be positive");
  if (M % chi.modulus() != 0) throw PreconditionError("character modulus must divide M");
  const DirichletCharacter target = chi.induce(M);
  TranslateBasis out;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.weight != k) {
      throw PreconditionError("record " + r.id + " has weight " + std::to_string(r.weight) +
                              ", expected " + std::to_string(k));
    }
    if (M % r.level != 0) continue;
    if (!r.character.induce(M).same_values(target)) {
      out.warnings.push_back("record " + r.id + " skipped: character does not induce the target");
      continue;
    }
    order.push_back(i);
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(records[a].level, records[a].id) < std::tie(records[b].level, records[b].id);
  });
  for (std::size_t i : order) {
    for (i64 ell : divisors(M / records[i].level)) out.items.push_back({i, ell});
  }
  if (out.items.empty()) {
    out.warnings.push_back("no newform data for level dividing " + std::to_string(M) +
                           "; the dimension may be undercounted");
  }
  return out;
}

}  // namespace cuspbasis
