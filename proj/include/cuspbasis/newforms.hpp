#pragma once

// Primitive forms: records, validation, JSON ingestion, and the extension of
// prime eigenvalues to all lambda(1, n).

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cuspbasis/arith.hpp"
#include "cuspbasis/qseries.hpp"

namespace cuspbasis {

enum class NormProvenance { numeric, external };

struct PeterssonNorm {
  double value = 0;
  NormProvenance provenance = NormProvenance::numeric;
};

struct NewformRecord {
  std::string id;
  i64 level = 1;
  int weight = 0;
  DirichletCharacter character;
  std::map<i64, Scalar> eigenvalues;  // prime p -> lambda(1, p)
  std::optional<QSeries> qexp;
  std::optional<PeterssonNorm> norm;

  /// Largest p with lambda(1, p) stored; all smaller primes are required too.
  i64 max_prime() const;
};

/// lambda(1, n) for one primitive form, memoized; safe to share across threads.
class EigenvalueSystem {
 public:
  explicit EigenvalueSystem(NewformRecord rec);

  const NewformRecord& record() const { return rec_; }
  i64 level() const { return rec_.level; }
  int weight() const { return rec_.weight; }
  const DirichletCharacter& character() const { return rec_.character; }

  /// Throws DataError naming the first prime of n without data.
  Scalar lambda(i64 n) const;
  /// True when every lambda(1, n) and chi value involved is an exact rational.
  bool is_rational() const;

 private:
  Scalar prime_power(i64 p, int e) const;
  Scalar prime_value(i64 p) const;

  NewformRecord rec_;
  bool rational_;
  mutable std::mutex mu_;
  mutable std::unordered_map<i64, Scalar> cache_;
};

struct ValidationIssue {
  std::string check;  // "character", "ramanujan", "hecke", "self-dual", "normalization", "growth"
  i64 where = 0;      // prime or coefficient index the issue is attached to
  std::string detail;
};

struct ValidationReport {
  std::string id;
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
  bool has(const std::string& check) const;
};

/// Checks character/level compatibility, Ramanujan bounds on lambda(1, p),
/// chi(p) conj(lambda(1,p)) = lambda(1,p) for p not dividing N, and, with an
/// expansion present, a(1) = 1, the coefficient growth and T(p) f = lambda(1,p) f
/// for every stored p through index `hecke_through` (0: whole expansion).
ValidationReport validate_record(const NewformRecord& rec, i64 hecke_through = 0);

struct IngestResult {
  std::vector<NewformRecord> records;
  std::vector<ValidationReport> reports;
  bool ok() const;
};

/// Parses a JSON array of records. Malformed input raises SchemaError whose
/// where() is "line:column" for syntax errors and a JSON pointer otherwise.
IngestResult ingest_json(std::string_view text);
IngestResult ingest_file(const std::string& path);
std::string to_json_text(const std::vector<NewformRecord>& records, int indent = 2);

/// Record for a primitive form given by its expansion; lambda(1, p) = a(p).
NewformRecord record_from_expansion(std::string id, const QSeries& f);

/// Built-in forms: "delta" (level 1, weight 12) and "11a" (level 11, weight 2),
/// generated from eta products with T = 10000.
const NewformRecord& embedded(const std::string& name);
std::vector<std::string> embedded_names();
constexpr i64 kEmbeddedTruncation = 10000;

struct Translate {
  std::size_t record;  // index into the records passed in
  i64 ell;
};

struct TranslateBasis {
  std::vector<Translate> items;
  std::vector<std::string> warnings;
  std::size_t dimension() const { return items.size(); }
};

/// All (f, l) with N_f | M and l N_f | M, ordered by level, id, then l.
TranslateBasis translates_basis(const std::vector<NewformRecord>& records, i64 M, int k,
                                const DirichletCharacter& chi);

}  // namespace cuspbasis
