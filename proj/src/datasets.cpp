#include <map>

#include "cuspbasis/errors.hpp"
#include "cuspbasis/newforms.hpp"

namespace cuspbasis {

namespace {

struct EmbeddedSpec {
  const char* name;
  std::vector<EtaFactor> eta;
};

const std::vector<EmbeddedSpec>& specs() {
  static const std::vector<EmbeddedSpec> s = {
      {"delta", {{1, 24}}},
      {"11a", {{1, 2}, {11, 2}}},
  };
  return s;
}

}  // namespace

const NewformRecord& embedded(const std::string& name) {
  static const std::map<std::string, NewformRecord> records = [] {
    std::map<std::string, NewformRecord> m;
    for (const auto& s : specs()) {
      m.emplace(s.name, record_from_expansion(s.name, eta_product(s.eta, kEmbeddedTruncation)));
    }
    return m;
  }();
  auto it = records.find(name);
  if (it == records.end()) throw PreconditionError("no embedded form named '" + name + "'");
  return it->second;
}

std::vector<std::string> embedded_names() {
  std::vector<std::string> out;
  for (const auto& s : specs()) out.emplace_back(s.name);
  return out;
}

}  // namespace cuspbasis
