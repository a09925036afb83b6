#include "safebox/logic/signature.hpp"

#include <algorithm>
#include <stdexcept>

namespace safebox::logic {

bool Signature::has_sort(const std::string& name) const {
  return std::find(sorts.begin(), sorts.end(), name) != sorts.end();
}

bool Signature::has_symbol(const std::string& name) const {
  return constants.count(name) || functions.count(name) ||
         predicates.count(name) || kinds.count(name);
}

void Signature::add_constant(const std::string& name, const std::string& sort) {
  if (has_symbol(name)) {
    throw std::invalid_argument("symbol '" + name + "' is already declared");
  }
  if (!has_sort(sort)) {
    throw std::invalid_argument("unknown sort '" + sort + "'");
  }
  constants.emplace(name, sort);
}

std::vector<std::string> Signature::symbols_of_kind(const KindSig& kind) const {
  std::vector<std::string> out;
  if (kind.is_predicate) {
    for (const auto& [name, args] : predicates) {
      if (args == kind.args) out.push_back(name);
    }
  } else {
    for (const auto& [name, sig] : functions) {
      if (sig.args == kind.args && sig.result == kind.result) {
        out.push_back(name);
      }
    }
  }
  return out;
}

}  // namespace safebox::logic
