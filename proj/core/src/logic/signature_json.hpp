#pragma once

// Shared JSON <-> Signature conversion for axiom-set and assurance-case
// files. Internal header.

#include <json.hpp>

#include "safebox/logic/signature.hpp"

namespace safebox::logic::detail {

inline Signature signature_from_json(const nlohmann::json& j,
                                     const std::string& where) {
  using nlohmann::json;
  auto fail = [&](const std::string& what) -> void {
    throw std::runtime_error(where + ": " + what);
  };
  if (!j.is_object()) fail("signature must be an object");

  Signature sig;
  if (!j.contains("sorts") || !j["sorts"].is_array()) {
    fail("signature needs a \"sorts\" array");
  }
  for (const auto& s : j["sorts"]) sig.sorts.push_back(s.get<std::string>());

  // Hoisted copies: iterating .items() over a j.value(...) temporary would
  // dangle inside the range-for.
  const json constants = j.value("constants", json::object());
  const json functions = j.value("functions", json::object());
  const json predicates = j.value("predicates", json::object());
  const json kinds = j.value("kinds", json::object());

  for (const auto& [name, sort] : constants.items()) {
    sig.constants[name] = sort.get<std::string>();
  }
  for (const auto& [name, arr] : functions.items()) {
    if (!arr.is_array() || arr.size() < 2) {
      fail("function '" + name + "' needs [arg sorts..., result sort]");
    }
    FunctionSig fs;
    for (std::size_t i = 0; i + 1 < arr.size(); ++i) {
      fs.args.push_back(arr[i].get<std::string>());
    }
    fs.result = arr.back().get<std::string>();
    sig.functions[name] = std::move(fs);
  }
  for (const auto& [name, arr] : predicates.items()) {
    std::vector<std::string> args;
    for (const auto& a : arr) args.push_back(a.get<std::string>());
    sig.predicates[name] = std::move(args);
  }
  for (const auto& [name, spec] : kinds.items()) {
    KindSig ks;
    if (spec.contains("predicate")) {
      ks.is_predicate = true;
      for (const auto& a : spec["predicate"]) {
        ks.args.push_back(a.get<std::string>());
      }
    } else if (spec.contains("function")) {
      const auto& arr = spec["function"];
      if (!arr.is_array() || arr.size() < 2) {
        fail("kind '" + name + "' function needs [arg sorts..., result sort]");
      }
      for (std::size_t i = 0; i + 1 < arr.size(); ++i) {
        ks.args.push_back(arr[i].get<std::string>());
      }
      ks.result = arr.back().get<std::string>();
    } else {
      fail("kind '" + name + "' must declare \"predicate\" or \"function\"");
    }
    sig.kinds[name] = std::move(ks);
  }

  for (const auto& [name, sort] : sig.constants) {
    if (!sig.has_sort(sort)) fail("constant '" + name + "' has unknown sort");
  }
  return sig;
}

}  // namespace safebox::logic::detail
