#include "safebox/logic/io.hpp"

#include <fstream>

#include <json.hpp>

#include "safebox/logic/parser.hpp"
#include "signature_json.hpp"

namespace safebox::logic {

AxiomFile load_axiom_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open axiom file: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("axiom file " + path.string() + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("signature")) {
    throw std::runtime_error("axiom file " + path.string() +
                             " needs a \"signature\" block");
  }

  AxiomFile out;
  out.signature = detail::signature_from_json(j["signature"], path.string());

  auto parse_group = [&](const char* key,
                         std::map<std::string, FormulaPtr>& into) {
    const nlohmann::json group = j.value(key, nlohmann::json::object());
    for (const auto& [name, text] : group.items()) {
      if (!text.is_string()) {
        throw std::runtime_error(path.string() + ": " + key + " entry '" +
                                 name + "' must be a formula string");
      }
      try {
        into[name] = parse_formula(text.get<std::string>(), out.signature);
      } catch (const ParseError& e) {
        throw std::runtime_error(path.string() + ": formula '" + name +
                                 "': " + e.what());
      }
    }
  };
  parse_group("axioms", out.axioms);
  parse_group("goals", out.goals);
  return out;
}

}  // namespace safebox::logic
