#pragma once

#include <filesystem>
#include <map>

#include "safebox/logic/formula.hpp"
#include "safebox/logic/signature.hpp"

namespace safebox::logic {

/// Contents of an axiom-set file: a signature block plus named formulas.
/// Goals are optional and share the signature.
struct AxiomFile {
  Signature signature;
  std::map<std::string, FormulaPtr> axioms;
  std::map<std::string, FormulaPtr> goals;
};

/// Load a JSON axiom-set file:
/// {
///   "signature": {"sorts": [...], "constants": {...}, "functions": {...},
///                 "predicates": {...}, "kinds": {...}},
///   "axioms": {"E2": "FORALL d:IMG: ...", ...},
///   "goals":  {"G1": "FORALL d_op:IMG: ...", ...}
/// }
/// Formula parse errors are reported with the axiom/goal name.
AxiomFile load_axiom_file(const std::filesystem::path& path);

}  // namespace safebox::logic
