#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "safebox/logic/formula.hpp"
#include "safebox/logic/signature.hpp"

namespace safebox::logic {

struct ParseError : std::runtime_error {
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) +
                           ": " + message),
        line(line),
        column(column) {}
  std::size_t line;
  std::size_t column;
};

/// Parse and sort-check a closed formula of the fragment:
///
///   formula := FORALL v:Sort, ... : formula | implication
///   implication := conjunction ('->' formula)?
///   conjunction := primary ('&' primary)*
///   primary := '(' formula ')' | Pred '(' term, ... ')'
///
/// Binder types may be sorts or declared second-order kinds. A trailing
/// '= TRUE' after an atom is accepted and dropped, so PVS-styled input
/// normalizes to plain boolean predicates. Free variables, unknown symbols,
/// arity and sort violations all raise ParseError with a position.
FormulaPtr parse_formula(std::string_view text, const Signature& sig);

/// Parse a variable-free term, e.g. an instantiation argument such as
/// `Enlarge(DNN(d1))`. Returns the term and its sort via out-parameter.
Term parse_ground_term(std::string_view text, const Signature& sig,
                       std::string* sort_out = nullptr);

}  // namespace safebox::logic
