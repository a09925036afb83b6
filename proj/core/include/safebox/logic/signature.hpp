#pragma once

#include <map>
#include <string>
#include <vector>

namespace safebox::logic {

struct FunctionSig {
  std::vector<std::string> args;
  std::string result;

  bool operator==(const FunctionSig&) const = default;
};

/// Second-order variable kind: either predicate-valued (result ignored) or
/// function-valued over the given argument sorts.
struct KindSig {
  bool is_predicate = false;
  std::vector<std::string> args;
  std::string result;  // empty for predicate kinds

  bool operator==(const KindSig&) const = default;
};

/// Sorted vocabulary: every constant, function and predicate carries its
/// sorts, and second-order kinds name the signatures that quantified
/// predicate/function variables may range over.
struct Signature {
  std::vector<std::string> sorts;
  std::map<std::string, std::string> constants;     // name -> sort
  std::map<std::string, FunctionSig> functions;
  std::map<std::string, std::vector<std::string>> predicates;  // name -> arg sorts
  std::map<std::string, KindSig> kinds;

  bool has_sort(const std::string& name) const;
  /// True when the name is taken in any namespace (including kinds), which
  /// is what freshness of skolem constants is checked against.
  bool has_symbol(const std::string& name) const;

  /// Adds a constant, rejecting name clashes and unknown sorts.
  void add_constant(const std::string& name, const std::string& sort);

  /// Declared symbols a second-order variable of this kind may be
  /// instantiated with: predicates (or functions) whose signature matches
  /// the kind exactly.
  std::vector<std::string> symbols_of_kind(const KindSig& kind) const;
};

}  // namespace safebox::logic
