#include "safebox/logic/builtin.hpp"

#include "safebox/logic/parser.hpp"

namespace safebox::logic {

Signature builtin_signature() {
  Signature sig;
  sig.sorts = {"IMG", "BB"};
  sig.functions["DNN"] = FunctionSig{{"IMG"}, "BB"};
  sig.functions["label"] = FunctionSig{{"IMG"}, "BB"};
  sig.functions["ground_truth"] = FunctionSig{{"IMG"}, "BB"};
  sig.functions["Enlarge"] = FunctionSig{{"BB"}, "BB"};
  sig.predicates["Training"] = {"IMG"};
  sig.predicates["ODD"] = {"IMG"};
  sig.predicates["Cover"] = {"BB", "BB"};
  sig.kinds["BEHAVIOR"] = KindSig{true, {"BB", "BB"}, ""};
  sig.kinds["F1"] = KindSig{false, {"BB"}, "BB"};
  sig.kinds["F2"] = KindSig{false, {"IMG"}, "BB"};
  return sig;
}

std::map<std::string, FormulaPtr> builtin_claims(const Signature& sig) {
  std::map<std::string, FormulaPtr> claims;
  claims["E1"] = parse_formula(
      "FORALL Behavior:BEHAVIOR, F1:F1, F2:F2: "
      "(FORALL d:IMG: Training(d) -> Behavior(F1(DNN(d)), F2(d))) -> "
      "(FORALL d_op:IMG: ODD(d_op) -> Behavior(F1(DNN(d_op)), F2(d_op)))",
      sig);
  claims["E2"] = parse_formula(
      "FORALL d:IMG: Training(d) -> Cover(Enlarge(DNN(d)), label(d))", sig);
  claims["E3"] = parse_formula(
      "FORALL d:IMG: Training(d) -> Cover(label(d), ground_truth(d))", sig);
  claims["E4"] = parse_formula(
      "FORALL A:BB, B:BB, C:BB: (Cover(A, B) & Cover(B, C)) -> Cover(A, C)",
      sig);
  claims["E5"] = parse_formula(
      "FORALL d:IMG: Training(d) -> Cover(Enlarge(DNN(d)), ground_truth(d))",
      sig);
  claims["G1"] = parse_formula(
      "FORALL d_op:IMG: ODD(d_op) -> Cover(Enlarge(DNN(d_op)), "
      "ground_truth(d_op))",
      sig);
  return claims;
}

}  // namespace safebox::logic
