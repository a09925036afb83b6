#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "safebox/logic/builtin.hpp"
#include "safebox/logic/derive.hpp"
#include "safebox/logic/io.hpp"
#include "safebox/logic/parser.hpp"
#include "safebox/logic/proof.hpp"
#include "testutil.hpp"

using namespace safebox::logic;

namespace {

Signature sig() { return builtin_signature(); }

std::map<std::string, FormulaPtr> pick(
    const std::map<std::string, FormulaPtr>& all,
    std::initializer_list<const char*> names) {
  std::map<std::string, FormulaPtr> out;
  for (const char* n : names) out.emplace(n, all.at(n));
  return out;
}

}  // namespace

TEST_CASE("parsing the training-coverage claim") {
  const Signature s = sig();
  const auto f = parse_formula(
      "FORALL d:IMG: Training(d) -> Cover(Enlarge(DNN(d)), label(d))", s);
  REQUIRE(f->kind == FormulaKind::forall);
  CHECK(f->binders.size() == 1);
  CHECK(f->binders[0].type == "IMG");
  CHECK_FALSE(f->binders[0].second_order);
  REQUIRE(f->body->kind == FormulaKind::implication);
  CHECK(to_text(*f) ==
        "FORALL d:IMG: Training(d) -> Cover(Enlarge(DNN(d)), label(d))");
}

TEST_CASE("parsing the transitivity claim") {
  const auto f = parse_formula(
      "FORALL A:BB,B:BB,C:BB: (Cover(A,B) & Cover(B,C)) -> Cover(A,C)", sig());
  REQUIRE(f->kind == FormulaKind::forall);
  CHECK(f->binders.size() == 3);
  REQUIRE(f->body->kind == FormulaKind::implication);
  CHECK(f->body->lhs->kind == FormulaKind::conjunction);
}

TEST_CASE("parsing the second-order generalization claim") {
  const auto claims = builtin_claims(sig());
  const auto& e1 = claims.at("E1");
  REQUIRE(e1->kind == FormulaKind::forall);
  CHECK(e1->binders.size() == 3);
  CHECK(e1->binders[0].second_order);
  CHECK(e1->binders[0].type == "BEHAVIOR");
  REQUIRE(e1->body->kind == FormulaKind::implication);
  CHECK(e1->body->lhs->kind == FormulaKind::forall);
  CHECK(e1->body->rhs->kind == FormulaKind::forall);
}

TEST_CASE("parse errors carry positions and name the offence") {
  const Signature s = sig();
  CHECK_THROWS_WITH_AS(parse_formula("FORALL d:IMG: Cover(DNN(d))", s),
                       doctest::Contains("expects 2 argument"), ParseError);
  CHECK_THROWS_WITH_AS(parse_formula("Cover(DNN(d))", s),
                       doctest::Contains("unknown symbol 'd'"), ParseError);
  CHECK_THROWS_WITH_AS(parse_formula("FORALL d:IMG: Nope(d)", s),
                       doctest::Contains("unknown predicate"), ParseError);
  CHECK_THROWS_WITH_AS(
      parse_formula("FORALL d:IMG: Cover(d, label(d))", s),
      doctest::Contains("must have sort BB"), ParseError);
  CHECK_THROWS_WITH_AS(parse_formula("FORALL d:WAT: Training(d)", s),
                       doctest::Contains("unknown sort"), ParseError);
  CHECK_THROWS_WITH_AS(parse_formula("FORALL d:IMG: Training(d(d))", s),
                       doctest::Contains("cannot take arguments"), ParseError);
  CHECK_THROWS_AS(parse_formula("FORALL d:IMG: Training(d) ->", s), ParseError);
  // Positions: the error is on line 2.
  try {
    parse_formula("FORALL d:IMG:\n  Wrong(d)", s);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
  }
}

TEST_CASE("PVS-style '= TRUE' comparisons normalize away") {
  const Signature s = sig();
  const auto plain = parse_formula(
      "FORALL d:IMG: Training(d) -> Cover(Enlarge(DNN(d)), label(d))", s);
  const auto pvs = parse_formula(
      "FORALL d:IMG: (Training(d) = TRUE) -> "
      "(Cover(Enlarge(DNN(d)), label(d)) = TRUE)",
      s);
  CHECK(structural_equal(*plain, *pvs));
}

namespace {

// Random closed well-sorted formula over the builtin signature.
FormulaPtr random_formula(std::mt19937& gen, const Signature& s);

Term random_term(std::mt19937& gen, const std::string& sort,
                 const std::vector<std::pair<std::string, std::string>>& vars,
                 int depth) {
  std::vector<std::string> candidates;
  for (const auto& [name, vsort] : vars) {
    if (vsort == sort) candidates.push_back(name);
  }
  const bool prefer_variable = depth <= 0 || testutil::uniform_int(gen, 0, 2) == 0;
  if (prefer_variable && !candidates.empty()) {
    return Term{TermKind::variable,
                candidates[static_cast<std::size_t>(testutil::uniform_int(
                    gen, 0, static_cast<int>(candidates.size()) - 1))],
                {}};
  }
  // Wrap a function producing this sort. Every generated formula binds an
  // IMG variable, so once the depth budget is spent we only pick functions
  // whose arguments can bottom out on an in-scope variable.
  std::vector<std::pair<std::string, FunctionSig>> fns;
  const Signature sig_local = builtin_signature();
  for (const auto& [name, fsig] : sig_local.functions) {
    if (fsig.result != sort) continue;
    if (depth <= 0) {
      bool grounded = true;
      for (const auto& argsort : fsig.args) {
        grounded = grounded &&
                   std::any_of(vars.begin(), vars.end(), [&](const auto& v) {
                     return v.second == argsort;
                   });
      }
      if (!grounded) continue;
    }
    fns.push_back({name, fsig});
  }
  if (fns.empty()) {
    return Term{TermKind::variable, candidates.at(0), {}};
  }
  const auto& [name, fsig] = fns[static_cast<std::size_t>(
      testutil::uniform_int(gen, 0, static_cast<int>(fns.size()) - 1))];
  std::vector<Term> args;
  for (const auto& argsort : fsig.args) {
    args.push_back(random_term(gen, argsort, vars, depth - 1));
  }
  return Term{TermKind::symbol, name, std::move(args)};
}

FormulaPtr random_body(std::mt19937& gen, const Signature& s,
                       const std::vector<std::pair<std::string, std::string>>& vars,
                       int depth) {
  const int roll = depth <= 0 ? 0 : testutil::uniform_int(gen, 0, 5);
  if (roll <= 2) {
    std::vector<std::pair<std::string, std::vector<std::string>>> preds(
        s.predicates.begin(), s.predicates.end());
    const auto& [name, argsorts] = preds[static_cast<std::size_t>(
        testutil::uniform_int(gen, 0, static_cast<int>(preds.size()) - 1))];
    std::vector<Term> args;
    for (const auto& argsort : argsorts) {
      args.push_back(random_term(gen, argsort, vars, 2));
    }
    return Formula::make_atom(name, false, std::move(args));
  }
  if (roll == 3) {
    return Formula::make_conjunction(random_body(gen, s, vars, depth - 1),
                                     random_body(gen, s, vars, depth - 1));
  }
  if (roll == 4) {
    return Formula::make_implication(random_body(gen, s, vars, depth - 1),
                                     random_body(gen, s, vars, depth - 1));
  }
  // Nested quantifier with a fresh variable.
  const std::string name = "v" + std::to_string(vars.size());
  auto inner_vars = vars;
  inner_vars.push_back({name, "IMG"});
  return Formula::make_forall({Binder{name, "IMG", false}},
                              random_body(gen, s, inner_vars, depth - 1));
}

FormulaPtr random_formula(std::mt19937& gen, const Signature& s) {
  std::vector<std::pair<std::string, std::string>> vars{{"d0", "IMG"}};
  auto body = random_body(gen, s, vars, 3);
  return Formula::make_forall({Binder{"d0", "IMG", false}}, std::move(body));
}

}  // namespace

TEST_CASE("print/parse round-trip on generated formulas") {
  auto gen = testutil::rng(501);
  const Signature s = sig();
  for (int i = 0; i < 300; ++i) {
    const FormulaPtr f = random_formula(gen, s);
    const FormulaPtr reparsed = parse_formula(to_text(*f), s);
    CHECK(structural_equal(*f, *reparsed));
  }
}

TEST_CASE("alpha equality ignores binder names only") {
  const Signature s = sig();
  const auto a = parse_formula("FORALL d:IMG: Training(d) -> ODD(d)", s);
  const auto b = parse_formula("FORALL x:IMG: Training(x) -> ODD(x)", s);
  const auto c = parse_formula("FORALL d:IMG: ODD(d) -> Training(d)", s);
  CHECK(alpha_equal(*a, *b));
  CHECK_FALSE(structural_equal(*a, *b));
  CHECK_FALSE(alpha_equal(*a, *c));
}

TEST_CASE("the lemma script for the training-coverage corollary is accepted") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  const auto script = parse_script(
      "lemma E2\nlemma E3\nlemma E4\nskolem 1 d1\ninst -2 d1\ninst -3 d1\n"
      "inst -1 Enlarge(DNN(d1)) label(d1) ground_truth(d1)\nprop\n");
  const auto result = check_script(s, pick(claims, {"E2", "E3", "E4"}),
                                   claims.at("E5"), script);
  CHECK(result.accepted);
  CHECK(result.failed_step == 0);
  CHECK_FALSE(result.trace.empty());
}

TEST_CASE("both G1 scripts are accepted") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  const auto axioms = pick(claims, {"E1", "E5"});

  const auto direct = check_script(s, axioms, claims.at("G1"),
                                   parse_script("lemma E1\nlemma E5\nprop\n"));
  CHECK(direct.accepted);

  const auto explicit_inst = check_script(
      s, axioms, claims.at("G1"),
      parse_script(
          "lemma E5\nlemma E1\ninst -1 Cover Enlarge ground_truth\nprop\n"));
  CHECK(explicit_inst.accepted);
}

TEST_CASE("checker rejections carry the failing step and reason") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  const auto axioms = pick(claims, {"E1", "E2"});

  SUBCASE("unknown axiom name") {
    const auto r = check_script(s, axioms, claims.at("G1"),
                                parse_script("lemma E1\nlemma E5\nprop\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.failed_step == 2);
    CHECK(r.reason.find("E5") != std::string::npos);
  }
  SUBCASE("prop cannot close an underivable goal") {
    const auto r = check_script(s, axioms, claims.at("G1"),
                                parse_script("lemma E1\nlemma E2\nprop\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.failed_step == 3);
    CHECK(r.reason.find("cannot close") != std::string::npos);
  }
  SUBCASE("skolem name must be fresh") {
    const auto r = check_script(
        s, axioms, claims.at("G1"),
        parse_script("skolem 1 label\nprop\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.failed_step == 1);
    CHECK(r.reason.find("fresh") != std::string::npos);
  }
  SUBCASE("inst argument sorts are checked") {
    const auto r = check_script(
        s, pick(claims, {"E2"}), claims.at("E5"),
        parse_script("lemma E2\nskolem 1 d1\ninst -1 Enlarge(DNN(d1))\nprop\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.failed_step == 3);
    CHECK(r.reason.find("sort") != std::string::npos);
  }
  SUBCASE("inst arity is checked") {
    const auto r = check_script(
        s, pick(claims, {"E4"}), claims.at("E5"),
        parse_script("lemma E4\ninst -1 label(d1)\nprop\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.failed_step == 2);
  }
  SUBCASE("second-order arguments must match the kind") {
    const auto r = check_script(
        s, pick(claims, {"E1", "E5"}), claims.at("G1"),
        parse_script("lemma E1\ninst -1 Cover DNN ground_truth\nprop\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.failed_step == 2);  // DNN is IMG->BB, kind F1 needs BB->BB
  }
  SUBCASE("commands after closure are rejected") {
    const auto r = check_script(
        s, pick(claims, {"E1", "E5"}), claims.at("G1"),
        parse_script("lemma E1\nlemma E5\nprop\nlemma E1\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.reason.find("remain") != std::string::npos);
  }
  SUBCASE("a script without prop leaves the sequent open") {
    const auto r = check_script(s, axioms, claims.at("G1"),
                                parse_script("lemma E1\n"));
    CHECK_FALSE(r.accepted);
    CHECK(r.reason.find("before the sequent closed") != std::string::npos);
  }
}

TEST_CASE("check_script is deterministic") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  const auto script = parse_script("lemma E1\nlemma E5\nprop\n");
  const auto a = check_script(s, pick(claims, {"E1", "E5"}), claims.at("G1"),
                              script);
  const auto b = check_script(s, pick(claims, {"E1", "E5"}), claims.at("G1"),
                              script);
  CHECK(a.accepted == b.accepted);
  CHECK(a.trace == b.trace);
}

TEST_CASE("bounded derivation reproduces the sufficiency findings") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);

  const auto full = derive_bounded(s, pick(claims, {"E1", "E2", "E3", "E4"}),
                                   claims.at("G1"), 3);
  CHECK(full.derivable);
  CHECK_FALSE(full.script.commands.empty());

  CHECK_FALSE(derive_bounded(s, pick(claims, {"E1", "E2", "E4"}),
                             claims.at("G1"), 3)
                  .derivable);
  CHECK_FALSE(
      derive_bounded(s, pick(claims, {"E1", "E2"}), claims.at("G1"), 3)
          .derivable);

  const auto lemma = derive_bounded(s, pick(claims, {"E2", "E3", "E4"}),
                                    claims.at("E5"), 2);
  CHECK(lemma.derivable);

  const auto via_lemma =
      derive_bounded(s, pick(claims, {"E1", "E5"}), claims.at("G1"), 3);
  CHECK(via_lemma.derivable);
}

TEST_CASE("derivation traces replay through the checker") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  const auto cases = {pick(claims, {"E1", "E2", "E3", "E4"}),
                      pick(claims, {"E1", "E5"})};
  for (const auto& axioms : cases) {
    const auto d = derive_bounded(s, axioms, claims.at("G1"), 3);
    REQUIRE(d.derivable);
    const auto check = check_script(s, axioms, claims.at("G1"), d.script);
    CHECK(check.accepted);
  }
  const auto lemma_axioms = pick(claims, {"E2", "E3", "E4"});
  const auto d = derive_bounded(s, lemma_axioms, claims.at("E5"), 3);
  REQUIRE(d.derivable);
  CHECK(check_script(s, lemma_axioms, claims.at("E5"), d.script).accepted);
}

TEST_CASE("a derivation may instantiate one axiom several times") {
  // Chaining containment across four boxes needs the transitivity axiom
  // twice; the translated script must carry one lemma/inst pair per use.
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  const auto goal = parse_formula(
      "FORALL A:BB, B:BB, C:BB, D:BB: "
      "(Cover(A, B) & Cover(B, C) & Cover(C, D)) -> Cover(A, D)",
      s);
  const auto d = derive_bounded(s, pick(claims, {"E4"}), goal, 1);
  REQUIRE(d.derivable);
  std::size_t e4_uses = 0;
  for (const auto& cmd : d.script.commands) {
    if (cmd.kind == ProofCommand::Kind::lemma && cmd.lemma_name == "E4") {
      ++e4_uses;
    }
  }
  CHECK(e4_uses >= 2);
  CHECK(check_script(s, pick(claims, {"E4"}), goal, d.script).accepted);
}

TEST_CASE("derivability is monotone in depth") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  const auto axioms = pick(claims, {"E1", "E2", "E3", "E4"});
  bool seen = false;
  for (int depth = 1; depth <= 4; ++depth) {
    const bool ok = derive_bounded(s, axioms, claims.at("G1"), depth).derivable;
    if (seen) CHECK(ok);
    seen = seen || ok;
  }
  CHECK(seen);
}

TEST_CASE("second-order goal binders are rejected loudly") {
  const Signature s = sig();
  const auto claims = builtin_claims(s);
  CHECK_THROWS_AS(derive_bounded(s, pick(claims, {"E2"}), claims.at("E1"), 2),
                  std::invalid_argument);
  CHECK_THROWS_AS(derive_bounded(s, pick(claims, {"E2"}), claims.at("G1"), 0),
                  std::invalid_argument);
}

namespace {

/// Random implication-chain theory over unary predicates: axioms are
/// edges P_i -> P_j, the goal asks for a path. Derivability has an exact
/// independent oracle: graph reachability.
struct ChainTheory {
  Signature signature;
  std::map<std::string, FormulaPtr> axioms;
  FormulaPtr goal;
  bool reachable;
};

ChainTheory random_chain(std::mt19937& gen) {
  ChainTheory t;
  t.signature.sorts = {"IMG"};
  const int n = testutil::uniform_int(gen, 3, 7);
  for (int i = 0; i < n; ++i) {
    t.signature.predicates["P" + std::to_string(i)] = {"IMG"};
  }
  std::set<std::pair<int, int>> edges;
  const int m = testutil::uniform_int(gen, 2, 2 * n);
  for (int e = 0; e < m; ++e) {
    const int a = testutil::uniform_int(gen, 0, n - 1);
    const int b = testutil::uniform_int(gen, 0, n - 1);
    if (a != b) edges.insert({a, b});
  }
  int k = 0;
  for (const auto& [a, b] : edges) {
    t.axioms["ax" + std::to_string(k++)] = parse_formula(
        "FORALL d:IMG: P" + std::to_string(a) + "(d) -> P" + std::to_string(b) +
            "(d)",
        t.signature);
  }
  const int from = testutil::uniform_int(gen, 0, n - 1);
  const int to = testutil::uniform_int(gen, 0, n - 1);
  t.goal = parse_formula("FORALL d:IMG: P" + std::to_string(from) + "(d) -> P" +
                             std::to_string(to) + "(d)",
                         t.signature);

  // Reachability oracle (reflexive).
  std::set<int> seen{from};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& [a, b] : edges) {
      if (seen.count(a) && !seen.count(b)) {
        seen.insert(b);
        grew = true;
      }
    }
  }
  t.reachable = seen.count(to) > 0;
  return t;
}

}  // namespace

TEST_CASE("chain theories: derive agrees with reachability, traces replay") {
  auto gen = testutil::rng(502);
  int derivable_seen = 0;
  for (int i = 0; i < 100; ++i) {
    const ChainTheory t = random_chain(gen);
    const auto d = derive_bounded(t.signature, t.axioms, t.goal, 2);
    CHECK(d.derivable == t.reachable);
    if (d.derivable) {
      ++derivable_seen;
      const auto check = check_script(t.signature, t.axioms, t.goal, d.script);
      CHECK(check.accepted);
    }
  }
  CHECK(derivable_seen > 20);
}

TEST_CASE("axiom files load and match the builtin claims") {
  const auto file =
      load_axiom_file(std::string(SAFEBOX_DATA_DIR) + "/axioms.json");
  const auto claims = builtin_claims(builtin_signature());
  for (const char* name : {"E1", "E2", "E3", "E4", "E5"}) {
    REQUIRE(file.axioms.count(name));
    CHECK(alpha_equal(*file.axioms.at(name), *claims.at(name)));
  }
  REQUIRE(file.goals.count("G1"));
  CHECK(alpha_equal(*file.goals.at("G1"), *claims.at("G1")));
}

TEST_CASE("script parsing rejects malformed lines") {
  CHECK_THROWS_AS(parse_script("lemma\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_script("inst x d1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_script("frobnicate 1\n"), std::runtime_error);
  CHECK_THROWS_AS(parse_script("prop now\n"), std::runtime_error);
  const auto script = parse_script("# comment\n\nlemma E2\nprop\n");
  CHECK(script.commands.size() == 2);
}
