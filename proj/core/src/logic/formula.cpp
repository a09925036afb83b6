#include "safebox/logic/formula.hpp"

#include <algorithm>

namespace safebox::logic {

FormulaPtr Formula::make_atom(std::string predicate, bool predicate_is_variable,
                              std::vector<Term> args) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::atom;
  f->predicate = std::move(predicate);
  f->predicate_is_variable = predicate_is_variable;
  f->args = std::move(args);
  return f;
}

FormulaPtr Formula::make_conjunction(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::conjunction;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

FormulaPtr Formula::make_implication(FormulaPtr lhs, FormulaPtr rhs) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::implication;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}

FormulaPtr Formula::make_forall(std::vector<Binder> binders, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = FormulaKind::forall;
  f->binders = std::move(binders);
  f->body = std::move(body);
  return f;
}

namespace {

void render_term(const Term& t, const std::map<std::string, std::string>* env,
                 std::string& out) {
  if (t.kind == TermKind::variable && env) {
    auto it = env->find(t.name);
    out += it != env->end() ? it->second : t.name;
  } else {
    out += t.name;
  }
  if (!t.args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < t.args.size(); ++i) {
      if (i > 0) out += ", ";
      render_term(t.args[i], env, out);
    }
    out += ')';
  }
}

// Parenthesization: atoms bind tightest, then '&', then '->'; FORALL spans
// to the end of its body.
enum class Ctx { top, impl_lhs, conj_operand };

void render_formula(const Formula& f, Ctx ctx,
                    std::map<std::string, std::string>* env, int* counter,
                    std::string& out) {
  switch (f.kind) {
    case FormulaKind::atom: {
      if (env && f.predicate_is_variable) {
        auto it = env->find(f.predicate);
        out += it != env->end() ? it->second : f.predicate;
      } else {
        out += f.predicate;
      }
      out += '(';
      for (std::size_t i = 0; i < f.args.size(); ++i) {
        if (i > 0) out += ", ";
        render_term(f.args[i], env, out);
      }
      out += ')';
      return;
    }
    case FormulaKind::conjunction: {
      render_formula(*f.lhs, Ctx::conj_operand, env, counter, out);
      out += " & ";
      // The parser is left-associative, so anything non-atomic on the right
      // needs explicit parentheses to round-trip.
      const bool rhs_parens = f.rhs->kind != FormulaKind::atom;
      if (rhs_parens) out += '(';
      render_formula(*f.rhs, Ctx::top, env, counter, out);
      if (rhs_parens) out += ')';
      return;
    }
    case FormulaKind::implication: {
      const bool needs = ctx == Ctx::impl_lhs || ctx == Ctx::conj_operand;
      if (needs) out += '(';
      const bool lhs_parens = f.lhs->kind == FormulaKind::implication ||
                              f.lhs->kind == FormulaKind::forall;
      if (lhs_parens) out += '(';
      render_formula(*f.lhs, Ctx::impl_lhs, env, counter, out);
      if (lhs_parens) out += ')';
      out += " -> ";
      render_formula(*f.rhs, Ctx::top, env, counter, out);
      if (needs) out += ')';
      return;
    }
    case FormulaKind::forall: {
      const bool needs = ctx != Ctx::top;
      if (needs) out += '(';
      out += "FORALL ";
      std::vector<std::pair<std::string, bool>> saved;
      for (std::size_t i = 0; i < f.binders.size(); ++i) {
        if (i > 0) out += ", ";
        const Binder& b = f.binders[i];
        std::string shown = b.name;
        if (env) {
          shown = "$" + std::to_string((*counter)++);
          auto it = env->find(b.name);
          saved.emplace_back(it != env->end() ? it->second : "", it != env->end());
          (*env)[b.name] = shown;
        }
        out += shown;
        out += ':';
        out += b.type;
      }
      out += ": ";
      render_formula(*f.body, Ctx::top, env, counter, out);
      if (env) {
        for (std::size_t i = f.binders.size(); i-- > 0;) {
          const auto& [old, had] = saved[i];
          if (had) {
            (*env)[f.binders[i].name] = old;
          } else {
            env->erase(f.binders[i].name);
          }
        }
      }
      if (needs) out += ')';
      return;
    }
  }
}

}  // namespace

std::string to_text(const Term& term) {
  std::string out;
  render_term(term, nullptr, out);
  return out;
}

std::string to_text(const Formula& formula) {
  std::string out;
  render_formula(formula, Ctx::top, nullptr, nullptr, out);
  return out;
}

std::string canonical_text(const Formula& formula) {
  std::string out;
  std::map<std::string, std::string> env;
  int counter = 0;
  render_formula(formula, Ctx::top, &env, &counter, out);
  return out;
}

bool structural_equal(const Formula& a, const Formula& b) {
  return to_text(a) == to_text(b);
}

bool alpha_equal(const Formula& a, const Formula& b) {
  return canonical_text(a) == canonical_text(b);
}

Term substitute(const Term& term, const TermSubst& terms,
                const SymbolSubst& symbols) {
  std::vector<Term> new_args;
  new_args.reserve(term.args.size());
  for (const auto& a : term.args) {
    new_args.push_back(substitute(a, terms, symbols));
  }
  if (term.kind == TermKind::variable) {
    if (term.args.empty()) {
      auto it = terms.find(term.name);
      if (it != terms.end()) return it->second;
    } else {
      auto it = symbols.find(term.name);
      if (it != symbols.end()) {
        return Term{TermKind::symbol, it->second, std::move(new_args)};
      }
    }
  }
  return Term{term.kind, term.name, std::move(new_args)};
}

FormulaPtr substitute(const FormulaPtr& formula, const TermSubst& terms,
                      const SymbolSubst& symbols) {
  if (terms.empty() && symbols.empty()) return formula;
  switch (formula->kind) {
    case FormulaKind::atom: {
      std::vector<Term> new_args;
      new_args.reserve(formula->args.size());
      for (const auto& a : formula->args) {
        new_args.push_back(substitute(a, terms, symbols));
      }
      std::string pred = formula->predicate;
      bool is_var = formula->predicate_is_variable;
      if (is_var) {
        auto it = symbols.find(pred);
        if (it != symbols.end()) {
          pred = it->second;
          is_var = false;
        }
      }
      return Formula::make_atom(std::move(pred), is_var, std::move(new_args));
    }
    case FormulaKind::conjunction:
      return Formula::make_conjunction(substitute(formula->lhs, terms, symbols),
                                       substitute(formula->rhs, terms, symbols));
    case FormulaKind::implication:
      return Formula::make_implication(substitute(formula->lhs, terms, symbols),
                                       substitute(formula->rhs, terms, symbols));
    case FormulaKind::forall: {
      TermSubst inner_terms = terms;
      SymbolSubst inner_symbols = symbols;
      for (const auto& b : formula->binders) {
        inner_terms.erase(b.name);
        inner_symbols.erase(b.name);
      }
      return Formula::make_forall(
          formula->binders, substitute(formula->body, inner_terms, inner_symbols));
    }
  }
  return formula;
}

bool is_ground(const Term& term) {
  if (term.kind == TermKind::variable) return false;
  return std::all_of(term.args.begin(), term.args.end(),
                     [](const Term& t) { return is_ground(t); });
}

int term_depth(const Term& term) {
  int deepest = -1;
  for (const auto& a : term.args) {
    deepest = std::max(deepest, term_depth(a));
  }
  return deepest + 1;
}

namespace {

void collect_from_term(const Term& t, std::map<std::string, Term>& sink) {
  if (is_ground(t)) {
    sink.emplace(to_text(t), t);
  }
  for (const auto& a : t.args) {
    collect_from_term(a, sink);
  }
}

}  // namespace

void collect_ground_terms(const Formula& formula,
                          std::map<std::string, Term>& sink) {
  switch (formula.kind) {
    case FormulaKind::atom:
      for (const auto& a : formula.args) collect_from_term(a, sink);
      return;
    case FormulaKind::conjunction:
    case FormulaKind::implication:
      collect_ground_terms(*formula.lhs, sink);
      collect_ground_terms(*formula.rhs, sink);
      return;
    case FormulaKind::forall:
      collect_ground_terms(*formula.body, sink);
      return;
  }
}

}  // namespace safebox::logic
