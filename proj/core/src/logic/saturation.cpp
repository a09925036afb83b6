#include "saturation.hpp"

#include <algorithm>
#include <stdexcept>

namespace safebox::logic::detail {

namespace {

std::string ground_term_sort(const Term& term, const Signature& sig) {
  if (term.args.empty()) {
    auto it = sig.constants.find(term.name);
    if (it != sig.constants.end()) return it->second;
  }
  auto it = sig.functions.find(term.name);
  if (it != sig.functions.end()) return it->second.result;
  return {};
}

}  // namespace

Saturation::Saturation(const Signature& sig, SaturationConfig config)
    : sig_(sig),
      config_(config),
      in_progress_(std::make_shared<std::set<std::string>>()),
      log_(std::make_shared<std::vector<std::string>>()) {}

std::size_t Saturation::add_seed(const FormulaPtr& formula, std::string name) {
  Derivation d;
  d.rule = Derivation::Rule::seed;
  d.seed_name = std::move(name);
  return add_entry(formula, std::move(d));
}

std::size_t Saturation::add_assumption(const FormulaPtr& formula) {
  Derivation d;
  d.rule = Derivation::Rule::assumption;
  return add_entry(formula, std::move(d));
}

void Saturation::add_context(const FormulaPtr& formula) {
  context_.push_back(formula);
}

std::size_t Saturation::add_entry(const FormulaPtr& formula, Derivation how) {
  const std::string key = canonical_text(*formula);
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  if (entries_.size() >= config_.max_entries) {
    throw std::runtime_error("saturation entry limit exceeded");
  }
  entries_.push_back(Entry{formula, std::move(how)});
  index_.emplace(key, entries_.size() - 1);
  log_entry(entries_.size() - 1);
  return entries_.size() - 1;
}

bool Saturation::member(const FormulaPtr& formula, std::size_t* id) const {
  auto it = index_.find(canonical_text(*formula));
  if (it == index_.end()) return false;
  if (id) *id = it->second;
  return true;
}

void Saturation::flatten_conjuncts(const FormulaPtr& formula,
                                   std::vector<FormulaPtr>& parts) const {
  if (formula->kind == FormulaKind::conjunction) {
    flatten_conjuncts(formula->lhs, parts);
    flatten_conjuncts(formula->rhs, parts);
  } else {
    parts.push_back(formula);
  }
}

void Saturation::build_herbrand_universe() {
  universe_.clear();
  std::map<std::string, std::map<std::string, Term>> by_sort;
  for (const auto& [name, sort] : sig_.constants) {
    by_sort[sort].emplace(name, Term{TermKind::symbol, name, {}});
  }
  for (int depth = 1; depth <= config_.term_depth_cap; ++depth) {
    std::map<std::string, std::map<std::string, Term>> grown = by_sort;
    for (const auto& [fname, fsig] : sig_.functions) {
      // All argument tuples over what exists so far.
      std::vector<std::vector<Term>> pools;
      bool feasible = true;
      for (const auto& arg_sort : fsig.args) {
        auto it = by_sort.find(arg_sort);
        if (it == by_sort.end() || it->second.empty()) {
          feasible = false;
          break;
        }
        std::vector<Term> pool;
        for (const auto& [text, term] : it->second) pool.push_back(term);
        pools.push_back(std::move(pool));
      }
      if (!feasible) continue;
      std::vector<std::size_t> odo(pools.size(), 0);
      while (true) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < pools.size(); ++i) {
          args.push_back(pools[i][odo[i]]);
        }
        Term candidate{TermKind::symbol, fname, std::move(args)};
        if (term_depth(candidate) <= depth) {
          grown[fsig.result].emplace(to_text(candidate), candidate);
        }
        std::size_t i = 0;
        for (; i < odo.size(); ++i) {
          if (++odo[i] < pools[i].size()) break;
          odo[i] = 0;
        }
        if (i == odo.size()) break;
      }
    }
    by_sort = std::move(grown);
  }
  for (auto& [sort, terms] : by_sort) {
    auto& list = universe_[sort];
    for (auto& [text, term] : terms) list.push_back(term);
  }
  universe_version_ = 1;
  herbrand_universe_built_ = true;
}

void Saturation::rebuild_universe() {
  if (config_.herbrand) {
    if (!herbrand_universe_built_) build_herbrand_universe();
    return;
  }
  std::map<std::string, Term> found;
  for (const auto& e : entries_) collect_ground_terms(*e.formula, found);
  for (const auto& f : context_) collect_ground_terms(*f, found);
  for (const auto& [name, sort] : sig_.constants) {
    found.emplace(name, Term{TermKind::symbol, name, {}});
  }

  bool grew = false;
  std::map<std::string, std::set<std::string>> seen;
  for (auto& [sort, terms] : universe_) {
    for (const auto& t : terms) seen[sort].insert(to_text(t));
  }
  for (const auto& [text, term] : found) {
    if (term_depth(term) > config_.term_depth_cap) continue;
    const std::string sort = ground_term_sort(term, sig_);
    if (sort.empty()) continue;
    if (seen[sort].insert(text).second) {
      universe_[sort].push_back(term);
      grew = true;
    }
  }
  if (grew) {
    for (auto& [sort, terms] : universe_) {
      std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        const int da = term_depth(a), db = term_depth(b);
        if (da != db) return da < db;
        return to_text(a) < to_text(b);
      });
    }
    ++universe_version_;
  }
}

std::vector<Term> Saturation::candidates_for(
    const Binder& binder, std::vector<std::string>* symbols) const {
  if (binder.second_order) {
    *symbols = sig_.symbols_of_kind(sig_.kinds.at(binder.type));
    return {};
  }
  auto it = universe_.find(binder.type);
  return it != universe_.end() ? it->second : std::vector<Term>{};
}

bool Saturation::apply_conj_elim() {
  bool changed = false;
  const std::size_t n = entries_.size();
  for (std::size_t i = 0; i < n; ++i) {
    // add_entry may reallocate entries_, so hold the node by value.
    const FormulaPtr f = entries_[i].formula;
    if (f->kind != FormulaKind::conjunction) continue;
    std::vector<FormulaPtr> parts;
    flatten_conjuncts(f, parts);
    for (const auto& p : parts) {
      if (member(p, nullptr)) continue;
      Derivation d;
      d.rule = Derivation::Rule::conj_elim;
      d.from = i;
      add_entry(p, std::move(d));
      changed = true;
    }
  }
  return changed;
}

bool Saturation::apply_instantiation() {
  bool changed = false;
  const std::size_t n = entries_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const FormulaPtr f = entries_[i].formula;
    if (f->kind != FormulaKind::forall) continue;
    auto it = instantiated_at_.find(i);
    if (it != instantiated_at_.end() && it->second == universe_version_) {
      continue;
    }
    instantiated_at_[i] = universe_version_;

    // Candidate lists per binder: declared symbols for second-order
    // binders, universe terms for first-order ones.
    struct Slot {
      bool second_order;
      std::vector<Term> terms;
      std::vector<std::string> symbols;
      std::size_t size() const {
        return second_order ? symbols.size() : terms.size();
      }
    };
    std::vector<Slot> slots;
    bool feasible = true;
    for (const auto& b : f->binders) {
      Slot s;
      s.second_order = b.second_order;
      s.terms = candidates_for(b, &s.symbols);
      if (s.size() == 0) {
        feasible = false;
        break;
      }
      slots.push_back(std::move(s));
    }
    if (!feasible) continue;

    std::vector<std::size_t> odo(slots.size(), 0);
    while (true) {
      TermSubst term_subst;
      SymbolSubst symbol_subst;
      std::vector<std::string> rendered;
      for (std::size_t k = 0; k < slots.size(); ++k) {
        const Binder& b = f->binders[k];
        if (slots[k].second_order) {
          const std::string& sym = slots[k].symbols[odo[k]];
          symbol_subst[b.name] = sym;
          rendered.push_back(sym);
        } else {
          const Term& t = slots[k].terms[odo[k]];
          term_subst[b.name] = t;
          rendered.push_back(to_text(t));
        }
      }
      FormulaPtr instance = substitute(f->body, term_subst, symbol_subst);
      if (!member(instance, nullptr)) {
        Derivation d;
        d.rule = Derivation::Rule::instantiate;
        d.from = i;
        d.inst_args = rendered;
        const Derivation& src = entries_[i].how;
        if (src.rule == Derivation::Rule::seed && !src.seed_name.empty()) {
          d.chain_axiom = src.seed_name;
          d.chain_stages = {rendered};
        } else if (src.rule == Derivation::Rule::instantiate &&
                   !src.chain_axiom.empty()) {
          d.chain_axiom = src.chain_axiom;
          d.chain_stages = src.chain_stages;
          d.chain_stages.push_back(rendered);
        }
        add_entry(instance, std::move(d));
        changed = true;
      }
      std::size_t k = 0;
      for (; k < odo.size(); ++k) {
        if (++odo[k] < slots[k].size()) break;
        odo[k] = 0;
      }
      if (k == odo.size()) break;
    }
  }
  return changed;
}

bool Saturation::apply_modus_ponens() {
  bool changed = false;
  const std::size_t n = entries_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const FormulaPtr f = entries_[i].formula;
    if (f->kind != FormulaKind::implication) continue;
    if (member(f->rhs, nullptr)) continue;
    std::vector<FormulaPtr> parts;
    flatten_conjuncts(f->lhs, parts);
    std::vector<std::size_t> premises;
    bool all_present = true;
    for (const auto& p : parts) {
      std::size_t id = 0;
      if (!member(p, &id)) {
        all_present = false;
        break;
      }
      premises.push_back(id);
    }
    if (!all_present) continue;
    Derivation d;
    d.rule = Derivation::Rule::modus_ponens;
    d.from = i;
    d.premises = std::move(premises);
    add_entry(f->rhs, std::move(d));
    changed = true;
  }
  return changed;
}

bool Saturation::apply_premise_intro() {
  bool changed = false;
  const std::size_t n = entries_.size();
  const std::size_t fingerprint = entries_.size() * 1000003 + universe_version_;
  for (std::size_t i = 0; i < n; ++i) {
    const FormulaPtr f = entries_[i].formula;
    if (f->kind != FormulaKind::implication) continue;
    if (member(f->rhs, nullptr)) continue;
    std::vector<FormulaPtr> parts;
    flatten_conjuncts(f->lhs, parts);
    for (const auto& p : parts) {
      if (p->kind != FormulaKind::forall &&
          p->kind != FormulaKind::implication) {
        continue;
      }
      if (member(p, nullptr)) continue;
      const std::string key = canonical_text(*p);
      if (in_progress_->count(key)) continue;
      auto attempted = intro_attempted_at_.find(key);
      if (attempted != intro_attempted_at_.end() &&
          attempted->second == fingerprint) {
        continue;
      }
      intro_attempted_at_[key] = fingerprint;

      in_progress_->insert(key);
      std::set<UsageRecord> usages;
      bool established = false;
      try {
        established = entails(p, &usages);
      } catch (...) {
        in_progress_->erase(key);
        throw;
      }
      in_progress_->erase(key);

      if (established) {
        Derivation d;
        d.rule = Derivation::Rule::premise_intro;
        d.from = i;
        d.extra_usages.assign(usages.begin(), usages.end());
        add_entry(p, std::move(d));
        changed = true;
      }
    }
  }
  return changed;
}

void Saturation::run() {
  rebuild_universe();
  for (std::size_t round = 0; round < config_.max_rounds; ++round) {
    bool changed = false;
    changed |= apply_conj_elim();
    changed |= apply_instantiation();
    changed |= apply_modus_ponens();
    changed |= apply_premise_intro();
    const std::size_t version_before = universe_version_;
    rebuild_universe();
    if (!changed && universe_version_ == version_before) return;
  }
  throw std::runtime_error("saturation round limit exceeded");
}

bool Saturation::entails(const FormulaPtr& goal,
                         std::set<UsageRecord>* usages) const {
  std::size_t id = 0;
  if (member(goal, &id)) {
    if (usages) {
      auto u = resolve_usages(id);
      usages->insert(u.begin(), u.end());
    }
    return true;
  }
  switch (goal->kind) {
    case FormulaKind::atom:
      return false;
    case FormulaKind::conjunction: {
      std::set<UsageRecord> local;
      if (!entails(goal->lhs, &local) || !entails(goal->rhs, &local)) {
        return false;
      }
      if (usages) usages->insert(local.begin(), local.end());
      return true;
    }
    case FormulaKind::implication: {
      Saturation sub(*this);
      sub.nesting_ = nesting_ + 1;
      std::vector<FormulaPtr> parts;
      flatten_conjuncts(goal->lhs, parts);
      for (const auto& p : parts) sub.add_assumption(p);
      sub.run();
      return sub.entails(goal->rhs, usages);
    }
    case FormulaKind::forall: {
      struct Slot {
        bool second_order;
        std::vector<Term> terms;
        std::vector<std::string> symbols;
        std::size_t size() const {
          return second_order ? symbols.size() : terms.size();
        }
      };
      std::vector<Slot> slots;
      for (const auto& b : goal->binders) {
        Slot s;
        s.second_order = b.second_order;
        s.terms = candidates_for(b, &s.symbols);
        // An empty candidate set would make the universal vacuous over the
        // finite universe; refuse rather than accept vacuously.
        if (s.size() == 0) return false;
        slots.push_back(std::move(s));
      }
      std::set<UsageRecord> local;
      std::vector<std::size_t> odo(slots.size(), 0);
      while (true) {
        TermSubst term_subst;
        SymbolSubst symbol_subst;
        for (std::size_t k = 0; k < slots.size(); ++k) {
          const Binder& b = goal->binders[k];
          if (slots[k].second_order) {
            symbol_subst[b.name] = slots[k].symbols[odo[k]];
          } else {
            term_subst[b.name] = slots[k].terms[odo[k]];
          }
        }
        if (!entails(substitute(goal->body, term_subst, symbol_subst), &local)) {
          return false;
        }
        std::size_t k = 0;
        for (; k < odo.size(); ++k) {
          if (++odo[k] < slots[k].size()) break;
          odo[k] = 0;
        }
        if (k == odo.size()) break;
      }
      if (usages) usages->insert(local.begin(), local.end());
      return true;
    }
  }
  return false;
}

std::set<UsageRecord> Saturation::resolve_usages(std::size_t id) const {
  auto memo = usage_memo_.find(id);
  if (memo != usage_memo_.end()) return memo->second;

  std::set<UsageRecord> out;
  const Derivation& d = entries_[id].how;
  switch (d.rule) {
    case Derivation::Rule::seed:
      if (!d.seed_name.empty()) out.insert(UsageRecord{d.seed_name, {}});
      break;
    case Derivation::Rule::assumption:
      break;
    case Derivation::Rule::instantiate: {
      if (!d.chain_axiom.empty()) {
        out.insert(UsageRecord{d.chain_axiom, d.chain_stages});
      } else {
        // Instantiation of a derived universal: the closure re-derives it,
        // so only the sources matter.
        out = resolve_usages(d.from);
      }
      break;
    }
    case Derivation::Rule::modus_ponens: {
      out = resolve_usages(d.from);
      for (std::size_t p : d.premises) {
        auto u = resolve_usages(p);
        out.insert(u.begin(), u.end());
      }
      break;
    }
    case Derivation::Rule::conj_elim:
      out = resolve_usages(d.from);
      break;
    case Derivation::Rule::premise_intro:
      out.insert(d.extra_usages.begin(), d.extra_usages.end());
      break;
  }
  usage_memo_[id] = out;
  return out;
}

void Saturation::log_entry(std::size_t id) const {
  const Entry& e = entries_[id];
  std::string line(static_cast<std::size_t>(nesting_) * 2, ' ');
  line += "[" + std::to_string(id) + "] ";
  line += to_text(*e.formula);
  switch (e.how.rule) {
    case Derivation::Rule::seed:
      line += e.how.seed_name.empty() ? "  (given)" : "  (" + e.how.seed_name + ")";
      break;
    case Derivation::Rule::assumption:
      line += "  (assumed)";
      break;
    case Derivation::Rule::instantiate: {
      line += "  (instantiate [" + std::to_string(e.how.from) + "] with";
      for (const auto& a : e.how.inst_args) line += " " + a;
      line += ")";
      break;
    }
    case Derivation::Rule::modus_ponens: {
      line += "  (modus ponens [" + std::to_string(e.how.from) + "] with";
      for (std::size_t p : e.how.premises) line += " [" + std::to_string(p) + "]";
      line += ")";
      break;
    }
    case Derivation::Rule::conj_elim:
      line += "  (conjunct of [" + std::to_string(e.how.from) + "])";
      break;
    case Derivation::Rule::premise_intro:
      line += "  (premise of [" + std::to_string(e.how.from) +
              "] established instance-wise)";
      break;
  }
  log_->push_back(std::move(line));
}

}  // namespace safebox::logic::detail
