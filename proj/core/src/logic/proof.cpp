#include "safebox/logic/proof.hpp"

#include <algorithm>
#include <sstream>

#include "safebox/logic/parser.hpp"
#include "saturation.hpp"

namespace safebox::logic {

ProofScript parse_script(std::string_view text) {
  ProofScript script;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream words(line);
    std::string word;
    std::vector<std::string> tokens;
    while (words >> word) tokens.push_back(word);
    if (tokens.empty() || tokens[0].starts_with('#')) continue;

    ProofCommand cmd;
    cmd.line = line_no;
    const std::string& op = tokens[0];
    auto need = [&](std::size_t at_least) {
      if (tokens.size() < at_least) {
        throw std::runtime_error("script line " + std::to_string(line_no) +
                                 ": '" + op + "' needs more arguments");
      }
    };
    auto parse_position = [&]() {
      try {
        return std::stoi(tokens[1]);
      } catch (const std::exception&) {
        throw std::runtime_error("script line " + std::to_string(line_no) +
                                 ": bad position '" + tokens[1] + "'");
      }
    };
    if (op == "lemma") {
      need(2);
      cmd.kind = ProofCommand::Kind::lemma;
      cmd.lemma_name = tokens[1];
      if (tokens.size() > 2) {
        throw std::runtime_error("script line " + std::to_string(line_no) +
                                 ": lemma takes one name");
      }
    } else if (op == "skolem") {
      need(3);
      cmd.kind = ProofCommand::Kind::skolem;
      cmd.position = parse_position();
      cmd.args.assign(tokens.begin() + 2, tokens.end());
    } else if (op == "inst") {
      need(3);
      cmd.kind = ProofCommand::Kind::inst;
      cmd.position = parse_position();
      cmd.args.assign(tokens.begin() + 2, tokens.end());
    } else if (op == "prop") {
      cmd.kind = ProofCommand::Kind::prop;
      if (tokens.size() > 1) {
        throw std::runtime_error("script line " + std::to_string(line_no) +
                                 ": prop takes no arguments");
      }
    } else {
      throw std::runtime_error("script line " + std::to_string(line_no) +
                               ": unknown command '" + op + "'");
    }
    script.commands.push_back(std::move(cmd));
  }
  return script;
}

std::string to_text(const ProofScript& script) {
  std::string out;
  for (const auto& cmd : script.commands) {
    switch (cmd.kind) {
      case ProofCommand::Kind::lemma:
        out += "lemma " + cmd.lemma_name;
        break;
      case ProofCommand::Kind::skolem:
        out += "skolem " + std::to_string(cmd.position);
        for (const auto& a : cmd.args) out += " " + a;
        break;
      case ProofCommand::Kind::inst:
        out += "inst " + std::to_string(cmd.position);
        for (const auto& a : cmd.args) out += " " + a;
        break;
      case ProofCommand::Kind::prop:
        out += "prop";
        break;
    }
    out += "\n";
  }
  return out;
}

namespace {

struct SequentState {
  std::vector<FormulaPtr> antecedents;  // index 0 is position -1
  FormulaPtr consequent;
};

void render_sequent(const SequentState& s, std::vector<std::string>& trace) {
  for (std::size_t i = 0; i < s.antecedents.size(); ++i) {
    trace.push_back("  [-" + std::to_string(i + 1) + "] " +
                    to_text(*s.antecedents[i]));
  }
  trace.push_back("  |-----");
  trace.push_back("  [1]  " + to_text(*s.consequent));
}

int max_ground_depth(const SequentState& s) {
  std::map<std::string, Term> terms;
  for (const auto& f : s.antecedents) collect_ground_terms(*f, terms);
  collect_ground_terms(*s.consequent, terms);
  int deepest = 0;
  for (const auto& [text, t] : terms) {
    deepest = std::max(deepest, term_depth(t));
  }
  return deepest;
}

}  // namespace

CheckResult check_script(const Signature& sig,
                         const std::map<std::string, FormulaPtr>& axioms,
                         const FormulaPtr& goal, const ProofScript& script) {
  CheckResult result;
  Signature local_sig = sig;  // grows with skolem constants
  SequentState state;
  state.consequent = goal;
  result.trace.push_back("goal: " + to_text(*goal));

  auto reject = [&](std::size_t step, const std::string& why) {
    result.accepted = false;
    result.failed_step = step;
    result.reason = why;
    result.trace.push_back("step " + std::to_string(step) + " rejected: " + why);
    return result;
  };

  for (std::size_t step = 1; step <= script.commands.size(); ++step) {
    const ProofCommand& cmd = script.commands[step - 1];
    switch (cmd.kind) {
      case ProofCommand::Kind::lemma: {
        auto it = axioms.find(cmd.lemma_name);
        if (it == axioms.end()) {
          return reject(step, "unknown axiom '" + cmd.lemma_name + "'");
        }
        state.antecedents.insert(state.antecedents.begin(), it->second);
        result.trace.push_back("lemma " + cmd.lemma_name);
        render_sequent(state, result.trace);
        break;
      }
      case ProofCommand::Kind::skolem: {
        if (cmd.position != 1) {
          return reject(step, "skolem applies to the consequent, position 1");
        }
        const FormulaPtr target = state.consequent;
        if (target->kind != FormulaKind::forall) {
          return reject(step, "consequent is not universally quantified");
        }
        if (target->binders.size() != cmd.args.size()) {
          return reject(step, "skolem needs " +
                                  std::to_string(target->binders.size()) +
                                  " fresh name(s), got " +
                                  std::to_string(cmd.args.size()));
        }
        TermSubst subst;
        for (std::size_t i = 0; i < target->binders.size(); ++i) {
          const Binder& b = target->binders[i];
          if (b.second_order) {
            return reject(step,
                          "cannot skolemize second-order binder '" + b.name +
                              "'");
          }
          const std::string& fresh = cmd.args[i];
          if (local_sig.has_symbol(fresh)) {
            return reject(step, "skolem constant '" + fresh +
                                    "' is not fresh in the signature");
          }
          local_sig.add_constant(fresh, b.type);
          subst[b.name] = Term{TermKind::symbol, fresh, {}};
        }
        state.consequent = substitute(target->body, subst, {});
        std::string names;
        for (const auto& a : cmd.args) names += " " + a;
        result.trace.push_back("skolem 1" + names);
        render_sequent(state, result.trace);
        break;
      }
      case ProofCommand::Kind::inst: {
        if (cmd.position >= 0) {
          return reject(step, "inst applies to antecedents (negative position)");
        }
        const std::size_t idx = static_cast<std::size_t>(-cmd.position) - 1;
        if (idx >= state.antecedents.size()) {
          return reject(step, "no antecedent at position " +
                                  std::to_string(cmd.position));
        }
        const FormulaPtr target = state.antecedents[idx];
        if (target->kind != FormulaKind::forall) {
          return reject(step, "antecedent " + std::to_string(cmd.position) +
                                  " is not universally quantified");
        }
        if (target->binders.size() != cmd.args.size()) {
          return reject(step, "inst needs " +
                                  std::to_string(target->binders.size()) +
                                  " argument(s), got " +
                                  std::to_string(cmd.args.size()));
        }
        TermSubst term_subst;
        SymbolSubst symbol_subst;
        for (std::size_t i = 0; i < target->binders.size(); ++i) {
          const Binder& b = target->binders[i];
          const std::string& arg = cmd.args[i];
          if (b.second_order) {
            const KindSig& kind = local_sig.kinds.at(b.type);
            auto options = local_sig.symbols_of_kind(kind);
            if (std::find(options.begin(), options.end(), arg) ==
                options.end()) {
              return reject(step, "'" + arg + "' is not a declared symbol of kind " +
                                      b.type);
            }
            symbol_subst[b.name] = arg;
          } else {
            std::string sort;
            Term term;
            try {
              term = parse_ground_term(arg, local_sig, &sort);
            } catch (const ParseError& e) {
              return reject(step, "argument '" + arg + "': " + e.what());
            }
            if (sort != b.type) {
              return reject(step, "argument '" + arg + "' has sort " + sort +
                                      ", binder '" + b.name + "' needs " +
                                      b.type);
            }
            term_subst[b.name] = term;
          }
        }
        state.antecedents[idx] =
            substitute(target->body, term_subst, symbol_subst);
        std::string args;
        for (const auto& a : cmd.args) args += " " + a;
        result.trace.push_back("inst " + std::to_string(cmd.position) + args);
        render_sequent(state, result.trace);
        break;
      }
      case ProofCommand::Kind::prop: {
        detail::SaturationConfig config;
        config.herbrand = false;
        config.term_depth_cap = std::max(3, max_ground_depth(state));
        detail::Saturation saturation(local_sig, config);
        for (const auto& f : state.antecedents) {
          saturation.add_seed(f, "");
        }
        saturation.add_context(state.consequent);
        bool closed = false;
        try {
          saturation.run();
          closed = saturation.entails(state.consequent, nullptr);
        } catch (const std::runtime_error& e) {
          // The checker's contract is a verdict, not an exception: a blown
          // saturation budget rejects the script.
          return reject(step, e.what());
        }
        if (!closed) {
          return reject(step, "prop cannot close the sequent");
        }
        result.trace.push_back("prop");
        for (const auto& line : saturation.log()) {
          result.trace.push_back("  " + line);
        }
        result.trace.push_back("closed: antecedents entail the consequent");
        if (step != script.commands.size()) {
          return reject(step + 1, "commands remain after the sequent closed");
        }
        result.accepted = true;
        result.trace.push_back("Q.E.D.");
        return result;
      }
    }
  }
  return reject(script.commands.size() + 1,
                "script ended before the sequent closed");
}

}  // namespace safebox::logic
