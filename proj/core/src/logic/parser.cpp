#include "safebox/logic/parser.hpp"

#include <cctype>
#include <map>
#include <optional>

namespace safebox::logic {

namespace {

enum class Tok { ident, lparen, rparen, comma, colon, arrow, amp, equals, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return current_; }

  Token take() {
    Token t = current_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      bump();
    }
    current_.line = line_;
    current_.column = column_;
    if (pos_ >= text_.size()) {
      current_.kind = Tok::end;
      current_.text.clear();
      return;
    }
    const char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ident += text_[pos_];
        bump();
      }
      current_.kind = Tok::ident;
      current_.text = std::move(ident);
      return;
    }
    switch (c) {
      case '(': current_.kind = Tok::lparen; break;
      case ')': current_.kind = Tok::rparen; break;
      case ',': current_.kind = Tok::comma; break;
      case ':': current_.kind = Tok::colon; break;
      case '&': current_.kind = Tok::amp; break;
      case '=': current_.kind = Tok::equals; break;
      case '-':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
          bump();
          current_.kind = Tok::arrow;
          break;
        }
        [[fallthrough]];
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_,
                         column_);
    }
    current_.text = std::string(1, c);
    bump();
  }

  void bump() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
  Token current_{Tok::end, "", 1, 1};
};

struct BinderInfo {
  bool second_order;
  std::string type;  // sort or kind name
};

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig)
      : lexer_(text), sig_(sig) {}

  FormulaPtr parse_closed_formula() {
    FormulaPtr f = parse_formula();
    expect_end();
    return f;
  }

  Term parse_closed_term(std::string* sort_out) {
    auto [term, sort] = parse_term();
    expect_end();
    if (sort_out) *sort_out = sort;
    return term;
  }

 private:
  [[noreturn]] void fail(const std::string& message, const Token& at) {
    throw ParseError(message, at.line, at.column);
  }

  Token expect(Tok kind, const char* what) {
    if (lexer_.peek().kind != kind) {
      fail(std::string("expected ") + what, lexer_.peek());
    }
    return lexer_.take();
  }

  void expect_end() {
    if (lexer_.peek().kind != Tok::end) {
      fail("unexpected trailing input", lexer_.peek());
    }
  }

  FormulaPtr parse_formula() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::ident && t.text == "FORALL") {
      lexer_.take();
      std::vector<Binder> binders;
      std::vector<std::pair<std::string, std::optional<BinderInfo>>> saved;
      while (true) {
        Token name = expect(Tok::ident, "a bound variable name");
        expect(Tok::colon, "':' after the bound variable");
        Token type = expect(Tok::ident, "a sort or kind name");
        bool second_order = false;
        if (sig_.kinds.count(type.text)) {
          second_order = true;
        } else if (!sig_.has_sort(type.text)) {
          fail("unknown sort or kind '" + type.text + "'", type);
        }
        binders.push_back(Binder{name.text, type.text, second_order});
        auto it = env_.find(name.text);
        saved.emplace_back(name.text, it != env_.end()
                                          ? std::optional<BinderInfo>(it->second)
                                          : std::nullopt);
        env_[name.text] = BinderInfo{second_order, type.text};
        if (lexer_.peek().kind == Tok::comma) {
          lexer_.take();
          continue;
        }
        break;
      }
      expect(Tok::colon, "':' before the quantifier body");
      FormulaPtr body = parse_formula();
      for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        if (it->second) {
          env_[it->first] = *it->second;
        } else {
          env_.erase(it->first);
        }
      }
      return Formula::make_forall(std::move(binders), std::move(body));
    }
    return parse_implication();
  }

  FormulaPtr parse_implication() {
    FormulaPtr lhs = parse_conjunction();
    if (lexer_.peek().kind == Tok::arrow) {
      lexer_.take();
      return Formula::make_implication(std::move(lhs), parse_formula());
    }
    return lhs;
  }

  FormulaPtr parse_conjunction() {
    FormulaPtr f = parse_primary();
    while (lexer_.peek().kind == Tok::amp) {
      lexer_.take();
      f = Formula::make_conjunction(std::move(f), parse_primary());
    }
    return f;
  }

  FormulaPtr parse_primary() {
    const Token& t = lexer_.peek();
    if (t.kind == Tok::lparen) {
      lexer_.take();
      FormulaPtr f = parse_formula();
      expect(Tok::rparen, "')'");
      consume_equals_true();
      return f;
    }
    if (t.kind != Tok::ident) {
      fail("expected a formula", t);
    }
    return parse_atom();
  }

  // Accepts the PVS habit of writing `atom = TRUE`; the comparison carries
  // no information since predicates are boolean already.
  void consume_equals_true() {
    if (lexer_.peek().kind != Tok::equals) return;
    Token eq = lexer_.take();
    Token rhs = expect(Tok::ident, "TRUE after '='");
    if (rhs.text != "TRUE" && rhs.text != "true") {
      fail("only '= TRUE' comparisons are supported", eq);
    }
  }

  FormulaPtr parse_atom() {
    Token head = expect(Tok::ident, "a predicate name");
    bool head_is_variable = false;
    std::vector<std::string> expected_args;
    auto env_it = env_.find(head.text);
    if (env_it != env_.end()) {
      if (!env_it->second.second_order) {
        fail("'" + head.text + "' is a first-order variable, not a predicate",
             head);
      }
      const KindSig& kind = sig_.kinds.at(env_it->second.type);
      if (!kind.is_predicate) {
        fail("'" + head.text + "' ranges over functions and cannot head an atom",
             head);
      }
      head_is_variable = true;
      expected_args = kind.args;
    } else {
      auto pred_it = sig_.predicates.find(head.text);
      if (pred_it == sig_.predicates.end()) {
        fail("unknown predicate '" + head.text + "'", head);
      }
      expected_args = pred_it->second;
    }

    expect(Tok::lparen, "'(' after the predicate name");
    std::vector<Term> args;
    if (lexer_.peek().kind != Tok::rparen) {
      while (true) {
        args.push_back(parse_term_checked(expected_args, args.size(), head));
        if (lexer_.peek().kind == Tok::comma) {
          lexer_.take();
          continue;
        }
        break;
      }
    }
    expect(Tok::rparen, "')'");
    if (args.size() != expected_args.size()) {
      fail("predicate '" + head.text + "' expects " +
               std::to_string(expected_args.size()) + " argument(s), got " +
               std::to_string(args.size()),
           head);
    }
    consume_equals_true();
    return Formula::make_atom(head.text, head_is_variable, std::move(args));
  }

  Term parse_term_checked(const std::vector<std::string>& expected,
                          std::size_t index, const Token& head) {
    const Token at = lexer_.peek();
    auto [term, sort] = parse_term();
    if (index < expected.size() && sort != expected[index]) {
      fail("argument " + std::to_string(index + 1) + " of '" + head.text +
               "' must have sort " + expected[index] + ", got " + sort,
           at);
    }
    return term;
  }

  std::pair<Term, std::string> parse_term() {
    Token head = expect(Tok::ident, "a term");

    auto parse_args = [&](const std::vector<std::string>& expected) {
      expect(Tok::lparen, "'('");
      std::vector<Term> args;
      std::size_t i = 0;
      if (lexer_.peek().kind != Tok::rparen) {
        while (true) {
          const Token at = lexer_.peek();
          auto [term, sort] = parse_term();
          if (i < expected.size() && sort != expected[i]) {
            fail("argument " + std::to_string(i + 1) + " of '" + head.text +
                     "' must have sort " + expected[i] + ", got " + sort,
                 at);
          }
          args.push_back(std::move(term));
          ++i;
          if (lexer_.peek().kind == Tok::comma) {
            lexer_.take();
            continue;
          }
          break;
        }
      }
      expect(Tok::rparen, "')'");
      if (args.size() != expected.size()) {
        fail("'" + head.text + "' expects " + std::to_string(expected.size()) +
                 " argument(s), got " + std::to_string(args.size()),
             head);
      }
      return args;
    };

    auto env_it = env_.find(head.text);
    if (env_it != env_.end()) {
      if (!env_it->second.second_order) {
        if (lexer_.peek().kind == Tok::lparen) {
          fail("first-order variable '" + head.text + "' cannot take arguments",
               head);
        }
        return {Term{TermKind::variable, head.text, {}}, env_it->second.type};
      }
      const KindSig& kind = sig_.kinds.at(env_it->second.type);
      if (kind.is_predicate) {
        fail("'" + head.text + "' ranges over predicates and is not a term",
             head);
      }
      std::vector<Term> args = parse_args(kind.args);
      return {Term{TermKind::variable, head.text, std::move(args)}, kind.result};
    }

    if (auto it = sig_.constants.find(head.text); it != sig_.constants.end()) {
      if (lexer_.peek().kind == Tok::lparen) {
        fail("constant '" + head.text + "' cannot take arguments", head);
      }
      return {Term{TermKind::symbol, head.text, {}}, it->second};
    }
    if (auto it = sig_.functions.find(head.text); it != sig_.functions.end()) {
      std::vector<Term> args = parse_args(it->second.args);
      return {Term{TermKind::symbol, head.text, std::move(args)},
              it->second.result};
    }
    fail("unknown symbol '" + head.text + "'", head);
  }

  Lexer lexer_;
  const Signature& sig_;
  std::map<std::string, BinderInfo> env_;
};

}  // namespace

FormulaPtr parse_formula(std::string_view text, const Signature& sig) {
  return Parser(text, sig).parse_closed_formula();
}

Term parse_ground_term(std::string_view text, const Signature& sig,
                       std::string* sort_out) {
  return Parser(text, sig).parse_closed_term(sort_out);
}

}  // namespace safebox::logic
