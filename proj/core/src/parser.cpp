#include "pepa/parser.hpp"

#include <cctype>

#include "pepa/errors.hpp"

namespace pepa {

namespace {

enum class Tok {
  UIdent,   // uppercase-initial: constants, T
  LIdent,   // lowercase-initial: actions, keywords system/high
  Number,
  LParen, RParen, LBrace, RBrace,
  Less, Greater,
  Plus, Star, Slash, Dot, Comma, Semi, Equals,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

const char* token_name(Tok t) {
  switch (t) {
    case Tok::UIdent: return "constant name";
    case Tok::LIdent: return "name";
    case Tok::Number: return "number";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Less: return "'<'";
    case Tok::Greater: return "'>'";
    case Tok::Plus: return "'+'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Dot: return "'.'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Equals: return "'='";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct ParseAbort {};  // unwinds to the entry point; the diagnostic is stored

class Parser {
 public:
  explicit Parser(const std::string& text) { lex(text); }

  std::vector<Diagnostic> diagnostics;

  ModelEnv parse_model_items() {
    ModelEnv env;
    bool sawSystem = false, sawHigh = false;
    while (peek().kind != Tok::End) {
      const Token& t = peek();
      if (t.kind == Tok::LIdent && t.text == "system") {
        if (sawSystem) fail("more than one system declaration", t.pos);
        sawSystem = true;
        next();
        env.root = parse_modexpr();
        expect(Tok::Semi);
      } else if (t.kind == Tok::LIdent && t.text == "high") {
        if (sawHigh) fail("more than one high declaration", t.pos);
        sawHigh = true;
        next();
        expect(Tok::LBrace);
        env.high = make_action_set(parse_name_list("high set"));
        expect(Tok::RBrace);
        expect(Tok::Semi);
      } else if (t.kind == Tok::UIdent) {
        Token nameTok = next();
        if (env.defines(nameTok.text))
          fail("constant " + nameTok.text + " defined more than once",
               nameTok.pos);
        expect(Tok::Equals);
        TermPtr body = parse_choice();
        expect(Tok::Semi);
        env.definitions.push_back({nameTok.text, body, nameTok.pos});
      } else {
        fail("expected a constant definition, 'high', or 'system'", t.pos);
      }
    }
    if (!sawSystem) fail("missing system declaration", peek().pos);
    return env;
  }

  TermPtr parse_expression_entry() {
    TermPtr t = parse_modexpr();
    if (peek().kind != Tok::End)
      fail(std::string("unexpected ") + token_name(peek().kind) +
               " after expression",
           peek().pos);
    return t;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t at_ = 0;

  [[noreturn]] void fail(const std::string& msg, SourcePos pos) {
    diagnostics.push_back({msg, pos});
    throw ParseAbort{};
  }

  void lex(const std::string& text) {
    int line = 1, col = 1;
    std::size_t i = 0;
    auto push = [&](Tok k, std::string s, int l, int c) {
      tokens_.push_back({k, std::move(s), {l, c}});
    };
    while (i < text.size()) {
      char c = text[i];
      if (c == '\n') { ++line; col = 1; ++i; continue; }
      if (std::isspace(static_cast<unsigned char>(c))) { ++col; ++i; continue; }
      if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
        while (i < text.size() && text[i] != '\n') ++i;
        continue;
      }
      int startCol = col;
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[j])) ||
                text[j] == '_'))
          ++j;
        std::string word = text.substr(i, j - i);
        push(std::isupper(static_cast<unsigned char>(c)) ? Tok::UIdent
                                                         : Tok::LIdent,
             word, line, startCol);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j < text.size() && text[j] == '.' && j + 1 < text.size() &&
            std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
          ++j;
          while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        }
        push(Tok::Number, text.substr(i, j - i), line, startCol);
        col += static_cast<int>(j - i);
        i = j;
        continue;
      }
      Tok k;
      switch (c) {
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case '{': k = Tok::LBrace; break;
        case '}': k = Tok::RBrace; break;
        case '<': k = Tok::Less; break;
        case '>': k = Tok::Greater; break;
        case '+': k = Tok::Plus; break;
        case '*': k = Tok::Star; break;
        case '/': k = Tok::Slash; break;
        case '.': k = Tok::Dot; break;
        case ',': k = Tok::Comma; break;
        case ';': k = Tok::Semi; break;
        case '=': k = Tok::Equals; break;
        default:
          diagnostics.push_back(
              {std::string("unexpected character '") + c + "'", {line, startCol}});
          throw ParseAbort{};
      }
      push(k, std::string(1, c), line, startCol);
      ++col;
      ++i;
    }
    tokens_.push_back({Tok::End, "", {line, col}});
  }

  const Token& peek(std::size_t ahead = 0) const {
    std::size_t idx = at_ + ahead;
    if (idx >= tokens_.size()) idx = tokens_.size() - 1;
    return tokens_[idx];
  }

  Token next() { return tokens_[at_ >= tokens_.size() - 1 ? at_ : at_++]; }

  Token expect(Tok kind) {
    if (peek().kind != kind)
      fail(std::string("expected ") + token_name(kind) + ", found " +
               token_name(peek().kind),
           peek().pos);
    return next();
  }

  std::vector<Action> parse_name_list(const std::string& where) {
    std::vector<Action> names;
    while (true) {
      Token t = expect(Tok::LIdent);
      if (t.text == "tau")
        fail("tau cannot appear in a " + where, t.pos);
      names.push_back(t.text);
      if (peek().kind != Tok::Comma) break;
      next();
    }
    return names;
  }

  Rate parse_rate() {
    const Token& t = peek();
    if (t.kind == Tok::UIdent && t.text == "T") {
      next();
      return Rate::passive(1);
    }
    if (t.kind != Tok::Number)
      fail("expected a rate (number, T, or n*T)", t.pos);
    Token numTok = next();
    if (peek().kind == Tok::Star) {
      if (numTok.text.find('.') != std::string::npos)
        fail("passive weight must be an integer", numTok.pos);
      next();
      Token tTok = expect(Tok::UIdent);
      if (tTok.text != "T") fail("expected T after '*'", tTok.pos);
      auto w = parse_rational(numTok.text);
      if (!w || *w <= 0) fail("passive weight must be positive", numTok.pos);
      return Rate::passive(*w);
    }
    std::string text = numTok.text;
    if (peek().kind == Tok::Slash) {
      next();
      Token den = expect(Tok::Number);
      if (numTok.text.find('.') != std::string::npos ||
          den.text.find('.') != std::string::npos)
        fail("rational rates use integer numerator and denominator", den.pos);
      text += "/" + den.text;
    }
    auto value = parse_rational(text);
    if (!value) fail("malformed rate " + text, numTok.pos);
    if (*value <= 0) fail("rates must be positive", numTok.pos);
    return Rate::active(*value);
  }

  TermPtr parse_prefixterm() {
    const Token& t = peek();
    if (t.kind == Tok::LParen) {
      next();
      Token action = expect(Tok::LIdent);
      expect(Tok::Comma);
      Rate rate = parse_rate();
      expect(Tok::RParen);
      expect(Tok::Dot);
      TermPtr body = parse_prefixterm();
      return Term::prefix({action.text, rate}, body);
    }
    if (t.kind == Tok::UIdent) return Term::constant(next().text);
    if (t.kind == Tok::Number && t.text == "0") {
      next();
      return Term::nil();
    }
    fail("expected a prefix, constant, or 0", t.pos);
  }

  TermPtr parse_choice() {
    TermPtr acc = parse_prefixterm();
    while (peek().kind == Tok::Plus) {
      next();
      acc = Term::choice(acc, parse_prefixterm());
    }
    return acc;
  }

  TermPtr parse_atom() {
    const Token& t = peek();
    if (t.kind == Tok::UIdent) return Term::constant(next().text);
    if (t.kind == Tok::Number && t.text == "0") {
      next();
      return Term::nil();
    }
    if (t.kind == Tok::LParen) {
      // "(" action "," starts a prefix-led choice; anything else is grouping
      if (peek(1).kind == Tok::LIdent) return parse_choice();
      next();
      TermPtr inner = parse_modexpr();
      expect(Tok::RParen);
      return inner;
    }
    fail("expected a term", t.pos);
  }

  TermPtr parse_hidelevel() {
    TermPtr acc = parse_atom();
    while (peek().kind == Tok::Slash) {
      next();
      expect(Tok::LBrace);
      ActionSet set = make_action_set(parse_name_list("hiding set"));
      expect(Tok::RBrace);
      acc = Term::hide(acc, set);
    }
    return acc;
  }

  TermPtr parse_modexpr() {
    TermPtr acc = parse_hidelevel();
    while (peek().kind == Tok::Less) {
      next();
      ActionSet set;
      if (peek().kind != Tok::Greater)
        set = make_action_set(parse_name_list("cooperation set"));
      expect(Tok::Greater);
      acc = Term::coop(acc, set, parse_hidelevel());
    }
    return acc;
  }
};

}  // namespace

ParseResult parse_model(const std::string& text) {
  Parser p(text);
  ParseResult result;
  try {
    ModelEnv env = p.parse_model_items();
    result.env = std::move(env);
  } catch (const ParseAbort&) {
    result.env.reset();
  }
  result.diagnostics = std::move(p.diagnostics);
  return result;
}

ExprParseResult parse_expression(const std::string& text) {
  Parser p(text);
  ExprParseResult result;
  try {
    result.term = p.parse_expression_entry();
  } catch (const ParseAbort&) {
    result.term = nullptr;
  }
  result.diagnostics = std::move(p.diagnostics);
  return result;
}

std::string render(const ModelEnv& env) {
  if (!env.root) throw Error("cannot render a model without a system term");
  std::string out;
  for (const auto& def : env.definitions)
    out += def.name + " = " + to_definition_string(def.body) + ";\n";
  if (!env.high.empty()) out += "high {" + set_str(env.high) + "};\n";
  out += "system " + to_string(env.root) + ";\n";
  return out;
}

}  // namespace pepa
