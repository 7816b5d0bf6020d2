#include "cac/parser.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "cac/typing.hpp"

namespace cac {

namespace {
enum class Tok {
  Ident,
  Star,     // *
  Box,      // []
  LParen,
  RParen,
  LBrack,
  RBrack,
  LBrace,
  RBrace,
  Colon,
  Comma,
  Eq,
  Gt,
  Arrow,    // ->
  RuleArrow,  // -->
  Number,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line = 1, col = 1;
};

const char* kReserved[] = {"symb", "rule", "env", "rho", "mon", "acc",
                           "prec", "status", "lex", "mul"};

bool is_reserved(const std::string& s) {
  for (const char* r : kReserved)
    if (s == r) return true;
  return false;
}

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& s) : src(s) {}

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError{msg, line, col}; }

  void advance() {
    if (src[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    while (pos < src.size()) {
      char c = src[pos];
      if (c == '#') {
        while (pos < src.size() && src[pos] != '\n') advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      Token t;
      t.line = line;
      t.col = col;
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string s;
        while (pos < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_' ||
                src[pos] == '\'')) {
          s += src[pos];
          advance();
        }
        t.kind = Tok::Ident;
        t.text = s;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string s;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
          s += src[pos];
          advance();
        }
        t.kind = Tok::Number;
        t.text = s;
      } else if (c == '-') {
        advance();
        if (pos + 1 < src.size() && src[pos] == '-' && src[pos + 1] == '>') {
          advance();
          advance();
          t.kind = Tok::RuleArrow;
          t.text = "-->";
        } else if (pos < src.size() && src[pos] == '>') {
          advance();
          t.kind = Tok::Arrow;
          t.text = "->";
        } else {
          fail("stray '-'");
        }
      } else {
        switch (c) {
          case '*': t.kind = Tok::Star; break;
          case '(': t.kind = Tok::LParen; break;
          case ')': t.kind = Tok::RParen; break;
          case '[':
            if (pos + 1 < src.size() && src[pos + 1] == ']') {
              advance();
              t.kind = Tok::Box;
              t.text = "[]";
              break;
            }
            t.kind = Tok::LBrack;
            break;
          case ']': t.kind = Tok::RBrack; break;
          case '{': t.kind = Tok::LBrace; break;
          case '}': t.kind = Tok::RBrace; break;
          case ':': t.kind = Tok::Colon; break;
          case ',': t.kind = Tok::Comma; break;
          case '=': t.kind = Tok::Eq; break;
          case '>': t.kind = Tok::Gt; break;
          default: fail(std::string("unexpected character '") + c + "'");
        }
        if (t.text.empty()) t.text = std::string(1, c);
        advance();
      }
      out.push_back(std::move(t));
    }
    out.push_back(Token{Tok::End, "", line, col});
    return out;
  }
};

bool upper_initial(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

struct Parser {
  std::vector<Token> toks;
  size_t at = 0;
  System sys;
  std::map<std::string, int> rule_counter;
  std::vector<std::pair<Var, bool>> bound;  // binder stack (var, unused flag)

  const Token& cur() const { return toks[at]; }
  const Token& peek(size_t k = 1) const {
    return toks[std::min(at + k, toks.size() - 1)];
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError{msg, cur().line, cur().col};
  }
  bool is(Tok k) const { return cur().kind == k; }
  bool is_ident(const char* s) const { return is(Tok::Ident) && cur().text == s; }
  Token eat(Tok k, const char* what) {
    if (!is(k)) fail(std::string("expected ") + what + ", found '" + cur().text + "'");
    return toks[at++];
  }
  bool accept(Tok k) {
    if (!is(k)) return false;
    ++at;
    return true;
  }

  // ---- terms -------------------------------------------------------------

  // kind-shaped annotations bind predicate variables
  static SortTag binder_sort(const Term& ann) {
    return is_kind_shape(ann) ? SortTag::Box : SortTag::Star;
  }

  Term resolve(const Token& t) {
    for (auto it = bound.rbegin(); it != bound.rend(); ++it)
      if (it->first.name == t.text) return Term::var(it->first);
    if (sys.sig.has(t.text)) return Term::symb(t.text);
    return Term::var(t.text, upper_initial(t.text) ? SortTag::Box : SortTag::Star);
  }

  bool starts_binder() const {
    // '(x :' or '[x :' introduce a product / an abstraction
    if ((is(Tok::LParen) || is(Tok::LBrack)) && peek().kind == Tok::Ident &&
        peek(2).kind == Tok::Colon)
      return true;
    return false;
  }

  bool starts_atom() const {
    if (is(Tok::Star) || is(Tok::Box) || is(Tok::LParen) || is(Tok::LBrack)) return true;
    if (is(Tok::Number)) return true;  // numeral symbol names such as '0'
    return is(Tok::Ident) && !is_reserved(cur().text);
  }

  Term parse_binder() {
    bool abs = is(Tok::LBrack);
    ++at;  // '(' or '['
    Token name = eat(Tok::Ident, "a binder name");
    eat(Tok::Colon, "':'");
    Term ann = parse_term();
    if (abs)
      eat(Tok::RBrack, "']'");
    else
      eat(Tok::RParen, "')'");
    SortTag s = binder_sort(ann);
    if (upper_initial(name.text) != (s == SortTag::Box))
      throw ParseError{"binder '" + name.text + "' violates the case convention: " +
                           (s == SortTag::Box
                                ? "predicate variables start with an upper-case letter"
                                : "object variables start with a lower-case letter"),
                       name.line, name.col};
    Var x{name.text, s};
    bound.emplace_back(x, false);
    Term body = parse_term();
    bound.pop_back();
    return abs ? Term::abs(x, ann, body) : Term::prod(x, ann, body);
  }

  Term parse_atom() {
    if (accept(Tok::Star)) return Term::star();
    if (accept(Tok::Box)) return Term::box();
    if (is(Tok::LParen)) {
      ++at;
      Term t = parse_term();
      eat(Tok::RParen, "')'");
      return t;
    }
    if (is(Tok::Number)) {
      Token id = toks[at++];
      if (!sys.sig.has(id.text))
        throw ParseError{"undeclared symbol '" + id.text + "'", id.line, id.col};
      return Term::symb(id.text);
    }
    Token id = eat(Tok::Ident, "a term");
    if (is_reserved(id.text)) fail("'" + id.text + "' is a reserved word");
    return resolve(id);
  }

  Term parse_app() {
    if (starts_binder()) return parse_binder();
    Term t = parse_atom();
    while (true) {
      if (starts_binder()) {
        // a trailing binder extends to the end of the term
        t = Term::app(t, parse_binder());
        return t;
      }
      if (!starts_atom()) return t;
      t = Term::app(t, parse_atom());
    }
  }

  Term parse_term() {
    Term t = parse_app();
    if (accept(Tok::Arrow)) return Term::arrow(t, parse_term());
    return t;
  }

  // ---- statements ----------------------------------------------------------

  Token eat_name(const char* what) {
    if (is(Tok::Number)) return toks[at++];  // numeral symbol names such as '0'
    return eat(Tok::Ident, what);
  }

  void parse_symb() {
    ++at;  // 'symb'
    Token name = eat_name("a symbol name");
    if (is_reserved(name.text))
      throw ParseError{"'" + name.text + "' is a reserved word", name.line, name.col};
    if (sys.sig.has(name.text))
      throw ParseError{"symbol '" + name.text + "' is declared twice", name.line, name.col};
    eat(Tok::Colon, "':'");
    Term type = parse_term();
    sys.sig.add_symbol(name.text, type);
  }

  Environment parse_env() {
    Environment env;
    if (accept(Tok::Box)) return env;  // '[]' lexes as a single token
    eat(Tok::LBrack, "'['");
    if (accept(Tok::RBrack)) return env;
    while (true) {
      Token name = eat(Tok::Ident, "a variable name");
      eat(Tok::Colon, "':'");
      Term T = parse_term();
      SortTag s = binder_sort(T);
      if (upper_initial(name.text) != (s == SortTag::Box))
        throw ParseError{"environment variable '" + name.text +
                             "' violates the case convention for its declared type",
                         name.line, name.col};
      Var x{name.text, s};
      if (env.declares(x))
        throw ParseError{"variable '" + name.text + "' declared twice", name.line, name.col};
      env.push(x, T);
      if (accept(Tok::RBrack)) return env;
      eat(Tok::Comma, "',' or ']'");
    }
  }

  Subst parse_rho() {
    Subst rho;
    if (accept(Tok::Box)) return rho;  // '[]' lexes as a single token
    eat(Tok::LBrack, "'['");
    if (accept(Tok::RBrack)) return rho;
    while (true) {
      Token name = eat(Tok::Ident, "a variable name");
      eat(Tok::Arrow, "'->'");
      Term t = parse_term();
      Var x{name.text, upper_initial(name.text) ? SortTag::Box : SortTag::Star};
      rho.bind(x, t);
      if (accept(Tok::RBrack)) return rho;
      eat(Tok::Comma, "',' or ']'");
    }
  }

  void parse_rule() {
    Token kw = toks[at++];
    Term lhs = parse_term();
    eat(Tok::RuleArrow, "'-->'");
    Term rhs = parse_term();
    Rule r;
    r.env_defaulted = true;
    while (true) {
      if (is_ident("env")) {
        ++at;
        r.env = parse_env();
        r.env_defaulted = false;
      } else if (is_ident("rho")) {
        ++at;
        r.rho = parse_rho();
      } else {
        break;
      }
    }
    Spine sp = spine(lhs);
    if (!sp.head.is(TermKind::Symb))
      throw ParseError{"left hand-side must be headed by a declared symbol", kw.line,
                       kw.col};
    r.head = sp.head.symb_name();
    r.lhs_args = sp.args;
    r.rhs = rhs;
    r.name = r.head + "#" + std::to_string(++rule_counter[r.head]);
    if (r.env_defaulted) default_env(r, kw);
    if (SymbolDecl* d = sys.sig.find_mut(r.head)) d->defined = true;
    sys.rules.push_back(std::move(r));
  }

  // when no environment is given, type every left hand-side variable by its
  // first derived type
  void default_env(Rule& r, const Token& kw) {
    Term l = r.lhs();
    std::map<Var, Term> types;
    for (const Var& x : free_vars(l)) {
      Term T;
      for (const Position& p : var_positions(l, x)) {
        try {
          T = derived_type(sys.sig, l, p);
          break;
        } catch (const TypeError&) {
          continue;
        }
      }
      if (!T.valid())
        throw ParseError{"no derived type for variable '" + x.name +
                             "' of rule " + r.name + "; give an explicit environment",
                         kw.line, kw.col};
      types.emplace(x, T);
    }
    // declare each variable after the variables its type depends on
    std::set<Var> done;
    while (done.size() < types.size()) {
      bool progress = false;
      for (const auto& [x, T] : types) {
        if (done.count(x)) continue;
        bool ready = true;
        for (const Var& y : free_vars(T))
          if (types.count(y) && !done.count(y)) ready = false;
        if (!ready) continue;
        r.env.push(x, T);
        done.insert(x);
        progress = true;
      }
      if (!progress)
        throw ParseError{"cyclic dependencies between left hand-side variables of rule " +
                             r.name + "; give an explicit environment",
                         kw.line, kw.col};
    }
  }

  void parse_mon() {
    ++at;
    Token name = eat(Tok::Ident, "a symbol name");
    eat(Tok::Eq, "'='");
    sys.sig.mon[name.text] = parse_index_set();
  }

  void parse_acc() {
    ++at;
    Token name = eat(Tok::Ident, "a symbol name");
    eat(Tok::Eq, "'='");
    sys.sig.acc_declared[name.text] = parse_index_set();
  }

  std::set<int> parse_index_set() {
    std::set<int> out;
    eat(Tok::LBrace, "'{'");
    if (accept(Tok::RBrace)) return out;
    while (true) {
      Token n = eat(Tok::Number, "an argument index");
      out.insert(std::stoi(n.text));
      if (accept(Tok::RBrace)) return out;
      eat(Tok::Comma, "',' or '}'");
    }
  }

  void parse_prec() {
    ++at;
    Token a = eat_name("a symbol name");
    if (accept(Tok::Eq)) {
      Token b = eat_name("a symbol name");
      sys.sig.prec.declare_eq(a.text, b.text);
      return;
    }
    eat(Tok::Gt, "'>' or '='");
    bool any = false;
    while (is(Tok::Number) || (is(Tok::Ident) && !is_reserved(cur().text))) {
      sys.sig.prec.declare_gt(a.text, toks[at++].text);
      any = true;
    }
    if (!any) fail("expected at least one symbol after '>'");
  }

  void parse_status() {
    ++at;
    Token name = eat(Tok::Ident, "a symbol name");
    eat(Tok::Eq, "'='");
    if (!is_ident("lex")) fail("expected 'lex'");
    ++at;
    Status st;
    while (accept(Tok::LParen)) {
      if (!is_ident("mul")) fail("expected 'mul'");
      ++at;
      std::vector<int> slot;
      auto is_placeholder = [&]() {
        if (!is(Tok::Ident) || cur().text.size() < 2 || cur().text[0] != 'x') return false;
        for (size_t k = 1; k < cur().text.size(); ++k)
          if (!std::isdigit(static_cast<unsigned char>(cur().text[k]))) return false;
        return true;
      };
      while (is_placeholder()) {
        slot.push_back(std::stoi(cur().text.substr(1)));
        ++at;
      }
      if (slot.empty()) fail("expected argument placeholders x1 x2 ...");
      eat(Tok::RParen, "')'");
      st.slots.push_back(std::move(slot));
    }
    if (st.slots.empty()) fail("expected at least one '(mul ...)'");
    SymbolDecl* d = sys.sig.find_mut(name.text);
    if (!d)
      throw ParseError{"status for undeclared symbol '" + name.text + "'", name.line,
                       name.col};
    d->declared_status = st;
  }

  System run() {
    while (!is(Tok::End)) {
      if (is_ident("symb")) parse_symb();
      else if (is_ident("rule")) parse_rule();
      else if (is_ident("mon")) parse_mon();
      else if (is_ident("acc")) parse_acc();
      else if (is_ident("prec")) parse_prec();
      else if (is_ident("status")) parse_status();
      else fail("expected a declaration (symb, rule, mon, acc, prec, status)");
    }
    return std::move(sys);
  }
};
}  // namespace

System parse_system(const std::string& text) {
  Lexer lex(text);
  Parser p;
  p.toks = lex.run();
  return p.run();
}

System parse_system_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError{"cannot open file '" + path + "'", 0, 0};
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_system(ss.str());
}

Term parse_term_string(const Signature& sig, const std::string& text) {
  Lexer lex(text);
  Parser p;
  p.sys.sig = sig;
  p.toks = lex.run();
  Term t = p.parse_term();
  if (!p.is(Tok::End)) p.fail("trailing input after the term");
  return t;
}

}  // namespace cac
