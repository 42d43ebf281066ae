#include "elx/render.hpp"

#include <cctype>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace elx {

namespace {

bool is_det_type(const TypePtr& ty) {
  return type_equal(ty, Type::func(Type::func(Type::entity(),
                                              Type::pair(Type::truth(), Type::truth())),
                                   Type::truth()));
}

void collect_atom_names(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free: out.insert(t->name()); return;
    case Term::Kind::Bound: return;
    case Term::Kind::Lambda:
    case Term::Kind::Primary: collect_atom_names(t->sub1(), out); return;
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      collect_atom_names(t->sub1(), out);
      collect_atom_names(t->sub2(), out);
      return;
  }
}

struct Namer {
  std::set<std::string> taken;
  int next = 1;
  std::string fresh() {
    for (;;) {
      std::string cand = "x" + std::to_string(next++);
      if (!taken.count(cand)) return cand;
    }
  }
};

enum class Slot { Top, Head, Argument, PairElem, Body, Marked };

void rec(const TermPtr& t, std::vector<std::string>& bound, Namer& namer, Slot slot,
         std::string& out) {
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free: out += t->name(); return;
    case Term::Kind::Bound:
      if (t->index() >= 0 && t->index() < static_cast<int>(bound.size()))
        out += bound[static_cast<std::size_t>(t->index())];
      else
        out += "#" + std::to_string(t->index());
      return;
    case Term::Kind::Primary:
      out += "prim(";
      rec(t->sub1(), bound, namer, Slot::Marked, out);
      out += ')';
      return;
    case Term::Kind::Lambda: {
      bool paren = slot != Slot::Top && slot != Slot::Body && slot != Slot::Marked;
      if (paren) out += '(';
      std::string name = namer.fresh();
      out += "lam ";
      out += name;
      out += ':';
      out += show_type(t->type());
      out += ". ";
      bound.insert(bound.begin(), name);
      rec(t->sub1(), bound, namer, Slot::Body, out);
      bound.erase(bound.begin());
      if (paren) out += ')';
      return;
    }
    case Term::Kind::MakePair:
      out += '<';
      rec(t->sub1(), bound, namer, Slot::PairElem, out);
      out += ", ";
      rec(t->sub2(), bound, namer, Slot::PairElem, out);
      out += '>';
      return;
    case Term::Kind::Apply: {
      const TermPtr& f = t->sub1();
      const TermPtr& a = t->sub2();
      if ((f->kind() == Term::Kind::Const || f->kind() == Term::Kind::Free) &&
          is_det_type(f->type()) && a->kind() == Term::Kind::Lambda &&
          a->sub1()->kind() == Term::Kind::MakePair) {
        std::string name = namer.fresh();
        out += f->name();
        out += '(';
        out += name;
        out += ", ";
        bound.insert(bound.begin(), name);
        rec(a->sub1()->sub1(), bound, namer, Slot::Argument, out);
        out += ", ";
        rec(a->sub1()->sub2(), bound, namer, Slot::Argument, out);
        bound.erase(bound.begin());
        out += ')';
        return;
      }
      std::vector<TermPtr> args;
      TermPtr head = t;
      while (head->kind() == Term::Kind::Apply) {
        args.push_back(head->sub2());
        head = head->sub1();
      }
      rec(head, bound, namer, Slot::Head, out);
      out += '(';
      for (std::size_t i = args.size(); i-- > 0;) {
        rec(args[i], bound, namer, Slot::Argument, out);
        if (i) out += ", ";
      }
      out += ')';
      return;
    }
  }
}

// ---------------------------------------------------------------------------

struct Token {
  enum Kind { Ident, LParen, RParen, Comma, Dot, Colon, Lt, Gt, Arrow, Star, End } kind;
  std::string text;
  std::size_t pos = 0;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '?';
}

// Hyphens join identifiers (wife-of) except when they open an arrow.
bool ident_inner(const std::string& s, std::size_t i) {
  if (ident_char(s[i])) return true;
  return s[i] == '-' && i + 1 < s.size() && s[i + 1] != '>';
}

struct Lexer {
  std::string src;
  std::size_t i = 0;
  Token cur;

  explicit Lexer(std::string s) : src(std::move(s)) { advance(); }

  void advance() {
    while (i < src.size() && std::isspace(static_cast<unsigned char>(src[i]))) ++i;
    cur.pos = i;
    if (i >= src.size()) {
      cur = {Token::End, "", i};
      return;
    }
    char c = src[i];
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      cur = {Token::Arrow, "->", i};
      i += 2;
      return;
    }
    auto single = [&](Token::Kind k) {
      cur = {k, std::string(1, c), i};
      ++i;
    };
    switch (c) {
      case '(': single(Token::LParen); return;
      case ')': single(Token::RParen); return;
      case ',': single(Token::Comma); return;
      case '.': single(Token::Dot); return;
      case ':': single(Token::Colon); return;
      case '<': single(Token::Lt); return;
      case '>': single(Token::Gt); return;
      case '*': single(Token::Star); return;
      default: break;
    }
    if (ident_char(c) && !std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() && ident_inner(src, i)) ++i;
      cur = {Token::Ident, src.substr(start, i - start), start};
      return;
    }
    fail(ErrorKind::Syntax, "unexpected character '" + std::string(1, c) + "' at offset " +
                                std::to_string(i));
  }
};

struct Parser {
  Lexer lex;
  const Env* env;
  std::vector<std::pair<std::string, TypePtr>> scope; // innermost first

  Parser(std::string text, const Env* e) : lex(std::move(text)), env(e) {}

  [[noreturn]] void err(const std::string& what) {
    fail(ErrorKind::Syntax, what + " at offset " + std::to_string(lex.cur.pos));
  }

  void expect(Token::Kind k, const char* what) {
    if (lex.cur.kind != k) err(std::string("expected ") + what);
    lex.advance();
  }

  bool at_ident(const char* word) {
    return lex.cur.kind == Token::Ident && lex.cur.text == word;
  }

  bool resolvable(const std::string& name) const {
    for (const auto& [n, ty] : scope)
      if (n == name) return true;
    return env->has(name);
  }

  TermPtr resolve(const std::string& name) {
    for (std::size_t i = 0; i < scope.size(); ++i)
      if (scope[i].first == name) return Term::bound(static_cast<int>(i));
    if (const TypePtr* ty = env->lookup(name)) return Term::constant(name, *ty);
    fail(ErrorKind::UnknownConstant, "unknown name '" + name + "'");
  }

  TypePtr type() {
    TypePtr left = type_prod();
    if (lex.cur.kind == Token::Arrow) {
      lex.advance();
      return Type::func(left, type());
    }
    return left;
  }

  TypePtr type_prod() {
    TypePtr left = type_atom();
    if (lex.cur.kind == Token::Star) {
      lex.advance();
      return Type::pair(left, type_prod());
    }
    return left;
  }

  TypePtr type_atom() {
    if (lex.cur.kind == Token::LParen) {
      lex.advance();
      TypePtr t = type();
      expect(Token::RParen, "')'");
      return t;
    }
    if (at_ident("e")) {
      lex.advance();
      return Type::entity();
    }
    if (at_ident("t")) {
      lex.advance();
      return Type::truth();
    }
    err("expected a type");
  }

  TermPtr term() {
    if (at_ident("lam")) {
      lex.advance();
      if (lex.cur.kind != Token::Ident) err("expected a binder name");
      std::string name = lex.cur.text;
      lex.advance();
      expect(Token::Colon, "':'");
      TypePtr ty = type();
      expect(Token::Dot, "'.'");
      scope.insert(scope.begin(), {name, ty});
      TermPtr body = term();
      scope.erase(scope.begin());
      return Term::lambda(ty, name, body);
    }
    return app();
  }

  TermPtr app() {
    TermPtr head = atom();
    while (lex.cur.kind == Token::LParen) {
      lex.advance();
      if ((head->kind() == Term::Kind::Const || head->kind() == Term::Kind::Free) &&
          is_det_type(head->type()) && lex.cur.kind == Token::Ident &&
          !resolvable(lex.cur.text)) {
        std::string name = lex.cur.text;
        lex.advance();
        expect(Token::Comma, "','");
        scope.insert(scope.begin(), {name, Type::entity()});
        TermPtr restriction = term();
        expect(Token::Comma, "','");
        TermPtr body = term();
        scope.erase(scope.begin());
        expect(Token::RParen, "')'");
        head = Term::apply(head, Term::lambda(Type::entity(), name,
                                              Term::make_pair(restriction, body)));
        continue;
      }
      std::vector<TermPtr> args;
      args.push_back(term());
      while (lex.cur.kind == Token::Comma) {
        lex.advance();
        args.push_back(term());
      }
      expect(Token::RParen, "')'");
      head = Term::apply(head, args);
    }
    return head;
  }

  TermPtr atom() {
    if (at_ident("prim")) {
      lex.advance();
      expect(Token::LParen, "'('");
      TermPtr inner = term();
      expect(Token::RParen, "')'");
      return Term::primary(inner);
    }
    if (lex.cur.kind == Token::Ident) {
      std::string name = lex.cur.text;
      lex.advance();
      return resolve(name);
    }
    if (lex.cur.kind == Token::LParen) {
      lex.advance();
      TermPtr t = term();
      expect(Token::RParen, "')'");
      return t;
    }
    if (lex.cur.kind == Token::Lt) {
      lex.advance();
      TermPtr first = term();
      expect(Token::Comma, "','");
      TermPtr second = term();
      expect(Token::Gt, "'>'");
      return Term::make_pair(first, second);
    }
    err("expected a term");
  }
};

} // namespace

std::string render_term(const TermPtr& t) {
  Namer namer;
  collect_atom_names(t, namer.taken);
  std::vector<std::string> bound;
  std::string out;
  rec(t, bound, namer, Slot::Top, out);
  return out;
}

TermPtr parse_reading(const std::string& text, const Env& env) {
  Parser p(text, &env);
  TermPtr t = p.term();
  if (p.lex.cur.kind != Token::End) p.err("trailing input");
  return t;
}

TypePtr parse_type_text(const std::string& text) {
  Parser p(text, nullptr);
  TypePtr t = p.type();
  if (p.lex.cur.kind != Token::End) p.err("trailing input");
  return t;
}

} // namespace elx
