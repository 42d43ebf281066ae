#include "elx/sexpr.hpp"

#include <cctype>

namespace elx {

namespace {

struct Reader {
  const std::string& src;
  std::size_t i = 0;
  int line = 1;
  int col = 1;

  explicit Reader(const std::string& s) : src(s) {}

  bool done() const { return i >= src.size(); }
  char peek() const { return src[i]; }

  void bump() {
    if (src[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }

  void skip_blank() {
    while (!done()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        bump();
      } else if (c == ';') {
        while (!done() && peek() != '\n') bump();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void err(const std::string& message) const {
    fail(ErrorKind::Syntax,
         message + " at line " + std::to_string(line) + ", column " + std::to_string(col));
  }

  SNode node() {
    skip_blank();
    if (done()) err("unexpected end of input");
    SNode n;
    n.line = line;
    n.col = col;
    if (peek() == ')') err("unmatched ')'");
    if (peek() == '(') {
      bump();
      n.kind = SNode::Kind::List;
      skip_blank();
      while (!done() && peek() != ')') {
        n.items.push_back(node());
        skip_blank();
      }
      if (done()) {
        line = n.line;
        col = n.col;
        err("unterminated '('");
      }
      bump();
      return n;
    }
    n.kind = SNode::Kind::Atom;
    while (!done() && !std::isspace(static_cast<unsigned char>(peek())) && peek() != '(' &&
           peek() != ')' && peek() != ';')
      n.atom.push_back(src[i]), bump();
    return n;
  }
};

} // namespace

std::string SNode::where() const {
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void syntax_error(const SNode& at, const std::string& message) {
  fail(ErrorKind::Syntax, message + " at " + at.where());
}

std::vector<SNode> read_sexprs(const std::string& text) {
  Reader r(text);
  std::vector<SNode> out;
  r.skip_blank();
  while (!r.done()) {
    out.push_back(r.node());
    r.skip_blank();
  }
  return out;
}

} // namespace elx
