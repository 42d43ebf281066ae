#pragma once

#include <string>
#include <vector>

#include "elx/types.hpp"

namespace elx {

// Parsed s-expression node. Atoms are maximal runs of characters other than
// whitespace, parentheses and the ';' comment introducer.
struct SNode {
  enum class Kind { Atom, List };
  Kind kind = Kind::Atom;
  std::string atom;
  std::vector<SNode> items;
  int line = 1;
  int col = 1;

  bool is_atom() const { return kind == Kind::Atom; }
  bool is_atom(const std::string& word) const { return is_atom() && atom == word; }
  bool is_list() const { return kind == Kind::List; }
  // True for a list whose first item is the given atom.
  bool is_form(const std::string& head) const {
    return is_list() && !items.empty() && items[0].is_atom(head);
  }
  std::string where() const; // "line L, column C"
};

[[noreturn]] void syntax_error(const SNode& at, const std::string& message);

// Reads all top-level forms. Syntax on unbalanced or stray parentheses, with
// line and column in the message.
std::vector<SNode> read_sexprs(const std::string& text);

} // namespace elx
