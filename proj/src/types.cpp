#include "elx/types.hpp"

namespace elx {

const TypePtr& Type::entity() {
  static const TypePtr t(new Type(Kind::Entity, nullptr, nullptr));
  return t;
}

const TypePtr& Type::truth() {
  static const TypePtr t(new Type(Kind::Truth, nullptr, nullptr));
  return t;
}

TypePtr Type::func(TypePtr domain, TypePtr codomain) {
  return TypePtr(new Type(Kind::Func, std::move(domain), std::move(codomain)));
}

TypePtr Type::pair(TypePtr first, TypePtr second) {
  return TypePtr(new Type(Kind::Pair, std::move(first), std::move(second)));
}

TypePtr Type::func_chain(const std::vector<TypePtr>& domains, TypePtr result) {
  TypePtr t = std::move(result);
  for (auto it = domains.rbegin(); it != domains.rend(); ++it) t = func(*it, t);
  return t;
}

bool type_equal(const TypePtr& a, const TypePtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind()) return false;
  if (a->is_base()) return true;
  return type_equal(a->left(), b->left()) && type_equal(a->right(), b->right());
}

int type_order(const TypePtr& t) {
  switch (t->kind()) {
    case Type::Kind::Entity:
    case Type::Kind::Truth: return 0;
    case Type::Kind::Func: return std::max(type_order(t->left()) + 1, type_order(t->right()));
    case Type::Kind::Pair: return std::max(type_order(t->left()), type_order(t->right()));
  }
  return 0;
}

std::vector<TypePtr> domain_chain(const TypePtr& t, TypePtr* result) {
  std::vector<TypePtr> domains;
  TypePtr cur = t;
  while (cur->kind() == Type::Kind::Func) {
    domains.push_back(cur->left());
    cur = cur->right();
  }
  if (result) *result = cur;
  return domains;
}

namespace {

// `->` is right associative and binds loosest; `*` binds tighter.
void show_type_rec(const TypePtr& t, bool func_left, bool pair_arg, std::string& out) {
  switch (t->kind()) {
    case Type::Kind::Entity: out += "e"; return;
    case Type::Kind::Truth: out += "t"; return;
    case Type::Kind::Func: {
      bool paren = func_left || pair_arg;
      if (paren) out += "(";
      show_type_rec(t->left(), true, false, out);
      out += "->";
      show_type_rec(t->right(), false, false, out);
      if (paren) out += ")";
      return;
    }
    case Type::Kind::Pair: {
      bool paren = pair_arg; // a*b*c associates right
      if (paren) out += "(";
      show_type_rec(t->left(), false, true, out);
      out += "*";
      // '*' binds tighter than '->', so a function on the right keeps parens
      show_type_rec(t->right(), true, false, out);
      if (paren) out += ")";
      return;
    }
  }
}

} // namespace

std::string show_type(const TypePtr& t) {
  std::string out;
  show_type_rec(t, false, false, out);
  return out;
}

void fail(ErrorKind kind, const std::string& message) { throw Error(kind, message); }

Env::Env() { consts_["delta"] = Type::entity(); }

void Env::declare(const std::string& name, TypePtr type) {
  if (name == "fst" || name == "snd")
    fail(ErrorKind::DuplicateDeclaration, "'" + name + "' is a builtin and cannot be redeclared");
  auto [it, fresh] = consts_.emplace(name, std::move(type));
  if (!fresh) fail(ErrorKind::DuplicateDeclaration, "constant '" + name + "' declared twice");
}

const TypePtr* Env::lookup(const std::string& name) const {
  auto it = consts_.find(name);
  return it == consts_.end() ? nullptr : &it->second;
}

} // namespace elx
