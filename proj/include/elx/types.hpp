#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace elx {

class Type;
using TypePtr = std::shared_ptr<const Type>;

// Semantic types: entities, truth values, functions and pairs.
class Type {
public:
  enum class Kind { Entity, Truth, Func, Pair };

  Kind kind() const { return kind_; }
  const TypePtr& left() const { return left_; }   // Func domain / Pair first
  const TypePtr& right() const { return right_; } // Func codomain / Pair second

  static const TypePtr& entity();
  static const TypePtr& truth();
  static TypePtr func(TypePtr domain, TypePtr codomain);
  static TypePtr pair(TypePtr first, TypePtr second);
  // a1 -> a2 -> ... -> result, right associated
  static TypePtr func_chain(const std::vector<TypePtr>& domains, TypePtr result);

  bool is_base() const { return kind_ == Kind::Entity || kind_ == Kind::Truth; }

private:
  Type(Kind k, TypePtr l, TypePtr r) : kind_(k), left_(std::move(l)), right_(std::move(r)) {}
  Kind kind_;
  TypePtr left_, right_;
};

bool type_equal(const TypePtr& a, const TypePtr& b);

// Order of a type: bases are 0, order(a->b) = max(order(a)+1, order(b)),
// order(a*b) = max(order(a), order(b)). Second-order unknowns have order <= 2.
int type_order(const TypePtr& t);

// Splits a1 -> ... -> an -> base into domains and the final non-Func result.
std::vector<TypePtr> domain_chain(const TypePtr& t, TypePtr* result = nullptr);

std::string show_type(const TypePtr& t);

enum class ErrorKind {
  TypeMismatch,
  UnknownConstant,
  DuplicateDeclaration,
  Syntax,
  UnresolvedSelector,
  ElementNotFound,
  NotSecondOrder,
  DischargeOrderViolation,
  BadProblem,
};

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message) : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

// Constant declarations. The pleonastic placeholder `delta` is predeclared as
// an entity; `fst` and `snd` are treated as builtins at every pair type.
class Env {
public:
  Env();
  void declare(const std::string& name, TypePtr type); // at most once per name
  const TypePtr* lookup(const std::string& name) const;
  bool has(const std::string& name) const { return lookup(name) != nullptr; }
  const std::map<std::string, TypePtr>& constants() const { return consts_; }

private:
  std::map<std::string, TypePtr> consts_;
};

} // namespace elx
