#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "elx/types.hpp"

namespace elx {

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Terms use de Bruijn indices for lambda-bound variables and names for free
// variables and constants, so alpha equivalence is plain structural equality.
// Primary(t) wraps a primary occurrence: it is transparent to typing,
// normalization and alpha comparison but is preserved by substitution, so
// downstream filters can still see which occurrences came marked.
class Term {
public:
  enum class Kind { Const, Free, Bound, Lambda, Apply, MakePair, Primary };

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; } // Const/Free; Lambda display hint
  int index() const { return index_; }              // Bound
  const TypePtr& type() const { return type_; }     // Const/Free type, Lambda binder type
  const TermPtr& sub1() const { return sub1_; }     // Lambda body, Apply fun, pair first, Primary inner
  const TermPtr& sub2() const { return sub2_; }     // Apply arg, pair second

  static TermPtr constant(std::string name, TypePtr type);
  static TermPtr free(std::string name, TypePtr type);
  static TermPtr bound(int index);
  static TermPtr lambda(TypePtr binder, std::string hint, TermPtr body);
  static TermPtr apply(TermPtr fun, TermPtr arg);
  static TermPtr apply(TermPtr fun, const std::vector<TermPtr>& args);
  static TermPtr make_pair(TermPtr first, TermPtr second);
  static TermPtr primary(TermPtr inner);

private:
  Term() = default;
  static TermPtr build(Kind kind, std::string name, int index, TypePtr type, TermPtr s1,
                       TermPtr s2);
  Kind kind_;
  std::string name_;
  int index_ = 0;
  TypePtr type_;
  TermPtr sub1_, sub2_;
};

// fst/snd builtins, instantiated per pair type: fst : (a*b)->a, snd : (a*b)->b.
TermPtr fst_at(const TypePtr& pair_type);
TermPtr snd_at(const TypePtr& pair_type);
bool is_pair_projection(const Term& t); // a Const named fst/snd of projection shape

// Drops any Primary wrappers at the root.
const TermPtr& strip(const TermPtr& t);
// Removes every Primary wrapper in the term.
TermPtr strip_deep(const TermPtr& t);

// Alpha equivalence; transparent to Primary wrappers and binder hints.
bool alpha_equal(const TermPtr& a, const TermPtr& b);
// Structural equality keeping Primary wrappers significant (hints ignored).
bool equal_with_markers(const TermPtr& a, const TermPtr& b);

bool occurs_free(const std::string& name, const TermPtr& t);
std::set<std::string> free_var_names(const TermPtr& t);
// True when the term has no dangling bound indices.
bool locally_closed(const TermPtr& t);

// Adds d to every bound index >= cutoff.
TermPtr shift(const TermPtr& t, int d, int cutoff = 0);
// Capture-avoiding substitution of a locally closed value for a free variable.
TermPtr subst_free(const TermPtr& t, const std::string& name, const TermPtr& value);
// Typed front end: checks the value's type against the variable's before
// substituting (TypeMismatch otherwise).
TermPtr substitute(const TermPtr& t, const TermPtr& var, const TermPtr& value);
// Replaces bound index 0 in a lambda body (used by beta reduction).
TermPtr open_bound(const TermPtr& body, const TermPtr& value);
// Turns a free variable into bound index 0, ready to be wrapped in a lambda.
TermPtr close_free(const TermPtr& t, const std::string& name);

// Beta-normalizes and then contracts eta redexes (plus fst/snd on literal
// pairs and <fst(p), snd(p)> back to p), yielding the canonical normal form.
TermPtr normalize(const TermPtr& t);

// Type of a well-formed term; throws TypeMismatch/UnknownConstant otherwise.
// The Env validates constants against their declarations.
TypePtr typecheck(const TermPtr& t, const Env& env);
// Inference from the types carried on atoms alone (no declaration check);
// context holds binder types for dangling indices, innermost first.
TypePtr infer_type(const TermPtr& t, const std::vector<TypePtr>& context = {});

// Positions: child indices from the root, with Primary wrappers transparent
// (a path never counts a Primary node). Lambda body = 0; Apply fun = 0,
// arg = 1; pair first = 0, second = 1.
using Path = std::vector<int>;

std::optional<TermPtr> subterm_at(const TermPtr& t, const Path& path);
// Replaces the subterm at path (any Primary wrappers at that node are
// replaced along with it).
TermPtr replace_at(const TermPtr& t, const Path& path, const TermPtr& value);
// Wraps the node at path in a Primary marker.
TermPtr wrap_primary_at(const TermPtr& t, const Path& path);

// Paths of all Primary-marked nodes, outermost (preorder) first.
std::vector<Path> collect_primaries(const TermPtr& t);

// Paths of maximal subterms alpha-equal (markers stripped) to needle; the
// search does not descend into a match.
std::vector<Path> find_occurrences(const TermPtr& haystack, const TermPtr& needle);

// Eta-expands so every subterm of function type is a lambda and every head
// is applied to the full argument list its type allows. Pair types are not
// expanded. Used by the higher-order unifier.
TermPtr eta_expand(const TermPtr& t, const std::vector<TypePtr>& context = {});

// Spine view of an application chain: head applied to args left to right.
// head_marks reports Primary wrappers sitting directly on the head atom;
// app_marks[i] those on the application node that consumes args[i], so the
// view loses no markers and spine_term inverts it exactly.
struct Spine {
  TermPtr head;
  std::vector<TermPtr> args;
  int head_marks = 0;
  std::vector<int> app_marks;
};
Spine spine_view(const TermPtr& t);
TermPtr spine_term(const Spine& s);

} // namespace elx
