#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elx/term.hpp"

namespace elx {

// An assumption pending discharge: either a quantifier <det var restriction>
// waiting to take scope, or a bare bind introduction whose variable a
// modified nominal abstracts later.
struct Assumption {
  enum class Kind { Quant, Bind };
  Kind kind = Kind::Bind;
  std::string var;     // introduced variable, entity typed
  TermPtr det;         // Quant only: (e -> t*t) -> t
  TermPtr restriction; // Quant only: type t, mentions var

  static Assumption quant(TermPtr det, std::string var, TermPtr restriction);
  static Assumption bind(std::string var);
};

// A matrix meaning under its undischarged assumptions.
struct Interpretation {
  std::vector<Assumption> assumptions;
  TermPtr matrix;
};

// The binary truth connective used when a bind discharge conjoins the nominal
// with the abstracted matrix.
TermPtr conjunction();

// det(lam var. <restriction, scope>). Dangling indices in restriction and
// scope are shifted past the new binder, so this is safe on open scopes.
TermPtr quantify(const TermPtr& det, const std::string& var, const TermPtr& restriction,
                 const TermPtr& scope);

// True when assumptions[which] may be discharged now: its variable must not
// be free in any other pending restriction.
bool can_discharge(const Interpretation& i, std::size_t which);

// Discharges a quantifier assumption over the whole matrix: the result keeps
// the remaining assumptions and wraps the matrix as
// det(lam x. <restriction, matrix>). DischargeOrderViolation when another
// pending restriction still mentions the variable.
Interpretation discharge_quant(const Interpretation& i, std::size_t which);

// Discharges a bind assumption into the modified-nominal property
// lam x. and(nominal(x), matrix[var := x]).
TermPtr discharge_bind(const Interpretation& i, std::size_t which, const TermPtr& nominal);

// The generalized-quantifier contribution of a quantifier assumption,
// lam S. det(lam x. <restriction, S(x)>), of type ((e->t)->t).
TermPtr np_contribution(const Assumption& a);

// The two directions of the correspondence between generalized quantifiers
// (e->t)->(e->t)->t and pair quantifiers (e->t*t)->t. Each normalizes its
// result; composing them is the identity up to alpha.
TermPtr gq_of_pair(const TermPtr& p);
TermPtr pair_of_gq(const TermPtr& q);

} // namespace elx
