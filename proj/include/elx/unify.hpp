#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "elx/term.hpp"

namespace elx {

struct Equation {
  TermPtr lhs, rhs;
};

// Unknowns are free variables listed by name; every other free variable is
// treated as a constant-like rigid symbol.
struct UnifyProblem {
  std::vector<Equation> equations;
  std::set<std::string> unknowns;
};

struct SearchBudget {
  int max_depth = 10;      // imitation/projection steps along one branch
  int max_solutions = 64;  // total emitted substitutions
};

struct Substitution {
  std::map<std::string, TermPtr> bindings; // unknown name -> closed normal binding
  std::vector<Equation> flex_flex;         // unresolved flex-flex constraints, if any
  TermPtr apply(const TermPtr& t) const;   // substitute all bindings and normalize
};

bool same_solution(const Substitution& a, const Substitution& b);

struct UnifyOutcome {
  std::vector<Substitution> solutions;
  // True when the search space was fully explored; false when the depth or
  // solution budget truncated it. No solutions + complete = not unifiable;
  // no solutions + !complete = budget exhausted, nothing proven.
  bool complete = true;
  // Some branch was cut because an unknown occurred free in its own
  // right-hand side with no projection able to remove it.
  bool occurs_violation = false;
};

// Huet-style preunification: SIMPL decomposition plus imitation/projection
// branching, bounded by the budget. Flex-flex pairs are attached to the
// emitted substitutions as constraints rather than enumerated. Solutions are
// emitted in deterministic DFS order (imitation before projections).
UnifyOutcome huet_unify(const UnifyProblem& problem, const SearchBudget& budget);

// Decidable second-order matching: every rhs must be free of unknowns and
// every unknown at most second order (NotSecondOrder otherwise). Complete:
// the depth budget is ignored because matching terminates on its own; the
// solution cap still applies as a safety limit.
UnifyOutcome second_order_match(const UnifyProblem& problem, const SearchBudget& budget);

// All matchers for unknown(args…) = rhs with ground args, built directly by
// replacing subsets of argument occurrences in rhs with the matching bound
// variable. Replacing an occurrence consumes the occurrences inside it, so
// the result has at most 2^c elements for c total occurrences; runs in time
// linear in the size of the output. Primary markers on replaced occurrences
// are consumed; markers on kept material survive into the binding.
std::vector<Substitution> ground_abstractions(const std::string& unknown,
                                              const std::vector<TermPtr>& args,
                                              const TermPtr& rhs);

// True iff the variable occurs free in the term.
bool occurs_check(const std::string& var, const TermPtr& t);

} // namespace elx
