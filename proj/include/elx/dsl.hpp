#pragma once

#include <string>
#include <vector>

#include "elx/engine.hpp"
#include "elx/sexpr.hpp"

namespace elx {

struct ProblemFlags {
  bool linking = true;
  int budget_depth = 16;
  int max_solutions = 64;
};

// One problem file: declarations, a derivation plan, run flags and, when the
// file states them, the readings the run must produce (set equality up to
// alpha).
struct ProblemFile {
  std::string name;
  Env env;
  DerivationPlan plan;
  ProblemFlags flags;
  bool has_expectations = false;
  std::vector<TermPtr> expected;
};

// Parses one (problem NAME FORM*) file. Syntax carries line and column;
// TypeMismatch/UnknownConstant carry the offending subterm; UnresolvedSelector
// reports occurrence selectors that match nothing or more than one node.
ProblemFile parse_problem(const std::string& text);

// Resolves an (occ ITEM*) occurrence selector against a term. Each item names
// the unique application spine headed by that constant; (name k) then steps to
// the k-th argument (1-based), with 0 the head atom itself. Items chain, each
// searched within the node the previous one selected.
Path resolve_selector(const SNode& sel, const TermPtr& root);

} // namespace elx
