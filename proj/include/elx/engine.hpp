#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "elx/ellipsis.hpp"
#include "elx/scope.hpp"
#include "elx/unify.hpp"

namespace elx {

// A quantifier assumption together with the frame positions where it may
// take scope. Sites are paths to truth-typed subterms; discharging at a site
// wraps that subterm in det(lam x. <restriction, subterm>).
struct ScopedAssumption {
  Assumption assumption;
  std::vector<Path> sites;
};

// An ellipsis problem plus the store of undischarged quantifiers. The engine
// interleaves clause resolution with discharge steps, so scope ambiguity and
// ellipsis ambiguity come out of one search.
struct DerivationPlan {
  EllipsisProblem problem;
  std::vector<ScopedAssumption> assumptions;
};

enum class FailureStage {
  Dangling,         // source subterm captured by an earlier discharge
  Occurs,           // unknown occurs in its own source, no projection escape
  Budget,           // unification search truncated
  NoSolution,       // unification found nothing
  FilteredPrimary,  // every solution abstracted a marked occurrence
  FilteredLinking,  // every solution severed an anaphor from its antecedent
  Constraints,      // solution left flex-flex constraints unresolved
  Stuck,            // branch had no applicable step left
};

const char* failure_stage_name(FailureStage stage);

// One dead branch of the search, deduplicated over the whole run.
struct BranchFailure {
  std::string where; // clause unknown or assumption variable, may be empty
  FailureStage stage;
  std::string detail;
};

// Solution counts per filter stage, summed over the distinct equations the
// run solved (each distinct equation is counted once even when reached along
// several derivation orders).
struct SolveCounts {
  int raw = 0;
  int after_primary = 0;
  int after_linking = 0;
};

struct DerivationResult {
  std::vector<Reading> readings; // alpha-distinct, deterministic order
  std::vector<BranchFailure> failures;
  SolveCounts counts;
  bool budget_exhausted = false;
};

// Explores every order of clause resolutions and discharge steps, merging
// branches that reach the same state. Throws BadProblem on malformed plans
// (invalid paths, unknown assumption references, non-quantifier assumptions,
// untyped frames); dead search branches are reported in the result instead.
DerivationResult enumerate_derivations(const DerivationPlan& plan, const SearchBudget& budget,
                                       bool linking_enabled);

} // namespace elx
