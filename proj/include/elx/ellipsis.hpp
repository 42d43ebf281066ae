#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "elx/term.hpp"
#include "elx/unify.hpp"

namespace elx {

// One parallel-element pair of an elliptical clause. Either source is given
// literally, or np_var names a quantifier assumption: the source element is
// then the bare variable while the quantifier is pending, and the
// quantifier's generalized-quantifier contribution once it has discharged.
struct ParallelPair {
  TermPtr source; // null when np_var is set
  TermPtr target;
  std::string np_var;
};

// Anaphor -> antecedent occurrence pair; paths are relative to the frame and
// must point below the clause's source subterm.
struct AntecedentLink {
  Path anaphor;
  Path antecedent;
};

// Where the hole application unknown(targets...) sits: in the frame, or
// inside the restriction of a pending assumption (antecedent-contained
// ellipsis).
struct HoleRef {
  int assumption = -1; // index into the plan's assumptions, -1 = frame
  Path path;
};

struct EllipsisClause {
  std::string unknown;
  Path source; // frame path of the clause the ellipsis copies from
  HoleRef hole;
  std::vector<ParallelPair> parallels;
  std::vector<AntecedentLink> links;
  // Primary-occurrence positions for this clause's equation, as frame paths.
  // They are per clause, not per frame: two clauses may share one source and
  // mark different elements in it.
  std::vector<Path> primaries;
};

struct EllipsisProblem {
  TermPtr frame;
  std::vector<EllipsisClause> clauses;
};

struct Reading {
  TermPtr term;                              // closed, normalized, marker free
  std::map<std::string, TermPtr> provenance; // unknown -> chosen binding
};

// unknown(s1,...,sn) = matrix. Entity-typed elements other than the
// pleonastic delta must occur in the matrix (ElementNotFound otherwise);
// higher-typed contributions are exempt since they need not be subterms.
Equation build_equation(const TermPtr& matrix, const std::vector<TermPtr>& sources,
                        const std::string& unknown);

bool contains_primary(const TermPtr& t);

// Keeps only the substitutions whose bindings carry no Primary marker.
std::vector<Substitution> filter_primary(const std::vector<Substitution>& solutions);

// True when the binding abstracts the occurrence at path: following the path
// through the binding's body runs into a variable bound by one of the outer
// lambdas. The path is relative to the equation rhs.
bool abstracts_occurrence(const TermPtr& binding, const Path& path);

// Drops solutions that abstract an anaphor occurrence while leaving its
// linked antecedent occurrence in place. Paths are relative to the equation
// rhs; when disabled the input passes through unchanged.
std::vector<Substitution> filter_antecedent_linking(
    const std::vector<Substitution>& solutions, const std::string& unknown,
    const std::vector<std::pair<Path, Path>>& links, bool enabled);

// Applies a binding to the target elements and marks the filled positions
// that were primary in the source rhs, so the result can serve as the source
// of a following ellipsis.
TermPtr mark_derived_primaries(const TermPtr& binding, const TermPtr& source_rhs,
                               const std::vector<TermPtr>& targets);

// Makes parallel element types match by raising an entity e to lam R. R(e)
// when the other side is a generalized quantifier; equal types pass through.
std::pair<TermPtr, TermPtr> type_align(const TermPtr& source_elem, const TermPtr& target_elem);

// Resolves every clause of the problem in all solvable orders and returns the
// alpha-deduplicated readings. Defined with the derivation engine.
std::vector<Reading> solve_system(const EllipsisProblem& problem, const SearchBudget& budget,
                                  bool linking_enabled);

} // namespace elx
