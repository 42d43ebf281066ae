#include "elx/engine.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "elx/types.hpp"

namespace elx {

const char* failure_stage_name(FailureStage stage) {
  switch (stage) {
    case FailureStage::Dangling: return "dangling";
    case FailureStage::Occurs: return "occurs";
    case FailureStage::Budget: return "budget";
    case FailureStage::NoSolution: return "no-solution";
    case FailureStage::FilteredPrimary: return "filtered-primary";
    case FailureStage::FilteredLinking: return "filtered-linking";
    case FailureStage::Constraints: return "constraints";
    case FailureStage::Stuck: return "stuck";
  }
  return "unknown";
}

namespace {

bool is_prefix(const Path& prefix, const Path& path) {
  return prefix.size() <= path.size() &&
         std::equal(prefix.begin(), prefix.end(), path.begin());
}

Path path_tail(const Path& prefix, const Path& path) {
  return Path(path.begin() + static_cast<std::ptrdiff_t>(prefix.size()), path.end());
}

Path path_join(Path a, const Path& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

std::string path_str(const Path& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(p[i]);
  }
  return out + "]";
}

// Descendants of the discharge site move under det(lam x. <restriction, .>);
// the site itself keeps addressing the wrapper.
Path remap_after_discharge(const Path& p, const Path& site) {
  if (p.size() > site.size() && is_prefix(site, p))
    return path_join(path_join(site, {1, 0, 1}), path_tail(site, p));
  return p;
}

// Variant for paths that track a subterm rather than a position: the term
// that stood at the site itself is now the scope component of the wrapper.
Path chase_after_discharge(const Path& p, const Path& site) {
  if (is_prefix(site, p)) return path_join(path_join(site, {1, 0, 1}), path_tail(site, p));
  return p;
}

void term_key(const TermPtr& t, std::string& out) {
  switch (t->kind()) {
    case Term::Kind::Const:
      out += 'c';
      out += t->name();
      out += ':';
      out += show_type(t->type());
      out += ';';
      return;
    case Term::Kind::Free:
      out += 'f';
      out += t->name();
      out += ':';
      out += show_type(t->type());
      out += ';';
      return;
    case Term::Kind::Bound:
      out += 'b';
      out += std::to_string(t->index());
      out += ';';
      return;
    case Term::Kind::Lambda:
      out += 'l';
      out += show_type(t->type());
      out += '.';
      term_key(t->sub1(), out);
      return;
    case Term::Kind::Primary:
      out += 'm';
      term_key(t->sub1(), out);
      return;
    case Term::Kind::Apply:
      out += 'a';
      term_key(t->sub1(), out);
      term_key(t->sub2(), out);
      return;
    case Term::Kind::MakePair:
      out += 'p';
      term_key(t->sub1(), out);
      term_key(t->sub2(), out);
      return;
  }
}

std::string term_key(const TermPtr& t) {
  std::string s;
  term_key(t, s);
  return s;
}

// Binder types crossed on the way to path, innermost first (the convention
// infer_type's context uses).
std::optional<std::vector<TypePtr>> binder_context(const TermPtr& t, const Path& path) {
  std::vector<TypePtr> binders;
  TermPtr cur = t;
  for (int step : path) {
    const TermPtr& s = strip(cur);
    switch (s->kind()) {
      case Term::Kind::Lambda:
        if (step != 0) return std::nullopt;
        binders.push_back(s->type());
        cur = s->sub1();
        break;
      case Term::Kind::Apply:
      case Term::Kind::MakePair:
        if (step == 0) cur = s->sub1();
        else if (step == 1) cur = s->sub2();
        else return std::nullopt;
        break;
      default: return std::nullopt;
    }
  }
  std::reverse(binders.begin(), binders.end());
  return binders;
}

// Paths where the fill kept an atom of the source unchanged. An ellipsis
// whose source contains the filled hole treats each such occurrence as
// anaphoric on the source occurrence it was copied from.
void kept_atoms(const TermPtr& source, const TermPtr& fill, Path& cur, std::vector<Path>& out) {
  const TermPtr& a = strip(source);
  const TermPtr& b = strip(fill);
  if (a->kind() != b->kind()) return;
  switch (a->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free:
      if (a->name() == b->name() && type_equal(a->type(), b->type())) out.push_back(cur);
      return;
    case Term::Kind::Bound: return;
    case Term::Kind::Lambda:
      cur.push_back(0);
      kept_atoms(a->sub1(), b->sub1(), cur, out);
      cur.pop_back();
      return;
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      cur.push_back(0);
      kept_atoms(a->sub1(), b->sub1(), cur, out);
      cur.back() = 1;
      kept_atoms(a->sub2(), b->sub2(), cur, out);
      cur.pop_back();
      return;
    case Term::Kind::Primary: return; // stripped above
  }
}

struct ClauseState {
  EllipsisClause c;
  bool resolved = false;
};

struct AssumptionState {
  Assumption a;
  std::vector<Path> sites;
  bool discharged = false;
  // Once discharged: where the quantified wrapper now sits in the frame.
  // This is the primary occurrence of the quantifier's contribution, marked
  // whole when the clause's parallel element is the quantifier itself.
  Path discharge_path;
};

struct State {
  TermPtr frame;
  std::vector<AssumptionState> assumptions;
  std::vector<ClauseState> clauses;
  std::map<std::string, TermPtr> provenance;
};

std::string state_key(const State& s) {
  std::string k = term_key(s.frame);
  for (const AssumptionState& as : s.assumptions) {
    k += '|';
    k += as.a.var;
    k += as.discharged ? '!' : '?';
    if (as.a.restriction) term_key(as.a.restriction, k);
    k += path_str(as.discharge_path);
    for (const Path& site : as.sites) k += path_str(site);
  }
  for (const ClauseState& cs : s.clauses) {
    k += '|';
    k += cs.c.unknown;
    k += cs.resolved ? '!' : '?';
    k += path_str(cs.c.source);
    k += std::to_string(cs.c.hole.assumption);
    k += path_str(cs.c.hole.path);
    for (const Path& p : cs.c.primaries) k += path_str(p);
    for (const AntecedentLink& l : cs.c.links) {
      k += path_str(l.anaphor);
      k += '>';
      k += path_str(l.antecedent);
    }
  }
  return k;
}

void check_hole(const TermPtr& container, const HoleRef& hole, const std::string& unknown,
                const char* what) {
  std::optional<TermPtr> h = subterm_at(container, hole.path);
  if (!h)
    fail(ErrorKind::BadProblem,
         std::string(what) + " hole path " + path_str(hole.path) + " does not exist");
  Spine sp = spine_view(*h);
  if (sp.head->kind() != Term::Kind::Free || sp.head->name() != unknown)
    fail(ErrorKind::BadProblem, std::string(what) + " hole for " + unknown +
                                    " must be an application headed by the unknown");
}

void validate(const DerivationPlan& plan) {
  const EllipsisProblem& prob = plan.problem;
  if (!prob.frame) fail(ErrorKind::BadProblem, "missing frame");
  if (contains_primary(prob.frame))
    fail(ErrorKind::BadProblem, "frame carries a primary marking; markings belong to clauses");
  infer_type(prob.frame);

  TypePtr det_type = Type::func(
      Type::func(Type::entity(), Type::pair(Type::truth(), Type::truth())), Type::truth());
  std::set<std::string> vars;
  for (const ScopedAssumption& sa : plan.assumptions) {
    const Assumption& a = sa.assumption;
    if (a.kind != Assumption::Kind::Quant)
      fail(ErrorKind::BadProblem,
           "bind assumptions are conjoined while building the interpretation, not scoped");
    if (a.var.empty() || !a.det || !a.restriction)
      fail(ErrorKind::BadProblem, "incomplete quantifier assumption");
    if (!vars.insert(a.var).second)
      fail(ErrorKind::BadProblem, "duplicate assumption variable " + a.var);
    if (!type_equal(infer_type(a.det), det_type))
      fail(ErrorKind::BadProblem, "determiner of " + a.var + " is not (e -> t*t) -> t");
    if (!type_equal(infer_type(a.restriction), Type::truth()))
      fail(ErrorKind::BadProblem, "restriction of " + a.var + " is not truth typed");
    if (sa.sites.empty()) fail(ErrorKind::BadProblem, "assumption " + a.var + " has no sites");
    for (const Path& site : sa.sites) {
      std::optional<TermPtr> sub = subterm_at(prob.frame, site);
      std::optional<std::vector<TypePtr>> ctx = binder_context(prob.frame, site);
      if (!sub || !ctx)
        fail(ErrorKind::BadProblem, "site " + path_str(site) + " of " + a.var + " does not exist");
      if (!type_equal(infer_type(*sub, *ctx), Type::truth()))
        fail(ErrorKind::BadProblem, "site " + path_str(site) + " of " + a.var + " is not truth typed");
    }
  }

  std::set<std::string> unknowns;
  for (const EllipsisClause& c : prob.clauses) {
    if (c.unknown.empty()) fail(ErrorKind::BadProblem, "clause without an unknown");
    if (!unknowns.insert(c.unknown).second)
      fail(ErrorKind::BadProblem, "duplicate unknown " + c.unknown);
    if (!subterm_at(prob.frame, c.source))
      fail(ErrorKind::BadProblem,
           "source path " + path_str(c.source) + " of " + c.unknown + " does not exist");
    if (c.hole.assumption < 0) {
      check_hole(prob.frame, c.hole, c.unknown, "frame");
    } else {
      if (static_cast<std::size_t>(c.hole.assumption) >= plan.assumptions.size())
        fail(ErrorKind::BadProblem, "hole of " + c.unknown + " names a missing assumption");
      check_hole(plan.assumptions[static_cast<std::size_t>(c.hole.assumption)].assumption.restriction,
                 c.hole, c.unknown, "restriction");
    }
    for (const ParallelPair& pp : c.parallels) {
      if (!pp.np_var.empty()) {
        if (!vars.count(pp.np_var))
          fail(ErrorKind::BadProblem,
               "parallel element refers to missing assumption " + pp.np_var);
        if (!pp.target)
          fail(ErrorKind::BadProblem, "parallel pair of " + c.unknown + " lacks a target");
      } else if (!pp.source || !pp.target) {
        fail(ErrorKind::BadProblem, "parallel pair of " + c.unknown + " lacks an element");
      }
    }
    for (const Path& p : c.primaries)
      if (!is_prefix(c.source, p) || !subterm_at(prob.frame, p))
        fail(ErrorKind::BadProblem,
             "primary occurrence " + path_str(p) + " is not inside the source of " + c.unknown);
    for (const AntecedentLink& l : c.links)
      if (!subterm_at(prob.frame, l.anaphor) || !subterm_at(prob.frame, l.antecedent))
        fail(ErrorKind::BadProblem, "antecedent link of " + c.unknown + " points nowhere");
  }
}

struct Search {
  SearchBudget budget;
  bool linking = true;
  DerivationResult out;
  std::set<std::string> visited;
  std::set<std::string> failure_keys;
  std::map<std::string, SolveCounts> equation_counts;

  void fail_once(const std::string& where, FailureStage stage, std::string detail) {
    std::string key = where;
    key += '|';
    key += failure_stage_name(stage);
    key += '|';
    key += detail;
    if (failure_keys.insert(key).second)
      out.failures.push_back({where, stage, std::move(detail)});
  }

  void emit(const State& s) {
    TermPtr reading = normalize(strip_deep(s.frame));
    if (!locally_closed(reading) || !free_var_names(reading).empty()) {
      fail_once("", FailureStage::Stuck, "derivation finished on an open term");
      return;
    }
    for (const Reading& r : out.readings)
      if (alpha_equal(r.term, reading)) return;
    out.readings.push_back({reading, s.provenance});
  }

  void explore(const State& s) {
    if (!visited.insert(state_key(s)).second) return;
    bool clauses_done = std::all_of(s.clauses.begin(), s.clauses.end(),
                                    [](const ClauseState& c) { return c.resolved; });
    bool store_done = std::all_of(s.assumptions.begin(), s.assumptions.end(),
                                  [](const AssumptionState& a) { return a.discharged; });
    if (clauses_done && store_done) {
      emit(s);
      return;
    }
    bool progressed = false;
    for (std::size_t j = 0; j < s.assumptions.size(); ++j)
      if (!s.assumptions[j].discharged)
        for (const Path& site : s.assumptions[j].sites) progressed |= try_discharge(s, j, site);
    for (std::size_t i = 0; i < s.clauses.size(); ++i)
      if (!s.clauses[i].resolved) progressed |= try_resolve(s, i);
    if (!progressed) fail_once("", FailureStage::Stuck, "no applicable step");
  }

  bool try_resolve(const State& s, std::size_t idx) {
    const EllipsisClause& c = s.clauses[idx].c;
    std::optional<TermPtr> src = subterm_at(s.frame, c.source);
    if (!src) return false;
    if (!locally_closed(*src)) {
      fail_once(c.unknown, FailureStage::Dangling,
                "source at " + path_str(c.source) + " was captured by a discharged quantifier");
      return false;
    }
    std::set<std::string> fv = free_var_names(*src);
    for (const ClauseState& other : s.clauses)
      if (!other.resolved && other.c.unknown != c.unknown && fv.count(other.c.unknown))
        return false; // wait until the source is ellipsis free

    TermPtr rhs = *src;
    for (const Path& p : c.primaries)
      if (is_prefix(c.source, p)) rhs = wrap_primary_at(rhs, path_tail(c.source, p));

    std::vector<TermPtr> sources, targets;
    for (const ParallelPair& pp : c.parallels) {
      TermPtr se = pp.source;
      if (!pp.np_var.empty()) {
        const AssumptionState* found = nullptr;
        for (const AssumptionState& as : s.assumptions)
          if (as.a.var == pp.np_var) found = &as;
        if (found && found->discharged) {
          se = np_contribution(found->a);
          // The contribution's primary occurrence is the whole quantified
          // subterm standing where the assumption took scope.
          if (is_prefix(c.source, found->discharge_path))
            rhs = wrap_primary_at(rhs, path_tail(c.source, found->discharge_path));
        } else {
          se = Term::free(pp.np_var, Type::entity());
        }
      }
      auto [a, b] = type_align(se, pp.target);
      sources.push_back(a);
      targets.push_back(b);
    }

    Equation eq;
    try {
      eq = build_equation(rhs, sources, c.unknown);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::ElementNotFound) {
        fail_once(c.unknown, FailureStage::NoSolution, e.what());
        return false;
      }
      throw;
    }

    bool self_recursive = fv.count(c.unknown) > 0;
    int order = type_order(spine_view(eq.lhs).head->type());
    UnifyProblem up{{eq}, {c.unknown}};
    UnifyOutcome outcome =
        (self_recursive || order > 2) ? huet_unify(up, budget) : second_order_match(up, budget);

    if (!outcome.complete) {
      out.budget_exhausted = true;
      fail_once(c.unknown, FailureStage::Budget, "unification budget exhausted");
    }
    if (outcome.occurs_violation)
      fail_once(c.unknown, FailureStage::Occurs, "unknown occurs in its own source");
    if (outcome.solutions.empty() && outcome.complete && !outcome.occurs_violation)
      fail_once(c.unknown, FailureStage::NoSolution, "no unifier");

    std::vector<Substitution> after_primary = filter_primary(outcome.solutions);
    std::vector<std::pair<Path, Path>> local_links;
    for (const AntecedentLink& l : c.links)
      if (is_prefix(c.source, l.anaphor) && is_prefix(c.source, l.antecedent))
        local_links.push_back({path_tail(c.source, l.anaphor), path_tail(c.source, l.antecedent)});
    std::vector<Substitution> kept =
        filter_antecedent_linking(after_primary, c.unknown, local_links, linking);

    std::string eq_key = term_key(eq.lhs) + "=" + term_key(eq.rhs);
    if (!equation_counts.count(eq_key))
      equation_counts[eq_key] = {static_cast<int>(outcome.solutions.size()),
                                 static_cast<int>(after_primary.size()),
                                 static_cast<int>(kept.size())};
    if (!outcome.solutions.empty() && after_primary.empty())
      fail_once(c.unknown, FailureStage::FilteredPrimary,
                "every unifier abstracted a marked occurrence");
    else if (!after_primary.empty() && kept.empty())
      fail_once(c.unknown, FailureStage::FilteredLinking,
                "every unifier severed an antecedent link");

    bool spawned = false;
    for (const Substitution& sigma : kept) {
      if (!sigma.flex_flex.empty()) {
        fail_once(c.unknown, FailureStage::Constraints, "unresolved flex-flex constraints");
        continue;
      }
      auto bound = sigma.bindings.find(c.unknown);
      if (bound == sigma.bindings.end()) continue;
      TermPtr binding = bound->second;
      TermPtr marked_fill = mark_derived_primaries(binding, rhs, targets);
      TermPtr fill = strip_deep(marked_fill);

      State ns = s;
      ns.clauses[idx].resolved = true;
      ns.provenance[c.unknown] = binding;
      if (c.hole.assumption < 0) {
        ns.frame = replace_at(ns.frame, c.hole.path, fill);
        std::vector<Path> marks = collect_primaries(marked_fill);
        Path scratch;
        std::vector<Path> kept_paths;
        kept_atoms(*src, fill, scratch, kept_paths);
        for (ClauseState& other : ns.clauses) {
          if (other.resolved) continue;
          if (other.c.source == c.hole.path)
            for (const Path& m : marks)
              other.c.primaries.push_back(path_join(c.hole.path, m));
          if (is_prefix(other.c.source, c.hole.path))
            for (const Path& p : kept_paths)
              other.c.links.push_back(
                  {path_join(c.hole.path, p), path_join(c.source, p)});
        }
      } else {
        AssumptionState& as = ns.assumptions[static_cast<std::size_t>(c.hole.assumption)];
        as.a.restriction = replace_at(as.a.restriction, c.hole.path, fill);
      }
      spawned = true;
      explore(ns);
    }
    return spawned;
  }

  bool try_discharge(const State& s, std::size_t j, const Path& site) {
    const Assumption& a = s.assumptions[j].a;
    for (std::size_t k = 0; k < s.assumptions.size(); ++k)
      if (k != j && !s.assumptions[k].discharged &&
          occurs_free(a.var, s.assumptions[k].a.restriction))
        return false; // its variable is still pending inside another restriction

    TermPtr needle = Term::free(a.var, Type::entity());
    for (const Path& p : find_occurrences(s.frame, needle))
      if (!is_prefix(site, p)) return false; // an occurrence would escape the binder

    std::optional<TermPtr> sub = subterm_at(s.frame, site);
    std::optional<std::vector<TypePtr>> ctx = binder_context(s.frame, site);
    if (!sub || !ctx) return false;
    try {
      if (!type_equal(infer_type(*sub, *ctx), Type::truth())) return false;
    } catch (const Error&) {
      return false;
    }

    // Plain quantify keeps the wrapped subterm intact, so tracked paths stay
    // aligned; readings are normalized once complete.
    TermPtr wrapped = quantify(a.det, a.var, a.restriction, *sub);
    State ns = s;
    ns.frame = replace_at(s.frame, site, wrapped);
    ns.assumptions[j].discharged = true;
    ns.assumptions[j].discharge_path = site;
    for (std::size_t k = 0; k < ns.assumptions.size(); ++k) {
      if (k == j) continue;
      AssumptionState& other = ns.assumptions[k];
      if (other.discharged)
        other.discharge_path = chase_after_discharge(other.discharge_path, site);
      else
        for (Path& sp : other.sites) sp = remap_after_discharge(sp, site);
    }
    for (ClauseState& cs : ns.clauses) {
      if (cs.resolved) continue;
      cs.c.source = remap_after_discharge(cs.c.source, site);
      if (cs.c.hole.assumption == static_cast<int>(j)) {
        cs.c.hole.path = path_join(path_join(site, {1, 0, 0}), cs.c.hole.path);
        cs.c.hole.assumption = -1;
      } else if (cs.c.hole.assumption < 0) {
        cs.c.hole.path = remap_after_discharge(cs.c.hole.path, site);
      }
      for (Path& p : cs.c.primaries) p = remap_after_discharge(p, site);
      for (AntecedentLink& l : cs.c.links) {
        l.anaphor = remap_after_discharge(l.anaphor, site);
        l.antecedent = remap_after_discharge(l.antecedent, site);
      }
    }
    explore(ns);
    return true;
  }
};

} // namespace

DerivationResult enumerate_derivations(const DerivationPlan& plan, const SearchBudget& budget,
                                       bool linking_enabled) {
  validate(plan);
  Search search;
  search.budget = budget;
  search.linking = linking_enabled;
  State init;
  init.frame = plan.problem.frame;
  for (const ScopedAssumption& sa : plan.assumptions)
    init.assumptions.push_back({sa.assumption, sa.sites, false, {}});
  for (const EllipsisClause& c : plan.problem.clauses) init.clauses.push_back({c, false});
  search.explore(init);
  for (const auto& [key, counts] : search.equation_counts) {
    (void)key;
    search.out.counts.raw += counts.raw;
    search.out.counts.after_primary += counts.after_primary;
    search.out.counts.after_linking += counts.after_linking;
  }
  return std::move(search.out);
}

std::vector<Reading> solve_system(const EllipsisProblem& problem, const SearchBudget& budget,
                                  bool linking_enabled) {
  return enumerate_derivations({problem, {}}, budget, linking_enabled).readings;
}

} // namespace elx
