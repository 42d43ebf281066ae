#include "elx/unify.hpp"

#include <deque>
#include <functional>

namespace elx {

TermPtr Substitution::apply(const TermPtr& t) const {
  TermPtr out = t;
  for (const auto& [name, value] : bindings)
    out = subst_free(out, name, value);
  return normalize(out);
}

bool same_solution(const Substitution& a, const Substitution& b) {
  if (a.bindings.size() != b.bindings.size()) return false;
  for (const auto& [name, value] : a.bindings) {
    auto it = b.bindings.find(name);
    if (it == b.bindings.end() || !equal_with_markers(value, it->second)) return false;
  }
  if (a.flex_flex.size() != b.flex_flex.size()) return false;
  for (size_t i = 0; i < a.flex_flex.size(); ++i) {
    if (!alpha_equal(a.flex_flex[i].lhs, b.flex_flex[i].lhs) ||
        !alpha_equal(a.flex_flex[i].rhs, b.flex_flex[i].rhs))
      return false;
  }
  return true;
}

bool occurs_check(const std::string& var, const TermPtr& t) {
  return occurs_free(var, t);
}

namespace {

// One equation between open terms; ctx lists the types of the jointly
// stripped binders, innermost first.
struct WorkEq {
  std::vector<TypePtr> ctx;
  TermPtr lhs, rhs;
};

// Wrap a term in one lambda per context entry, innermost context type first.
TermPtr close_over(TermPtr t, const std::vector<TypePtr>& ctx) {
  for (const auto& ty : ctx) t = Term::lambda(ty, "x", t);
  return t;
}

struct SideView {
  int root_marks = 0; // primary wrappers on the node itself
  bool is_pair = false;
  TermPtr pair_first, pair_second;
  Spine spine; // valid when !is_pair
};

SideView view_side(const TermPtr& t) {
  SideView v;
  TermPtr cur = t;
  while (cur->kind() == Term::Kind::Primary) {
    ++v.root_marks;
    cur = cur->sub1();
  }
  if (cur->kind() == Term::Kind::MakePair) {
    v.is_pair = true;
    v.pair_first = cur->sub1();
    v.pair_second = cur->sub2();
  } else {
    v.spine = spine_view(cur);
  }
  return v;
}

bool atom_equal(const TermPtr& a, const TermPtr& b) {
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free:
      return a->name() == b->name() && type_equal(a->type(), b->type());
    case Term::Kind::Bound:
      return a->index() == b->index();
    default:
      return false;
  }
}

TermPtr wrap_marks(TermPtr t, int marks) {
  for (int i = 0; i < marks; ++i) t = Term::primary(t);
  return t;
}

// Whether some argument position of the unknown's type can yield the result
// type by projection.
bool has_projection(const TypePtr& unknown_type) {
  TypePtr result;
  std::vector<TypePtr> domains = domain_chain(unknown_type, &result);
  for (const auto& d : domains) {
    TypePtr proj_result;
    domain_chain(d, &proj_result);
    if (type_equal(proj_result, result)) return true;
  }
  return false;
}

class Searcher {
public:
  Searcher(const UnifyProblem& problem, const SearchBudget& budget, bool bound_depth)
      : budget_(budget), bound_depth_(bound_depth), unknowns_(problem.unknowns) {
    std::vector<WorkEq> eqs;
    for (const auto& eq : problem.equations) {
      TypePtr lt = infer_type(eq.lhs, {});
      TypePtr rt = infer_type(eq.rhs, {});
      if (!type_equal(lt, rt))
        fail(ErrorKind::TypeMismatch, "cannot unify " + show_type(lt) + " with " + show_type(rt));
      eqs.push_back({{}, eta_expand(normalize(eq.lhs), {}), eta_expand(normalize(eq.rhs), {})});
    }
    search(std::move(eqs), {}, unknowns_, 0);
  }

  UnifyOutcome take() { return std::move(out_); }

private:
  const SearchBudget budget_;
  const bool bound_depth_;
  const std::set<std::string> unknowns_;
  UnifyOutcome out_;
  int fresh_ = 0;

  bool is_flex(const TermPtr& head, const std::set<std::string>& flex) const {
    return head->kind() == Term::Kind::Free && flex.count(head->name()) > 0;
  }

  TermPtr fresh_meta(const TypePtr& ty, std::set<std::string>& flex) {
    std::string name = "?" + std::to_string(++fresh_);
    flex.insert(name);
    return Term::free(name, ty);
  }

  // Decompose until only flex-headed equations remain. Returns false on a
  // rigid-rigid clash.
  bool simpl(std::vector<WorkEq>& eqs, const std::set<std::string>& flex) {
    std::deque<WorkEq> queue(eqs.begin(), eqs.end());
    std::vector<WorkEq> kept;
    while (!queue.empty()) {
      WorkEq eq = std::move(queue.front());
      queue.pop_front();
      if (alpha_equal(eq.lhs, eq.rhs)) continue;
      TermPtr l = strip(eq.lhs), r = strip(eq.rhs);
      if (l->kind() == Term::Kind::Lambda || r->kind() == Term::Kind::Lambda) {
        // In eta-long form both sides are lambdas; expand on the fly if a
        // marker blocked the expansion of one side.
        auto body_of = [](const TermPtr& s) {
          if (s->kind() == Term::Kind::Lambda) return s->sub1();
          return normalize(Term::apply(shift(s, 1, 0), Term::bound(0)));
        };
        TypePtr dom = l->kind() == Term::Kind::Lambda ? l->type() : r->type();
        std::vector<TypePtr> ctx;
        ctx.push_back(dom);
        ctx.insert(ctx.end(), eq.ctx.begin(), eq.ctx.end());
        queue.push_back({std::move(ctx), body_of(l), body_of(r)});
        continue;
      }
      SideView lv = view_side(eq.lhs), rv = view_side(eq.rhs);
      if (lv.is_pair && rv.is_pair) {
        queue.push_back({eq.ctx, lv.pair_first, rv.pair_first});
        queue.push_back({eq.ctx, lv.pair_second, rv.pair_second});
        continue;
      }
      bool lf = !lv.is_pair && is_flex(lv.spine.head, flex);
      bool rf = !rv.is_pair && is_flex(rv.spine.head, flex);
      if (lv.is_pair || rv.is_pair) {
        if (lf || rf) {
          kept.push_back(std::move(eq));
          continue;
        }
        return false; // rigid application against a literal pair
      }
      if (!lf && !rf) {
        if (!atom_equal(lv.spine.head, rv.spine.head)) return false;
        if (lv.spine.args.size() != rv.spine.args.size()) return false;
        for (size_t i = 0; i < lv.spine.args.size(); ++i)
          queue.push_back({eq.ctx, lv.spine.args[i], rv.spine.args[i]});
        continue;
      }
      kept.push_back(std::move(eq));
    }
    eqs = std::move(kept);
    return true;
  }

  void emit(const std::map<std::string, TermPtr>& solved, const std::vector<WorkEq>& leftover) {
    Substitution sub;
    for (const auto& [name, value] : solved)
      if (unknowns_.count(name)) sub.bindings[name] = normalize(value);
    for (const auto& eq : leftover)
      sub.flex_flex.push_back({normalize(close_over(eq.lhs, eq.ctx)),
                               normalize(close_over(eq.rhs, eq.ctx))});
    for (const auto& existing : out_.solutions)
      if (same_solution(existing, sub)) return;
    out_.solutions.push_back(std::move(sub));
    if ((int)out_.solutions.size() >= budget_.max_solutions) out_.complete = false;
  }

  // Candidate bindings for the flex head against the rigid side: imitation
  // first (absent when the rigid head is locally bound), then projections in
  // argument order.
  std::vector<TermPtr> candidates(const TermPtr& head, const SideView& rigid,
                                  const std::vector<TypePtr>& ctx, bool allow_imitation,
                                  std::set<std::string>& flex) {
    TypePtr result;
    std::vector<TypePtr> domains = domain_chain(head->type(), &result);
    int n = (int)domains.size();
    auto meta_app = [&](const TypePtr& value_ty) {
      TermPtr h = fresh_meta(Type::func_chain(domains, value_ty), flex);
      std::vector<TermPtr> vars;
      for (int i = 0; i < n; ++i) vars.push_back(Term::bound(n - 1 - i));
      return Term::apply(h, vars);
    };
    auto lambda_wrap = [&](TermPtr body) {
      for (int i = n - 1; i >= 0; --i) body = Term::lambda(domains[i], "x", body);
      return body;
    };

    std::vector<TermPtr> out;
    if (allow_imitation) {
      if (rigid.is_pair) {
        TermPtr body = Term::make_pair(meta_app(infer_type(rigid.pair_first, ctx)),
                                       meta_app(infer_type(rigid.pair_second, ctx)));
        out.push_back(lambda_wrap(wrap_marks(body, rigid.root_marks)));
      } else if (rigid.spine.head->kind() != Term::Kind::Bound) {
        TermPtr body = wrap_marks(rigid.spine.head, rigid.spine.head_marks);
        for (size_t i = 0; i < rigid.spine.args.size(); ++i) {
          body = Term::apply(body, meta_app(infer_type(rigid.spine.args[i], ctx)));
          body = wrap_marks(body, rigid.spine.app_marks[i]);
        }
        out.push_back(lambda_wrap(wrap_marks(body, rigid.root_marks)));
      }
    }
    for (int i = 0; i < n; ++i) {
      TypePtr proj_result;
      std::vector<TypePtr> proj_domains = domain_chain(domains[i], &proj_result);
      if (!type_equal(proj_result, result)) continue;
      std::vector<TermPtr> args;
      for (const auto& d : proj_domains) args.push_back(meta_app(d));
      out.push_back(lambda_wrap(Term::apply(Term::bound(n - 1 - i), args)));
    }
    return out;
  }

  void search(std::vector<WorkEq> eqs, std::map<std::string, TermPtr> solved,
              std::set<std::string> flex, int depth) {
    if ((int)out_.solutions.size() >= budget_.max_solutions) return;
    if (!simpl(eqs, flex)) return;

    // Pick the first equation with a rigid side; orient it flex-left.
    int pick = -1;
    bool flip = false;
    for (int i = 0; i < (int)eqs.size(); ++i) {
      SideView lv = view_side(eqs[i].lhs), rv = view_side(eqs[i].rhs);
      bool lf = !lv.is_pair && is_flex(lv.spine.head, flex);
      bool rf = !rv.is_pair && is_flex(rv.spine.head, flex);
      if (lf && rf) continue;
      pick = i;
      flip = !lf;
      break;
    }
    if (pick < 0) {
      emit(solved, eqs);
      return;
    }
    WorkEq eq = eqs[pick];
    if (flip) std::swap(eq.lhs, eq.rhs);
    const TermPtr& head = view_side(eq.lhs).spine.head;

    // The unknown appearing rigidly inside its own image defeats imitation
    // permanently: only a projection could discard the occurrence.
    bool self_referential = occurs_free(head->name(), eq.rhs);
    if (self_referential && !has_projection(head->type())) {
      out_.occurs_violation = true;
      return;
    }

    if (bound_depth_ && depth >= budget_.max_depth) {
      out_.complete = false;
      return;
    }

    std::vector<TermPtr> cands =
        candidates(head, view_side(eq.rhs), eq.ctx, !self_referential, flex);
    for (const auto& binding : cands) {
      std::map<std::string, TermPtr> next_solved = solved;
      for (auto& [name, value] : next_solved)
        value = normalize(subst_free(value, head->name(), binding));
      next_solved[head->name()] = binding;
      std::vector<WorkEq> next_eqs;
      next_eqs.reserve(eqs.size());
      for (const auto& e : eqs)
        next_eqs.push_back(
            {e.ctx,
             eta_expand(normalize(subst_free(e.lhs, head->name(), binding)), e.ctx),
             eta_expand(normalize(subst_free(e.rhs, head->name(), binding)), e.ctx)});
      search(std::move(next_eqs), std::move(next_solved), flex, depth + 1);
      if ((int)out_.solutions.size() >= budget_.max_solutions) return;
    }
  }
};

} // namespace

UnifyOutcome huet_unify(const UnifyProblem& problem, const SearchBudget& budget) {
  Searcher s(problem, budget, /*bound_depth=*/true);
  return s.take();
}

UnifyOutcome second_order_match(const UnifyProblem& problem, const SearchBudget& budget) {
  for (const auto& eq : problem.equations)
    for (const auto& name : problem.unknowns)
      if (occurs_free(name, eq.rhs))
        fail(ErrorKind::NotSecondOrder, "right-hand side contains unknown " + name);
  for (const auto& eq : problem.equations) {
    std::function<void(const TermPtr&)> walk = [&](const TermPtr& t) {
      switch (t->kind()) {
        case Term::Kind::Free:
          if (problem.unknowns.count(t->name()) && type_order(t->type()) > 2)
            fail(ErrorKind::NotSecondOrder,
                 "unknown " + t->name() + " has order " + std::to_string(type_order(t->type())));
          break;
        case Term::Kind::Lambda:
        case Term::Kind::Primary:
          walk(t->sub1());
          break;
        case Term::Kind::Apply:
        case Term::Kind::MakePair:
          walk(t->sub1());
          walk(t->sub2());
          break;
        default:
          break;
      }
    };
    walk(eq.lhs);
    walk(eq.rhs);
  }
  Searcher s(problem, budget, /*bound_depth=*/false);
  return s.take();
}

namespace {

// All rewrites of the node after crossing `depth` binders: replace it with
// the bound variable for an argument it equals, or keep its head and rewrite
// the children. Replacement consumes any primary markers on the occurrence;
// markers on kept material survive.
std::vector<TermPtr> abstraction_alts(const TermPtr& node, const std::vector<TermPtr>& args,
                                      int depth) {
  std::vector<TermPtr> alts;
  int n = (int)args.size();
  for (int i = 0; i < n; ++i) {
    if (alpha_equal(node, args[i]))
      alts.push_back(Term::bound(depth + n - 1 - i));
  }
  TermPtr bare = node;
  int marks = 0;
  while (bare->kind() == Term::Kind::Primary) {
    ++marks;
    bare = bare->sub1();
  }
  switch (bare->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free:
    case Term::Kind::Bound:
      alts.push_back(node);
      break;
    case Term::Kind::Lambda:
      for (const auto& b : abstraction_alts(bare->sub1(), args, depth + 1))
        alts.push_back(wrap_marks(Term::lambda(bare->type(), bare->name(), b), marks));
      break;
    case Term::Kind::Primary:
      break; // unreachable: stripped above
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      for (const auto& l : abstraction_alts(bare->sub1(), args, depth)) {
        for (const auto& r : abstraction_alts(bare->sub2(), args, depth)) {
          TermPtr rebuilt = bare->kind() == Term::Kind::Apply ? Term::apply(l, r)
                                                              : Term::make_pair(l, r);
          alts.push_back(wrap_marks(rebuilt, marks));
        }
      }
      break;
  }
  return alts;
}

} // namespace

std::vector<Substitution> ground_abstractions(const std::string& unknown,
                                              const std::vector<TermPtr>& args,
                                              const TermPtr& rhs) {
  std::vector<TermPtr> norm_args;
  std::vector<TypePtr> arg_types;
  for (const auto& a : args) {
    norm_args.push_back(normalize(a));
    arg_types.push_back(infer_type(norm_args.back(), {}));
  }
  std::vector<Substitution> out;
  for (const auto& body : abstraction_alts(normalize(rhs), norm_args, 0)) {
    TermPtr binding = body;
    for (int i = (int)args.size() - 1; i >= 0; --i)
      binding = Term::lambda(arg_types[i], "x", binding);
    Substitution sub;
    sub.bindings[unknown] = normalize(binding);
    bool seen = false;
    for (const auto& existing : out)
      if (same_solution(existing, sub)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(std::move(sub));
  }
  return out;
}

} // namespace elx
