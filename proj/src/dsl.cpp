#include "elx/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>

#include "elx/render.hpp"

namespace elx {

namespace {

TypePtr det_type() {
  return Type::func(Type::func(Type::entity(), Type::pair(Type::truth(), Type::truth())),
                    Type::truth());
}

bool is_prefix(const Path& p, const Path& q) {
  return p.size() <= q.size() && std::equal(p.begin(), p.end(), q.begin());
}

int int_atom(const SNode& n) {
  if (!n.is_atom() || n.atom.empty() ||
      !std::all_of(n.atom.begin(), n.atom.end(),
                   [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
    syntax_error(n, "expected a number");
  return std::stoi(n.atom);
}

const std::string& name_atom(const SNode& n, const char* what) {
  if (!n.is_atom() || n.atom.empty()) syntax_error(n, std::string("expected ") + what);
  return n.atom;
}

TypePtr parse_type(const SNode& n) {
  if (n.is_atom("e")) return Type::entity();
  if (n.is_atom("t")) return Type::truth();
  if (n.is_form("->")) {
    if (n.items.size() < 3) syntax_error(n, "(-> ...) needs at least two types");
    TypePtr t = parse_type(n.items.back());
    for (std::size_t i = n.items.size() - 1; i-- > 1;)
      t = Type::func(parse_type(n.items[i]), t);
    return t;
  }
  if (n.is_form("*")) {
    if (n.items.size() < 3) syntax_error(n, "(* ...) needs at least two types");
    TypePtr t = parse_type(n.items.back());
    for (std::size_t i = n.items.size() - 1; i-- > 1;)
      t = Type::pair(parse_type(n.items[i]), t);
    return t;
  }
  syntax_error(n, "expected a type: e, t, (-> ...) or (* ...)");
}

// ---------------------------------------------------------------------------
// Occurrence selectors.

struct HeadMatch {
  TermPtr node;
  Path path;          // relative to the search root
  TermPtr head;       // Const or Free at the bottom of the application chain
  std::size_t arity;  // number of applied arguments
};

void gather_heads(const TermPtr& t, const std::string& name, bool fun_position, Path& cur,
                   std::vector<HeadMatch>& out) {
  switch (t->kind()) {
    case Term::Kind::Primary:
      gather_heads(t->sub1(), name, fun_position, cur, out);
      return;
    case Term::Kind::Const:
    case Term::Kind::Free:
      if (!fun_position && t->name() == name) out.push_back({t, cur, t, 0});
      return;
    case Term::Kind::Bound:
      return;
    case Term::Kind::Lambda:
      cur.push_back(0);
      gather_heads(t->sub1(), name, false, cur, out);
      cur.pop_back();
      return;
    case Term::Kind::MakePair:
      cur.push_back(0);
      gather_heads(t->sub1(), name, false, cur, out);
      cur.pop_back();
      cur.push_back(1);
      gather_heads(t->sub2(), name, false, cur, out);
      cur.pop_back();
      return;
    case Term::Kind::Apply: {
      if (!fun_position) {
        TermPtr head = t;
        std::size_t arity = 0;
        while (head->kind() == Term::Kind::Apply) {
          head = strip(head->sub1());
          ++arity;
        }
        if ((head->kind() == Term::Kind::Const || head->kind() == Term::Kind::Free) &&
            head->name() == name)
          out.push_back({t, cur, head, arity});
      }
      cur.push_back(0);
      gather_heads(t->sub1(), name, true, cur, out);
      cur.pop_back();
      cur.push_back(1);
      gather_heads(t->sub2(), name, false, cur, out);
      cur.pop_back();
      return;
    }
  }
}

HeadMatch unique_head(const SNode& at, const TermPtr& root, const std::string& name) {
  std::vector<HeadMatch> found;
  Path cur;
  gather_heads(root, name, false, cur, found);
  if (found.empty())
    fail(ErrorKind::UnresolvedSelector, "no occurrence of '" + name + "' at " + at.where());
  if (found.size() > 1)
    fail(ErrorKind::UnresolvedSelector, "'" + name + "' is ambiguous (" +
                                            std::to_string(found.size()) + " occurrences) at " +
                                            at.where());
  return found.front();
}

} // namespace

Path resolve_selector(const SNode& sel, const TermPtr& root) {
  if (!sel.is_form("occ")) syntax_error(sel, "expected an (occ ...) selector");
  Path path;
  TermPtr node = root;
  for (std::size_t i = 1; i < sel.items.size(); ++i) {
    const SNode& item = sel.items[i];
    if (item.is_atom()) {
      HeadMatch s = unique_head(item, node, item.atom);
      path.insert(path.end(), s.path.begin(), s.path.end());
      node = s.node;
      continue;
    }
    if (!item.is_list() || item.items.size() != 2)
      syntax_error(item, "selector item must be a name or (name position)");
    const std::string& name = name_atom(item.items[0], "a name");
    int k = int_atom(item.items[1]);
    HeadMatch s = unique_head(item, node, name);
    if (k > static_cast<int>(s.arity))
      fail(ErrorKind::UnresolvedSelector, "'" + name + "' has " + std::to_string(s.arity) +
                                              " arguments, position " + std::to_string(k) +
                                              " requested at " + item.where());
    Path step = s.path;
    if (k == 0) {
      step.insert(step.end(), s.arity, 0);
    } else {
      step.insert(step.end(), s.arity - static_cast<std::size_t>(k), 0);
      step.push_back(1);
    }
    node = *subterm_at(node, step);
    path.insert(path.end(), step.begin(), step.end());
  }
  return path;
}

namespace {

// ---------------------------------------------------------------------------
// Terms.

struct TermCtx {
  const Env* env = nullptr;
  const std::map<std::string, TypePtr>* specials = nullptr; // assumption vars + unknowns
};

TermPtr term_of(const SNode& n, const TermCtx& ctx,
                std::vector<std::pair<std::string, TypePtr>>& scope) {
  if (n.is_atom()) {
    const std::string& name = name_atom(n, "a term");
    for (std::size_t i = 0; i < scope.size(); ++i)
      if (scope[i].first == name) return Term::bound(static_cast<int>(i));
    if (ctx.specials) {
      auto it = ctx.specials->find(name);
      if (it != ctx.specials->end()) return Term::free(name, it->second);
    }
    if (const TypePtr* ty = ctx.env->lookup(name)) return Term::constant(name, *ty);
    fail(ErrorKind::UnknownConstant, "unknown name '" + name + "' at " + n.where());
  }
  if (n.items.empty()) syntax_error(n, "empty term");
  if (n.is_form("lam")) {
    if (n.items.size() != 4) syntax_error(n, "(lam VAR TYPE BODY)");
    const std::string& var = name_atom(n.items[1], "a binder name");
    TypePtr ty = parse_type(n.items[2]);
    scope.insert(scope.begin(), {var, ty});
    TermPtr body = term_of(n.items[3], ctx, scope);
    scope.erase(scope.begin());
    return Term::lambda(ty, var, body);
  }
  if (n.is_form("pair")) {
    if (n.items.size() != 3) syntax_error(n, "(pair FIRST SECOND)");
    return Term::make_pair(term_of(n.items[1], ctx, scope), term_of(n.items[2], ctx, scope));
  }
  if (n.is_form("prim")) {
    if (n.items.size() != 2) syntax_error(n, "(prim TERM)");
    return Term::primary(term_of(n.items[1], ctx, scope));
  }
  if (n.is_form("fst") || n.is_form("snd")) {
    if (n.items.size() != 2) syntax_error(n, "(fst TERM) / (snd TERM)");
    TermPtr arg = term_of(n.items[1], ctx, scope);
    TypePtr ty = infer_type(arg, {});
    if (ty->kind() != Type::Kind::Pair)
      fail(ErrorKind::TypeMismatch,
           "projection of a non-pair (" + show_type(ty) + ") at " + n.where());
    return Term::apply(n.is_form("fst") ? fst_at(ty) : snd_at(ty), arg);
  }
  if (n.is_form("q")) {
    if (n.items.size() != 5) syntax_error(n, "(q DET VAR RESTRICTION SCOPE)");
    TermPtr det = term_of(n.items[1], ctx, scope);
    if (!type_equal(infer_type(det, {}), det_type()))
      fail(ErrorKind::TypeMismatch, "determiner of (q ...) is not " + show_type(det_type()) +
                                        " at " + n.items[1].where());
    const std::string& var = name_atom(n.items[2], "a binder name");
    scope.insert(scope.begin(), {var, Type::entity()});
    TermPtr restriction = term_of(n.items[3], ctx, scope);
    TermPtr body = term_of(n.items[4], ctx, scope);
    scope.erase(scope.begin());
    return Term::apply(det, Term::lambda(Type::entity(), var,
                                         Term::make_pair(restriction, body)));
  }
  TermPtr t = term_of(n.items[0], ctx, scope);
  for (std::size_t i = 1; i < n.items.size(); ++i)
    t = Term::apply(t, term_of(n.items[i], ctx, scope));
  return t;
}

TermPtr typed_term(const SNode& n, const TermCtx& ctx, const TypePtr& want, const char* what) {
  std::vector<std::pair<std::string, TypePtr>> scope;
  TermPtr t = term_of(n, ctx, scope);
  TypePtr ty;
  try {
    ty = infer_type(t, {});
  } catch (const Error& e) {
    fail(e.kind(), std::string(e.what()) + " in " + what + " at " + n.where());
  }
  if (want && !type_equal(ty, want))
    fail(ErrorKind::TypeMismatch, std::string(what) + " has type " + show_type(ty) + ", expected " +
                                      show_type(want) + " at " + n.where());
  return t;
}

// ---------------------------------------------------------------------------
// Problem assembly.

struct Builder {
  ProblemFile file;
  std::map<std::string, TypePtr> specials; // assumption vars then unknowns
  std::map<std::string, int> assumption_index;

  const SNode* frame_form = nullptr;
  const SNode* flags_form = nullptr;
  const SNode* expect_form = nullptr;
  std::vector<const SNode*> assume_forms;
  std::vector<const SNode*> ellipsis_forms;

  TermCtx ctx() const { return {&file.env, &specials}; }

  void declare_special(const SNode& at, const std::string& name, TypePtr ty) {
    if (file.env.has(name) || specials.count(name))
      syntax_error(at, "'" + name + "' is already declared");
    specials.emplace(name, std::move(ty));
  }

  void bucket(const SNode& form) {
    auto once = [&](const SNode*& slot) {
      if (slot) syntax_error(form, "duplicate " + form.items[0].atom + " form");
      slot = &form;
    };
    if (form.is_form("decl")) {
      if (form.items.size() != 3) syntax_error(form, "(decl NAME TYPE)");
      const std::string& name = name_atom(form.items[1], "a constant name");
      if (specials.count(name)) syntax_error(form, "'" + name + "' is already declared");
      try {
        file.env.declare(name, parse_type(form.items[2]));
      } catch (const Error& e) {
        fail(e.kind(), std::string(e.what()) + " at " + form.where());
      }
    } else if (form.is_form("assume")) {
      assume_forms.push_back(&form);
    } else if (form.is_form("ellipsis")) {
      ellipsis_forms.push_back(&form);
    } else if (form.is_form("frame")) {
      once(frame_form);
    } else if (form.is_form("flags")) {
      once(flags_form);
    } else if (form.is_form("expect")) {
      once(expect_form);
    } else {
      syntax_error(form, "unknown form");
    }
  }

  // Pass 1: assumption variables (restrictions deferred until unknowns exist).
  void assumption_headers() {
    for (const SNode* fp : assume_forms) {
      const SNode& form = *fp;
      if (form.items.size() < 2 || !form.items[1].is_list())
        syntax_error(form, "(assume (quant DET VAR RESTRICTION) (sites ...)) or (assume (bind VAR))");
      const SNode& spec = form.items[1];
      ScopedAssumption sa;
      if (spec.is_form("quant")) {
        if (spec.items.size() != 4) syntax_error(spec, "(quant DET VAR RESTRICTION)");
        sa.assumption = Assumption::quant(nullptr, name_atom(spec.items[2], "a variable"), nullptr);
        if (form.items.size() != 3 || !form.items[2].is_form("sites"))
          syntax_error(form, "a quantifier assumption needs a (sites ...) form");
      } else if (spec.is_form("bind")) {
        if (spec.items.size() != 2) syntax_error(spec, "(bind VAR)");
        sa.assumption = Assumption::bind(name_atom(spec.items[1], "a variable"));
        if (form.items.size() != 2) syntax_error(form, "(assume (bind VAR)) takes no sites");
      } else {
        syntax_error(spec, "expected (quant ...) or (bind ...)");
      }
      declare_special(spec, sa.assumption.var, Type::entity());
      assumption_index[sa.assumption.var] = static_cast<int>(file.plan.assumptions.size());
      file.plan.assumptions.push_back(std::move(sa));
    }
  }

  // Pass 2: unknown types from their parallel targets.
  void unknown_types() {
    for (const SNode* fp : ellipsis_forms) {
      const SNode& form = *fp;
      if (form.items.size() < 2) syntax_error(form, "(ellipsis UNKNOWN FORM*)");
      const std::string& unknown = name_atom(form.items[1], "an unknown name");
      std::vector<TypePtr> domains;
      for (std::size_t i = 2; i < form.items.size(); ++i) {
        const SNode& sub = form.items[i];
        if (!sub.is_form("parallel")) continue;
        if (sub.items.size() != 3) syntax_error(sub, "(parallel ELEMENT TARGET)");
        domains.push_back(infer_type(typed_term(sub.items[2], ctx(), nullptr, "parallel target"), {}));
      }
      if (domains.empty()) syntax_error(form, "an ellipsis needs at least one (parallel ...)");
      declare_special(form.items[1], unknown, Type::func_chain(domains, Type::truth()));
    }
  }

  // Pass 3: determiners and restrictions, now that unknowns can appear inside.
  void assumption_bodies() {
    for (std::size_t i = 0; i < assume_forms.size(); ++i) {
      const SNode& spec = assume_forms[i]->items[1];
      Assumption& a = file.plan.assumptions[i].assumption;
      if (a.kind != Assumption::Kind::Quant) continue;
      a.det = typed_term(spec.items[1], ctx(), det_type(), "determiner");
      a.restriction = typed_term(spec.items[3], ctx(), Type::truth(), "restriction");
    }
  }

  void frame() {
    if (!frame_form) fail(ErrorKind::Syntax, "missing (frame ...) form");
    if (frame_form->items.size() != 2) syntax_error(*frame_form, "(frame TERM)");
    file.plan.problem.frame = typed_term(frame_form->items[1], ctx(), Type::truth(), "frame");
  }

  Path frame_path(const SNode& sel) { return resolve_selector(sel, file.plan.problem.frame); }

  void clauses() {
    // Markers written inline in the frame attach to the clause whose source
    // contains them; they are stripped before anything else resolves paths.
    std::vector<Path> inline_marks = collect_primaries(file.plan.problem.frame);
    file.plan.problem.frame = strip_deep(file.plan.problem.frame);

    for (const SNode* fp : ellipsis_forms) {
      const SNode& form = *fp;
      EllipsisClause c;
      c.unknown = form.items[1].atom;
      bool have_source = false, have_hole = false;
      for (std::size_t i = 2; i < form.items.size(); ++i) {
        const SNode& sub = form.items[i];
        if (sub.is_form("source")) {
          if (sub.items.size() != 2) syntax_error(sub, "(source SELECTOR)");
          if (have_source) syntax_error(sub, "duplicate source");
          c.source = frame_path(sub.items[1]);
          have_source = true;
        } else if (sub.is_form("hole")) {
          if (have_hole) syntax_error(sub, "duplicate hole");
          if (sub.items.size() == 2) {
            c.hole = {-1, frame_path(sub.items[1])};
          } else if (sub.items.size() == 3 && sub.items[1].is_form("in")) {
            if (sub.items[1].items.size() != 2) syntax_error(sub.items[1], "(in VAR)");
            const std::string& var = name_atom(sub.items[1].items[1], "an assumption variable");
            auto it = assumption_index.find(var);
            if (it == assumption_index.end())
              syntax_error(sub.items[1], "no assumption introduces '" + var + "'");
            const Assumption& a = file.plan.assumptions[it->second].assumption;
            if (a.kind != Assumption::Kind::Quant || !a.restriction)
              syntax_error(sub.items[1], "'" + var + "' has no restriction");
            c.hole = {it->second, resolve_selector(sub.items[2], a.restriction)};
          } else {
            syntax_error(sub, "(hole SELECTOR) or (hole (in VAR) SELECTOR)");
          }
          have_hole = true;
        } else if (sub.is_form("parallel")) {
          ParallelPair pp;
          const SNode& elem = sub.items[1];
          if (elem.is_form("np")) {
            if (elem.items.size() != 2) syntax_error(elem, "(np VAR)");
            pp.np_var = name_atom(elem.items[1], "an assumption variable");
            if (!assumption_index.count(pp.np_var))
              syntax_error(elem, "no assumption introduces '" + pp.np_var + "'");
          } else {
            pp.source = typed_term(elem, ctx(), nullptr, "parallel element");
          }
          pp.target = typed_term(sub.items[2], ctx(), nullptr, "parallel target");
          c.parallels.push_back(std::move(pp));
        } else if (sub.is_form("primary")) {
          if (sub.items.size() != 2) syntax_error(sub, "(primary SELECTOR)");
          c.primaries.push_back(frame_path(sub.items[1]));
        } else if (sub.is_form("link")) {
          if (sub.items.size() != 3) syntax_error(sub, "(link ANAPHOR ANTECEDENT)");
          c.links.push_back({frame_path(sub.items[1]), frame_path(sub.items[2])});
        } else {
          syntax_error(sub, "unknown ellipsis form");
        }
      }
      if (!have_source) syntax_error(form, "an ellipsis needs a (source ...)");
      if (!have_hole) syntax_error(form, "an ellipsis needs a (hole ...)");
      file.plan.problem.clauses.push_back(std::move(c));
    }

    for (const Path& mark : inline_marks) {
      EllipsisClause* owner = nullptr;
      bool ambiguous = false;
      for (auto& c : file.plan.problem.clauses)
        if (is_prefix(c.source, mark)) {
          ambiguous = owner != nullptr;
          owner = &c;
        }
      if (!owner)
        fail(ErrorKind::UnresolvedSelector,
             "inline marker lies outside every clause source at " + frame_form->where());
      if (ambiguous)
        fail(ErrorKind::UnresolvedSelector,
             "inline marker is ambiguous between clauses sharing a source; use (primary ...) at " +
                 frame_form->where());
      owner->primaries.push_back(mark);
    }
  }

  void sites() {
    for (std::size_t i = 0; i < assume_forms.size(); ++i) {
      const SNode& form = *assume_forms[i];
      if (file.plan.assumptions[i].assumption.kind != Assumption::Kind::Quant) continue;
      const SNode& list = form.items[2];
      for (std::size_t k = 1; k < list.items.size(); ++k)
        file.plan.assumptions[i].sites.push_back(frame_path(list.items[k]));
      if (file.plan.assumptions[i].sites.empty())
        syntax_error(list, "a quantifier assumption needs at least one site");
    }
  }

  void flags() {
    if (!flags_form) return;
    for (std::size_t i = 1; i < flags_form->items.size(); ++i) {
      const SNode& f = flags_form->items[i];
      if (f.is_form("linking") && f.items.size() == 2 &&
          (f.items[1].is_atom("on") || f.items[1].is_atom("off"))) {
        file.flags.linking = f.items[1].is_atom("on");
      } else if (f.is_form("budget-depth") && f.items.size() == 2) {
        file.flags.budget_depth = int_atom(f.items[1]);
        if (file.flags.budget_depth <= 0) syntax_error(f, "budget-depth must be positive");
      } else if (f.is_form("max-solutions") && f.items.size() == 2) {
        file.flags.max_solutions = int_atom(f.items[1]);
        if (file.flags.max_solutions <= 0) syntax_error(f, "max-solutions must be positive");
      } else {
        syntax_error(f, "unknown flag");
      }
    }
  }

  void expectations() {
    if (!expect_form) return;
    file.has_expectations = true;
    TermCtx closed{&file.env, nullptr};
    for (std::size_t i = 1; i < expect_form->items.size(); ++i) {
      TermPtr t = typed_term(expect_form->items[i], closed, Type::truth(), "expected reading");
      if (contains_primary(t))
        syntax_error(expect_form->items[i], "expected readings are marker free");
      file.expected.push_back(normalize(t));
    }
  }
};

} // namespace

ProblemFile parse_problem(const std::string& text) {
  std::vector<SNode> top = read_sexprs(text);
  if (top.size() != 1 || !top[0].is_form("problem"))
    fail(ErrorKind::Syntax, "a problem file is one (problem NAME FORM*) form");
  const SNode& root = top[0];
  if (root.items.size() < 2) syntax_error(root, "(problem NAME FORM*)");

  Builder b;
  b.file.name = name_atom(root.items[1], "a problem name");
  for (std::size_t i = 2; i < root.items.size(); ++i) b.bucket(root.items[i]);
  b.assumption_headers();
  b.unknown_types();
  b.assumption_bodies();
  b.frame();
  b.clauses();
  b.sites();
  b.flags();
  b.expectations();
  return std::move(b.file);
}

} // namespace elx
