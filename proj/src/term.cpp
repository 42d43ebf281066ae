#include "elx/term.hpp"

#include <cassert>

namespace elx {

TermPtr Term::build(Kind kind, std::string name, int index, TypePtr type, TermPtr s1, TermPtr s2) {
  auto t = std::shared_ptr<Term>(new Term());
  t->kind_ = kind;
  t->name_ = std::move(name);
  t->index_ = index;
  t->type_ = std::move(type);
  t->sub1_ = std::move(s1);
  t->sub2_ = std::move(s2);
  return t;
}

TermPtr Term::constant(std::string name, TypePtr type) {
  return build(Kind::Const, std::move(name), 0, std::move(type), nullptr, nullptr);
}

TermPtr Term::free(std::string name, TypePtr type) {
  return build(Kind::Free, std::move(name), 0, std::move(type), nullptr, nullptr);
}

TermPtr Term::bound(int index) {
  assert(index >= 0);
  return build(Kind::Bound, "", index, nullptr, nullptr, nullptr);
}

TermPtr Term::lambda(TypePtr binder, std::string hint, TermPtr body) {
  return build(Kind::Lambda, std::move(hint), 0, std::move(binder), std::move(body), nullptr);
}

TermPtr Term::apply(TermPtr fun, TermPtr arg) {
  return build(Kind::Apply, "", 0, nullptr, std::move(fun), std::move(arg));
}

TermPtr Term::apply(TermPtr fun, const std::vector<TermPtr>& args) {
  TermPtr t = std::move(fun);
  for (const auto& a : args) t = apply(t, a);
  return t;
}

TermPtr Term::make_pair(TermPtr first, TermPtr second) {
  return build(Kind::MakePair, "", 0, nullptr, std::move(first), std::move(second));
}

TermPtr Term::primary(TermPtr inner) {
  return build(Kind::Primary, "", 0, nullptr, std::move(inner), nullptr);
}

TermPtr fst_at(const TypePtr& pair_type) {
  assert(pair_type->kind() == Type::Kind::Pair);
  return Term::constant("fst", Type::func(pair_type, pair_type->left()));
}

TermPtr snd_at(const TypePtr& pair_type) {
  assert(pair_type->kind() == Type::Kind::Pair);
  return Term::constant("snd", Type::func(pair_type, pair_type->right()));
}

bool is_pair_projection(const Term& t) {
  if (t.kind() != Term::Kind::Const) return false;
  if (t.name() != "fst" && t.name() != "snd") return false;
  const TypePtr& ty = t.type();
  if (ty->kind() != Type::Kind::Func || ty->left()->kind() != Type::Kind::Pair) return false;
  const TypePtr& component = t.name() == "fst" ? ty->left()->left() : ty->left()->right();
  return type_equal(ty->right(), component);
}

const TermPtr& strip(const TermPtr& t) {
  const TermPtr* cur = &t;
  while ((*cur)->kind() == Term::Kind::Primary) cur = &(*cur)->sub1();
  return *cur;
}

TermPtr strip_deep(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free:
    case Term::Kind::Bound: return t;
    case Term::Kind::Primary: return strip_deep(t->sub1());
    case Term::Kind::Lambda: {
      TermPtr body = strip_deep(t->sub1());
      return body == t->sub1() ? t : Term::lambda(t->type(), t->name(), body);
    }
    case Term::Kind::Apply: {
      TermPtr f = strip_deep(t->sub1()), a = strip_deep(t->sub2());
      return (f == t->sub1() && a == t->sub2()) ? t : Term::apply(f, a);
    }
    case Term::Kind::MakePair: {
      TermPtr a = strip_deep(t->sub1()), b = strip_deep(t->sub2());
      return (a == t->sub1() && b == t->sub2()) ? t : Term::make_pair(a, b);
    }
  }
  return t;
}

bool alpha_equal(const TermPtr& a0, const TermPtr& b0) {
  const TermPtr& a = strip(a0);
  const TermPtr& b = strip(b0);
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free: return a->name() == b->name() && type_equal(a->type(), b->type());
    case Term::Kind::Bound: return a->index() == b->index();
    case Term::Kind::Lambda:
      return type_equal(a->type(), b->type()) && alpha_equal(a->sub1(), b->sub1());
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      return alpha_equal(a->sub1(), b->sub1()) && alpha_equal(a->sub2(), b->sub2());
    case Term::Kind::Primary: break; // unreachable after strip
  }
  return false;
}

bool equal_with_markers(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free: return a->name() == b->name() && type_equal(a->type(), b->type());
    case Term::Kind::Bound: return a->index() == b->index();
    case Term::Kind::Primary: return equal_with_markers(a->sub1(), b->sub1());
    case Term::Kind::Lambda:
      return type_equal(a->type(), b->type()) && equal_with_markers(a->sub1(), b->sub1());
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      return equal_with_markers(a->sub1(), b->sub1()) && equal_with_markers(a->sub2(), b->sub2());
  }
  return false;
}

bool occurs_free(const std::string& name, const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Free: return t->name() == name;
    case Term::Kind::Const:
    case Term::Kind::Bound: return false;
    case Term::Kind::Lambda:
    case Term::Kind::Primary: return occurs_free(name, t->sub1());
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      return occurs_free(name, t->sub1()) || occurs_free(name, t->sub2());
  }
  return false;
}

namespace {

void collect_free(const TermPtr& t, std::set<std::string>& out) {
  switch (t->kind()) {
    case Term::Kind::Free: out.insert(t->name()); return;
    case Term::Kind::Const:
    case Term::Kind::Bound: return;
    case Term::Kind::Lambda:
    case Term::Kind::Primary: collect_free(t->sub1(), out); return;
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      collect_free(t->sub1(), out);
      collect_free(t->sub2(), out);
      return;
  }
}

bool closed_above(const TermPtr& t, int depth) {
  switch (t->kind()) {
    case Term::Kind::Bound: return t->index() < depth;
    case Term::Kind::Const:
    case Term::Kind::Free: return true;
    case Term::Kind::Lambda: return closed_above(t->sub1(), depth + 1);
    case Term::Kind::Primary: return closed_above(t->sub1(), depth);
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      return closed_above(t->sub1(), depth) && closed_above(t->sub2(), depth);
  }
  return true;
}

} // namespace

std::set<std::string> free_var_names(const TermPtr& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

bool locally_closed(const TermPtr& t) { return closed_above(t, 0); }

TermPtr shift(const TermPtr& t, int d, int cutoff) {
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free: return t;
    case Term::Kind::Bound:
      return t->index() >= cutoff ? Term::bound(t->index() + d) : t;
    case Term::Kind::Lambda: {
      TermPtr body = shift(t->sub1(), d, cutoff + 1);
      return body == t->sub1() ? t : Term::lambda(t->type(), t->name(), body);
    }
    case Term::Kind::Primary: {
      TermPtr inner = shift(t->sub1(), d, cutoff);
      return inner == t->sub1() ? t : Term::primary(inner);
    }
    case Term::Kind::Apply: {
      TermPtr f = shift(t->sub1(), d, cutoff), a = shift(t->sub2(), d, cutoff);
      return (f == t->sub1() && a == t->sub2()) ? t : Term::apply(f, a);
    }
    case Term::Kind::MakePair: {
      TermPtr a = shift(t->sub1(), d, cutoff), b = shift(t->sub2(), d, cutoff);
      return (a == t->sub1() && b == t->sub2()) ? t : Term::make_pair(a, b);
    }
  }
  return t;
}

TermPtr subst_free(const TermPtr& t, const std::string& name, const TermPtr& value) {
  assert(locally_closed(value));
  switch (t->kind()) {
    case Term::Kind::Free: return t->name() == name ? value : t;
    case Term::Kind::Const:
    case Term::Kind::Bound: return t;
    case Term::Kind::Lambda: {
      TermPtr body = subst_free(t->sub1(), name, value);
      return body == t->sub1() ? t : Term::lambda(t->type(), t->name(), body);
    }
    case Term::Kind::Primary: {
      TermPtr inner = subst_free(t->sub1(), name, value);
      return inner == t->sub1() ? t : Term::primary(inner);
    }
    case Term::Kind::Apply: {
      TermPtr f = subst_free(t->sub1(), name, value), a = subst_free(t->sub2(), name, value);
      return (f == t->sub1() && a == t->sub2()) ? t : Term::apply(f, a);
    }
    case Term::Kind::MakePair: {
      TermPtr a = subst_free(t->sub1(), name, value), b = subst_free(t->sub2(), name, value);
      return (a == t->sub1() && b == t->sub2()) ? t : Term::make_pair(a, b);
    }
  }
  return t;
}

TermPtr substitute(const TermPtr& t, const TermPtr& var, const TermPtr& value) {
  if (var->kind() != Term::Kind::Free)
    fail(ErrorKind::TypeMismatch, "substitute: target is not a free variable");
  if (!locally_closed(value))
    fail(ErrorKind::TypeMismatch, "substitute: replacement has dangling bound indices");
  TypePtr vt = infer_type(value);
  if (!type_equal(vt, var->type()))
    fail(ErrorKind::TypeMismatch, "substitute: " + var->name() + " : " + show_type(var->type()) +
                                      " cannot receive a term of type " + show_type(vt));
  return subst_free(t, var->name(), value);
}

namespace {

TermPtr open_rec(const TermPtr& t, const TermPtr& value, int k) {
  switch (t->kind()) {
    case Term::Kind::Bound:
      if (t->index() == k) return shift(value, k);
      return t->index() > k ? Term::bound(t->index() - 1) : t;
    case Term::Kind::Const:
    case Term::Kind::Free: return t;
    case Term::Kind::Lambda: {
      TermPtr body = open_rec(t->sub1(), value, k + 1);
      return body == t->sub1() ? t : Term::lambda(t->type(), t->name(), body);
    }
    case Term::Kind::Primary: {
      TermPtr inner = open_rec(t->sub1(), value, k);
      return inner == t->sub1() ? t : Term::primary(inner);
    }
    case Term::Kind::Apply: {
      TermPtr f = open_rec(t->sub1(), value, k), a = open_rec(t->sub2(), value, k);
      return (f == t->sub1() && a == t->sub2()) ? t : Term::apply(f, a);
    }
    case Term::Kind::MakePair: {
      TermPtr a = open_rec(t->sub1(), value, k), b = open_rec(t->sub2(), value, k);
      return (a == t->sub1() && b == t->sub2()) ? t : Term::make_pair(a, b);
    }
  }
  return t;
}

TermPtr close_rec(const TermPtr& t, const std::string& name, int k) {
  switch (t->kind()) {
    case Term::Kind::Free: return t->name() == name ? Term::bound(k) : t;
    case Term::Kind::Bound: return t->index() >= k ? Term::bound(t->index() + 1) : t;
    case Term::Kind::Const: return t;
    case Term::Kind::Lambda: {
      TermPtr body = close_rec(t->sub1(), name, k + 1);
      return body == t->sub1() ? t : Term::lambda(t->type(), t->name(), body);
    }
    case Term::Kind::Primary: {
      TermPtr inner = close_rec(t->sub1(), name, k);
      return inner == t->sub1() ? t : Term::primary(inner);
    }
    case Term::Kind::Apply: {
      TermPtr f = close_rec(t->sub1(), name, k), a = close_rec(t->sub2(), name, k);
      return (f == t->sub1() && a == t->sub2()) ? t : Term::apply(f, a);
    }
    case Term::Kind::MakePair: {
      TermPtr a = close_rec(t->sub1(), name, k), b = close_rec(t->sub2(), name, k);
      return (a == t->sub1() && b == t->sub2()) ? t : Term::make_pair(a, b);
    }
  }
  return t;
}

bool uses_bound(const TermPtr& t, int k) {
  switch (t->kind()) {
    case Term::Kind::Bound: return t->index() == k;
    case Term::Kind::Const:
    case Term::Kind::Free: return false;
    case Term::Kind::Lambda: return uses_bound(t->sub1(), k + 1);
    case Term::Kind::Primary: return uses_bound(t->sub1(), k);
    case Term::Kind::Apply:
    case Term::Kind::MakePair: return uses_bound(t->sub1(), k) || uses_bound(t->sub2(), k);
  }
  return false;
}

} // namespace

TermPtr open_bound(const TermPtr& body, const TermPtr& value) { return open_rec(body, value, 0); }

TermPtr close_free(const TermPtr& t, const std::string& name) { return close_rec(t, name, 0); }

TermPtr normalize(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free:
    case Term::Kind::Bound: return t;
    case Term::Kind::Primary: {
      TermPtr inner = normalize(t->sub1());
      return inner == t->sub1() ? t : Term::primary(inner);
    }
    case Term::Kind::Lambda: {
      TermPtr body = normalize(t->sub1());
      // eta: lam x. f x  ==>  f   when x is not free in f
      if (body->kind() == Term::Kind::Apply && body->sub2()->kind() == Term::Kind::Bound &&
          body->sub2()->index() == 0 && !uses_bound(body->sub1(), 0)) {
        return shift(body->sub1(), -1);
      }
      return body == t->sub1() ? t : Term::lambda(t->type(), t->name(), body);
    }
    case Term::Kind::Apply: {
      TermPtr f = normalize(t->sub1());
      TermPtr a = normalize(t->sub2());
      const TermPtr& fs = strip(f);
      if (fs->kind() == Term::Kind::Lambda) return normalize(open_bound(fs->sub1(), a));
      if (fs->kind() == Term::Kind::Const && is_pair_projection(*fs)) {
        const TermPtr& as = strip(a);
        if (as->kind() == Term::Kind::MakePair)
          return fs->name() == "fst" ? as->sub1() : as->sub2();
      }
      return (f == t->sub1() && a == t->sub2()) ? t : Term::apply(f, a);
    }
    case Term::Kind::MakePair: {
      TermPtr a = normalize(t->sub1());
      TermPtr b = normalize(t->sub2());
      // surjective pairing: <fst(p), snd(p)>  ==>  p
      if (a->kind() == Term::Kind::Apply && b->kind() == Term::Kind::Apply) {
        const TermPtr& fa = a->sub1();
        const TermPtr& fb = b->sub1();
        if (fa->kind() == Term::Kind::Const && fa->name() == "fst" && is_pair_projection(*fa) &&
            fb->kind() == Term::Kind::Const && fb->name() == "snd" && is_pair_projection(*fb) &&
            equal_with_markers(a->sub2(), b->sub2())) {
          return a->sub2();
        }
      }
      return (a == t->sub1() && b == t->sub2()) ? t : Term::make_pair(a, b);
    }
  }
  return t;
}

namespace {

TypePtr infer_rec(const TermPtr& t, std::vector<TypePtr>& ctx, const Env* env) {
  switch (t->kind()) {
    case Term::Kind::Const: {
      if (env) {
        if (const TypePtr* declared = env->lookup(t->name())) {
          if (!type_equal(*declared, t->type()))
            fail(ErrorKind::TypeMismatch, "constant '" + t->name() + "' used at " +
                                              show_type(t->type()) + " but declared " +
                                              show_type(*declared));
        } else if (!is_pair_projection(*t)) {
          fail(ErrorKind::UnknownConstant, "constant '" + t->name() + "' is not declared");
        }
      }
      return t->type();
    }
    case Term::Kind::Free: return t->type();
    case Term::Kind::Bound: {
      int i = t->index();
      if (i < 0 || i >= static_cast<int>(ctx.size()))
        fail(ErrorKind::TypeMismatch, "dangling bound index " + std::to_string(i));
      return ctx[ctx.size() - 1 - i];
    }
    case Term::Kind::Lambda: {
      ctx.push_back(t->type());
      TypePtr body = infer_rec(t->sub1(), ctx, env);
      ctx.pop_back();
      return Type::func(t->type(), body);
    }
    case Term::Kind::Primary: return infer_rec(t->sub1(), ctx, env);
    case Term::Kind::Apply: {
      TypePtr ft = infer_rec(t->sub1(), ctx, env);
      TypePtr at = infer_rec(t->sub2(), ctx, env);
      if (ft->kind() != Type::Kind::Func)
        fail(ErrorKind::TypeMismatch, "application of a non-function of type " + show_type(ft));
      if (!type_equal(ft->left(), at))
        fail(ErrorKind::TypeMismatch, "argument type " + show_type(at) + " does not match domain " +
                                          show_type(ft->left()));
      return ft->right();
    }
    case Term::Kind::MakePair: {
      TypePtr a = infer_rec(t->sub1(), ctx, env);
      TypePtr b = infer_rec(t->sub2(), ctx, env);
      return Type::pair(a, b);
    }
  }
  fail(ErrorKind::TypeMismatch, "malformed term");
}

} // namespace

TypePtr typecheck(const TermPtr& t, const Env& env) {
  std::vector<TypePtr> ctx;
  return infer_rec(t, ctx, &env);
}

TypePtr infer_type(const TermPtr& t, const std::vector<TypePtr>& context) {
  std::vector<TypePtr> ctx(context.rbegin(), context.rend());
  return infer_rec(t, ctx, nullptr);
}

std::optional<TermPtr> subterm_at(const TermPtr& t, const Path& path) {
  TermPtr cur = t;
  for (size_t i = 0; i < path.size(); ++i) {
    const TermPtr& s = strip(cur);
    int step = path[i];
    switch (s->kind()) {
      case Term::Kind::Lambda:
        if (step != 0) return std::nullopt;
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
  return cur;
}

namespace {

TermPtr rebuild_at(const TermPtr& t, const Path& path, size_t i, const TermPtr& value, bool wrap) {
  if (i == path.size()) {
    if (wrap) return Term::primary(t);
    return value;
  }
  if (t->kind() == Term::Kind::Primary)
    return Term::primary(rebuild_at(t->sub1(), path, i, value, wrap));
  int step = path[i];
  switch (t->kind()) {
    case Term::Kind::Lambda:
      if (step != 0) fail(ErrorKind::UnresolvedSelector, "path step into lambda must be 0");
      return Term::lambda(t->type(), t->name(), rebuild_at(t->sub1(), path, i + 1, value, wrap));
    case Term::Kind::Apply:
    case Term::Kind::MakePair: {
      TermPtr a = t->sub1(), b = t->sub2();
      if (step == 0) a = rebuild_at(a, path, i + 1, value, wrap);
      else if (step == 1) b = rebuild_at(b, path, i + 1, value, wrap);
      else fail(ErrorKind::UnresolvedSelector, "path step out of range");
      return t->kind() == Term::Kind::Apply ? Term::apply(a, b) : Term::make_pair(a, b);
    }
    default: fail(ErrorKind::UnresolvedSelector, "path descends into a leaf");
  }
}

} // namespace

TermPtr replace_at(const TermPtr& t, const Path& path, const TermPtr& value) {
  return rebuild_at(t, path, 0, value, false);
}

TermPtr wrap_primary_at(const TermPtr& t, const Path& path) {
  return rebuild_at(t, path, 0, nullptr, true);
}

namespace {

void primaries_rec(const TermPtr& t, Path& path, std::vector<Path>& out) {
  TermPtr cur = t;
  bool marked = false;
  while (cur->kind() == Term::Kind::Primary) {
    marked = true;
    cur = cur->sub1();
  }
  if (marked) out.push_back(path);
  switch (cur->kind()) {
    case Term::Kind::Lambda:
      path.push_back(0);
      primaries_rec(cur->sub1(), path, out);
      path.pop_back();
      return;
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      path.push_back(0);
      primaries_rec(cur->sub1(), path, out);
      path.back() = 1;
      primaries_rec(cur->sub2(), path, out);
      path.pop_back();
      return;
    default: return;
  }
}

void occurrences_rec(const TermPtr& t, const TermPtr& needle, Path& path, std::vector<Path>& out) {
  if (alpha_equal(t, needle)) {
    out.push_back(path);
    return;
  }
  const TermPtr& s = strip(t);
  switch (s->kind()) {
    case Term::Kind::Lambda:
      path.push_back(0);
      occurrences_rec(s->sub1(), needle, path, out);
      path.pop_back();
      return;
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      path.push_back(0);
      occurrences_rec(s->sub1(), needle, path, out);
      path.back() = 1;
      occurrences_rec(s->sub2(), needle, path, out);
      path.pop_back();
      return;
    default: return;
  }
}

} // namespace

std::vector<Path> collect_primaries(const TermPtr& t) {
  std::vector<Path> out;
  Path path;
  primaries_rec(t, path, out);
  return out;
}

std::vector<Path> find_occurrences(const TermPtr& haystack, const TermPtr& needle) {
  std::vector<Path> out;
  Path path;
  occurrences_rec(haystack, needle, path, out);
  return out;
}

TermPtr eta_expand(const TermPtr& t, const std::vector<TypePtr>& context) {
  TypePtr ty = infer_type(t, context);
  if (ty->kind() == Type::Kind::Func) {
    if (t->kind() == Term::Kind::Lambda) {
      std::vector<TypePtr> inner;
      inner.push_back(t->type());
      inner.insert(inner.end(), context.begin(), context.end());
      return Term::lambda(t->type(), t->name(), eta_expand(t->sub1(), inner));
    }
    // A marker on a lambda itself has nowhere to go in eta-long form and
    // stays outside; a marked atom or application is expanded around, so the
    // marker rides the head where the spine view preserves it.
    if (t->kind() == Term::Kind::Primary && strip(t)->kind() == Term::Kind::Lambda)
      return Term::primary(eta_expand(t->sub1(), context));
    TermPtr wrapped =
        Term::lambda(ty->left(), "x", Term::apply(shift(t, 1), Term::bound(0)));
    return eta_expand(wrapped, context);
  }
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free:
    case Term::Kind::Bound: return t;
    case Term::Kind::Primary: return Term::primary(eta_expand(t->sub1(), context));
    case Term::Kind::MakePair:
      return Term::make_pair(eta_expand(t->sub1(), context), eta_expand(t->sub2(), context));
    case Term::Kind::Apply: {
      // beta-normal input: the head is an atom, so only arguments expand
      Spine sp = spine_view(t);
      Spine out = sp;
      out.args.clear();
      for (const auto& a : sp.args) out.args.push_back(eta_expand(a, context));
      return spine_term(out);
    }
    case Term::Kind::Lambda: break; // impossible: lambda has Func type
  }
  return t;
}

Spine spine_view(const TermPtr& t) {
  Spine s;
  std::vector<TermPtr> rev_args;
  std::vector<int> rev_marks;
  TermPtr cur = t;
  while (true) {
    int marks = 0;
    while (cur->kind() == Term::Kind::Primary) {
      ++marks;
      cur = cur->sub1();
    }
    if (cur->kind() == Term::Kind::Apply) {
      rev_args.push_back(cur->sub2());
      rev_marks.push_back(marks);
      cur = cur->sub1();
    } else {
      s.head = cur;
      s.head_marks = marks;
      break;
    }
  }
  s.args.assign(rev_args.rbegin(), rev_args.rend());
  s.app_marks.assign(rev_marks.rbegin(), rev_marks.rend());
  return s;
}

TermPtr spine_term(const Spine& s) {
  TermPtr t = s.head;
  for (int i = 0; i < s.head_marks; ++i) t = Term::primary(t);
  for (size_t i = 0; i < s.args.size(); ++i) {
    t = Term::apply(t, s.args[i]);
    int marks = i < s.app_marks.size() ? s.app_marks[i] : 0;
    for (int k = 0; k < marks; ++k) t = Term::primary(t);
  }
  return t;
}

} // namespace elx
