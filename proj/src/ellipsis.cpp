#include "elx/ellipsis.hpp"

#include <algorithm>
#include <set>

namespace elx {

namespace {

const TypePtr& ent() { return Type::entity(); }

TypePtr property_type() { return Type::func(ent(), Type::truth()); }
TypePtr gq_type() { return Type::func(property_type(), Type::truth()); }

bool is_delta(const TermPtr& t) {
  const TermPtr& s = strip(t);
  return s->kind() == Term::Kind::Const && s->name() == "delta";
}

// lam R. R(x)
TermPtr raise_entity(const TermPtr& x) {
  std::set<std::string> taken = free_var_names(x);
  std::string r = "R";
  while (taken.count(r)) r += "'";
  TermPtr body = Term::apply(Term::free(r, property_type()), x);
  return Term::lambda(property_type(), r, close_free(body, r));
}

// The binding's body under exactly `arity` binders: leading lambdas are
// stripped, and an eta-short remainder is applied to the missing variables.
TermPtr binding_body(const TermPtr& binding, int arity) {
  TermPtr body = strip(binding);
  int have = 0;
  while (have < arity && body->kind() == Term::Kind::Lambda) {
    body = body->sub1();
    ++have;
  }
  if (have == arity) return body;
  int missing = arity - have;
  body = shift(body, missing);
  for (int i = missing - 1; i >= 0; --i) body = Term::apply(body, Term::bound(i));
  return body;
}

// Substitutes targets for the binding's outer variables while copying over
// the Primary markers that sat on the corresponding source positions. rhs is
// walked in parallel with the body; a null rhs contributes no markers.
TermPtr fill_marked(const TermPtr& body, const TermPtr& rhs, const std::vector<TermPtr>& targets,
                    int depth) {
  int marks = 0;
  TermPtr r = rhs;
  while (r && r->kind() == Term::Kind::Primary) {
    ++marks;
    r = r->sub1();
  }
  const TermPtr& b = strip(body);
  if (b->kind() == Term::Kind::Bound && b->index() >= depth) {
    int pos = static_cast<int>(targets.size()) - 1 - (b->index() - depth);
    if (pos < 0 || pos >= static_cast<int>(targets.size())) return b;
    TermPtr out = targets[pos];
    for (int i = 0; i < marks; ++i) out = Term::primary(out);
    return out;
  }
  const TermPtr rr = (r && r->kind() == b->kind()) ? r : nullptr;
  auto child = [&](const TermPtr& bc, const TermPtr& rc, int d) {
    return fill_marked(bc, rr ? rc : nullptr, targets, d);
  };
  switch (b->kind()) {
    case Term::Kind::Lambda: {
      TermPtr inner = child(b->sub1(), rr ? rr->sub1() : nullptr, depth + 1);
      return inner == b->sub1() ? b : Term::lambda(b->type(), b->name(), inner);
    }
    case Term::Kind::Apply: {
      TermPtr f = child(b->sub1(), rr ? rr->sub1() : nullptr, depth);
      TermPtr a = child(b->sub2(), rr ? rr->sub2() : nullptr, depth);
      return (f == b->sub1() && a == b->sub2()) ? b : Term::apply(f, a);
    }
    case Term::Kind::MakePair: {
      TermPtr f = child(b->sub1(), rr ? rr->sub1() : nullptr, depth);
      TermPtr s = child(b->sub2(), rr ? rr->sub2() : nullptr, depth);
      return (f == b->sub1() && s == b->sub2()) ? b : Term::make_pair(f, s);
    }
    default: return b;
  }
}

} // namespace

Equation build_equation(const TermPtr& matrix, const std::vector<TermPtr>& sources,
                        const std::string& unknown) {
  std::vector<TypePtr> domains;
  for (const TermPtr& s : sources) {
    TypePtr ty = infer_type(s);
    if (type_order(ty) < 2 && !is_delta(s) && find_occurrences(matrix, s).empty())
      fail(ErrorKind::ElementNotFound, "parallel element has no occurrence in the source");
    domains.push_back(std::move(ty));
  }
  TypePtr head_ty = Type::func_chain(domains, infer_type(matrix));
  TermPtr lhs = Term::apply(Term::free(unknown, head_ty), sources);
  return Equation{lhs, matrix};
}

bool contains_primary(const TermPtr& t) {
  if (t->kind() == Term::Kind::Primary) return true;
  if (t->sub1() && contains_primary(t->sub1())) return true;
  return t->sub2() && contains_primary(t->sub2());
}

std::vector<Substitution> filter_primary(const std::vector<Substitution>& solutions) {
  std::vector<Substitution> out;
  for (const Substitution& s : solutions) {
    bool marked = false;
    for (const auto& [name, value] : s.bindings) marked = marked || contains_primary(value);
    if (!marked) out.push_back(s);
  }
  return out;
}

bool abstracts_occurrence(const TermPtr& binding, const Path& path) {
  int arity = static_cast<int>(domain_chain(infer_type(binding)).size());
  TermPtr cur = binding_body(binding, arity);
  int depth = 0;
  for (std::size_t k = 0;; ++k) {
    const TermPtr& s = strip(cur);
    if (s->kind() == Term::Kind::Bound && s->index() >= depth) return true;
    if (k == path.size()) return false;
    switch (s->kind()) {
      case Term::Kind::Lambda:
        if (path[k] != 0) return false;
        cur = s->sub1();
        ++depth;
        break;
      case Term::Kind::Apply:
      case Term::Kind::MakePair:
        if (path[k] == 0) cur = s->sub1();
        else if (path[k] == 1) cur = s->sub2();
        else return false;
        break;
      default: return false;
    }
  }
}

std::vector<Substitution> filter_antecedent_linking(
    const std::vector<Substitution>& solutions, const std::string& unknown,
    const std::vector<std::pair<Path, Path>>& links, bool enabled) {
  if (!enabled || links.empty()) return solutions;
  std::vector<Substitution> out;
  for (const Substitution& s : solutions) {
    auto it = s.bindings.find(unknown);
    if (it == s.bindings.end()) {
      out.push_back(s);
      continue;
    }
    bool severed = false;
    for (const auto& [anaphor, antecedent] : links)
      severed = severed || (abstracts_occurrence(it->second, anaphor) &&
                            !abstracts_occurrence(it->second, antecedent));
    if (!severed) out.push_back(s);
  }
  return out;
}

TermPtr mark_derived_primaries(const TermPtr& binding, const TermPtr& source_rhs,
                               const std::vector<TermPtr>& targets) {
  TermPtr body = binding_body(binding, static_cast<int>(targets.size()));
  return normalize(fill_marked(body, source_rhs, targets, 0));
}

std::pair<TermPtr, TermPtr> type_align(const TermPtr& source_elem, const TermPtr& target_elem) {
  TypePtr ts = infer_type(source_elem);
  TypePtr tt = infer_type(target_elem);
  if (type_equal(ts, tt)) return {source_elem, target_elem};
  if (type_equal(ts, gq_type()) && type_equal(tt, ent()))
    return {source_elem, raise_entity(target_elem)};
  if (type_equal(ts, ent()) && type_equal(tt, gq_type()))
    return {raise_entity(source_elem), target_elem};
  fail(ErrorKind::TypeMismatch, "parallel elements " + show_type(ts) + " and " + show_type(tt) +
                                    " cannot be aligned");
}

} // namespace elx
