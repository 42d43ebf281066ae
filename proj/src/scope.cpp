#include "elx/scope.hpp"

#include <set>

namespace elx {

namespace {

const TypePtr& ent() { return Type::entity(); }
const TypePtr& tru() { return Type::truth(); }

TypePtr property_type() { return Type::func(ent(), tru()); }
TypePtr pair_quant_type() { return Type::func(Type::func(ent(), Type::pair(tru(), tru())), tru()); }
TypePtr gq_type() { return Type::func(property_type(), tru()); }

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string name = base;
  while (taken.count(name)) name += "'";
  return name;
}

const Assumption& assumption_at(const Interpretation& i, std::size_t which) {
  if (which >= i.assumptions.size()) fail(ErrorKind::BadProblem, "no such assumption");
  return i.assumptions[which];
}

void check_order(const Interpretation& i, std::size_t which) {
  const std::string& var = i.assumptions[which].var;
  for (std::size_t k = 0; k < i.assumptions.size(); ++k) {
    if (k == which || i.assumptions[k].kind != Assumption::Kind::Quant) continue;
    if (occurs_free(var, i.assumptions[k].restriction))
      fail(ErrorKind::DischargeOrderViolation,
           "variable " + var + " is still free in the restriction of " + i.assumptions[k].var);
  }
}

} // namespace

Assumption Assumption::quant(TermPtr det, std::string var, TermPtr restriction) {
  Assumption a;
  a.kind = Kind::Quant;
  a.var = std::move(var);
  a.det = std::move(det);
  a.restriction = std::move(restriction);
  return a;
}

Assumption Assumption::bind(std::string var) {
  Assumption a;
  a.kind = Kind::Bind;
  a.var = std::move(var);
  return a;
}

TermPtr conjunction() {
  return Term::constant("and", Type::func(tru(), Type::func(tru(), tru())));
}

TermPtr quantify(const TermPtr& det, const std::string& var, const TermPtr& restriction,
                 const TermPtr& scope) {
  TermPtr body = close_free(Term::make_pair(restriction, scope), var);
  return Term::apply(det, Term::lambda(ent(), var, body));
}

bool can_discharge(const Interpretation& i, std::size_t which) {
  if (which >= i.assumptions.size()) return false;
  const std::string& var = i.assumptions[which].var;
  for (std::size_t k = 0; k < i.assumptions.size(); ++k) {
    if (k == which || i.assumptions[k].kind != Assumption::Kind::Quant) continue;
    if (occurs_free(var, i.assumptions[k].restriction)) return false;
  }
  return true;
}

Interpretation discharge_quant(const Interpretation& i, std::size_t which) {
  const Assumption& a = assumption_at(i, which);
  if (a.kind != Assumption::Kind::Quant)
    fail(ErrorKind::BadProblem, a.var + " is not a quantifier assumption");
  check_order(i, which);
  Interpretation out;
  for (std::size_t k = 0; k < i.assumptions.size(); ++k)
    if (k != which) out.assumptions.push_back(i.assumptions[k]);
  out.matrix = normalize(quantify(a.det, a.var, a.restriction, i.matrix));
  return out;
}

TermPtr discharge_bind(const Interpretation& i, std::size_t which, const TermPtr& nominal) {
  const Assumption& a = assumption_at(i, which);
  if (a.kind != Assumption::Kind::Bind)
    fail(ErrorKind::BadProblem, a.var + " is not a bind assumption");
  check_order(i, which);
  if (!type_equal(infer_type(nominal), property_type()))
    fail(ErrorKind::TypeMismatch, "modified nominal must have type " + show_type(property_type()));
  if (!type_equal(infer_type(i.matrix), tru()))
    fail(ErrorKind::TypeMismatch, "bind discharge needs a truth-valued matrix");
  TermPtr x = Term::free(a.var, ent());
  TermPtr body = Term::apply(conjunction(), {Term::apply(nominal, x), i.matrix});
  return normalize(Term::lambda(ent(), a.var, close_free(body, a.var)));
}

TermPtr np_contribution(const Assumption& a) {
  if (a.kind != Assumption::Kind::Quant)
    fail(ErrorKind::BadProblem, a.var + " is not a quantifier assumption");
  std::set<std::string> taken = free_var_names(a.restriction);
  taken.insert(a.var);
  std::string s = fresh_name("S", taken);
  TermPtr applied = Term::apply(Term::free(s, property_type()), Term::free(a.var, ent()));
  TermPtr scoped = quantify(a.det, a.var, a.restriction, applied);
  return normalize(Term::lambda(property_type(), s, close_free(scoped, s)));
}

TermPtr gq_of_pair(const TermPtr& p) {
  if (!type_equal(infer_type(p), pair_quant_type()))
    fail(ErrorKind::TypeMismatch, "expected a pair quantifier " + show_type(pair_quant_type()));
  std::set<std::string> taken = free_var_names(p);
  std::string r = fresh_name("r", taken), s = fresh_name("s", taken), x = fresh_name("x", taken);
  TermPtr xv = Term::free(x, ent());
  TermPtr comp = Term::make_pair(Term::apply(Term::free(r, property_type()), xv),
                                 Term::apply(Term::free(s, property_type()), xv));
  TermPtr body = Term::apply(p, Term::lambda(ent(), x, close_free(comp, x)));
  TermPtr out = Term::lambda(property_type(), r,
                             close_free(Term::lambda(property_type(), s, close_free(body, s)), r));
  return normalize(out);
}

TermPtr pair_of_gq(const TermPtr& q) {
  if (!type_equal(infer_type(q), Type::func(property_type(), gq_type())))
    fail(ErrorKind::TypeMismatch,
         "expected a generalized quantifier " + show_type(Type::func(property_type(), gq_type())));
  std::set<std::string> taken = free_var_names(q);
  std::string p = fresh_name("p", taken), u = fresh_name("u", taken), v = fresh_name("v", taken);
  TypePtr pair_prop = Type::func(ent(), Type::pair(tru(), tru()));
  TermPtr pv = Term::free(p, pair_prop);
  TermPtr first = Term::lambda(
      ent(), u,
      close_free(Term::apply(fst_at(Type::pair(tru(), tru())), Term::apply(pv, Term::free(u, ent()))),
                 u));
  TermPtr second = Term::lambda(
      ent(), v,
      close_free(Term::apply(snd_at(Type::pair(tru(), tru())), Term::apply(pv, Term::free(v, ent()))),
                 v));
  TermPtr body = Term::apply(Term::apply(q, first), second);
  return normalize(Term::lambda(pair_prop, p, close_free(body, p)));
}

} // namespace elx
