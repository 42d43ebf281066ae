#pragma once

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "elx/term.hpp"
#include "elx/types.hpp"
#include "elx/unify.hpp"

namespace tst {

using namespace elx;

inline TypePtr E() { return Type::entity(); }
inline TypePtr T() { return Type::truth(); }
inline TypePtr F(TypePtr a, TypePtr b) { return Type::func(std::move(a), std::move(b)); }
inline TypePtr X(TypePtr a, TypePtr b) { return Type::pair(std::move(a), std::move(b)); }

inline TermPtr C(const std::string& n, TypePtr ty) { return Term::constant(n, std::move(ty)); }
inline TermPtr V(const std::string& n, TypePtr ty) { return Term::free(n, std::move(ty)); }
inline TermPtr A(TermPtr f, const std::vector<TermPtr>& as) { return Term::apply(std::move(f), as); }
inline TermPtr PRI(TermPtr t) { return Term::primary(std::move(t)); }

// Named-binder sugar: builds the body against a free variable, then closes it.
inline TermPtr lam(const std::string& v, const TypePtr& d, const TermPtr& body) {
  return Term::lambda(d, v, close_free(body, v));
}

// ---------------------------------------------------------------------------
// Random well-typed closed terms over a fixed signature.

struct Gen {
  std::mt19937 rng;
  std::vector<std::pair<std::string, TypePtr>> consts;
  std::vector<TypePtr> arg_pool;
  double mark_prob = 0.15;

  explicit Gen(unsigned seed) : rng(seed) {
    consts = {
        {"ca", E()},          {"cb", E()},           {"cc", E()},
        {"f1", F(E(), E())},  {"f2", F(E(), E())},   {"p1", F(E(), T())},
        {"p2", F(E(), T())},  {"r1", F(E(), F(E(), T()))},
        {"n1", F(T(), T())},  {"k1", F(F(E(), T()), T())},
        {"w1", X(E(), T())},  {"tt", T()},
    };
    arg_pool = {E(), T(), F(E(), E()), F(E(), T()), X(E(), T())};
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(rng) < p; }

  TermPtr atom(const TypePtr& ty, const std::vector<TypePtr>& ctx) {
    std::vector<TermPtr> cands;
    for (int i = 0; i < (int)ctx.size(); ++i)
      if (type_equal(ctx[i], ty)) cands.push_back(Term::bound(i));
    for (const auto& [n, t] : consts)
      if (type_equal(t, ty)) cands.push_back(Term::constant(n, t));
    if (cands.empty()) return nullptr;
    return cands[pick((int)cands.size())];
  }

  // ctx is innermost-first, matching infer_type. Markers land on atoms,
  // applications and pairs (binders themselves are never marked, matching
  // how markings are used: they flag occurrences of parallel elements).
  TermPtr gen(const TypePtr& ty, int depth, std::vector<TypePtr> ctx = {}) {
    TermPtr out = gen_bare(ty, depth, ctx);
    if (out->kind() != Term::Kind::Lambda && chance(mark_prob)) out = Term::primary(out);
    return out;
  }

  TermPtr gen_bare(const TypePtr& ty, int depth, std::vector<TypePtr>& ctx) {
    enum { Atom, Lam, Pair, App, Proj };
    std::vector<int> options;
    if (atom(ty, ctx)) options.push_back(Atom);
    if (depth > 0) {
      if (ty->kind() == Type::Kind::Func) options.insert(options.end(), 2, Lam);
      if (ty->kind() == Type::Kind::Pair) options.insert(options.end(), 2, Pair);
      options.push_back(App);
      if (type_equal(ty, E()) || type_equal(ty, T())) options.push_back(Proj);
    }
    if (options.empty()) options.push_back(ty->kind() == Type::Kind::Func ? Lam : Pair);
    switch (options[pick((int)options.size())]) {
      case Atom:
        return atom(ty, ctx);
      case Lam: {
        std::vector<TypePtr> inner;
        inner.push_back(ty->left());
        inner.insert(inner.end(), ctx.begin(), ctx.end());
        return Term::lambda(ty->left(), "v", gen(ty->right(), depth - 1, inner));
      }
      case Pair:
        return Term::make_pair(gen(ty->left(), depth - 1, ctx), gen(ty->right(), depth - 1, ctx));
      case App: {
        TypePtr arg_ty = arg_pool[pick((int)arg_pool.size())];
        return Term::apply(gen(F(arg_ty, ty), depth - 1, ctx), gen(arg_ty, depth - 1, ctx));
      }
      case Proj: {
        TypePtr pt = X(E(), T());
        TermPtr proj = type_equal(ty, E()) ? fst_at(pt) : snd_at(pt);
        return Term::apply(proj, gen(pt, depth - 1, ctx));
      }
    }
    return atom(ty, ctx);
  }
};

// ---------------------------------------------------------------------------
// Small-step oracle: all single contractions anywhere in the term, mirroring
// the declarative rules (beta, pair projection, eta, surjective pairing).
// Reduction order is chosen at random by the caller; the normal form reached
// must agree with normalize() up to markers.

inline bool mentions_index(const TermPtr& t, int k) {
  switch (t->kind()) {
    case Term::Kind::Bound: return t->index() == k;
    case Term::Kind::Const:
    case Term::Kind::Free: return false;
    case Term::Kind::Lambda: return mentions_index(t->sub1(), k + 1);
    case Term::Kind::Primary: return mentions_index(t->sub1(), k);
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      return mentions_index(t->sub1(), k) || mentions_index(t->sub2(), k);
  }
  return false;
}

inline void one_steps(const TermPtr& t, std::vector<TermPtr>& out) {
  switch (t->kind()) {
    case Term::Kind::Const:
    case Term::Kind::Free:
    case Term::Kind::Bound:
      return;
    case Term::Kind::Primary: {
      std::vector<TermPtr> inner;
      one_steps(t->sub1(), inner);
      for (const auto& s : inner) out.push_back(Term::primary(s));
      return;
    }
    case Term::Kind::Lambda: {
      const TermPtr& body = t->sub1();
      if (body->kind() == Term::Kind::Apply && body->sub2()->kind() == Term::Kind::Bound &&
          body->sub2()->index() == 0 && !mentions_index(body->sub1(), 0))
        out.push_back(shift(body->sub1(), -1));
      std::vector<TermPtr> inner;
      one_steps(body, inner);
      for (const auto& s : inner) out.push_back(Term::lambda(t->type(), t->name(), s));
      return;
    }
    case Term::Kind::Apply: {
      const TermPtr& f = t->sub1();
      const TermPtr& a = t->sub2();
      if (strip(f)->kind() == Term::Kind::Lambda)
        out.push_back(open_bound(strip(f)->sub1(), a));
      if (strip(f)->kind() == Term::Kind::Const && is_pair_projection(*strip(f)) &&
          strip(a)->kind() == Term::Kind::MakePair)
        out.push_back(strip(f)->name() == "fst" ? strip(a)->sub1() : strip(a)->sub2());
      std::vector<TermPtr> fi, ai;
      one_steps(f, fi);
      one_steps(a, ai);
      for (const auto& s : fi) out.push_back(Term::apply(s, a));
      for (const auto& s : ai) out.push_back(Term::apply(f, s));
      return;
    }
    case Term::Kind::MakePair: {
      const TermPtr& a = t->sub1();
      const TermPtr& b = t->sub2();
      if (a->kind() == Term::Kind::Apply && b->kind() == Term::Kind::Apply &&
          a->sub1()->kind() == Term::Kind::Const && a->sub1()->name() == "fst" &&
          is_pair_projection(*a->sub1()) && b->sub1()->kind() == Term::Kind::Const &&
          b->sub1()->name() == "snd" && is_pair_projection(*b->sub1()) &&
          equal_with_markers(a->sub2(), b->sub2()))
        out.push_back(a->sub2());
      std::vector<TermPtr> ai, bi;
      one_steps(a, ai);
      one_steps(b, bi);
      for (const auto& s : ai) out.push_back(Term::make_pair(s, b));
      for (const auto& s : bi) out.push_back(Term::make_pair(a, s));
      return;
    }
  }
}

inline TermPtr random_walk_normal_form(TermPtr t, std::mt19937& rng, int max_steps = 4000) {
  for (int i = 0; i < max_steps; ++i) {
    std::vector<TermPtr> steps;
    one_steps(t, steps);
    if (steps.empty()) return t;
    t = steps[std::uniform_int_distribution<int>(0, (int)steps.size() - 1)(rng)];
  }
  return nullptr; // did not terminate: a bug by itself
}

// ---------------------------------------------------------------------------
// Brute-force matching oracle: find every position where an argument occurs
// (including positions nested inside larger occurrences), then enumerate all
// prefix-free subsets of positions and abstract each choice.

struct TaggedPath {
  Path path;
  int arg;
};

inline void gather_occurrences(const TermPtr& t, const TermPtr& needle, int tag, Path& cur,
                               std::vector<TaggedPath>& out) {
  if (alpha_equal(t, needle)) out.push_back({cur, tag});
  const TermPtr& s = strip(t);
  switch (s->kind()) {
    case Term::Kind::Lambda:
      cur.push_back(0);
      gather_occurrences(s->sub1(), needle, tag, cur, out);
      cur.pop_back();
      return;
    case Term::Kind::Apply:
    case Term::Kind::MakePair:
      cur.push_back(0);
      gather_occurrences(s->sub1(), needle, tag, cur, out);
      cur.back() = 1;
      gather_occurrences(s->sub2(), needle, tag, cur, out);
      cur.pop_back();
      return;
    default:
      return;
  }
}

inline bool is_prefix(const Path& a, const Path& b) {
  if (a.size() > b.size()) return false;
  return std::equal(a.begin(), a.end(), b.begin());
}

inline int binders_on_path(TermPtr t, const Path& p) {
  int count = 0;
  for (int step : p) {
    t = strip(t);
    if (t->kind() == Term::Kind::Lambda) {
      ++count;
      t = t->sub1();
    } else {
      t = step == 0 ? t->sub1() : t->sub2();
    }
  }
  return count;
}

inline std::vector<TermPtr> oracle_abstractions(const std::vector<TermPtr>& args_in,
                                                const TermPtr& rhs_in) {
  TermPtr rhs = normalize(rhs_in);
  std::vector<TermPtr> args;
  std::vector<TypePtr> arg_types;
  for (const auto& a : args_in) {
    args.push_back(normalize(a));
    arg_types.push_back(infer_type(args.back(), {}));
  }
  int n = (int)args.size();
  std::vector<TaggedPath> occ;
  for (int i = 0; i < n; ++i) {
    Path cur;
    gather_occurrences(rhs, args[i], i, cur, occ);
  }
  std::vector<TermPtr> out;
  int k = (int)occ.size();
  for (unsigned mask = 0; mask < (1u << k); ++mask) {
    std::vector<int> chosen;
    for (int i = 0; i < k; ++i)
      if (mask & (1u << i)) chosen.push_back(i);
    bool ok = true;
    for (size_t i = 0; i < chosen.size() && ok; ++i)
      for (size_t j = i + 1; j < chosen.size() && ok; ++j)
        if (is_prefix(occ[chosen[i]].path, occ[chosen[j]].path) ||
            is_prefix(occ[chosen[j]].path, occ[chosen[i]].path))
          ok = false;
    if (!ok) continue;
    TermPtr body = rhs;
    for (int c : chosen) {
      int idx = binders_on_path(rhs, occ[c].path) + (n - 1 - occ[c].arg);
      body = replace_at(body, occ[c].path, Term::bound(idx));
    }
    for (int i = n - 1; i >= 0; --i) body = Term::lambda(arg_types[i], "x", body);
    body = normalize(body);
    bool seen = false;
    for (const auto& existing : out)
      if (equal_with_markers(existing, body)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(body);
  }
  return out;
}

inline std::vector<TermPtr> bindings_of(const std::vector<Substitution>& subs,
                                        const std::string& name) {
  std::vector<TermPtr> out;
  for (const auto& s : subs) {
    auto it = s.bindings.find(name);
    if (it != s.bindings.end()) out.push_back(it->second);
  }
  return out;
}

inline bool same_term_set(const std::vector<TermPtr>& a, const std::vector<TermPtr>& b) {
  if (a.size() != b.size()) return false;
  for (const auto& x : a) {
    bool found = false;
    for (const auto& y : b)
      if (equal_with_markers(x, y)) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

inline bool contains_term(const std::vector<TermPtr>& xs, const TermPtr& t) {
  for (const auto& x : xs)
    if (equal_with_markers(x, t)) return true;
  return false;
}

} // namespace tst
