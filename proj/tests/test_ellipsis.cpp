#include <doctest.h>

#include <algorithm>

#include "elx/engine.hpp"
#include "helpers.hpp"

using namespace tst;

namespace {

TypePtr det_type() { return F(F(E(), X(T(), T())), T()); }

TermPtr every() { return C("every", det_type()); }
TermPtr some() { return C("some", det_type()); }
TermPtr andc() { return C("and", F(T(), F(T(), T()))); }

std::vector<TermPtr> reading_terms(const std::vector<Reading>& rs) {
  std::vector<TermPtr> out;
  for (const auto& r : rs) out.push_back(r.term);
  return out;
}

bool has_stage(const DerivationResult& res, FailureStage stage) {
  for (const auto& f : res.failures)
    if (f.stage == stage) return true;
  return false;
}

const Reading* reading_like(const std::vector<Reading>& rs, const TermPtr& t) {
  for (const auto& r : rs)
    if (alpha_equal(r.term, t)) return &r;
  return nullptr;
}

} // namespace

TEST_CASE("build_equation applies the unknown to the source elements") {
  TermPtr like = C("like", F(E(), F(E(), T())));
  TermPtr dan = C("dan", E());
  TermPtr golf = C("golf", E());
  TermPtr matrix = A(like, {dan, golf});

  Equation eq = build_equation(matrix, {dan}, "P");
  CHECK(alpha_equal(eq.lhs, A(V("P", F(E(), T())), {dan})));
  CHECK(eq.rhs == matrix);
  CHECK(type_equal(infer_type(eq.lhs), T()));

  Equation two = build_equation(matrix, {dan, golf}, "P");
  CHECK(alpha_equal(two.lhs, A(V("P", F(E(), F(E(), T()))), {dan, golf})));
}

TEST_CASE("entity elements absent from the source are rejected") {
  TermPtr like = C("like", F(E(), F(E(), T())));
  TermPtr dan = C("dan", E());
  TermPtr golf = C("golf", E());
  TermPtr matrix = A(like, {dan, golf});

  try {
    build_equation(matrix, {C("george", E())}, "P");
    FAIL("expected ElementNotFound");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ElementNotFound);
  }

  // the pleonastic delta is exempt: "it would rain, and it did"
  TermPtr rain = C("rain", T());
  Equation eq = build_equation(rain, {C("delta", E())}, "P");
  CHECK(alpha_equal(eq.lhs, A(V("P", F(E(), T())), {C("delta", E())})));

  // so are contributions above first order, which need not be subterms
  TermPtr student = C("student", F(E(), T()));
  TermPtr x = V("x", E());
  TermPtr gq = lam("S", F(E(), T()),
                   quantify(every(), "x", A(student, {x}), A(V("S", F(E(), T())), {x})));
  TermPtr scoped = quantify(every(), "x", A(student, {x}), A(like, {x, golf}));
  Equation raised = build_equation(scoped, {gq}, "P");
  CHECK(type_equal(infer_type(raised.lhs), T()));
}

TEST_CASE("primary filter drops solutions that keep a marked occurrence") {
  TermPtr like = C("like", F(E(), F(E(), T())));
  TermPtr dan = C("dan", E());
  TermPtr golf = C("golf", E());
  TermPtr P = V("P", F(E(), T()));
  TermPtr rhs = A(like, {PRI(dan), golf});

  UnifyOutcome out = huet_unify({{{A(P, {dan}), rhs}}, {"P"}}, SearchBudget{});
  CHECK(out.complete);
  REQUIRE(out.solutions.size() == 2);
  auto kept = filter_primary(out.solutions);
  REQUIRE(kept.size() == 1);
  CHECK(alpha_equal(kept[0].bindings.at("P"), lam("x", E(), A(like, {V("x", E()), golf}))));
}

TEST_CASE("wife equation: strict and sloppy survive the primary filter") {
  TermPtr likes = C("likes", F(E(), F(E(), T())));
  TermPtr wo = C("wife-of", F(E(), E()));
  TermPtr dan = C("dan", E());
  TermPtr P = V("P", F(E(), T()));
  TermPtr rhs = A(likes, {PRI(dan), A(wo, {dan})});

  UnifyOutcome out = huet_unify({{{A(P, {dan}), rhs}}, {"P"}}, SearchBudget{});
  CHECK(out.complete);
  REQUIRE(out.solutions.size() == 4);
  auto kept = filter_primary(out.solutions);
  REQUIRE(kept.size() == 2);
  TermPtr x = V("x", E());
  auto bs = bindings_of(kept, "P");
  CHECK(contains_term(bs, lam("x", E(), A(likes, {x, A(wo, {dan})}))));
  CHECK(contains_term(bs, lam("x", E(), A(likes, {x, A(wo, {x})}))));
}

TEST_CASE("abstracts_occurrence follows rhs paths into the binding body") {
  TermPtr likes = C("likes", F(E(), F(E(), T())));
  TermPtr wo = C("wife-of", F(E(), E()));
  TermPtr dan = C("dan", E());
  TermPtr x = V("x", E());

  // rhs likes(dan, wife-of(dan)): subject at [0,1], wife's argument at [1,1]
  TermPtr strict = lam("x", E(), A(likes, {x, A(wo, {dan})}));
  CHECK(abstracts_occurrence(strict, {0, 1}));
  CHECK_FALSE(abstracts_occurrence(strict, {1, 1}));
  CHECK_FALSE(abstracts_occurrence(strict, {0, 0})); // the verb itself
  TermPtr sloppy = lam("x", E(), A(likes, {x, A(wo, {x})}));
  CHECK(abstracts_occurrence(sloppy, {0, 1}));
  CHECK(abstracts_occurrence(sloppy, {1, 1}));

  // eta-short binding: the property `left` abstracts the argument position
  TermPtr left = C("left", F(E(), T()));
  CHECK(abstracts_occurrence(left, {1}));
  CHECK_FALSE(abstracts_occurrence(left, {0}));

  // a path inside a wholesale-abstracted subterm counts as abstracted
  TermPtr refuse = C("refuse", F(E(), F(T(), T())));
  TermPtr pwi = C("pwi", F(E(), F(E(), E())));
  TermPtr give = C("give", F(E(), F(E(), T())));
  TermPtr y = V("y", E());
  TermPtr whole = lam("x", E(), A(refuse, {x, A(give, {dan, y})}));
  CHECK(abstracts_occurrence(whole, {0, 1}));
  CHECK(abstracts_occurrence(whole, {0, 1, 1})); // inside the replaced pwi(m,j)
  CHECK_FALSE(abstracts_occurrence(whole, {1, 1}));
  (void)pwi;
}

TEST_CASE("linking keeps three of the four believe readings") {
  TermPtr believe = C("believe", F(E(), F(T(), T())));
  TermPtr love = C("love", F(E(), F(E(), T())));
  TermPtr wo = C("wife-of", F(E(), E()));
  TermPtr bill = C("bill", E());
  TermPtr P = V("P", F(E(), T()));
  TermPtr rhs = A(believe, {PRI(bill), A(love, {bill, A(wo, {bill})})});

  UnifyOutcome out = huet_unify({{{A(P, {bill}), rhs}}, {"P"}}, SearchBudget{});
  CHECK(out.complete);
  auto kept = filter_primary(out.solutions);
  REQUIRE(kept.size() == 4);

  // "his" at [1,1,1] answers to "he" at [1,0,1]
  std::vector<std::pair<Path, Path>> links = {{{1, 1, 1}, {1, 0, 1}}};
  auto linked = filter_antecedent_linking(kept, "P", links, true);
  REQUIRE(linked.size() == 3);
  TermPtr x = V("x", E());
  auto bs = bindings_of(linked, "P");
  CHECK(contains_term(bs, lam("x", E(), A(believe, {x, A(love, {bill, A(wo, {bill})})}))));
  CHECK(contains_term(bs, lam("x", E(), A(believe, {x, A(love, {x, A(wo, {x})})}))));
  CHECK(contains_term(bs, lam("x", E(), A(believe, {x, A(love, {x, A(wo, {bill})})}))));
  CHECK_FALSE(contains_term(bs, lam("x", E(), A(believe, {x, A(love, {bill, A(wo, {x})})}))));

  // disabled, the filter passes everything through
  CHECK(filter_antecedent_linking(kept, "P", links, false).size() == 4);
  // substitutions lacking a binding for the unknown are kept
  Substitution empty;
  CHECK(filter_antecedent_linking({empty}, "P", links, true).size() == 1);
}

TEST_CASE("linking keeps three of the four upset readings") {
  TermPtr say = C("say", F(E(), F(T(), T())));
  TermPtr upset = C("upset", F(T(), F(E(), T())));
  TermPtr fn = C("finding-nude", F(E(), T()));
  TermPtr ho = C("husband-of", F(E(), E()));
  TermPtr edith = C("edith", E());
  TermPtr P = V("P", F(E(), T()));
  TermPtr rhs = A(say, {PRI(edith), A(upset, {A(fn, {A(ho, {edith})}), edith})});

  UnifyOutcome out = huet_unify({{{A(P, {edith}), rhs}}, {"P"}}, SearchBudget{});
  CHECK(out.complete);
  auto kept = filter_primary(out.solutions);
  REQUIRE(kept.size() == 4);

  // the more deeply embedded "her husband" answers to the experiencer "her"
  std::vector<std::pair<Path, Path>> links = {{{1, 0, 1, 1, 1}, {1, 1}}};
  auto linked = filter_antecedent_linking(kept, "P", links, true);
  REQUIRE(linked.size() == 3);
  TermPtr x = V("x", E());
  auto bs = bindings_of(linked, "P");
  CHECK_FALSE(contains_term(
      bs, lam("x", E(), A(say, {x, A(upset, {A(fn, {A(ho, {x})}), edith})}))));
  CHECK(contains_term(
      bs, lam("x", E(), A(say, {x, A(upset, {A(fn, {A(ho, {edith})}), x})}))));
}

TEST_CASE("mark_derived_primaries transfers marks onto the filled targets") {
  TermPtr realize = C("realize", F(E(), F(T(), T())));
  TermPtr fool = C("fool", F(E(), T()));
  TermPtr john = C("john", E());
  TermPtr bill = C("bill", E());
  TermPtr x = V("x", E());
  TermPtr rhs = A(realize, {PRI(john), A(fool, {john})});

  TermPtr sloppy = lam("x", E(), A(realize, {x, A(fool, {x})}));
  TermPtr derived = mark_derived_primaries(sloppy, rhs, {bill});
  CHECK(equal_with_markers(derived, A(realize, {PRI(bill), A(fool, {bill})})));

  TermPtr strict = lam("x", E(), A(realize, {x, A(fool, {john})}));
  TermPtr derived2 = mark_derived_primaries(strict, rhs, {bill});
  CHECK(equal_with_markers(derived2, A(realize, {PRI(bill), A(fool, {john})})));

  // eta-short binding fills its single argument position
  TermPtr p1 = C("p1", F(E(), T()));
  TermPtr derived3 = mark_derived_primaries(p1, A(p1, {PRI(john)}), {bill});
  CHECK(equal_with_markers(derived3, A(p1, {PRI(bill)})));
}

TEST_CASE("type_align raises an entity against a generalized quantifier") {
  TermPtr student = C("student", F(E(), T()));
  TermPtr bill = C("bill", E());
  TermPtr x = V("x", E());
  TermPtr gq = lam("S", F(E(), T()),
                   quantify(every(), "x", A(student, {x}), A(V("S", F(E(), T())), {x})));

  auto [s1, t1] = type_align(gq, bill);
  CHECK(s1 == gq);
  CHECK(alpha_equal(t1, lam("R", F(E(), T()), A(V("R", F(E(), T())), {bill}))));

  auto [s2, t2] = type_align(bill, gq);
  CHECK(t2 == gq);
  CHECK(alpha_equal(s2, lam("R", F(E(), T()), A(V("R", F(E(), T())), {bill}))));

  auto [s3, t3] = type_align(bill, C("john", E()));
  CHECK(s3 == bill);
  CHECK(alpha_equal(t3, C("john", E())));

  try {
    type_align(bill, student);
    FAIL("expected TypeMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TypeMismatch);
  }
}

TEST_CASE("golf: one reading, with the property recorded as provenance") {
  TermPtr like = C("like", F(E(), F(E(), T())));
  TermPtr dan = C("dan", E());
  TermPtr golf = C("golf", E());
  TermPtr george = C("george", E());

  DerivationPlan plan;
  plan.problem.frame =
      A(andc(), {A(like, {dan, golf}), A(V("P", F(E(), T())), {george})});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {0, 1};
  c.hole = {-1, {1}};
  c.parallels = {{dan, george, ""}};
  c.primaries = {{0, 1, 0, 1}};
  plan.problem.clauses.push_back(c);

  DerivationResult res = enumerate_derivations(plan, SearchBudget{}, true);
  REQUIRE(res.readings.size() == 1);
  TermPtr want = A(andc(), {A(like, {dan, golf}), A(like, {george, golf})});
  CHECK(alpha_equal(res.readings[0].term, want));
  CHECK(alpha_equal(res.readings[0].provenance.at("P"),
                    lam("x", E(), A(like, {V("x", E()), golf}))));
  CHECK(res.counts.raw == 2);
  CHECK(res.counts.after_primary == 1);
  CHECK(res.counts.after_linking == 1);
  CHECK_FALSE(res.budget_exhausted);

  // solve_system is the assumption-free entry point to the same search
  auto readings = solve_system(plan.problem, SearchBudget{}, true);
  REQUIRE(readings.size() == 1);
  CHECK(alpha_equal(readings[0].term, want));
}

TEST_CASE("wife: strict and sloppy readings") {
  TermPtr likes = C("likes", F(E(), F(E(), T())));
  TermPtr wo = C("wife-of", F(E(), E()));
  TermPtr dan = C("dan", E());
  TermPtr george = C("george", E());

  EllipsisProblem prob;
  prob.frame =
      A(andc(), {A(likes, {dan, A(wo, {dan})}), A(V("P", F(E(), T())), {george})});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {0, 1};
  c.hole = {-1, {1}};
  c.parallels = {{dan, george, ""}};
  c.primaries = {{0, 1, 0, 1}};
  prob.clauses.push_back(c);

  DerivationResult res = enumerate_derivations({prob, {}}, SearchBudget{}, true);
  auto terms = reading_terms(res.readings);
  REQUIRE(terms.size() == 2);
  TermPtr src = A(likes, {dan, A(wo, {dan})});
  CHECK(contains_term(terms, A(andc(), {src, A(likes, {george, A(wo, {dan})})})));
  CHECK(contains_term(terms, A(andc(), {src, A(likes, {george, A(wo, {george})})})));
  CHECK(res.counts.raw == 4);
  CHECK(res.counts.after_primary == 2);
  CHECK(res.counts.after_linking == 2);
}

TEST_CASE("pleonastic subject: the vacuous property is the only reading") {
  TermPtr said = C("said", F(E(), F(T(), T())));
  TermPtr rain = C("rain", T());
  TermPtr john = C("john", E());
  TermPtr delta = C("delta", E());

  EllipsisProblem prob;
  prob.frame = A(andc(), {A(said, {john, rain}), A(V("P", F(E(), T())), {delta})});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {0, 1, 1};
  c.hole = {-1, {1}};
  c.parallels = {{delta, delta, ""}};
  prob.clauses.push_back(c);

  DerivationResult res = enumerate_derivations({prob, {}}, SearchBudget{}, true);
  REQUIRE(res.readings.size() == 1);
  CHECK(alpha_equal(res.readings[0].term, A(andc(), {A(said, {john, rain}), rain})));
  CHECK(alpha_equal(res.readings[0].provenance.at("P"), lam("x", E(), rain)));
}

TEST_CASE("cascaded ellipsis: the realize chain has exactly three readings") {
  TermPtr realize = C("realize", F(E(), F(T(), T())));
  TermPtr fool = C("fool", F(E(), T()));
  TermPtr wo = C("wife-of", F(E(), E()));
  TermPtr john = C("john", E());
  TermPtr bill = C("bill", E());

  EllipsisProblem prob;
  prob.frame = A(andc(), {A(realize, {john, A(fool, {john})}),
                          A(andc(), {A(V("P", F(E(), T())), {bill}),
                                     A(V("Q", F(E(), T())), {A(wo, {bill})})})});
  EllipsisClause p;
  p.unknown = "P";
  p.source = {0, 1};
  p.hole = {-1, {1, 0, 1}};
  p.parallels = {{john, bill, ""}};
  p.primaries = {{0, 1, 0, 1}};
  EllipsisClause q;
  q.unknown = "Q";
  q.source = {1, 0, 1}; // the filled second conjunct; marks carry over to it
  q.hole = {-1, {1, 1}};
  q.parallels = {{bill, A(wo, {bill}), ""}};
  prob.clauses = {p, q};

  DerivationResult res = enumerate_derivations({prob, {}}, SearchBudget{}, true);
  auto terms = reading_terms(res.readings);
  REQUIRE(terms.size() == 3);
  TermPtr first = A(realize, {john, A(fool, {john})});
  auto whole = [&](const TermPtr& second, const TermPtr& third) {
    return A(andc(), {first, A(andc(), {second, third})});
  };
  TermPtr wob = A(wo, {bill});
  CHECK(contains_term(terms, whole(A(realize, {bill, A(fool, {bill})}),
                                   A(realize, {wob, A(fool, {bill})}))));
  CHECK(contains_term(terms, whole(A(realize, {bill, A(fool, {bill})}),
                                   A(realize, {wob, A(fool, {wob})}))));
  CHECK(contains_term(terms, whole(A(realize, {bill, A(fool, {john})}),
                                   A(realize, {wob, A(fool, {john})}))));
  CHECK(res.counts.raw == 10);
  CHECK(res.counts.after_primary == 5);
  CHECK(res.counts.after_linking == 5);

  // the system is order free: listing the clauses the other way round
  // changes nothing
  std::swap(prob.clauses[0], prob.clauses[1]);
  DerivationResult swapped = enumerate_derivations({prob, {}}, SearchBudget{}, true);
  CHECK(same_term_set(reading_terms(swapped.readings), terms));
}

TEST_CASE("one source can feed two ellipses with different parallel elements") {
  TermPtr before = C("before", F(T(), F(T(), T())));
  TermPtr fr = C("finish-reading", F(E(), F(E(), T())));
  TermPtr john = C("john", E());
  TermPtr bill = C("bill", E());
  TermPtr poem = C("poem", E());
  TermPtr story = C("story", E());

  EllipsisProblem prob;
  prob.frame = A(andc(), {A(before, {A(fr, {john, poem}), A(V("P", F(E(), T())), {bill})}),
                          A(V("S", F(E(), T())), {story})});
  EllipsisClause p;
  p.unknown = "P";
  p.source = {0, 1, 0, 1};
  p.hole = {-1, {0, 1, 1}};
  p.parallels = {{john, bill, ""}};
  p.primaries = {{0, 1, 0, 1, 0, 1}};
  EllipsisClause s;
  s.unknown = "S";
  s.source = {0, 1, 0, 1}; // same source clause, different parallel element
  s.hole = {-1, {1}};
  s.parallels = {{poem, story, ""}};
  s.primaries = {{0, 1, 0, 1, 1}};
  prob.clauses = {p, s};

  DerivationResult res = enumerate_derivations({prob, {}}, SearchBudget{}, true);
  REQUIRE(res.readings.size() == 1);
  TermPtr want = A(andc(), {A(before, {A(fr, {john, poem}), A(fr, {bill, poem})}),
                            A(fr, {john, story})});
  CHECK(alpha_equal(res.readings[0].term, want));
  CHECK(res.counts.raw == 4);
  CHECK(res.counts.after_primary == 2);
}

TEST_CASE("type raising: the revise sentence has three readings") {
  TermPtr and_then = C("and-then", F(T(), F(T(), T())));
  TermPtr revise = C("revise", F(E(), F(E(), T())));
  TermPtr po = C("paper-of", F(E(), E()));
  TermPtr student = C("student", F(E(), T()));
  TermPtr bill = C("bill", E());
  TermPtr x = V("x", E());

  DerivationPlan plan;
  plan.problem.frame =
      A(and_then, {A(revise, {x, A(po, {x})}), A(V("P", F(E(), T())), {bill})});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {0, 1};
  c.hole = {-1, {1}};
  c.parallels = {{nullptr, bill, "x"}};
  c.primaries = {{0, 1, 0, 1}};
  plan.problem.clauses.push_back(c);
  plan.assumptions.push_back(
      {Assumption::quant(every(), "x", A(student, {x})), {{0, 1}, {}}});

  DerivationResult res = enumerate_derivations(plan, SearchBudget{16, 64}, true);
  auto terms = reading_terms(res.readings);
  REQUIRE(terms.size() == 3);

  TermPtr own = quantify(every(), "x", A(student, {x}), A(revise, {x, A(po, {x})}));
  TermPtr raised = A(and_then, {own, A(revise, {bill, A(po, {bill})})});
  TermPtr strict = quantify(
      every(), "x", A(student, {x}),
      A(and_then, {A(revise, {x, A(po, {x})}), A(revise, {bill, A(po, {x})})}));
  TermPtr sloppy = quantify(
      every(), "x", A(student, {x}),
      A(and_then, {A(revise, {x, A(po, {x})}), A(revise, {bill, A(po, {bill})})}));
  CHECK(contains_term(terms, raised));
  CHECK(contains_term(terms, strict));
  CHECK(contains_term(terms, sloppy));

  // discharging first forces the higher-order solution lam Q. Q(own paper)
  const Reading* r = reading_like(res.readings, raised);
  REQUIRE(r != nullptr);
  TermPtr q = V("Q", F(F(E(), T()), T()));
  TermPtr lifted = lam("Q", F(F(E(), T()), T()),
                       A(q, {lam("z", E(), A(revise, {V("z", E()), A(po, {V("z", E())})}))}));
  CHECK(alpha_equal(r->provenance.at("P"), lifted));

  CHECK(res.counts.raw == 6);
  CHECK(res.counts.after_primary == 3);
  // resolving after the quantifier moved into the frame strands the matrix
  // variable, which is reported rather than silently dropped
  CHECK(has_stage(res, FailureStage::Dangling));
}

TEST_CASE("when-adjunct: the quantifier scopes over both clauses or each") {
  TermPtr when = C("when", F(T(), F(T(), T())));
  TermPtr greet = C("greet", F(E(), F(E(), T())));
  TermPtr person = C("person", F(E(), T()));
  TermPtr john = C("john", E());
  TermPtr bill = C("bill", E());
  TermPtr x = V("x", E());

  DerivationPlan plan;
  plan.problem.frame = A(when, {A(greet, {john, x}), A(V("P", F(E(), T())), {bill})});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {0, 1};
  c.hole = {-1, {1}};
  c.parallels = {{john, bill, ""}};
  c.primaries = {{0, 1, 0, 1}};
  plan.problem.clauses.push_back(c);
  plan.assumptions.push_back(
      {Assumption::quant(every(), "x", A(person, {x})), {{0, 1}, {}}});

  DerivationResult res = enumerate_derivations(plan, SearchBudget{16, 64}, true);
  auto terms = reading_terms(res.readings);
  REQUIRE(terms.size() == 2);
  TermPtr individual =
      quantify(every(), "x", A(person, {x}),
               A(when, {A(greet, {john, x}), A(greet, {bill, x})}));
  TermPtr group =
      A(when, {quantify(every(), "x", A(person, {x}), A(greet, {john, x})),
               quantify(every(), "x", A(person, {x}), A(greet, {bill, x}))});
  CHECK(contains_term(terms, individual));
  CHECK(contains_term(terms, group));
}

TEST_CASE("antecedent-contained ellipsis: discharge first hits the occurs check") {
  TermPtr greet = C("greet", F(E(), F(E(), T())));
  TermPtr person = C("person", F(E(), T()));
  TermPtr john = C("john", E());
  TermPtr bill = C("bill", E());
  TermPtr x = V("x", E());

  DerivationPlan plan;
  plan.problem.frame = A(greet, {john, x});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {};
  c.hole = {0, {1}}; // inside the restriction of the pending quantifier
  c.parallels = {{john, bill, ""}};
  c.primaries = {{0, 1}};
  plan.problem.clauses.push_back(c);
  plan.assumptions.push_back(
      {Assumption::quant(every(), "x",
                         A(andc(), {A(person, {x}), A(V("P", F(E(), T())), {bill})})),
       {{}}});

  DerivationResult res = enumerate_derivations(plan, SearchBudget{16, 64}, true);
  REQUIRE(res.readings.size() == 1);
  TermPtr want = quantify(every(), "x",
                          A(andc(), {A(person, {x}), A(greet, {bill, x})}),
                          A(greet, {john, x}));
  CHECK(alpha_equal(res.readings[0].term, want));
  // the discharge-first order leaves P on both sides of its own equation
  CHECK(has_stage(res, FailureStage::Occurs));
  CHECK(res.counts.raw == 2);
  CHECK(res.counts.after_primary == 1);
}

TEST_CASE("revise-before: linking removes exactly the non-parallel reading") {
  TermPtr before = C("before", F(T(), F(T(), T())));
  TermPtr revise = C("revise", F(E(), F(E(), T())));
  TermPtr po = C("paper-of", F(E(), E()));
  TermPtr john = C("john", E());
  TermPtr teacher = C("teacher", E());
  TermPtr bill = C("bill", E());

  EllipsisProblem prob;
  prob.frame =
      A(andc(), {A(before, {A(revise, {john, A(po, {john})}),
                            A(V("P", F(E(), T())), {teacher})}),
                 A(V("Q", F(E(), T())), {bill})});
  EllipsisClause p;
  p.unknown = "P";
  p.source = {0, 1, 0, 1};
  p.hole = {-1, {0, 1, 1}};
  p.parallels = {{john, teacher, ""}};
  p.primaries = {{0, 1, 0, 1, 0, 1}};
  p.links = {{{0, 1, 0, 1, 1, 1}, {0, 1, 0, 1, 0, 1}}};
  EllipsisClause q;
  q.unknown = "Q";
  q.source = {0, 1}; // the whole first conjunct, P(teacher) included
  q.hole = {-1, {1}};
  q.parallels = {{john, bill, ""}};
  q.primaries = {{0, 1, 0, 1, 0, 1}};
  q.links = {{{0, 1, 0, 1, 1, 1}, {0, 1, 0, 1, 0, 1}}};
  prob.clauses = {p, q};

  auto clause2 = [&](const TermPtr& a2, const TermPtr& p2, const TermPtr& a3,
                     const TermPtr& p3) {
    return A(before, {A(revise, {a2, A(po, {p2})}), A(revise, {a3, A(po, {p3})})});
  };
  TermPtr pj = john, pt = teacher, pb = bill;
  std::vector<TermPtr> all = {
      A(andc(), {clause2(john, pj, teacher, pt), clause2(bill, pb, teacher, pt)}),
      A(andc(), {clause2(john, pj, teacher, pj), clause2(bill, pj, teacher, pj)}),
      A(andc(), {clause2(john, pj, teacher, pj), clause2(bill, pb, teacher, pb)}),
      A(andc(), {clause2(john, pj, teacher, pt), clause2(bill, pj, teacher, pt)}),
      A(andc(), {clause2(john, pj, teacher, pj), clause2(bill, pb, teacher, pj)}),
      A(andc(), {clause2(john, pj, teacher, pj), clause2(bill, pj, teacher, pb)}),
  };

  DerivationResult off = enumerate_derivations({prob, {}}, SearchBudget{}, false);
  auto off_terms = reading_terms(off.readings);
  REQUIRE(off_terms.size() == 6);
  for (const auto& t : all) CHECK(contains_term(off_terms, t));
  CHECK(off.counts.raw == 16);
  CHECK(off.counts.after_primary == 8);
  CHECK(off.counts.after_linking == 8);

  DerivationResult on = enumerate_derivations({prob, {}}, SearchBudget{}, true);
  auto on_terms = reading_terms(on.readings);
  REQUIRE(on_terms.size() == 5);
  // the last listed reading treats the two paper positions non-parallel
  for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(contains_term(on_terms, all[i]));
  CHECK_FALSE(contains_term(on_terms, all.back()));
  CHECK(on.counts.after_linking == 7);
}

TEST_CASE("two quantifiers never take different scopes in the two clauses") {
  TermPtr give = C("give", F(E(), F(E(), F(E(), T()))));
  TermPtr student = C("student", F(E(), T()));
  TermPtr test = C("test", F(E(), T()));
  TermPtr john = C("john", E());
  TermPtr bill = C("bill", E());
  TermPtr x = V("x", E());
  TermPtr y = V("y", E());

  DerivationPlan plan;
  plan.problem.frame =
      A(andc(), {A(give, {john, x, y}), A(V("P", F(E(), T())), {bill})});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {0, 1};
  c.hole = {-1, {1}};
  c.parallels = {{john, bill, ""}};
  c.primaries = {{0, 1, 0, 0, 1}};
  plan.problem.clauses.push_back(c);
  plan.assumptions.push_back(
      {Assumption::quant(every(), "x", A(student, {x})), {{0, 1}, {}}});
  plan.assumptions.push_back(
      {Assumption::quant(some(), "y", A(test, {y})), {{0, 1}, {}}});

  DerivationResult res = enumerate_derivations(plan, SearchBudget{16, 128}, true);
  CHECK_FALSE(res.budget_exhausted);
  auto terms = reading_terms(res.readings);
  REQUIRE(terms.size() == 6);

  auto ev = [&](const TermPtr& s) {
    return quantify(every(), "x", A(student, {x}), s);
  };
  auto sm = [&](const TermPtr& s) { return quantify(some(), "y", A(test, {y}), s); };
  TermPtr gj = A(give, {john, x, y});
  TermPtr gb = A(give, {bill, x, y});
  CHECK(contains_term(terms, ev(sm(A(andc(), {gj, gb})))));
  CHECK(contains_term(terms, sm(ev(A(andc(), {gj, gb})))));
  CHECK(contains_term(terms, ev(A(andc(), {sm(gj), sm(gb)}))));
  CHECK(contains_term(terms, sm(A(andc(), {ev(gj), ev(gb)}))));
  CHECK(contains_term(terms, A(andc(), {ev(sm(gj)), ev(sm(gb))})));
  CHECK(contains_term(terms, A(andc(), {sm(ev(gj)), sm(ev(gb))})));

  // in particular, opposite orders in the two conjuncts never appear
  TermPtr mixed = A(andc(), {ev(sm(gj)), sm(ev(gb))});
  CHECK_FALSE(contains_term(terms, mixed));

  // a starved budget is reported instead of silently narrowing the readings
  DerivationResult starved = enumerate_derivations(plan, SearchBudget{16, 1}, true);
  CHECK(starved.budget_exhausted);
}

TEST_CASE("malformed plans are rejected up front") {
  TermPtr like = C("like", F(E(), F(E(), T())));
  TermPtr dan = C("dan", E());
  TermPtr golf = C("golf", E());
  TermPtr george = C("george", E());
  TermPtr person = C("person", F(E(), T()));

  DerivationPlan plan;
  plan.problem.frame =
      A(andc(), {A(like, {dan, golf}), A(V("P", F(E(), T())), {george})});
  EllipsisClause c;
  c.unknown = "P";
  c.source = {0, 1};
  c.hole = {-1, {1}};
  c.parallels = {{dan, george, ""}};
  c.primaries = {{0, 1, 0, 1}};
  plan.problem.clauses.push_back(c);

  auto expect_bad = [](const DerivationPlan& p) {
    try {
      enumerate_derivations(p, SearchBudget{}, true);
      FAIL("expected BadProblem");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::BadProblem);
    }
  };

  DerivationPlan marked = plan;
  marked.problem.frame = wrap_primary_at(plan.problem.frame, {0, 1, 0, 1});
  expect_bad(marked);

  DerivationPlan bad_hole = plan;
  bad_hole.problem.clauses[0].hole = {-1, {0, 1}}; // not an application of P
  expect_bad(bad_hole);

  DerivationPlan bad_primary = plan;
  bad_primary.problem.clauses[0].primaries = {{1}}; // outside the source
  expect_bad(bad_primary);

  DerivationPlan dup = plan;
  dup.problem.clauses.push_back(plan.problem.clauses[0]);
  expect_bad(dup);

  DerivationPlan no_np = plan;
  no_np.problem.clauses[0].parallels = {{nullptr, george, "x"}}; // no such assumption
  expect_bad(no_np);

  DerivationPlan bind = plan;
  bind.assumptions.push_back({Assumption::bind("x"), {{}}});
  expect_bad(bind);

  DerivationPlan bad_det = plan;
  bad_det.assumptions.push_back(
      {Assumption::quant(person, "x", A(person, {V("x", E())})), {{}}});
  expect_bad(bad_det);

  DerivationPlan bad_site = plan;
  bad_site.assumptions.push_back(
      {Assumption::quant(every(), "x", A(person, {V("x", E())})), {{0, 1, 0, 1}}});
  expect_bad(bad_site); // entity-typed site cannot take a quantifier
}
