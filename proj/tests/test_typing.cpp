#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cac/parser.hpp"
#include "cac/typing.hpp"

using namespace cac;

namespace {
std::string data(const char* f) { return std::string(CAC_TEST_DATA_DIR) + "/" + f; }
Term term_of(const System& sys, const std::string& s) { return parse_term_string(sys.sig, s); }
}  // namespace

TEST_CASE("sorts and symbols") {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Environment env;
  Fuel fuel;
  // * : []
  CHECK(alpha_eq(infer(sys.sig, R, env, Term::star(), fuel), Term::box()));
  // [] has no type
  CHECK_THROWS_AS((void)infer(sys.sig, R, env, Term::box(), fuel), TypeError);
  // declared symbols get their declared type
  CHECK(alpha_eq(infer(sys.sig, R, env, Term::symb("0"), fuel), Term::symb("nat")));
  CHECK_THROWS_AS((void)infer(sys.sig, R, env, Term::symb("ghost"), fuel), TypeError);
}

TEST_CASE("polymorphic identity") {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Environment env;
  Fuel fuel;
  Term id = term_of(sys, "[A : *] [x : A] x");
  Term ty = infer(sys.sig, R, env, id, fuel);
  CHECK(alpha_eq(ty, term_of(sys, "(A : *) (x : A) A")));
  // and applying it
  Term applied = term_of(sys, "([A : *] [x : A] x) nat 0");
  CHECK(alpha_eq(infer(sys.sig, R, env, applied, fuel), Term::symb("nat")));
}

TEST_CASE("application typing with dependent instantiation") {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Environment env;
  Fuel fuel;
  Term t = term_of(sys, "app nat (nil nat) (nil nat)");
  CHECK(alpha_eq(infer(sys.sig, R, env, t, fuel), term_of(sys, "list nat")));

  // arity/domain mismatch: a nat where a list is expected
  CHECK_THROWS_AS((void)infer(sys.sig, R, env, term_of(sys, "app nat 0 (nil nat)"), fuel),
                  TypeError);
  // applying a non-function
  CHECK_THROWS_AS((void)infer(sys.sig, R, env, term_of(sys, "0 0"), fuel), TypeError);
}

TEST_CASE("check and conversion") {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Environment env;
  Fuel fuel;
  CHECK(check(sys.sig, R, env, term_of(sys, "0"), term_of(sys, "nat"), fuel).is_holds());
  CHECK(check(sys.sig, R, env, term_of(sys, "0"), term_of(sys, "nat -> nat"), fuel).is_fails());
  // conversion fires through rewriting: len nat (nil nat) = 0 at the type level
  Term l1 = term_of(sys, "nil nat");
  CHECK(check(sys.sig, R, env, l1, term_of(sys, "list nat"), fuel).is_holds());
}

TEST_CASE("conversion uses the rewrite rules inside types") {
  // dependent lists: list (plus 0 n) converts to list n
  System sys = parse_system_file(data("deplist.cac"));
  RewriteSystem R = sys.engine();
  Fuel fuel;
  Environment env;
  Var n{"n", SortTag::Star}, l{"l", SortTag::Star};
  env.push(n, Term::symb("nat"));
  env.push(l, Term::app(Term::symb("list"), Term::var(n)));
  Term target = Term::app(Term::symb("list"),
                          term_of(sys, "plus 0 n"));
  CHECK(check(sys.sig, R, env, Term::var(l), target, fuel).is_holds());
  // but list n does not convert to list (s n)
  Term wrong = Term::app(Term::symb("list"), term_of(sys, "s n"));
  CHECK_FALSE(check(sys.sig, R, env, Term::var(l), wrong, fuel).is_holds());
}

TEST_CASE("environment well-formedness") {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Fuel fuel;
  Environment good;
  good.push(Var{"A", SortTag::Box}, Term::star());
  good.push(Var{"x", SortTag::Star}, Term::var(Var{"A", SortTag::Box}));
  CHECK_NOTHROW(check_env(sys.sig, R, good, fuel));

  Environment bad;  // x : A with A unbound
  bad.push(Var{"x", SortTag::Star}, Term::var(Var{"A", SortTag::Box}));
  CHECK_THROWS_AS(check_env(sys.sig, R, bad, fuel), TypeError);
}

TEST_CASE("classification") {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Environment env;
  Fuel fuel;
  CHECK(classify(sys.sig, R, env, term_of(sys, "0"), fuel) == TermClass::Object);
  CHECK(classify(sys.sig, R, env, term_of(sys, "nat"), fuel) == TermClass::Predicate);
  CHECK(classify(sys.sig, R, env, term_of(sys, "nat -> *"), fuel) == TermClass::Kind);
  CHECK(classify(sys.sig, R, env, Term::box(), fuel) == TermClass::TopSort);
}

TEST_CASE("canonical types") {
  System sys = parse_system_file(data("corpus.cac"));
  // tau-instantiation of the head symbol, no conversion involved
  CHECK(alpha_eq(canonical_type(sys.sig, term_of(sys, "plus x y")), Term::symb("nat")));
  CHECK(alpha_eq(canonical_type(sys.sig, term_of(sys, "nil nat")), term_of(sys, "list nat")));
  Term cons_open = term_of(sys, "cons A x l");
  CHECK(alpha_eq(canonical_type(sys.sig, cons_open),
                 Term::app(Term::symb("list"), Term::var(Var{"A", SortTag::Box}))));
  // over-application of a first-order symbol has no canonical type
  CHECK_THROWS_AS((void)canonical_type(sys.sig, term_of(sys, "0 0")), TypeError);
}

TEST_CASE("derived types of lhs variables") {
  System sys = parse_system_file(data("deplist.cac"));
  // rule app p (cons x n l) q l' : positions inside the lhs determine types
  const Rule* r = nullptr;
  for (const auto& rr : sys.rules)
    if (rr.name == "app#2") r = &rr;
  REQUIRE(r != nullptr);
  Term lhs = r->lhs();
  // x sits at argument 1 of cons, itself argument 2 of app
  Position px = spine_arg_position(4, 2).concat(spine_arg_position(3, 1));
  CHECK(alpha_eq(derived_type(sys.sig, lhs, px), Term::symb("nat")));
  // l at argument 3 of cons has type list n
  Position pl = spine_arg_position(4, 2).concat(spine_arg_position(3, 3));
  CHECK(alpha_eq(derived_type(sys.sig, lhs, pl),
                 Term::app(Term::symb("list"), Term::var(Var{"n", SortTag::Star}))));
}

TEST_CASE("right-hand side shape") {
  System sys = parse_system_file(data("corpus.cac"));
  // object-level algebraic rhs passes
  CHECK(rhs_shape_check(sys.sig, term_of(sys, "s (plus x y)"), RuleLevel::Object).is_holds());
  // kinds are never legal right hand-sides
  CHECK(rhs_shape_check(sys.sig, term_of(sys, "(x : nat) *"), RuleLevel::Object).is_fails());
  CHECK(rhs_shape_check(sys.sig, Term::star(), RuleLevel::Type).is_fails());
  // type-level rhs must be symbol-headed
  CHECK(rhs_shape_check(sys.sig, term_of(sys, "or P Q"), RuleLevel::Type).is_holds());
  CHECK(rhs_shape_check(sys.sig, term_of(sys, "[x : nat] nat"), RuleLevel::Type).is_fails());
}
