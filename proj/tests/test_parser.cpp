#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cac/parser.hpp"

using namespace cac;

namespace {
std::string data(const char* f) { return std::string(CAC_TEST_DATA_DIR) + "/" + f; }
}  // namespace

TEST_CASE("symbol declarations") {
  System sys = parse_system(
      "symb nat : *\n"
      "symb 0 : nat\n"
      "symb s : nat -> nat\n"
      "symb eq : (A : *) A -> A -> *\n");
  REQUIRE(sys.sig.find("s") != nullptr);
  CHECK(alpha_eq(sys.sig.find("s")->type,
                 Term::arrow(Term::symb("nat"), Term::symb("nat"))));
  CHECK(sys.sig.find("eq")->formals.size() == 3);
  CHECK(sys.sig.find("eq")->sort == SortTag::Box);
  CHECK(sys.sig.find("0")->sort == SortTag::Star);
}

TEST_CASE("term grammar") {
  System sys = parse_system(
      "symb nat : *\n"
      "symb 0 : nat\n"
      "symb s : nat -> nat\n"
      "symb plus : nat -> nat -> nat\n");
  const Signature& sig = sys.sig;

  // arrows are right-associative, application is left-associative
  Term t1 = parse_term_string(sig, "nat -> nat -> nat");
  CHECK(alpha_eq(t1, Term::arrow(Term::symb("nat"),
                                 Term::arrow(Term::symb("nat"), Term::symb("nat")))));
  Term t2 = parse_term_string(sig, "plus (s 0) 0");
  Spine sp = spine(t2);
  CHECK(sp.head.is_symb("plus"));
  CHECK(sp.args.size() == 2);

  // binders and case convention: uppercase = predicate variable
  Term id = parse_term_string(sig, "[A : *] [x : A] x");
  REQUIRE(id.is(TermKind::Abs));
  CHECK(id.var_ref().sort == SortTag::Box);
  CHECK(id.body().var_ref().sort == SortTag::Star);

  Term prod = parse_term_string(sig, "(n : nat) nat");
  CHECK(prod.is(TermKind::Prod));

  CHECK(parse_term_string(sig, "*").is_sort(SortTag::Star));
  CHECK(parse_term_string(sig, "[]").is_sort(SortTag::Box));

  // identifiers may carry primes
  Term pr = parse_term_string(sig, "plus x' x''");
  CHECK(free_vars(pr).size() == 2);
}

TEST_CASE("terms round-trip through the printer") {
  System sys = parse_system_file(data("corpus.cac"));
  for (const auto& r : sys.rules) {
    for (const Term* t : {&r.rhs}) {
      std::string printed = to_string(*t);
      CAPTURE(printed);
      Term back = parse_term_string(sys.sig, printed);
      CHECK(alpha_eq(back, *t));
      // printing is a fixpoint after one round
      CHECK(to_string(back) == printed);
    }
    std::string lhs = to_string(r.lhs());
    CHECK(alpha_eq(parse_term_string(sys.sig, lhs), r.lhs()));
  }
}

TEST_CASE("rules: naming, environments and rho") {
  System sys = parse_system_file(data("corpus.cac"));
  REQUIRE_FALSE(sys.rules.empty());
  CHECK(sys.rules.front().name == "neg#1");

  // defaulted environment: plus x 0 --> x gives x : nat
  const Rule* p1 = nullptr;
  for (const auto& r : sys.rules)
    if (r.name == "plus#1") p1 = &r;
  REQUIRE(p1 != nullptr);
  CHECK(p1->env_defaulted);
  const Term* tx = p1->env.lookup(Var{"x", SortTag::Star});
  REQUIRE(tx != nullptr);
  CHECK(alpha_eq(*tx, Term::symb("nat")));

  // explicit env and rho on the eq rules
  const Rule* e4 = nullptr;
  for (const auto& r : sys.rules)
    if (r.name == "eq#4") e4 = &r;
  REQUIRE(e4 != nullptr);
  CHECK_FALSE(e4->env_defaulted);
  CHECK(e4->rho.size() == 1);
  const Term* ta = e4->rho.lookup(Var{"A", SortTag::Box});
  REQUIRE(ta != nullptr);
  CHECK(alpha_eq(*ta, Term::symb("nat")));
}

TEST_CASE("defaulted environments are dependency-ordered") {
  // l : list n must come after n : nat even though 'l' sorts before 'n'
  System sys = parse_system(
      "symb nat : *\n"
      "symb 0 : nat\n"
      "symb list : nat -> *\n"
      "symb nil : list 0\n"
      "symb len : (n : nat) list n -> nat\n"
      "rule len n l --> n\n");
  const Rule& r = sys.rules.front();
  CHECK(r.env_defaulted);
  const auto& bs = r.env.bindings();
  REQUIRE(bs.size() == 2);
  CHECK(bs[0].first.name == "n");
  CHECK(bs[1].first.name == "l");
  CHECK(alpha_eq(bs[1].second, Term::app(Term::symb("list"), Term::var(bs[0].first))));
}

TEST_CASE("declarations: mon acc prec status") {
  System sys = parse_system_file(data("corpus.cac"));
  CHECK(sys.sig.mon.at("list") == std::set<int>{1});
  CHECK(sys.sig.acc_declared.at("len").empty());
  Status st = sys.sig.status_of("eq");
  REQUIRE(st.slots.size() == 1);
  CHECK(st.slots[0] == std::vector<int>{2, 3});
}

TEST_CASE("parse errors carry locations") {
  auto expect_error = [](const std::string& text, const std::string& needle) {
    try {
      (void)parse_system(text);
      FAIL_CHECK("expected a parse error for: " << text);
    } catch (const ParseError& e) {
      CAPTURE(e.message);
      CHECK(e.message.find(needle) != std::string::npos);
      CHECK(e.line >= 1);
      CHECK(e.col >= 1);
    }
  };
  expect_error("symb nat : *\nsymb nat : *\n", "declared twice");
  expect_error("rule f x --> x\n", "headed by a declared symbol");
  expect_error("symb lex : *\n", "reserved word");
  // case convention: an uppercase binder with an object-level type
  expect_error("symb nat : *\nsymb f : (X : nat) nat\n", "case");
  expect_error("symb nat : $\n", "");

  // pretty() includes the file coordinates
  try {
    (void)parse_system("symb nat : *\nsymb nat : *\n");
  } catch (const ParseError& e) {
    std::string p = e.pretty("input.cac");
    CHECK(p.find("input.cac:2:") == 0);
  }
}

TEST_CASE("every shipped example parses") {
  for (const char* f : {"corpus.cac", "arith.cac", "intquot.cac", "rec.cac",
                        "deplist.cac", "ord.cac", "mendler.cac", "girard.cac",
                        "division.cac", "contex.cac"}) {
    CAPTURE(f);
    CHECK_NOTHROW((void)parse_system_file(data(f)));
  }
}
