#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cac/parser.hpp"
#include "cac/signature.hpp"

using namespace cac;

namespace {
std::string data(const char* f) { return std::string(CAC_TEST_DATA_DIR) + "/" + f; }
}  // namespace

TEST_CASE("declarations and basic queries") {
  System sys = parse_system_file(data("corpus.cac"));
  const Signature& sig = sys.sig;
  REQUIRE(sig.find("cons") != nullptr);
  const SymbolDecl& cons = *sig.find("cons");
  CHECK(cons.formals.size() == 3);
  CHECK(cons.sort == SortTag::Star);       // object-level symbol
  CHECK(sig.find("list")->sort == SortTag::Box);
  CHECK(sig.find("eq")->sort == SortTag::Box);

  CHECK(sig.is_defined("plus"));
  CHECK(sig.is_constant("cons"));
  CHECK(sig.is_const_predicate("nat"));
  CHECK(sig.is_const_predicate("list"));
  CHECK_FALSE(sig.is_const_predicate("eq"));  // defined, hence not constant

  CHECK(sig.const_pred_output("cons") == std::optional<std::string>{"list"});
  CHECK(sig.const_pred_output("plus") == std::optional<std::string>{"nat"});
  CHECK_FALSE(sig.const_pred_output("neg").has_value());  // output is *

  // Acc: declared override wins, else every argument of a constructor-like
  CHECK(sig.acc("len").empty());          // declared acc len = {}
  CHECK(sig.acc("cons") == std::set<int>{1, 2, 3});
  CHECK(sig.mon_of("list") == std::set<int>{1});
}

TEST_CASE("precedence") {
  Precedence p;
  p.declare_gt("times", "plus");
  p.declare_gt("plus", "s");
  p.declare_eq("plus", "plus2");
  REQUIRE_FALSE(p.finalize().has_value());
  CHECK(p.gt("times", "plus"));
  CHECK(p.gt("times", "s"));  // transitivity
  CHECK(p.gt("plus2", "s"));  // through the equivalence
  CHECK(p.equiv("plus", "plus2"));
  CHECK_FALSE(p.gt("s", "times"));
  CHECK(p.ge("plus", "plus2"));

  Precedence bad;
  bad.declare_gt("a", "b");
  bad.declare_gt("b", "a");
  CHECK(bad.finalize().has_value());  // cycle
}

TEST_CASE("corpus inductive structure is admissible") {
  System sys = parse_system_file(data("corpus.cac"));
  sys.sig.augment_prec_from_types();
  REQUIRE_FALSE(sys.sig.prec.finalize().has_value());
  AdmissibilityReport rep = admissible_check(sys.sig);
  CHECK(rep.overall.is_holds());
  for (const auto& e : rep.entries) CHECK(e.verdict.ok(false));
}

TEST_CASE("finitely branching trees are admissible") {
  System sys = parse_system(
      "symb tree : *\n"
      "symb list : *\n"
      "symb nil : list\n"
      "symb node : list -> tree\n"
      "symb cons : tree -> list -> list\n");
  AdmissibilityReport rep = admissible_check(sys.sig);
  CHECK(rep.overall.is_holds());
}

TEST_CASE("non-positive constructor violates I3") {
  System sys = parse_system_file(data("mendler.cac"));
  AdmissibilityReport rep = admissible_check(sys.sig);
  CHECK(rep.overall.is_fails());
  bool found = false;
  for (const auto& e : rep.entries)
    if (e.key == "I3(T,c,1)" && e.verdict.is_fails()) found = true;
  CHECK(found);
}

TEST_CASE("predicate classification") {
  auto load = [&](const char* f) {
    System sys = parse_system_file(data(f));
    sys.sig.augment_prec_from_types();
    REQUIRE_FALSE(sys.sig.prec.finalize().has_value());
    return sys;
  };
  // primitive: first-order dependent lists
  System dl = load("deplist.cac");
  CHECK(classify_predicate(dl.sig, "nat") == PredClass::Primitive);
  CHECK(classify_predicate(dl.sig, "list") == PredClass::Primitive);

  // basic: polymorphic lists (a parameter of predicate type)
  System co = load("corpus.cac");
  CHECK(classify_predicate(co.sig, "nat") == PredClass::Primitive);
  CHECK(classify_predicate(co.sig, "list") == PredClass::Basic);

  // strictly positive but not basic: Brouwer ordinals
  System od = load("ord.cac");
  CHECK(classify_predicate(od.sig, "ord") == PredClass::StrictlyPositive);
  CHECK(classify_predicate(od.sig, "nat") == PredClass::Primitive);

  // not even strictly positive
  System me = load("mendler.cac");
  CHECK(classify_predicate(me.sig, "T") == PredClass::General);
}

TEST_CASE("strictly positive status slots") {
  // plus with status lex (mul x1): the single slot compares nat arguments
  System sys = parse_system(
      "symb nat : *\n"
      "symb 0 : nat\n"
      "symb s : nat -> nat\n"
      "symb plus : nat -> nat -> nat\n"
      "status plus = lex (mul x1)\n"
      "prec plus > s 0\n"
      "rule plus 0 y --> y\n"
      "rule plus (s x) y --> s (plus x y)\n");
  SPInfo sp = strictly_positive_positions(sys.sig, "plus");
  CHECK(sp.slots == std::set<int>{1});
  REQUIRE(sp.witness.count(1));
  CHECK(alpha_eq(sp.witness.at(1), Term::symb("nat")));

  // ordinal addition: slot over x2 of type ord, strictly positive
  System od = parse_system_file(data("ord.cac"));
  SPInfo spa = strictly_positive_positions(od.sig, "add");
  CHECK(spa.slots == std::set<int>{1});
  CHECK(alpha_eq(spa.witness.at(1), Term::symb("ord")));
}

TEST_CASE("default statuses") {
  System sys = parse_system_file(data("ord.cac"));
  // declared status is respected
  Status st = sys.sig.status_of("add");
  REQUIRE(st.slots.size() == 1);
  CHECK(st.slots[0] == std::vector<int>{2});
  CHECK(st.arity() == 2);
  CHECK(st.to_string() == "lex (mul x2)");

  // default: one multiset slot over the constant-predicate arguments
  System ar = parse_system_file(data("arith.cac"));
  Status sle = ar.sig.status_of("le");
  REQUIRE(sle.slots.size() == 1);
  CHECK(sle.slots[0] == std::vector<int>{1, 2});
}

TEST_CASE("structural checks") {
  System sys = parse_system_file(data("corpus.cac"));
  sys.sig.augment_prec_from_types();
  REQUIRE_FALSE(sys.sig.prec.finalize().has_value());
  std::vector<std::pair<std::string, Term>> head_rhs;
  for (const auto& r : sys.rules) head_rhs.emplace_back(r.head, r.rhs);
  CHECK(structural_check(sys.sig, head_rhs).empty());

  // a rhs symbol above the head in the precedence is flagged
  Term bad_rhs = Term::app(Term::app(Term::symb("times"), Term::symb("0")), Term::symb("0"));
  auto errs = structural_check(sys.sig, {{"plus", bad_rhs}});
  CHECK_FALSE(errs.empty());
}
