#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cac/term.hpp"

using namespace cac;

namespace {
Term nat() { return Term::symb("nat"); }
Var ox(const char* n) { return Var{n, SortTag::Star}; }
Var px(const char* n) { return Var{n, SortTag::Box}; }
}  // namespace

TEST_CASE("alpha equivalence") {
  // [x:nat]x vs [y:nat]y
  Term a = Term::abs(ox("x"), nat(), Term::var(ox("x")));
  Term b = Term::abs(ox("y"), nat(), Term::var(ox("y")));
  CHECK(alpha_eq(a, b));

  // free variables are rigid
  CHECK_FALSE(alpha_eq(Term::var(ox("x")), Term::var(ox("y"))));

  // (x:*)(y:x)y vs (a:*)(b:a)b -- nested dependent renaming
  auto mk = [](const char* X, const char* Y) {
    Var vx = px(X), vy = ox(Y);
    return Term::prod(vx, Term::star(), Term::prod(vy, Term::var(vx), Term::var(vy)));
  };
  CHECK(alpha_eq(mk("X", "y"), mk("A", "b")));

  // sort tags matter: a Box-sorted variable differs from a Star-sorted one
  CHECK_FALSE(alpha_eq(Term::var(px("x")), Term::var(ox("x"))));
}

TEST_CASE("substitution") {
  Term x = Term::var(ox("x")), y = Term::var(ox("y")), zero = Term::symb("0");
  Term plus_xy = Term::app(Term::app(Term::symb("plus"), x), y);
  Subst th;
  th.bind(ox("x"), zero);
  // x+y {x->0} = 0+y
  Term r = substitute(plus_xy, th);
  CHECK(alpha_eq(r, Term::app(Term::app(Term::symb("plus"), zero), y)));

  // bound occurrences are untouched
  Term id = Term::abs(ox("x"), nat(), x);
  CHECK(alpha_eq(substitute(id, th), id));

  // capture avoidance: [y:T](x y) {x->y} renames the binder
  Term t = Term::abs(ox("y"), nat(), Term::app(x, y));
  Subst th2;
  th2.bind(ox("x"), y);
  Term u = substitute(t, th2);
  REQUIRE(u.is(TermKind::Abs));
  CHECK(u.var_ref() != ox("y"));  // binder renamed
  REQUIRE(u.body().is(TermKind::App));
  CHECK(alpha_eq(u.body().fun(), y));                      // the substituted free y
  CHECK(u.body().arg().var_ref() == u.var_ref());          // still the bound one

  // identity substitution is alpha-stable
  CHECK(alpha_eq(substitute(t, Subst{}), t));
}

TEST_CASE("positions, subterm and replacement") {
  Term f = Term::symb("f"), a = Term::symb("a"), b = Term::symb("b");
  Term fab = Term::app(Term::app(f, a), b);
  // f a b at position 2 is b
  CHECK(alpha_eq(subterm_at(fab, Position({2})), b));
  // epsilon is the whole term
  CHECK(alpha_eq(subterm_at(fab, Position::root()), fab));
  // replace_at(s 0, 2, s 0) = s (s 0)
  Term s0 = Term::app(Term::symb("s"), Term::symb("0"));
  Term ss0 = replace_at(s0, Position({2}), s0);
  CHECK(alpha_eq(ss0, Term::app(Term::symb("s"), s0)));

  // round-trip laws
  Position p({1, 2});
  CHECK(alpha_eq(replace_at(fab, p, subterm_at(fab, p)), fab));
  CHECK(alpha_eq(subterm_at(replace_at(fab, p, b), p), b));

  CHECK_FALSE(valid_position(a, Position({1})));
  CHECK_THROWS_AS((void)subterm_at(a, Position({1})), PositionError);

  CHECK(Position({1, 2, 1}).to_string() == "1.2.1");
  CHECK(Position::root().to_string() == "");
}

TEST_CASE("spine view") {
  Term f = Term::symb("f"), a = Term::symb("a"), b = Term::symb("b");
  Term fab = Term::app(Term::app(f, a), b);
  Spine sp = spine(fab);
  CHECK(sp.head.is_symb("f"));
  REQUIRE(sp.args.size() == 2);
  CHECK(alpha_eq(sp.args[0], a));
  CHECK(alpha_eq(sp.args[1], b));
  CHECK(alpha_eq(make_spine(sp.head, sp.args), fab));
  // i-th of n arguments sits at 1^(n-i).2
  CHECK(spine_arg_position(2, 1) == Position({1, 2}));
  CHECK(spine_arg_position(2, 2) == Position({2}));
}

TEST_CASE("free variables") {
  Term x = Term::var(ox("x")), y = Term::var(ox("y"));
  Term t = Term::abs(ox("x"), nat(), Term::app(x, y));
  CHECK(free_vars(t) == std::set<Var>{ox("y")});
  CHECK(free_vars(Term::symb("0")).empty());
  // (A:*) A -> A is closed
  Var A = px("A");
  Term poly = Term::prod(A, Term::star(), Term::arrow(Term::var(A), Term::var(A)));
  CHECK(free_vars(poly).empty());
  // sort filter
  Term mix = Term::app(Term::var(px("P")), x);
  CHECK(free_vars(mix, SortTag::Box) == std::set<Var>{px("P")});
  CHECK(free_vars(mix, SortTag::Star) == std::set<Var>{ox("x")});
  CHECK(count_var(Term::app(x, x), ox("x")) == 2);
}

TEST_CASE("signed positions") {
  MonMap mon;
  // Pos+(x) = {eps}, Pos-(x) = {}
  CHECK(signed_positions(Term::var(ox("x")), +1, mon) ==
        std::set<Position>{Position::root()});
  CHECK(signed_positions(Term::var(ox("x")), -1, mon).empty());

  // nat => nat: {2} positive, {1} negative
  Term arr = Term::arrow(nat(), nat());
  CHECK(signed_positions(arr, +1, mon) == std::set<Position>{Position({2})});
  CHECK(signed_positions(arr, -1, mon) == std::set<Position>{Position({1})});

  // list A with Mon(list) = {1}: head position and the parameter occurrence
  mon["list"] = {1};
  Term listA = Term::app(Term::symb("list"), Term::var(px("A")));
  CHECK(signed_positions(listA, +1, mon) ==
        std::set<Position>{Position({1}), Position({2})});

  // sign exclusivity and containment in Pos(t)
  for (const Term& t : {arr, listA, Term::arrow(arr, nat())}) {
    auto plus = signed_positions(t, +1, mon);
    auto minus = signed_positions(t, -1, mon);
    for (const Position& p : plus) {
      CHECK(valid_position(t, p));
      CHECK_FALSE(minus.count(p));
    }
    for (const Position& p : minus) CHECK(valid_position(t, p));
  }
}

TEST_CASE("algebraic terms") {
  Term x = Term::var(ox("x")), y = Term::var(ox("y")), z = Term::var(ox("z"));
  // app A (cons A' x l) l'  -- symbol-headed spines of variables
  Term t = Term::app(
      Term::app(Term::app(Term::symb("app"), Term::var(px("A"))),
                Term::app(Term::app(Term::app(Term::symb("cons"), Term::var(px("A'"))), x), y)),
      z);
  CHECK(is_algebraic(t));
  CHECK_FALSE(is_algebraic(Term::abs(ox("x"), nat(), x)));
  // spine headed by a variable
  CHECK_FALSE(is_algebraic(Term::app(x, Term::app(y, z))));
  CHECK_FALSE(is_algebraic(Term::star()));
}

TEST_CASE("occurrences and helpers") {
  Term t = Term::app(Term::app(Term::symb("plus"), Term::var(ox("x"))),
                     Term::app(Term::symb("s"), Term::var(ox("x"))));
  CHECK(occurs_symbol(t, "s"));
  CHECK_FALSE(occurs_symbol(t, "times"));
  CHECK(symbols_of(t) == std::set<std::string>{"plus", "s"});
  CHECK(var_positions(t, ox("x")).size() == 2);
  CHECK(symbol_positions(t, "plus").size() == 1);
  Var fx = fresh_var(ox("x"), {ox("x"), ox("x'")});
  CHECK(fx != ox("x"));
  CHECK(fx != ox("x'"));
}

TEST_CASE("printing") {
  Term id = Term::abs(px("A"), Term::star(),
                      Term::abs(ox("x"), Term::var(px("A")), Term::var(ox("x"))));
  CHECK(to_string(id) == "[A : *] [x : A] x");
  CHECK(to_string(Term::box()) == "[]");
}
