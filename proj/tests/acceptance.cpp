// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "cac/conditions.hpp"
#include "cac/parser.hpp"
#include "cac/typing.hpp"

using namespace cac;

namespace {

std::string data(const char* f) { return std::string(CAC_TEST_DATA_DIR) + "/" + f; }

int failures = 0;

void result(int n, const std::string& what, bool ok, const std::string& detail = "") {
  std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << n << ": " << what;
  if (!ok && !detail.empty()) std::cout << " -- " << detail;
  std::cout << "\n";
  if (!ok) ++failures;
}

double run_ms(const std::function<void()>& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

size_t size_of(const Term& t) {
  size_t n = 1;
  for (int i = 1; i <= 2; ++i)
    if (t.has_child(i)) n += size_of(t.child(i));
  return n;
}

// the same sorted random generator as the property suite
struct Gen {
  std::mt19937 rng;
  explicit Gen(unsigned seed) : rng(seed) {}
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }

  Term nat_term(int d) {
    if (d <= 0) return Term::symb("0");
    switch (pick(5)) {
      case 0: return Term::symb("0");
      case 1: return Term::app(Term::symb("s"), nat_term(d - 1));
      case 2: return make_spine(Term::symb("plus"), {nat_term(d - 1), nat_term(d - 1)});
      case 3: return make_spine(Term::symb("times"), {nat_term(d - 1), nat_term(d - 1)});
      default: return make_spine(Term::symb("len"), {Term::symb("nat"), list_term(d - 1)});
    }
  }
  Term list_term(int d) {
    Term nat = Term::symb("nat");
    if (d <= 0) return Term::app(Term::symb("nil"), nat);
    switch (pick(3)) {
      case 0: return Term::app(Term::symb("nil"), nat);
      case 1: return make_spine(Term::symb("cons"), {nat, nat_term(d - 1), list_term(d - 1)});
      default: return make_spine(Term::symb("app"), {nat, list_term(d - 1), list_term(d - 1)});
    }
  }
  Term prop_term(int d) {
    Term nat = Term::symb("nat");
    if (d <= 0) return pick(2) ? Term::symb("top") : Term::symb("bot");
    switch (pick(8)) {
      case 0: return Term::symb("top");
      case 1: return Term::app(Term::symb("neg"), prop_term(d - 1));
      case 2: return make_spine(Term::symb("and"), {prop_term(d - 1), prop_term(d - 1)});
      case 3: return make_spine(Term::symb("or"), {prop_term(d - 1), prop_term(d - 1)});
      case 4: return make_spine(Term::symb("eq"), {nat, nat_term(d - 1), nat_term(d - 1)});
      case 5: return make_spine(Term::symb("in"), {nat, nat_term(d - 1), list_term(d - 1)});
      case 6: return make_spine(Term::symb("incl"), {nat, list_term(d - 1), list_term(d - 1)});
      default: return make_spine(Term::symb("sub"), {nat, list_term(d - 1), list_term(d - 1)});
    }
  }
  Term term(int d) {
    switch (pick(3)) {
      case 0: return nat_term(d);
      case 1: return list_term(d);
      default: return prop_term(d);
    }
  }
};

// ---------------------------------------------------------------------------

void criterion1() {
  bool ok = true;
  std::string why;
  Report rep;
  double ms = run_ms([&] {
    System sys = parse_system_file(data("corpus.cac"));
    ReportOptions opt;
    rep = full_report(sys, opt);
  });
  if (!rep.overall.is_holds()) {
    ok = false;
    why = "overall is not Holds: " + rep.overall.reason;
  }
  for (const auto& e : rep.entries)
    if (!e.informational && !e.verdict.is_holds()) {
      ok = false;
      why = e.key + " is not Holds: " + e.verdict.reason;
      break;
    }
  if (ms >= 5000) {
    ok = false;
    why = "took " + std::to_string(ms) + " ms";
  }
  result(1, "corpus passes every condition with no assumptions, < 5 s", ok, why);
}

void criterion2() {
  struct Case {
    const char* file;
    const char* what;
    std::function<bool(const Report&)> probe;
  };
  std::vector<Case> cases = {
      {"mendler.cac", "A2/I3 non-positive constructor",
       [](const Report& r) {
         const Verdict* v = r.find("A2:I3(T,c,1)");
         return r.overall.is_fails() && v && v->is_fails();
       }},
      {"girard.cac", "A4(b) unsafe polymorphic projection",
       [](const Report& r) {
         const Verdict* v = r.find("A4(b)");
         return r.overall.is_fails() && v && v->is_fails();
       }},
      {"division.cac", "no valid F1/F_omega partition",
       [](const Report& r) {
         const Verdict* v = r.find("A4(a)");
         return r.overall.is_fails() && v && v->is_fails() &&
                v->reason.find("no valid partition") != std::string::npos;
       }},
      {"contex.cac", "A4(a) schema failure with admissible A2",
       [](const Report& r) {
         const Verdict* v = r.find("A4(a)");
         const Verdict* a2 = r.find("A2");
         return r.overall.is_fails() && v && v->is_fails() && a2 && a2->ok(false);
       }}};
  bool ok = true;
  std::string why;
  for (const auto& c : cases) {
    Report rep;
    double ms = run_ms([&] {
      System sys = parse_system_file(data(c.file));
      ReportOptions opt;
      rep = full_report(sys, opt);
    });
    if (!c.probe(rep)) {
      ok = false;
      why = std::string(c.file) + " did not fail with " + c.what;
      break;
    }
    if (ms >= 1000) {
      ok = false;
      why = std::string(c.file) + " took " + std::to_string(ms) + " ms";
      break;
    }
  }
  result(2, "rejection gallery fails with the exact clauses, each < 1 s", ok, why);
}

void criterion3() {
  System sys = parse_system_file(data("arith.cac"));
  RewriteSystem R = sys.engine();
  auto term_of = [&](const char* s) { return parse_term_string(sys.sig, s); };
  bool ok = true;
  std::string why;

  {
    Fuel f{100000};
    auto r = normalize(R, term_of("plus (s (s 0)) (s (s 0))"), f);
    if (!r.complete || !alpha_eq(r.term, term_of("s (s (s (s 0)))")) || r.steps > 10) {
      ok = false;
      why = "2+2 gave " + to_string(r.term) + " in " + std::to_string(r.steps) + " steps";
    }
  }
  {
    Fuel f{100000};
    auto r = normalize(R, term_of("plus n 0"), f);
    if (!r.complete || !alpha_eq(r.term, term_of("n")) || r.steps != 1) {
      ok = false;
      why = "n+0 gave " + to_string(r.term) + " in " + std::to_string(r.steps) + " steps";
    }
  }
  {
    Fuel f{100000};
    auto r = normalize(R, term_of("le (s 0) (s (s 0))"), f);
    if (!r.complete || !alpha_eq(r.term, term_of("true"))) {
      ok = false;
      why = "1<=2 gave " + to_string(r.term);
    }
  }
  {
    auto rs = one_step_reducts(R, term_of("map f (cons x l)"));
    bool found = rs.size() == 1 && alpha_eq(rs[0].term, term_of("cons (f x) (map f l)"));
    if (!found) {
      ok = false;
      why = "map one-step gave " + std::to_string(rs.size()) + " reducts";
    }
  }
  result(3, "computation oracles (2+2, n+0, le, map) match exactly", ok, why);
}

void criterion4() {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Environment env;
  Gen gen(4242);
  int terms = 0, reducts = 0, bad = 0;
  while (terms < 60) {
    Term t = gen.term(3);
    ++terms;
    Fuel fi{100000};
    Term T;
    try {
      T = infer(sys.sig, R, env, t, fi);
    } catch (...) {
      ++bad;
      continue;
    }
    for (const Reduct& r : one_step_reducts(R, t)) {
      ++reducts;
      try {
        Fuel fr{100000};
        Term Tr = infer(sys.sig, R, env, r.term, fr);
        Fuel fc{100000};
        if (!convertible(R, T, Tr, fc).is_holds()) ++bad;
      } catch (...) {
        ++bad;
      }
    }
  }
  bool ok = bad == 0 && terms >= 50 && reducts > 0;
  result(4, "subject reduction on " + std::to_string(terms) + " terms / " +
                std::to_string(reducts) + " reductions, 100% pass",
         ok, std::to_string(bad) + " failures");
}

void criterion5() {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Gen gen(20260823);
  int checked = 0, bad = 0;
  while (checked < 200) {
    Term t = gen.term(4);
    if (size_of(t) > 30) continue;
    ++checked;
    Fuel fa{100000}, fb{100000};
    auto ra = normalize(R, t, fa, Strategy::Innermost);
    auto rb = normalize(R, t, fb, Strategy::Outermost);
    if (!ra.complete || !rb.complete || !alpha_eq(ra.term, rb.term)) ++bad;
  }

  int unjoinable = 0, pairs = 0;
  for (const char* file : {"corpus.cac", "intquot.cac"}) {
    System s2 = parse_system_file(data(file));
    RewriteSystem R2 = s2.engine();
    for (const auto& cp : critical_pairs(R2)) {
      ++pairs;
      Fuel f{1000};
      if (!joinable(R2, cp.left, cp.right, f).is_holds()) ++unjoinable;
    }
  }
  bool ok = bad == 0 && unjoinable == 0 && pairs > 0;
  result(5, "strategy agreement on " + std::to_string(checked) + " terms; " +
                std::to_string(pairs) + " critical pairs joinable within fuel 1000",
         ok, std::to_string(bad) + " disagreements, " + std::to_string(unjoinable) +
                 " unjoinable pairs");
}

void criterion6() {
  System sys = parse_system_file(data("corpus.cac"));
  RewriteSystem R = sys.engine();
  Gen gen(606);
  int incomplete = 0;
  std::vector<Term> terms;
  for (int i = 0; i < 150; ++i) terms.push_back(gen.term(4));
  for (const auto& r : sys.rules) {
    terms.push_back(r.lhs());
    terms.push_back(r.rhs);
  }
  for (const Term& t : terms) {
    Fuel f{100000};
    if (!normalize(R, t, f).complete) ++incomplete;
  }
  result(6, "all " + std::to_string(terms.size()) +
                " corpus terms normalize within fuel 100000",
         incomplete == 0, std::to_string(incomplete) + " ran out of fuel");
}

void criterion7() {
  bool ok = true;
  std::string why;

  // signed positions of nat => nat
  MonMap mon;
  Term arr = Term::arrow(Term::symb("nat"), Term::symb("nat"));
  if (signed_positions(arr, +1, mon) != std::set<Position>{Position({2})} ||
      signed_positions(arr, -1, mon) != std::set<Position>{Position({1})}) {
    ok = false;
    why = "signed_positions(nat => nat)";
  }

  // derived types on the dependent app rule lhs
  System dl = parse_system_file(data("deplist.cac"));
  dl.sig.augment_prec_from_types();
  (void)dl.sig.prec.finalize();
  const Rule* a2 = nullptr;
  for (const auto& r : dl.rules)
    if (r.name == "app#2") a2 = &r;
  if (!a2) {
    ok = false;
    why = "missing rule app#2";
  } else {
    Term lhs = a2->lhs();
    Position px = spine_arg_position(4, 2).concat(spine_arg_position(3, 1));
    Position pl = spine_arg_position(4, 2).concat(spine_arg_position(3, 3));
    Term listn = Term::app(Term::symb("list"), Term::var(Var{"n", SortTag::Star}));
    try {
      if (!alpha_eq(derived_type(dl.sig, lhs, px), Term::symb("nat")) ||
          !alpha_eq(derived_type(dl.sig, lhs, pl), listn)) {
        ok = false;
        why = "derived_type on the app lhs";
      }
    } catch (const TypeError& e) {
      ok = false;
      why = "derived_type threw: " + e.message;
    }
  }

  // predicate classification ladder
  System co = parse_system_file(data("corpus.cac"));
  co.sig.augment_prec_from_types();
  (void)co.sig.prec.finalize();
  System od = parse_system_file(data("ord.cac"));
  od.sig.augment_prec_from_types();
  (void)od.sig.prec.finalize();
  if (classify_predicate(dl.sig, "list") != PredClass::Primitive ||
      classify_predicate(co.sig, "list") != PredClass::Basic ||
      classify_predicate(od.sig, "ord") != PredClass::StrictlyPositive) {
    ok = false;
    why = "classify_predicate ladder";
  }
  result(7, "unit oracles: signed_positions, derived_type, classify_predicate", ok, why);
}

void criterion8() {
  System sys = parse_system_file(data("rec.cac"));
  ReportOptions opt;
  Report rep = full_report(sys, opt);
  bool ok = rep.overall.is_holds();
  std::string why;
  const Verdict* cons = rep.find("consistency");
  if (!cons || !cons->is_holds()) {
    ok = false;
    why = "consistency entry missing or not Holds";
  }
  const Verdict* crec = rep.find("consistency(rec)");
  if (!crec || !crec->is_holds()) {
    ok = false;
    why = "consistency(rec) missing or not Holds";
  }
  Fuel fuel{100000};
  Verdict cd = completely_defined(sys, "rec", fuel);
  if (!cd.is_holds()) {
    ok = false;
    why = "rec is not certified complete over {0, s}: " + cd.reason;
  }
  result(8, "nat/0/s/rec system is consistent, rec complete over {0, s}", ok, why);
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  if (failures) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 8 criteria passed\n";
  return 0;
}
