#include "cac/rules.hpp"

#include <algorithm>
#include <deque>

namespace cac {

namespace {
const SymbolDecl* head_decl(const Signature& sig, const Rule& r) {
  return sig.find(r.head);
}

std::string sort_name(SortTag s) { return s == SortTag::Box ? "[]" : "*"; }
}  // namespace

Subst rule_gamma(const Signature& sig, const Rule& r) {
  Subst gamma;
  const SymbolDecl* d = head_decl(sig, r);
  if (!d) return gamma;
  for (size_t i = 0; i < r.lhs_args.size() && i < d->formals.size(); ++i)
    gamma.bind(d->formals[i].first, r.lhs_args[i]);
  return gamma;
}

Term rule_lhs_type(const Signature& sig, const Rule& r) {
  const SymbolDecl* d = head_decl(sig, r);
  if (!d) throw TypeError{"unknown head symbol " + r.head};
  if (r.lhs_args.size() > d->formals.size())
    throw TypeError{"rule " + r.name + " over-applies its head symbol"};
  // U for a partial application is the remaining product tail
  Term U = d->output;
  for (size_t i = d->formals.size(); i-- > r.lhs_args.size();)
    U = Term::prod(d->formals[i].first, d->formals[i].second, U);
  return substitute(substitute(U, rule_gamma(sig, r)), r.rho);
}

RuleLevel rule_level(const Signature& sig, const Rule& r) {
  const SymbolDecl* d = head_decl(sig, r);
  return (d && d->sort == SortTag::Box) ? RuleLevel::Type : RuleLevel::Object;
}

namespace {
SyntacticResult syntacticfail(std::string why) {
  return SyntacticResult{Verdict::fails(std::move(why)), false, false};
}
}  // namespace

SyntacticResult syntactic_check(const Signature& sig, const Rule& r) {
  const SymbolDecl* d = head_decl(sig, r);
  if (!d) return syntacticfail("unknown head symbol " + r.head);
  if (r.lhs_args.size() > d->formals.size())
    return syntacticfail("left hand-side applies " + r.head + " to " +
                         std::to_string(r.lhs_args.size()) + " arguments but its type has " +
                         std::to_string(d->formals.size()));
  Term l = r.lhs();
  if (!is_algebraic(l))
    return syntacticfail("left hand-side " + to_string(l) + " is not algebraic");

  std::set<Var> fv_l = free_vars(l);
  for (const Var& y : free_vars(r.rhs))
    if (!fv_l.count(y))
      return syntacticfail("variable " + y.name +
                           " of the right hand-side does not occur in the left hand-side");
  for (const auto& [x, t] : r.rho.entries()) {
    (void)t;
    if (!fv_l.count(x))
      return syntacticfail("rho binds " + x.name +
                           " which does not occur in the left hand-side");
    if (r.env.declares(x))
      return syntacticfail("rho binds " + x.name + " which is declared in the environment");
  }

  SyntacticResult res{Verdict::holds(), true, false};
  for (const Var& x : fv_l) {
    size_t nl = count_var(l, x);
    if (nl > 1) res.left_linear = false;
    if (count_var(r.rhs, x) > nl) res.duplicating = true;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Accessibility

std::vector<TypedPair> accessible_children(const Signature& sig, const Subst& rho,
                                           const Term& t, const Term& T) {
  std::vector<TypedPair> out;
  Spine sp = spine(t);
  if (!sp.head.is(TermKind::Symb)) return out;
  const SymbolDecl* d = sig.find(sp.head.symb_name());
  if (!d || sp.args.size() != d->formals.size()) return out;
  auto C = sig.const_pred_output(sp.head.symb_name());
  if (!C) return out;

  // T rho must be the (instantiated) canonical output C vgamma rho
  Term canon;
  try {
    canon = canonical_type(sig, t);
  } catch (const TypeError&) {
    return out;
  }
  if (!alpha_eq(substitute(T, rho), substitute(canon, rho))) return out;

  // no predicate equivalent to C may occur in the instantiated arguments
  for (const Term& u : sp.args)
    for (const std::string& D : symbols_of(substitute(u, rho)))
      if (sig.is_const_predicate(D) && sig.prec.equiv(D, *C)) return out;

  Subst gamma;
  for (size_t i = 0; i < sp.args.size(); ++i) gamma.bind(d->formals[i].first, sp.args[i]);
  for (int j : sig.acc(sp.head.symb_name())) {
    if (j < 1 || j > static_cast<int>(sp.args.size())) continue;
    out.push_back(TypedPair{sp.args[static_cast<size_t>(j) - 1],
                            substitute(d->formals[static_cast<size_t>(j) - 1].second, gamma)});
  }
  return out;
}

bool accessible(const Signature& sig, const Subst& rho, const Term& t, const Term& T,
                const Term& u, const Term& U) {
  for (const TypedPair& c : accessible_children(sig, rho, t, T))
    if (alpha_eq(c.term, u) &&
        alpha_eq(substitute(c.type, rho), substitute(U, rho)))
      return true;
  return false;
}

bool accessible_star(const Signature& sig, const Subst& rho, const TypedPair& from,
                     const TypedPair& to, bool at_least_one_step) {
  auto matches = [&](const TypedPair& p) {
    return alpha_eq(p.term, to.term) &&
           alpha_eq(substitute(p.type, rho), substitute(to.type, rho));
  };
  if (!at_least_one_step && matches(from)) return true;
  // terms shrink strictly along accessibility steps, so plain BFS terminates
  std::deque<TypedPair> queue{from};
  while (!queue.empty()) {
    TypedPair cur = queue.front();
    queue.pop_front();
    for (const TypedPair& c : accessible_children(sig, rho, cur.term, cur.type)) {
      if (matches(c)) return true;
      queue.push_back(c);
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Well-formedness and S3/S4/S5

Verdict well_formed_check(const Signature& sig, const RewriteSystem& conv, const Rule& r,
                          Fuel& fuel) {
  SyntacticResult syn = syntactic_check(sig, r);
  if (!syn.verdict.is_holds()) return syn.verdict;
  const SymbolDecl* d = head_decl(sig, r);
  try {
    check_env(sig, conv, r.env, fuel);
    Term lrho = substitute(r.lhs(), r.rho);
    Term U = rule_lhs_type(sig, r);
    Verdict typed = check(sig, conv, r.env, lrho, U, fuel);
    if (!typed.is_holds())
      return Verdict{typed.tag, "instantiated left hand-side: " + typed.reason};
  } catch (const TypeError& e) {
    return Verdict::fails("environment: " + e.message);
  } catch (const FuelExhausted& e) {
    return Verdict::undecided("fuel exhausted during " + e.where);
  }

  Subst gamma = rule_gamma(sig, r);
  for (const auto& [x, xT] : r.env.bindings()) {
    bool found = false;
    for (size_t i = 0; i < r.lhs_args.size() && !found; ++i) {
      TypedPair root{r.lhs_args[i], substitute(d->formals[i].second, gamma)};
      found = accessible_star(sig, r.rho, root, TypedPair{Term::var(x), xT});
    }
    if (!found)
      return Verdict::fails("variable " + x.name +
                            " is not accessible from any left hand-side argument");
  }
  return Verdict::holds();
}

Verdict s3_check(const Signature& sig, const RewriteSystem& conv, const Rule& r,
                 Fuel& fuel) {
  try {
    check_env(sig, conv, r.env, fuel);
    Term U = rule_lhs_type(sig, r);
    Verdict v = check(sig, conv, r.env, r.rhs, U, fuel);
    if (v.is_holds())
      return Verdict::holds("right hand-side has type " + to_string(U));
    return Verdict{v.tag, "right hand-side: " + v.reason};
  } catch (const TypeError& e) {
    return Verdict::fails("environment: " + e.message);
  } catch (const FuelExhausted& e) {
    return Verdict::undecided("fuel exhausted during " + e.where);
  }
}

Verdict s4_check(const Signature& sig, const Rule& r) {
  Term l = r.lhs();
  bool used_rho = false;
  for (const auto& [x, xT] : r.env.bindings()) {
    std::vector<Position> ps = var_positions(l, x);
    if (ps.empty())
      return Verdict::fails("variable " + x.name + " does not occur in the left hand-side");
    bool found = false;
    for (const Position& p : ps) {
      Term tau;
      try {
        tau = derived_type(sig, l, p);
      } catch (const TypeError&) {
        continue;  // position not of the derived-type shape
      }
      if (alpha_eq(tau, xT)) {
        found = true;
        break;
      }
      if (alpha_eq(substitute(tau, r.rho), substitute(xT, r.rho))) {
        found = true;
        used_rho = true;
        break;
      }
    }
    if (!found)
      return Verdict::fails("no occurrence of " + x.name +
                            " has derived type " + to_string(xT) +
                            " (sort " + sort_name(x.sort) + "), even modulo rho");
  }
  return used_rho ? Verdict::holds("witnesses found (some modulo rho)")
                  : Verdict::holds("every environment variable has a literal derived-type witness");
}

// ---------------------------------------------------------------------------
// S5: the inversion constraints of a typable instance of the left hand-side
// must force the rho bindings.

namespace {
struct ConstraintSet {
  std::vector<std::pair<Term, Term>> eqs;
  bool incomplete = false;  // some subterm yielded no usable constraint
};

// Collect (canonical type, expected derived type) pairs down the lhs spine.
void collect_constraints(const Signature& sig, const Term& t, const Term& expected,
                         ConstraintSet& cs) {
  if (t.is(TermKind::Var)) return;  // the instance may give it any compatible type
  Spine sp = spine(t);
  if (!sp.head.is(TermKind::Symb)) {
    cs.incomplete = true;
    return;
  }
  const SymbolDecl* d = sig.find(sp.head.symb_name());
  if (!d || sp.args.size() != d->formals.size()) {
    cs.incomplete = true;
    return;
  }
  Term canon = canonical_type(sig, t);
  if (is_algebraic(canon) && is_algebraic(expected)) {
    if (!alpha_eq(canon, expected)) cs.eqs.emplace_back(canon, expected);
  } else if (!alpha_eq(canon, expected)) {
    cs.incomplete = true;
  }
  Subst gamma;
  for (size_t i = 0; i < sp.args.size(); ++i) gamma.bind(d->formals[i].first, sp.args[i]);
  for (size_t i = 0; i < sp.args.size(); ++i)
    collect_constraints(sig, sp.args[i], substitute(d->formals[i].second, gamma), cs);
}
}  // namespace

Verdict s5_check(const Signature& sig, const Rule& r) {
  if (r.rho.empty()) return Verdict::holds("rho is empty");
  const SymbolDecl* d = head_decl(sig, r);
  if (!d) return Verdict::fails("unknown head symbol " + r.head);

  ConstraintSet cs;
  Subst gamma = rule_gamma(sig, r);
  // duplicated variables equate their expected types as well
  std::map<Var, Term> first_expected;
  for (size_t i = 0; i < r.lhs_args.size(); ++i) {
    Term expected = substitute(d->formals[i].second, gamma);
    collect_constraints(sig, r.lhs_args[i], expected, cs);
    if (r.lhs_args[i].is(TermKind::Var)) {
      const Var& x = r.lhs_args[i].var_ref();
      auto it = first_expected.find(x);
      if (it == first_expected.end())
        first_expected.emplace(x, expected);
      else if (is_algebraic(expected) && is_algebraic(it->second))
        cs.eqs.emplace_back(it->second, expected);
    }
  }

  auto soften = [&](std::string why) {
    return r.assume_s5 ? Verdict::assumed(std::move(why)) : Verdict::undecided(std::move(why));
  };

  // Solve all constraints at once by packing them into a tuple.
  Subst sigma;
  if (!cs.eqs.empty()) {
    std::vector<Term> lefts, rights;
    for (auto& [a, b] : cs.eqs) {
      lefts.push_back(a);
      rights.push_back(b);
    }
    auto mgu = unify_algebraic(make_spine(Term::symb("#tuple"), lefts),
                               make_spine(Term::symb("#tuple"), rights));
    if (!mgu)
      return soften("the typability constraints of the left hand-side are unsatisfiable");
    sigma = *mgu;
  }

  for (const auto& [x, xr] : r.rho.entries()) {
    Term xs = substitute(Term::var(x), sigma);
    Term xrs = substitute(xr, sigma);
    if (alpha_eq(xs, Term::var(x)) && !alpha_eq(xrs, Term::var(x)))
      return soften("the constraints leave " + x.name + " unconstrained but rho binds it" +
                    (cs.incomplete ? " (some subterms gave no constraint)" : ""));
    if (!alpha_eq(xs, xrs))
      return soften("the most general solution maps " + x.name + " to " + to_string(xs) +
                    " but rho maps it to " + to_string(xrs));
  }
  return Verdict::holds("the typability constraints force every rho binding");
}

}  // namespace cac
