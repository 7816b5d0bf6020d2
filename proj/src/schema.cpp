#include "cac/schema.hpp"

#include <algorithm>
#include <deque>

#include "cac/typing.hpp"

namespace cac {

bool typed_pair_eq(const Subst& rho, const TypedPair& a, const TypedPair& b) {
  return alpha_eq(a.term, b.term) &&
         alpha_eq(substitute(a.type, rho), substitute(b.type, rho));
}

bool multiset_gt(const PairRel& gt, const PairRel& eq, std::vector<TypedPair> lhs,
                 std::vector<TypedPair> rhs) {
  // cancel equal elements pairwise
  for (auto it = rhs.begin(); it != rhs.end();) {
    auto jt = std::find_if(lhs.begin(), lhs.end(),
                           [&](const TypedPair& l) { return eq(l, *it); });
    if (jt != lhs.end()) {
      lhs.erase(jt);
      it = rhs.erase(it);
    } else {
      ++it;
    }
  }
  if (lhs.empty()) return false;
  for (const TypedPair& u : rhs) {
    bool dominated = false;
    for (const TypedPair& t : lhs)
      if (gt(t, u)) {
        dominated = true;
        break;
      }
    if (!dominated) return false;
  }
  return true;
}

namespace {
std::vector<TypedPair> slot_select(const std::vector<int>& slot,
                                   const std::vector<TypedPair>& v, bool& ok) {
  std::vector<TypedPair> out;
  for (int k : slot) {
    if (k < 1 || k > static_cast<int>(v.size())) {
      ok = false;
      return out;
    }
    out.push_back(v[static_cast<size_t>(k) - 1]);
  }
  ok = true;
  return out;
}

bool multiset_eq(const PairRel& eq, std::vector<TypedPair> lhs, std::vector<TypedPair> rhs) {
  if (lhs.size() != rhs.size()) return false;
  for (const TypedPair& u : rhs) {
    auto jt = std::find_if(lhs.begin(), lhs.end(),
                           [&](const TypedPair& l) { return eq(l, u); });
    if (jt == lhs.end()) return false;
    lhs.erase(jt);
  }
  return lhs.empty();
}

// all types V with from |>^+_rho x:V, for a variable target term
std::vector<Term> accessible_plus_types(const Signature& sig, const Subst& rho,
                                        const TypedPair& from, const Term& target) {
  std::vector<Term> out;
  std::deque<TypedPair> queue{from};
  while (!queue.empty()) {
    TypedPair cur = queue.front();
    queue.pop_front();
    for (const TypedPair& c : accessible_children(sig, rho, cur.term, cur.type)) {
      if (alpha_eq(c.term, target)) out.push_back(c.type);
      queue.push_back(c);
    }
  }
  return out;
}

// sub-sequence of the arguments of a constant predicate at its box-sorted
// parameter positions
std::vector<Term> predicate_args(const Signature& sig, const std::string& C,
                                 const std::vector<Term>& args) {
  std::vector<Term> out;
  const SymbolDecl* d = sig.find(C);
  if (!d) return out;
  for (size_t j = 0; j < args.size() && j < d->formals.size(); ++j)
    if (d->formals[j].first.sort == SortTag::Box) out.push_back(args[j]);
  return out;
}

bool class_occurs(const Signature& sig, const std::string& C, const Term& t) {
  for (const std::string& D : symbols_of(t))
    if (sig.is_const_predicate(D) && sig.prec.equiv(D, C)) return true;
  return false;
}
}  // namespace

bool sp_arg_gt(const Signature& sig, const Rule& r, const TypedPair& tp,
               const TypedPair& up) {
  // t = g t... fully applied, g : (x:T...)C v..., no D =_C C in v gamma rho
  Spine st = spine(tp.term);
  if (!st.head.is(TermKind::Symb)) return false;
  const SymbolDecl* dg = sig.find(st.head.symb_name());
  if (!dg || st.args.size() != dg->formals.size()) return false;
  Spine out_g = spine(dg->output);
  if (!out_g.head.is(TermKind::Symb)) return false;
  std::string C = out_g.head.symb_name();
  if (!sig.is_const_predicate(C)) return false;
  Subst gamma_t;
  for (size_t i = 0; i < st.args.size(); ++i) gamma_t.bind(dg->formals[i].first, st.args[i]);
  std::vector<Term> v_inst;
  for (const Term& v : out_g.args) {
    Term vi = substitute(substitute(v, gamma_t), r.rho);
    if (class_occurs(sig, C, vi)) return false;
    v_inst.push_back(vi);
  }

  // u = x u... with x in dom(Gamma)
  Spine su = spine(up.term);
  if (!su.head.is(TermKind::Var)) return false;
  const Var& x = su.head.var_ref();
  const Term* xT = r.env.lookup(x);
  if (!xT) return false;

  // x Gamma = (y:U...)C' w... with C' in the class of C, delta = {y -> u...}
  std::vector<std::pair<Var, Term>> ys;
  Term xout;
  decompose_product(*xT, ys, xout);
  if (su.args.size() != ys.size()) return false;
  Spine sx = spine(xout);
  if (!sx.head.is(TermKind::Symb)) return false;
  std::string C2 = sx.head.symb_name();
  if (!sig.is_const_predicate(C2) || !sig.prec.equiv(C2, C)) return false;
  Subst delta;
  for (size_t i = 0; i < ys.size(); ++i) delta.bind(ys[i].first, su.args[i]);

  // U rho = C' w delta, no D =_C C in U... delta
  Term want = substitute(xout, delta);
  if (!alpha_eq(substitute(up.type, r.rho), want)) return false;
  for (const auto& [y, U] : ys) {
    (void)y;
    if (class_occurs(sig, C, substitute(U, delta))) return false;
  }

  // t:T |>+ x:V with V rho = x Gamma
  bool linked = false;
  for (const Term& V : accessible_plus_types(sig, r.rho, tp, Term::var(x)))
    if (alpha_eq(substitute(V, r.rho), *xT)) {
      linked = true;
      break;
    }
  if (!linked) return false;

  // predicate arguments must agree: v gamma rho |_C = w delta |_C
  std::vector<Term> w_inst;
  for (const Term& w : sx.args) w_inst.push_back(substitute(w, delta));
  std::vector<Term> lv = predicate_args(sig, C, v_inst);
  std::vector<Term> rw = predicate_args(sig, C2, w_inst);
  if (lv.size() != rw.size()) return false;
  for (size_t i = 0; i < lv.size(); ++i)
    if (!alpha_eq(lv[i], rw[i])) return false;
  return true;
}

bool status_compare(const Status& st, const std::function<PairRel(int)>& base_for_slot,
                    const PairRel& eq, const std::vector<TypedPair>& lhs,
                    const std::vector<TypedPair>& rhs) {
  for (size_t i = 0; i < st.slots.size(); ++i) {
    bool okl = false, okr = false;
    std::vector<TypedPair> ls = slot_select(st.slots[i], lhs, okl);
    std::vector<TypedPair> rs = slot_select(st.slots[i], rhs, okr);
    if (!okl || !okr) return false;
    PairRel gt = base_for_slot(static_cast<int>(i) + 1);
    if (multiset_gt(gt, eq, ls, rs)) return true;
    if (!multiset_eq(eq, ls, rs)) return false;
  }
  return false;
}

bool args_gt(const Signature& sig, const Rule& r, const std::vector<TypedPair>& lhs,
             const std::vector<TypedPair>& rhs) {
  Status st = sig.status_of(r.head);
  SPInfo sp = strictly_positive_positions(sig, r.head);
  PairRel eq = [&](const TypedPair& a, const TypedPair& b) {
    return typed_pair_eq(r.rho, a, b);
  };
  auto base = [&](int slot) -> PairRel {
    if (sp.slots.count(slot))
      return [&sig, &r](const TypedPair& a, const TypedPair& b) {
        return sp_arg_gt(sig, r, a, b);
      };
    return [&sig, &r](const TypedPair& a, const TypedPair& b) {
      return accessible_star(sig, r.rho, a, b, /*at_least_one_step=*/true);
    };
  };
  return status_compare(st, base, eq, lhs, rhs);
}

// ---------------------------------------------------------------------------
// Computability closure

namespace {
struct CCtx {
  const Signature& sig;
  const RewriteSystem& conv;
  const Rule& rule;
  std::set<Var> lhs_fv;
  std::vector<TypedPair> lhs_pairs;  // x gamma : T gamma over all formals of f
  Fuel& fuel;
};

struct CCError {
  std::string message;
};

Term whnf_cc(CCtx& ctx, const Term& t) {
  WhnfResult w = weak_head_normalize(ctx.conv, WhnfMode::BetaR, t, ctx.fuel);
  if (!w.complete) throw FuelExhausted{"weak-head normalization in the closure"};
  return w.term;
}

Term infer_cc(CCtx& ctx, const Environment& delta, const Term& t);

void check_cc(CCtx& ctx, const Environment& delta, const Term& t, const Term& T) {
  Term got = infer_cc(ctx, delta, t);
  if (T.is_sort(SortTag::Box)) {
    if (got.is_sort(SortTag::Box)) return;
    throw CCError{to_string(t) + " has type " + to_string(got) + ", not []"};
  }
  Verdict v = convertible(ctx.conv, T, got, ctx.fuel);
  if (v.is_undecided()) throw FuelExhausted{"conversion in the closure"};
  if (!v.is_holds())
    throw CCError{to_string(t) + " has type " + to_string(got) +
                  " which is not convertible to " + to_string(T)};
}

// binders must use variables outside FV(l) and dom(Delta); rename when needed
Var cc_binder(const CCtx& ctx, const Environment& delta, const Var& x) {
  std::set<Var> avoid = ctx.lhs_fv;
  for (const auto& [y, T] : delta.bindings()) {
    (void)T;
    avoid.insert(y);
  }
  for (const auto& [y, T] : ctx.rule.env.bindings()) {
    (void)T;
    avoid.insert(y);
  }
  if (!avoid.count(x)) return x;
  return fresh_var(x, avoid);
}

Term infer_cc_spine(CCtx& ctx, const Environment& delta, const Term& t) {
  Spine sp = spine(t);
  const std::string& f = ctx.rule.head;
  if (sp.head.is(TermKind::Symb)) {
    const std::string& g = sp.head.symb_name();
    const SymbolDecl* dg = ctx.sig.find(g);
    if (!dg) throw CCError{"unknown symbol " + g};
    if (ctx.sig.prec.equiv(g, f)) {
      // (symb=): g must be fully applied and its arguments smaller than the
      // left hand-side arguments in the argument ordering
      if (sp.args.size() != dg->formals.size())
        throw CCError{"recursive call " + to_string(t) + ": " + g +
                      " must be applied to exactly " +
                      std::to_string(dg->formals.size()) + " arguments"};
      Subst deltag;
      for (size_t i = 0; i < sp.args.size(); ++i)
        deltag.bind(dg->formals[i].first, sp.args[i]);
      std::vector<TypedPair> callee;
      for (size_t i = 0; i < sp.args.size(); ++i) {
        Term Ui = substitute(dg->formals[i].second, deltag);
        check_cc(ctx, delta, sp.args[i], Ui);
        callee.push_back(TypedPair{sp.args[i], Ui});
      }
      if (!args_gt(ctx.sig, ctx.rule, ctx.lhs_pairs, callee))
        throw CCError{"recursive call " + to_string(t) +
                      " is not smaller than the left hand-side in the argument ordering"};
      return substitute(dg->output, deltag);
    }
    if (!ctx.sig.prec.gt(f, g))
      throw CCError{"symbol " + g + " is not below " + f + " in the precedence"};
    // (symb<) with the standard (app) rule for the arguments
    Term T = dg->type;
    for (const Term& a : sp.args) {
      Term Tw = whnf_cc(ctx, T);
      if (!Tw.is(TermKind::Prod))
        throw CCError{"over-application of " + g + " in " + to_string(t)};
      check_cc(ctx, delta, a, Tw.ann());
      T = subst1(Tw.body(), Tw.var_ref(), a);
    }
    return T;
  }
  // head is a variable or an abstraction: plain (app)
  Term T = infer_cc(ctx, delta, sp.head);
  for (const Term& a : sp.args) {
    Term Tw = whnf_cc(ctx, T);
    if (!Tw.is(TermKind::Prod))
      throw CCError{"application of a non-functional term " + to_string(sp.head) +
                    " in " + to_string(t)};
    check_cc(ctx, delta, a, Tw.ann());
    T = subst1(Tw.body(), Tw.var_ref(), a);
  }
  return T;
}

Term infer_cc(CCtx& ctx, const Environment& delta, const Term& t) {
  if (!ctx.fuel.spend()) throw FuelExhausted{"computability closure"};
  switch (t.kind()) {
    case TermKind::Sort:
      if (t.sort_tag() == SortTag::Star) return Term::box();
      throw CCError{"the sort [] has no type"};
    case TermKind::Var: {
      if (const Term* T = delta.lookup(t.var_ref())) return *T;
      // variables of the rule environment act as constants below f
      if (const Term* T = ctx.rule.env.lookup(t.var_ref())) return *T;
      throw CCError{"variable " + t.var_ref().name + " is not available in the closure"};
    }
    case TermKind::Symb:
    case TermKind::App:
      return infer_cc_spine(ctx, delta, t);
    case TermKind::Abs: {
      Var x = cc_binder(ctx, delta, t.var_ref());
      Term body = alpha_eq(Term::var(x), Term::var(t.var_ref()))
                      ? t.body()
                      : subst1(t.body(), t.var_ref(), Term::var(x));
      Term sa = whnf_cc(ctx, infer_cc(ctx, delta, t.ann()));
      if (!sa.is(TermKind::Sort))
        throw CCError{"annotation " + to_string(t.ann()) + " is not typable by a sort"};
      if (sa.sort_tag() != x.sort)
        throw CCError{"binder " + x.name + " disagrees with its annotation sort"};
      Environment d2 = delta;
      d2.push(x, t.ann());
      Term V = infer_cc(ctx, d2, body);
      if (V.is_sort(SortTag::Box))
        throw CCError{"cannot abstract a kind-valued body: " + to_string(t)};
      return Term::prod(x, t.ann(), V);
    }
    case TermKind::Prod: {
      Var x = cc_binder(ctx, delta, t.var_ref());
      Term body = alpha_eq(Term::var(x), Term::var(t.var_ref()))
                      ? t.body()
                      : subst1(t.body(), t.var_ref(), Term::var(x));
      Term sa = whnf_cc(ctx, infer_cc(ctx, delta, t.ann()));
      if (!sa.is(TermKind::Sort))
        throw CCError{"annotation " + to_string(t.ann()) + " is not typable by a sort"};
      if (sa.sort_tag() != x.sort)
        throw CCError{"binder " + x.name + " disagrees with its annotation sort"};
      Environment d2 = delta;
      d2.push(x, t.ann());
      Term s2 = whnf_cc(ctx, infer_cc(ctx, d2, body));
      if (!s2.is(TermKind::Sort))
        throw CCError{"product body " + to_string(body) + " is not typable by a sort"};
      return s2;
    }
  }
  throw CCError{"unreachable"};
}
}  // namespace

Verdict cc_check(const Signature& sig, const RewriteSystem& conv, const Rule& r,
                 Fuel& fuel) {
  const SymbolDecl* d = sig.find(r.head);
  if (!d) return Verdict::fails("unknown head symbol " + r.head);
  Subst gamma = rule_gamma(sig, r);
  CCtx ctx{sig, conv, r, free_vars(r.lhs()), {}, fuel};
  for (const auto& [x, T] : d->formals)
    ctx.lhs_pairs.push_back(
        TypedPair{substitute(Term::var(x), gamma), substitute(T, gamma)});
  try {
    Term U = rule_lhs_type(sig, r);
    check_cc(ctx, Environment{}, r.rhs, U);
    return Verdict::holds("right hand-side is in the computability closure");
  } catch (const CCError& e) {
    return Verdict::fails(e.message);
  } catch (const TypeError& e) {
    return Verdict::fails(e.message);
  } catch (const FuelExhausted& e) {
    return Verdict::undecided("fuel exhausted during " + e.where);
  }
}

Verdict general_schema_check(const Signature& sig, const RewriteSystem& conv,
                             const Rule& r, Fuel& fuel) {
  Verdict wf = well_formed_check(sig, conv, r, fuel);
  if (!wf.is_holds()) return Verdict{wf.tag, "well-formedness: " + wf.reason};
  Verdict cc = cc_check(sig, conv, r, fuel);
  if (!cc.is_holds()) return Verdict{cc.tag, "closure: " + cc.reason};
  return Verdict::holds("well-formed and the right hand-side is in the closure");
}

}  // namespace cac
