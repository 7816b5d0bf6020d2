#include "cac/typing.hpp"

namespace cac {

const Term* Environment::lookup(const Var& x) const {
  // later bindings shadow earlier ones (there should be no duplicates)
  for (auto it = bindings_.rbegin(); it != bindings_.rend(); ++it)
    if (it->first == x) return &it->second;
  return nullptr;
}

const char* to_string(TermClass c) {
  switch (c) {
    case TermClass::Kind: return "kind";
    case TermClass::Predicate: return "predicate";
    case TermClass::Object: return "object";
    case TermClass::TopSort: return "top-sort";
  }
  return "?";
}

namespace {
Term whnf_or_throw(const RewriteSystem& conv, const Term& t, Fuel& fuel) {
  WhnfResult r = weak_head_normalize(conv, WhnfMode::BetaR, t, fuel);
  if (!r.complete) throw FuelExhausted{"weak-head normalization of " + to_string(t)};
  return r.term;
}

void require_convertible(const Signature&, const RewriteSystem& conv, const Term& expected,
                         const Term& actual, const Term& at, Fuel& fuel) {
  Verdict v = convertible(conv, expected, actual, fuel);
  if (v.is_undecided()) throw FuelExhausted{"conversion at " + to_string(at)};
  if (!v.is_holds())
    throw TypeError{"type mismatch at " + to_string(at) + ": expected " +
                    to_string(expected) + ", found " + to_string(actual)};
}

// the sort of a type annotation; must match the binder variable's sort tag
SortTag annotation_sort(const Signature& sig, const RewriteSystem& conv,
                        const Environment& env, const Term& T, Fuel& fuel) {
  Term s = whnf_or_throw(conv, infer(sig, conv, env, T, fuel), fuel);
  if (!s.is(TermKind::Sort))
    throw TypeError{"annotation " + to_string(T) + " is not typable by a sort"};
  return s.sort_tag();
}
}  // namespace

Term infer(const Signature& sig, const RewriteSystem& conv, const Environment& env,
           const Term& t, Fuel& fuel) {
  if (!fuel.spend()) throw FuelExhausted{"infer"};
  switch (t.kind()) {
    case TermKind::Sort:
      if (t.sort_tag() == SortTag::Star) return Term::box();  // (ax)
      throw TypeError{"the sort [] has no type"};
    case TermKind::Var: {
      const Term* T = env.lookup(t.var_ref());
      if (!T) throw TypeError{"unbound variable " + t.var_ref().name};
      return *T;  // (var)/(weak) absorbed into lookup
    }
    case TermKind::Symb: {
      const SymbolDecl* d = sig.find(t.symb_name());
      if (!d) throw TypeError{"unknown symbol " + t.symb_name()};
      return d->type;  // (symb)
    }
    case TermKind::App: {  // (app) with (conv) at the argument
      Term Tf = whnf_or_throw(conv, infer(sig, conv, env, t.fun(), fuel), fuel);
      if (!Tf.is(TermKind::Prod))
        throw TypeError{"application of a non-functional term: " + to_string(t.fun()) +
                        " : " + to_string(Tf)};
      Term Ta = infer(sig, conv, env, t.arg(), fuel);
      require_convertible(sig, conv, Tf.ann(), Ta, t, fuel);
      return subst1(Tf.body(), Tf.var_ref(), t.arg());
    }
    case TermKind::Abs: {  // (abs)
      SortTag s1 = annotation_sort(sig, conv, env, t.ann(), fuel);
      if (s1 != t.var_ref().sort)
        throw TypeError{"binder " + t.var_ref().name + " has sort tag " +
                        std::string(t.var_ref().sort == SortTag::Box ? "[]" : "*") +
                        " but its annotation " + to_string(t.ann()) + " is typed by " +
                        std::string(s1 == SortTag::Box ? "[]" : "*")};
      Environment env2 = env;
      env2.push(t.var_ref(), t.ann());
      Term V = infer(sig, conv, env2, t.body(), fuel);
      if (V.is_sort(SortTag::Box))
        throw TypeError{"cannot abstract a kind-valued body: " + to_string(t)};
      return Term::prod(t.var_ref(), t.ann(), V);
    }
    case TermKind::Prod: {  // (prod)
      SortTag s1 = annotation_sort(sig, conv, env, t.ann(), fuel);
      if (s1 != t.var_ref().sort)
        throw TypeError{"binder " + t.var_ref().name + " sort tag disagrees with its "
                        "annotation sort in " + to_string(t)};
      Environment env2 = env;
      env2.push(t.var_ref(), t.ann());
      Term s2 = whnf_or_throw(conv, infer(sig, conv, env2, t.body(), fuel), fuel);
      if (!s2.is(TermKind::Sort))
        throw TypeError{"product body " + to_string(t.body()) + " is not typable by a sort"};
      return s2;
    }
  }
  throw TypeError{"unreachable"};
}

Verdict check(const Signature& sig, const RewriteSystem& conv, const Environment& env,
              const Term& t, const Term& T, Fuel& fuel) {
  try {
    if (T.is_sort(SortTag::Box)) {
      Term got = infer(sig, conv, env, t, fuel);
      return got.is_sort(SortTag::Box)
                 ? Verdict::holds()
                 : Verdict::fails(to_string(t) + " has type " + to_string(got) + ", not []");
    }
    Term got = infer(sig, conv, env, t, fuel);
    Verdict v = convertible(conv, T, got, fuel);
    if (v.is_holds()) return v;
    if (v.is_undecided()) return v;
    return Verdict::fails(to_string(t) + " has type " + to_string(got) +
                          " which is not convertible to " + to_string(T));
  } catch (const TypeError& e) {
    return Verdict::fails(e.message);
  } catch (const FuelExhausted& e) {
    return Verdict::undecided("fuel exhausted during " + e.where);
  }
}

void check_env(const Signature& sig, const RewriteSystem& conv, const Environment& env,
               Fuel& fuel) {
  Environment prefix;
  for (const auto& [x, T] : env.bindings()) {
    if (prefix.declares(x)) throw TypeError{"variable " + x.name + " declared twice"};
    SortTag s = annotation_sort(sig, conv, prefix, T, fuel);
    if (s != x.sort)
      throw TypeError{"environment binding " + x.name + " : " + to_string(T) +
                      " disagrees with the variable's sort"};
    prefix.push(x, T);
  }
}

TermClass classify(const Signature& sig, const RewriteSystem& conv,
                   const Environment& env, const Term& t, Fuel& fuel) {
  if (t.is_sort(SortTag::Box)) return TermClass::TopSort;
  Term T = infer(sig, conv, env, t, fuel);
  if (T.is_sort(SortTag::Box)) return TermClass::Kind;
  Term TT = infer(sig, conv, env, T, fuel);
  if (TT.is_sort(SortTag::Box)) return TermClass::Predicate;
  return TermClass::Object;
}

// ---------------------------------------------------------------------------
// Canonical and derived types

Term canonical_type(const Signature& sig, const Term& t) {
  Spine sp = spine(t);
  if (!sp.head.is(TermKind::Symb))
    throw TypeError{"canonical type: head of " + to_string(t) + " is not a symbol"};
  const SymbolDecl* d = sig.find(sp.head.symb_name());
  if (!d) throw TypeError{"unknown symbol " + sp.head.symb_name()};
  if (sp.args.size() != d->formals.size())
    throw TypeError{"canonical type: " + sp.head.symb_name() + " expects " +
                    std::to_string(d->formals.size()) + " arguments, got " +
                    std::to_string(sp.args.size())};
  Subst gamma;
  for (size_t i = 0; i < sp.args.size(); ++i) gamma.bind(d->formals[i].first, sp.args[i]);
  return substitute(d->output, gamma);
}

Term derived_type(const Signature& sig, const Term& t, const Position& p) {
  if (p.word.empty())
    throw TypeError{"derived type: position must be of the form (1*2)+"};
  // split the leading 1^m 2 block
  size_t m = 0;
  while (m < p.word.size() && p.word[m] == 1) ++m;
  if (m >= p.word.size() || p.word[m] != 2)
    throw TypeError{"derived type: position " + p.to_string() + " not of form (1*2)+"};
  Spine sp = spine(t);
  if (!sp.head.is(TermKind::Symb))
    throw TypeError{"derived type: head of " + to_string(t) + " is not a symbol"};
  const SymbolDecl* d = sig.find(sp.head.symb_name());
  if (!d) throw TypeError{"unknown symbol " + sp.head.symb_name()};
  size_t n = sp.args.size();
  if (n > d->formals.size())
    throw TypeError{"derived type: over-application of " + sp.head.symb_name()};
  if (m >= n) throw TypeError{"derived type: position escapes the spine"};
  size_t i = n - m;  // 1-based spine argument index addressed by 1^{n-i}2
  Position q{std::vector<int>(p.word.begin() + static_cast<long>(m) + 1, p.word.end())};
  if (q.word.empty()) {
    Subst gamma;
    for (size_t k = 0; k < n; ++k) gamma.bind(d->formals[k].first, sp.args[k]);
    return substitute(d->formals[i - 1].second, gamma);
  }
  return derived_type(sig, sp.args[i - 1], q);
}

// ---------------------------------------------------------------------------
// Right-hand-side shape checks (section on subject reduction for beta)

bool is_kind_shape(const Term& t) {
  if (t.is(TermKind::Sort)) return t.sort_tag() == SortTag::Star;
  if (t.is(TermKind::Prod)) return is_kind_shape(t.body());
  return false;
}

namespace {
bool contains_box(const Term& t) {
  if (t.is_sort(SortTag::Box)) return true;
  for (int i = 1; i <= 2; ++i)
    if (t.has_child(i) && contains_box(t.child(i))) return true;
  return false;
}
// subterm [y:W]K or w K with K a kind
bool has_bad_kind_subterm(const Term& t) {
  if (t.is(TermKind::Abs) && is_kind_shape(t.body())) return true;
  if (t.is(TermKind::App) && is_kind_shape(t.arg())) return true;
  for (int i = 1; i <= 2; ++i)
    if (t.has_child(i) && has_bad_kind_subterm(t.child(i))) return true;
  return false;
}
}  // namespace

Verdict rhs_shape_check(const Signature& sig, const Term& r, RuleLevel level) {
  (void)sig;
  if (contains_box(r)) return Verdict::fails("right hand-side contains []");
  if (is_kind_shape(r) && !r.is_sort(SortTag::Star) && r.is(TermKind::Prod))
    return Verdict::fails("right hand-side is a kind (x:T...)* ");
  if (r.is_sort(SortTag::Star))
    return Verdict::fails("right hand-side is the kind *");
  if (has_bad_kind_subterm(r))
    return Verdict::fails("right hand-side has a subterm [y:W]K or w K with K a kind");
  if (level == RuleLevel::Type) {
    Spine sp = spine(r);
    if (!sp.head.is(TermKind::Symb))
      return Verdict::fails("type-level right hand-side is not a symbol application");
  }
  return Verdict::holds();
}

}  // namespace cac
