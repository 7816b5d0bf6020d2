#include "cac/reduction.hpp"

#include <algorithm>

namespace cac {

void RewriteSystem::reset(std::vector<RewriteRule> rules) { rules_ = std::move(rules); }
void RewriteSystem::add(RewriteRule r) { rules_.push_back(std::move(r)); }

std::vector<size_t> RewriteSystem::candidates(const std::string& f, size_t n) const {
  std::vector<size_t> out;
  for (size_t i = 0; i < rules_.size(); ++i)
    if (rules_[i].head == f && rules_[i].lhs_args.size() == n) out.push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Matching

namespace {
bool match_rec(const Term& l, const Term& t, Subst& sigma) {
  switch (l.kind()) {
    case TermKind::Var: {
      const Term* bound = sigma.lookup(l.var_ref());
      if (bound) return alpha_eq(*bound, t);
      sigma.bind(l.var_ref(), t);
      return true;
    }
    case TermKind::Symb:
      return t.is_symb(l.symb_name());
    case TermKind::App:
      return t.is(TermKind::App) && match_rec(l.fun(), t.fun(), sigma) &&
             match_rec(l.arg(), t.arg(), sigma);
    default:
      return false;  // lhs are algebraic: no sorts, binders
  }
}
}  // namespace

std::optional<Subst> match_algebraic(const Term& l, const Term& t) {
  Subst sigma;
  if (match_rec(l, t, sigma)) return sigma;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Root contraction and one-step reducts

namespace {
struct RootReduct {
  Term term;
  std::string tag;
};

std::vector<RootReduct> root_reducts(const RewriteSystem& R, const Term& t, bool beta,
                                     bool first_only) {
  std::vector<RootReduct> out;
  if (beta && t.is(TermKind::App) && t.fun().is(TermKind::Abs)) {
    const Term& f = t.fun();
    out.push_back({subst1(f.body(), f.var_ref(), t.arg()), "beta"});
    if (first_only) return out;
  }
  if (t.is(TermKind::App) || t.is(TermKind::Symb)) {
    Spine sp = spine(t);
    if (sp.head.is(TermKind::Symb)) {
      for (size_t i : R.candidates(sp.head.symb_name(), sp.args.size())) {
        const RewriteRule& r = R.rules()[i];
        Subst sigma;
        bool ok = true;
        for (size_t k = 0; k < sp.args.size() && ok; ++k)
          ok = match_rec(r.lhs_args[k], sp.args[k], sigma);
        if (ok) {
          out.push_back({substitute(r.rhs, sigma), r.name});
          if (first_only) return out;
        }
      }
    }
  }
  return out;
}

void one_step_rec(const RewriteSystem& R, const Term& t, const Position& here,
                  std::vector<Reduct>& out, const Term& whole) {
  // innermost-first listing: children before the current node, child 1 first
  for (int i = 1; i <= 2; ++i) {
    if (!t.has_child(i)) continue;
    one_step_rec(R, t.child(i), here.then(i), out, whole);
  }
  for (RootReduct& rr : root_reducts(R, t, true, false))
    out.push_back({replace_at(whole, here, rr.term), rr.tag, here});
}
}  // namespace

std::vector<Reduct> one_step_reducts(const RewriteSystem& R, const Term& t) {
  std::vector<Reduct> out;
  one_step_rec(R, t, Position{}, out, t);
  return out;
}

// ---------------------------------------------------------------------------
// Normalization

namespace {
// find the first redex per strategy; returns (new whole term, tag, position)
std::optional<Reduct> find_step(const RewriteSystem& R, const Term& t, const Position& here,
                                const Term& whole, Strategy strat, bool beta) {
  if (strat == Strategy::Outermost) {
    auto rr = root_reducts(R, t, beta, true);
    if (!rr.empty())
      return Reduct{replace_at(whole, here, rr.front().term), rr.front().tag, here};
  }
  for (int i = 1; i <= 2; ++i) {
    if (!t.has_child(i)) continue;
    auto r = find_step(R, t.child(i), here.then(i), whole, strat, beta);
    if (r) return r;
  }
  if (strat == Strategy::Innermost) {
    auto rr = root_reducts(R, t, beta, true);
    if (!rr.empty())
      return Reduct{replace_at(whole, here, rr.front().term), rr.front().tag, here};
  }
  return std::nullopt;
}
}  // namespace

NormalizeResult normalize(const RewriteSystem& R, const Term& t, Fuel& fuel,
                          Strategy strat, bool trace, bool beta) {
  NormalizeResult res;
  res.term = t;
  while (true) {
    auto step = find_step(R, res.term, Position{}, res.term, strat, beta);
    if (!step) {
      res.complete = true;
      return res;
    }
    if (!fuel.spend()) return res;  // incomplete
    ++res.steps;
    if (trace) res.trace.push_back(*step);
    res.term = step->term;
  }
}

// ---------------------------------------------------------------------------
// Weak-head normalization

WhnfResult weak_head_normalize(const RewriteSystem& R, WhnfMode mode, const Term& t,
                               Fuel& fuel) {
  // peel leading abstractions, head-reduce underneath
  if (t.is(TermKind::Abs)) {
    WhnfResult inner = weak_head_normalize(R, mode, t.body(), fuel);
    return {Term::abs(t.var_ref(), t.ann(), inner.term), inner.complete};
  }
  Term cur = t;
  while (true) {
    Spine sp = spine(cur);
    if (sp.head.is(TermKind::Abs) && !sp.args.empty()) {
      if (!fuel.spend()) return {cur, false};
      Term contracted = subst1(sp.head.body(), sp.head.var_ref(), sp.args.front());
      std::vector<Term> rest(sp.args.begin() + 1, sp.args.end());
      cur = make_spine(contracted, rest);
      continue;
    }
    if (mode == WhnfMode::BetaR && sp.head.is(TermKind::Symb)) {
      bool fired = false;
      for (size_t k = 0; k <= sp.args.size() && !fired; ++k) {
        for (size_t i : R.candidates(sp.head.symb_name(), k)) {
          const RewriteRule& r = R.rules()[i];
          Subst sigma;
          bool ok = true;
          for (size_t a = 0; a < k && ok; ++a)
            ok = match_rec(r.lhs_args[a], sp.args[a], sigma);
          if (ok) {
            if (!fuel.spend()) return {cur, false};
            std::vector<Term> rest(sp.args.begin() + static_cast<long>(k), sp.args.end());
            cur = make_spine(substitute(r.rhs, sigma), rest);
            fired = true;
            break;
          }
        }
      }
      if (fired) continue;
    }
    return {cur, true};
  }
}

// ---------------------------------------------------------------------------
// Conversion / joinability

Verdict convertible(const RewriteSystem& R, const Term& t, const Term& u, Fuel& fuel) {
  if (alpha_eq(t, u)) return Verdict::holds();
  NormalizeResult nt = normalize(R, t, fuel);
  if (!nt.complete) return Verdict::undecided("fuel exhausted normalizing " + to_string(t));
  NormalizeResult nu = normalize(R, u, fuel);
  if (!nu.complete) return Verdict::undecided("fuel exhausted normalizing " + to_string(u));
  if (alpha_eq(nt.term, nu.term)) return Verdict::holds();
  return Verdict::fails(to_string(t) + " and " + to_string(u) +
                        " have distinct normal forms " + to_string(nt.term) + " / " +
                        to_string(nu.term));
}

Verdict joinable(const RewriteSystem& R, const Term& t, const Term& u, Fuel& fuel) {
  NormalizeResult nt = normalize(R, t, fuel, Strategy::Innermost, false, /*beta=*/false);
  if (!nt.complete) return Verdict::undecided("fuel exhausted normalizing " + to_string(t));
  NormalizeResult nu = normalize(R, u, fuel, Strategy::Innermost, false, /*beta=*/false);
  if (!nu.complete) return Verdict::undecided("fuel exhausted normalizing " + to_string(u));
  if (alpha_eq(nt.term, nu.term)) return Verdict::holds();
  return Verdict::fails("normal forms differ: " + to_string(nt.term) + " vs " +
                        to_string(nu.term));
}

// ---------------------------------------------------------------------------
// Unification (first-order, over algebraic binary trees)

namespace {
struct UnifyState {
  std::map<Var, Term> bind;

  Term walk(Term t) const {
    while (t.is(TermKind::Var)) {
      auto it = bind.find(t.var_ref());
      if (it == bind.end()) return t;
      t = it->second;
    }
    return t;
  }
  bool occurs(const Var& x, Term t) const {
    t = walk(t);
    if (t.is(TermKind::Var)) return t.var_ref() == x;
    if (t.is(TermKind::App)) return occurs(x, t.fun()) || occurs(x, t.arg());
    return false;
  }
  bool unify(Term a, Term b) {
    a = walk(a);
    b = walk(b);
    if (a.is(TermKind::Var)) {
      if (b.is(TermKind::Var) && b.var_ref() == a.var_ref()) return true;
      if (occurs(a.var_ref(), b)) return false;
      bind[a.var_ref()] = b;
      return true;
    }
    if (b.is(TermKind::Var)) return unify(b, a);
    if (a.is(TermKind::Symb) && b.is(TermKind::Symb))
      return a.symb_name() == b.symb_name();
    if (a.is(TermKind::App) && b.is(TermKind::App))
      return unify(a.fun(), b.fun()) && unify(a.arg(), b.arg());
    return false;
  }
  Term resolve(Term t) const {
    t = walk(t);
    if (t.is(TermKind::App)) return Term::app(resolve(t.fun()), resolve(t.arg()));
    return t;
  }
  Subst to_subst() const {
    Subst s;
    for (const auto& [x, t] : bind) s.bind(x, resolve(t));
    return s;
  }
};
}  // namespace

std::optional<Subst> unify_algebraic(const Term& a, const Term& b) {
  UnifyState st;
  if (!st.unify(a, b)) return std::nullopt;
  return st.to_subst();
}

// ---------------------------------------------------------------------------
// Critical pairs

namespace {
Term rename_vars(const Term& t, const std::string& suffix) {
  switch (t.kind()) {
    case TermKind::Var: {
      Var v = t.var_ref();
      v.name += suffix;
      return Term::var(v);
    }
    case TermKind::App:
      return Term::app(rename_vars(t.fun(), suffix), rename_vars(t.arg(), suffix));
    default:
      return t;
  }
}

void nonvar_positions(const Term& t, const Position& here, std::vector<Position>& out) {
  if (!t.is(TermKind::Var)) out.push_back(here);
  if (t.is(TermKind::App)) {
    nonvar_positions(t.fun(), here.then(1), out);
    nonvar_positions(t.arg(), here.then(2), out);
  }
}
}  // namespace

std::vector<CriticalPair> critical_pairs(const RewriteSystem& R) {
  std::vector<CriticalPair> out;
  const auto& rules = R.rules();
  for (size_t jo = 0; jo < rules.size(); ++jo) {    // outer rule
    Term lo = rules[jo].lhs();
    for (size_t ji = 0; ji < rules.size(); ++ji) {  // inner rule, renamed apart
      Term li = rename_vars(rules[ji].lhs(), "#i");
      Term ri = rename_vars(rules[ji].rhs, "#i");
      std::vector<Position> ps;
      nonvar_positions(lo, Position{}, ps);
      for (const Position& p : ps) {
        if (p.word.empty() && ji == jo) continue;  // trivial self overlap
        Term sub = subterm_at(lo, p);
        // spine-prefix nodes (partial applications) cannot match a full lhs
        // of different arity; unification sorts that out structurally
        auto sigma = unify_algebraic(li, sub);
        if (!sigma) continue;
        CriticalPair cp;
        cp.peak = substitute(lo, *sigma);
        cp.left = substitute(replace_at(lo, p, ri), *sigma);
        cp.right = substitute(rules[jo].rhs, *sigma);
        cp.rule_inner = rules[ji].name;
        cp.rule_outer = rules[jo].name;
        cp.pos = p;
        out.push_back(std::move(cp));
      }
    }
  }
  return out;
}

std::vector<CriticalPair> critical_pairs_between(const RewriteSystem& R,
                                                 const std::vector<std::string>& heads_G) {
  std::set<std::string> G(heads_G.begin(), heads_G.end());
  std::vector<CriticalPair> out;
  for (CriticalPair& cp : critical_pairs(R)) {
    Spine sp = spine(cp.peak);
    std::string inner_head, outer_head;
    // rule names are "<head>#<k>"
    auto head_of = [](const std::string& name) {
      auto pos = name.rfind('#');
      return pos == std::string::npos ? name : name.substr(0, pos);
    };
    inner_head = head_of(cp.rule_inner);
    outer_head = head_of(cp.rule_outer);
    if (G.count(inner_head) || G.count(outer_head)) out.push_back(std::move(cp));
  }
  return out;
}

}  // namespace cac
