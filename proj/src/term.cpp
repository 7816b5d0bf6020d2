#include "cac/term.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace cac {

// ---------------------------------------------------------------------------
// Construction

Term Term::sort(SortTag s) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Sort;
  n->sort = s;
  return Term(std::move(n));
}

Term Term::var(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Var;
  n->var = std::move(v);
  return Term(std::move(n));
}

Term Term::symb(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Symb;
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::App;
  n->a = std::move(fun);
  n->b = std::move(arg);
  return Term(std::move(n));
}

Term Term::abs(Var x, Term ann, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Abs;
  n->var = std::move(x);
  n->a = std::move(ann);
  n->b = std::move(body);
  return Term(std::move(n));
}

Term Term::prod(Var x, Term ann, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = TermKind::Prod;
  n->var = std::move(x);
  n->a = std::move(ann);
  n->b = std::move(body);
  return Term(std::move(n));
}

namespace {
// A type is syntactically a kind iff it is a (possibly empty) product tower
// ending in *; a variable of such a type is predicate-sorted.
bool syntactic_kind(const Term& t) {
  if (t.is(TermKind::Sort)) return t.sort_tag() == SortTag::Star;
  if (t.is(TermKind::Prod)) return syntactic_kind(t.body());
  return false;
}
}  // namespace

Term Term::arrow(Term dom, Term cod) {
  SortTag s = syntactic_kind(dom) ? SortTag::Box : SortTag::Star;
  return prod(Var{"_", s}, std::move(dom), std::move(cod));
}

bool Term::has_child(int i) const {
  if (i != 1 && i != 2) return false;
  switch (node_->kind) {
    case TermKind::App:
    case TermKind::Abs:
    case TermKind::Prod:
      return true;
    default:
      return false;
  }
}

const Term& Term::child(int i) const { return i == 1 ? node_->a : node_->b; }

// ---------------------------------------------------------------------------
// Positions

Position Position::then(int i) const {
  Position p = *this;
  p.word.push_back(i);
  return p;
}

Position Position::concat(const Position& q) const {
  Position p = *this;
  p.word.insert(p.word.end(), q.word.begin(), q.word.end());
  return p;
}

std::string Position::to_string() const {
  std::string s;
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(word[i]);
  }
  return s;
}

Spine spine(const Term& t) {
  Spine sp;
  Term cur = t;
  std::vector<Term> rev;
  while (cur.is(TermKind::App)) {
    rev.push_back(cur.arg());
    cur = cur.fun();
  }
  sp.head = cur;
  sp.args.assign(rev.rbegin(), rev.rend());
  return sp;
}

Term make_spine(Term head, const std::vector<Term>& args) {
  Term t = std::move(head);
  for (const Term& a : args) t = Term::app(t, a);
  return t;
}

Position spine_arg_position(size_t n, size_t i) {
  Position p;
  for (size_t k = 0; k < n - i; ++k) p.word.push_back(1);
  p.word.push_back(2);
  return p;
}

// ---------------------------------------------------------------------------
// Substitutions

const Term* Subst::lookup(const Var& x) const {
  auto it = map_.find(x);
  return it == map_.end() ? nullptr : &it->second;
}

// ---------------------------------------------------------------------------
// Alpha-equivalence: parallel traversal with binder stacks.

namespace {
bool alpha_rec(const Term& t, const Term& u, std::vector<std::pair<Var, Var>>& env) {
  if (t.kind() != u.kind()) return false;
  switch (t.kind()) {
    case TermKind::Sort:
      return t.sort_tag() == u.sort_tag();
    case TermKind::Var: {
      const Var& x = t.var_ref();
      const Var& y = u.var_ref();
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == x) return it->second == y;
        if (it->second == y) return false;
      }
      return x == y;
    }
    case TermKind::Symb:
      return t.symb_name() == u.symb_name();
    case TermKind::App:
      return alpha_rec(t.fun(), u.fun(), env) && alpha_rec(t.arg(), u.arg(), env);
    case TermKind::Abs:
    case TermKind::Prod: {
      if (t.var_ref().sort != u.var_ref().sort) return false;  // sorts preserved
      if (!alpha_rec(t.ann(), u.ann(), env)) return false;
      env.emplace_back(t.var_ref(), u.var_ref());
      bool ok = alpha_rec(t.body(), u.body(), env);
      env.pop_back();
      return ok;
    }
  }
  return false;
}
}  // namespace

bool alpha_eq(const Term& t, const Term& u) {
  std::vector<std::pair<Var, Var>> env;
  return alpha_rec(t, u, env);
}

// ---------------------------------------------------------------------------
// Free variables and occurrence scans

namespace {
void fv_rec(const Term& t, std::set<Var>& bound, std::set<Var>& out) {
  switch (t.kind()) {
    case TermKind::Sort:
    case TermKind::Symb:
      return;
    case TermKind::Var:
      if (!bound.count(t.var_ref())) out.insert(t.var_ref());
      return;
    case TermKind::App:
      fv_rec(t.fun(), bound, out);
      fv_rec(t.arg(), bound, out);
      return;
    case TermKind::Abs:
    case TermKind::Prod: {
      fv_rec(t.ann(), bound, out);
      bool fresh = bound.insert(t.var_ref()).second;
      fv_rec(t.body(), bound, out);
      if (fresh) bound.erase(t.var_ref());
      return;
    }
  }
}
}  // namespace

std::set<Var> free_vars(const Term& t) {
  std::set<Var> bound, out;
  fv_rec(t, bound, out);
  return out;
}

std::set<Var> free_vars(const Term& t, SortTag filter) {
  std::set<Var> out;
  for (const Var& v : free_vars(t))
    if (v.sort == filter) out.insert(v);
  return out;
}

size_t count_var(const Term& t, const Var& x) {
  switch (t.kind()) {
    case TermKind::Sort:
    case TermKind::Symb:
      return 0;
    case TermKind::Var:
      return t.var_ref() == x ? 1 : 0;
    case TermKind::App:
      return count_var(t.fun(), x) + count_var(t.arg(), x);
    case TermKind::Abs:
    case TermKind::Prod: {
      size_t n = count_var(t.ann(), x);
      if (t.var_ref() != x) n += count_var(t.body(), x);
      return n;
    }
  }
  return 0;
}

bool occurs_symbol(const Term& t, const std::string& f) {
  switch (t.kind()) {
    case TermKind::Sort:
    case TermKind::Var:
      return false;
    case TermKind::Symb:
      return t.symb_name() == f;
    case TermKind::App:
      return occurs_symbol(t.fun(), f) || occurs_symbol(t.arg(), f);
    case TermKind::Abs:
    case TermKind::Prod:
      return occurs_symbol(t.ann(), f) || occurs_symbol(t.body(), f);
  }
  return false;
}

namespace {
void symbols_rec(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Sort:
    case TermKind::Var:
      return;
    case TermKind::Symb:
      out.insert(t.symb_name());
      return;
    case TermKind::App:
    case TermKind::Abs:
    case TermKind::Prod:
      symbols_rec(t.child(1), out);
      symbols_rec(t.child(2), out);
      return;
  }
}

void positions_rec(const Term& t, const Position& here,
                   const std::function<bool(const Term&)>& pred,
                   std::set<Var>& bound, std::vector<Position>& out) {
  if (pred(t)) {
    if (t.is(TermKind::Var)) {
      if (!bound.count(t.var_ref())) out.push_back(here);
    } else {
      out.push_back(here);
    }
  }
  switch (t.kind()) {
    case TermKind::App:
      positions_rec(t.fun(), here.then(1), pred, bound, out);
      positions_rec(t.arg(), here.then(2), pred, bound, out);
      return;
    case TermKind::Abs:
    case TermKind::Prod: {
      positions_rec(t.ann(), here.then(1), pred, bound, out);
      bool fresh = bound.insert(t.var_ref()).second;
      positions_rec(t.body(), here.then(2), pred, bound, out);
      if (fresh) bound.erase(t.var_ref());
      return;
    }
    default:
      return;
  }
}
}  // namespace

std::set<std::string> symbols_of(const Term& t) {
  std::set<std::string> out;
  symbols_rec(t, out);
  return out;
}

std::vector<Position> var_positions(const Term& t, const Var& x) {
  std::vector<Position> out;
  std::set<Var> bound;
  positions_rec(
      t, Position{}, [&](const Term& s) { return s.is(TermKind::Var) && s.var_ref() == x; },
      bound, out);
  return out;
}

std::vector<Position> symbol_positions(const Term& t, const std::string& f) {
  std::vector<Position> out;
  std::set<Var> bound;
  positions_rec(
      t, Position{}, [&](const Term& s) { return s.is_symb(f); }, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Substitution (capture-avoiding)

Var fresh_var(const Var& base, const std::set<Var>& avoid) {
  if (!avoid.count(base)) return base;
  std::string stem = base.name;
  // strip an existing prime suffix so renames do not pile up unboundedly
  for (int i = 1;; ++i) {
    Var cand{stem + "'" + std::to_string(i), base.sort};
    if (!avoid.count(cand)) return cand;
  }
}

namespace {
Term subst_rec(const Term& t, const Subst& theta, std::set<Var>& avoid) {
  switch (t.kind()) {
    case TermKind::Sort:
    case TermKind::Symb:
      return t;
    case TermKind::Var: {
      const Term* r = theta.lookup(t.var_ref());
      return r ? *r : t;
    }
    case TermKind::App:
      return Term::app(subst_rec(t.fun(), theta, avoid),
                       subst_rec(t.arg(), theta, avoid));
    case TermKind::Abs:
    case TermKind::Prod: {
      Term ann = subst_rec(t.ann(), theta, avoid);
      Var x = t.var_ref();
      Term body = t.body();
      Subst inner;
      for (const auto& [v, r] : theta.entries())
        if (!(v == x)) inner.bind(v, r);
      // rename the binder when it would capture a variable of the range, or
      // when it clashes with something we must avoid
      std::set<Var> danger = avoid;
      for (const auto& [v, r] : inner.entries()) {
        if (count_var(body, v) == 0) continue;
        for (const Var& fv : free_vars(r)) danger.insert(fv);
      }
      if (danger.count(x)) {
        std::set<Var> taken = danger;
        for (const Var& fv : free_vars(body)) taken.insert(fv);
        Var x2 = fresh_var(x, taken);
        Subst ren;
        ren.bind(x, Term::var(x2));
        std::set<Var> none;
        body = subst_rec(body, ren, none);
        x = x2;
      }
      Term nb = subst_rec(body, inner, avoid);
      return t.is(TermKind::Abs) ? Term::abs(x, ann, nb) : Term::prod(x, ann, nb);
    }
  }
  return t;
}
}  // namespace

Term substitute(const Term& t, const Subst& theta) {
  if (theta.empty()) return t;
  std::set<Var> avoid;
  for (const auto& [v, r] : theta.entries()) {
    (void)v;
    for (const Var& fv : free_vars(r)) avoid.insert(fv);
  }
  return subst_rec(t, theta, avoid);
}

Term subst1(const Term& t, const Var& x, const Term& u) {
  Subst s;
  s.bind(x, u);
  return substitute(t, s);
}

// ---------------------------------------------------------------------------
// Subterm navigation

bool valid_position(const Term& t, const Position& p) {
  Term cur = t;
  for (int i : p.word) {
    if (!cur.has_child(i)) return false;
    cur = cur.child(i);
  }
  return true;
}

Term subterm_at(const Term& t, const Position& p) {
  Term cur = t;
  for (int i : p.word) {
    if (!cur.has_child(i))
      throw PositionError{"invalid position " + p.to_string() + " in " + to_string(t)};
    cur = cur.child(i);
  }
  return cur;
}

namespace {
Term replace_rec(const Term& t, const std::vector<int>& w, size_t k, const Term& u) {
  if (k == w.size()) return u;
  int i = w[k];
  if (!t.has_child(i)) throw PositionError{"invalid position for replace_at"};
  Term c = replace_rec(t.child(i), w, k + 1, u);
  switch (t.kind()) {
    case TermKind::App:
      return i == 1 ? Term::app(c, t.arg()) : Term::app(t.fun(), c);
    case TermKind::Abs:
      return i == 1 ? Term::abs(t.var_ref(), c, t.body())
                    : Term::abs(t.var_ref(), t.ann(), c);
    case TermKind::Prod:
      return i == 1 ? Term::prod(t.var_ref(), c, t.body())
                    : Term::prod(t.var_ref(), t.ann(), c);
    default:
      throw PositionError{"invalid position for replace_at"};
  }
}
}  // namespace

Term replace_at(const Term& t, const Position& p, const Term& u) {
  return replace_rec(t, p.word, 0, u);
}

// ---------------------------------------------------------------------------
// Signed positions (Pos^delta) with the Mon map

namespace {
void signed_rec(const Term& t, int delta, const MonMap& mon, const Position& here,
                std::set<Position>& out) {
  switch (t.kind()) {
    case TermKind::Sort:
    case TermKind::Var:
      if (delta > 0) out.insert(here);
      return;
    case TermKind::Symb:
      // a symbol alone is f t⃗ with |t⃗| = 0
      if (delta > 0) out.insert(here);
      return;
    case TermKind::Prod:
      signed_rec(t.ann(), -delta, mon, here.then(1), out);
      signed_rec(t.body(), delta, mon, here.then(2), out);
      return;
    case TermKind::Abs:
      signed_rec(t.body(), delta, mon, here.then(2), out);
      return;
    case TermKind::App: {
      Spine sp = spine(t);
      if (sp.head.is(TermKind::Symb)) {
        size_t n = sp.args.size();
        if (delta > 0) {
          Position headp = here;
          for (size_t k = 0; k < n; ++k) headp.word.push_back(1);
          out.insert(headp);
        }
        auto it = mon.find(sp.head.symb_name());
        if (it != mon.end()) {
          for (int i : it->second) {
            if (i < 1 || static_cast<size_t>(i) > n) continue;
            Position argp = here.concat(spine_arg_position(n, static_cast<size_t>(i)));
            signed_rec(sp.args[static_cast<size_t>(i) - 1], delta, mon, argp, out);
          }
        }
      } else {
        signed_rec(t.fun(), delta, mon, here.then(1), out);
      }
      return;
    }
  }
}
}  // namespace

std::set<Position> signed_positions(const Term& t, int delta, const MonMap& mon) {
  std::set<Position> out;
  signed_rec(t, delta, mon, Position{}, out);
  return out;
}

// ---------------------------------------------------------------------------
// Algebraic terms

bool is_algebraic(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
      return true;
    case TermKind::Symb:
      return true;
    case TermKind::Sort:
    case TermKind::Abs:
    case TermKind::Prod:
      return false;
    case TermKind::App: {
      Spine sp = spine(t);
      if (!sp.head.is(TermKind::Symb)) return false;
      for (const Term& a : sp.args)
        if (!is_algebraic(a)) return false;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing: application by juxtaposition, [x:T]u, (x:T)U, T -> U sugar.

namespace {
enum class Ctx { Top, AppFun, AppArg, ArrowDom };

void print_rec(const Term& t, Ctx ctx, std::ostream& os) {
  switch (t.kind()) {
    case TermKind::Sort:
      os << (t.sort_tag() == SortTag::Star ? "*" : "[]");
      return;
    case TermKind::Var:
      os << t.var_ref().name;
      return;
    case TermKind::Symb:
      os << t.symb_name();
      return;
    case TermKind::App: {
      bool paren = (ctx == Ctx::AppArg);
      if (paren) os << '(';
      print_rec(t.fun(), Ctx::AppFun, os);
      os << ' ';
      print_rec(t.arg(), Ctx::AppArg, os);
      if (paren) os << ')';
      return;
    }
    case TermKind::Abs: {
      bool paren = (ctx != Ctx::Top);
      if (paren) os << '(';
      os << '[' << t.var_ref().name << " : ";
      print_rec(t.ann(), Ctx::Top, os);
      os << "] ";
      print_rec(t.body(), Ctx::Top, os);
      if (paren) os << ')';
      return;
    }
    case TermKind::Prod: {
      bool paren = (ctx != Ctx::Top);
      if (paren) os << '(';
      if (count_var(t.body(), t.var_ref()) == 0) {
        print_rec(t.ann(), Ctx::ArrowDom, os);
        os << " -> ";
        print_rec(t.body(), Ctx::Top, os);
      } else {
        os << '(' << t.var_ref().name << " : ";
        print_rec(t.ann(), Ctx::Top, os);
        os << ") ";
        print_rec(t.body(), Ctx::Top, os);
      }
      if (paren) os << ')';
      return;
    }
  }
}
}  // namespace

std::string to_string(const Term& t) {
  if (!t.valid()) return "<null>";
  std::ostringstream os;
  print_rec(t, Ctx::Top, os);
  return os.str();
}

}  // namespace cac
