// Core term language of the Calculus of Algebraic Constructions:
// sorts * / [], variables, symbols, application, abstraction, product.
// Terms are immutable and structurally shared.
#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace cac {

enum class SortTag { Star, Box };

// A variable carries its sort tag (the sort s_x of the paper); variables with
// the same name but different sorts are distinct.
struct Var {
  std::string name;
  SortTag sort = SortTag::Star;

  bool operator==(const Var& o) const { return name == o.name && sort == o.sort; }
  bool operator!=(const Var& o) const { return !(*this == o); }
  bool operator<(const Var& o) const {
    if (name != o.name) return name < o.name;
    return static_cast<int>(sort) < static_cast<int>(o.sort);
  }
};

enum class TermKind { Sort, Var, Symb, App, Abs, Prod };

class Term {
 public:
  Term() = default;  // empty handle; only for containers, never a valid term

  static Term sort(SortTag s);
  static Term star() { return sort(SortTag::Star); }
  static Term box() { return sort(SortTag::Box); }
  static Term var(Var v);
  static Term var(const std::string& name, SortTag s) { return var(Var{name, s}); }
  static Term symb(std::string name);
  static Term app(Term fun, Term arg);
  static Term abs(Var x, Term ann, Term body);
  static Term prod(Var x, Term ann, Term body);
  // (_:T)U with a fresh dummy binder; the binder sort follows the syntactic
  // sort of the domain (kind-shaped domains bind predicate variables).
  static Term arrow(Term dom, Term cod);

  bool valid() const { return node_ != nullptr; }
  TermKind kind() const;
  bool is(TermKind k) const;

  SortTag sort_tag() const;              // Sort
  const Var& var_ref() const;            // Var, Abs, Prod binder
  const std::string& symb_name() const;  // Symb
  const Term& fun() const;               // App
  const Term& arg() const;               // App
  const Term& ann() const;               // Abs/Prod annotation
  const Term& body() const;              // Abs/Prod body

  // Child access by position digit (1 or 2); App: 1=fun 2=arg, Abs/Prod:
  // 1=annotation 2=body. Leaves have no children.
  bool has_child(int i) const;
  const Term& child(int i) const;

  bool is_sort(SortTag s) const { return is(TermKind::Sort) && sort_tag() == s; }
  bool is_symb(const std::string& f) const {
    return is(TermKind::Symb) && symb_name() == f;
  }

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Term::Node {
  TermKind kind;
  SortTag sort = SortTag::Star;  // Sort
  Var var;                       // Var / Abs / Prod
  std::string name;              // Symb
  Term a, b;                     // App / Abs / Prod children
};

inline TermKind Term::kind() const { return node_->kind; }
inline bool Term::is(TermKind k) const { return node_ && node_->kind == k; }
inline SortTag Term::sort_tag() const { return node_->sort; }
inline const Var& Term::var_ref() const { return node_->var; }
inline const std::string& Term::symb_name() const { return node_->name; }
inline const Term& Term::fun() const { return node_->a; }
inline const Term& Term::arg() const { return node_->b; }
inline const Term& Term::ann() const { return node_->a; }
inline const Term& Term::body() const { return node_->b; }

// ---------------------------------------------------------------------------
// Positions: words over {1,2} per the Dewey system of the paper.
struct Position {
  std::vector<int> word;

  Position() = default;
  explicit Position(std::vector<int> w) : word(std::move(w)) {}
  static Position root() { return Position{}; }
  Position then(int i) const;
  Position concat(const Position& q) const;
  bool operator==(const Position& o) const { return word == o.word; }
  bool operator<(const Position& o) const { return word < o.word; }
  std::string to_string() const;  // e.g. "1.2.1", "" for the root
};

// The spine view: t = head t1 ... tn with head not an application.
struct Spine {
  Term head;
  std::vector<Term> args;
};
Spine spine(const Term& t);
Term make_spine(Term head, const std::vector<Term>& args);
// Position of the i-th (1-based) spine argument of an n-argument spine:
// 1^{n-i}.2
Position spine_arg_position(size_t n, size_t i);

// ---------------------------------------------------------------------------
// Substitutions: finite maps Var -> Term, applied capture-avoidingly.
class Subst {
 public:
  Subst() = default;
  void bind(const Var& x, Term t) { map_[x] = std::move(t); }
  bool binds(const Var& x) const { return map_.count(x) != 0; }
  const Term* lookup(const Var& x) const;
  bool empty() const { return map_.empty(); }
  size_t size() const { return map_.size(); }
  const std::map<Var, Term>& entries() const { return map_; }

 private:
  std::map<Var, Term> map_;
};

// ---------------------------------------------------------------------------
// Core operations.
bool alpha_eq(const Term& t, const Term& u);
Term substitute(const Term& t, const Subst& theta);
Term subst1(const Term& t, const Var& x, const Term& u);

struct PositionError {
  std::string message;
};
Term subterm_at(const Term& t, const Position& p);         // throws PositionError
Term replace_at(const Term& t, const Position& p, const Term& u);
bool valid_position(const Term& t, const Position& p);

std::set<Var> free_vars(const Term& t);
std::set<Var> free_vars(const Term& t, SortTag filter);
// Occurrence counting of a free variable (for duplication flags).
size_t count_var(const Term& t, const Var& x);
bool occurs_symbol(const Term& t, const std::string& f);
std::set<std::string> symbols_of(const Term& t);

// All positions of occurrences of a free variable / a symbol.
std::vector<Position> var_positions(const Term& t, const Var& x);
std::vector<Position> symbol_positions(const Term& t, const std::string& f);

// Pos^delta(t) with the Mon map of the inductive structure; delta=+1 or -1.
using MonMap = std::map<std::string, std::set<int>>;
std::set<Position> signed_positions(const Term& t, int delta, const MonMap& mon);

// Algebraic terms: variables and symbol-headed full spines only.
bool is_algebraic(const Term& t);

// Fresh variable with the given base name avoiding a set of taken names.
Var fresh_var(const Var& base, const std::set<Var>& avoid);

std::string to_string(const Term& t);

}  // namespace cac
