// Symbol table: declarations, precedence, statuses, inductive structure
// (Mon/Acc), admissibility I2-I6, and predicate classification.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cac/term.hpp"
#include "cac/verdict.hpp"

namespace cac {

// Status: lex m1 ... mk, each mi a multiset of argument indices (1-based).
struct Status {
  std::vector<std::vector<int>> slots;

  int arity() const {
    int m = 0;
    for (const auto& s : slots)
      for (int i : s) m = std::max(m, i);
    return m;
  }
  bool operator==(const Status& o) const { return slots == o.slots; }
  std::string to_string() const;
};

struct SymbolDecl {
  std::string name;
  Term type;          // tau_f, closed
  SortTag sort = SortTag::Star;  // s_f: Star = object-level, Box = predicate-level
  bool defined = false;          // has at least one rule headed by it
  std::optional<Status> declared_status;

  // product decomposition of tau_f: (x1:T1)...(xn:Tn) U with U not a product
  std::vector<std::pair<Var, Term>> formals;
  Term output;
};

// Quasi-ordering on symbols: equivalence classes plus a strict part that must
// be acyclic on classes.
class Precedence {
 public:
  void declare_eq(const std::string& a, const std::string& b);
  void declare_gt(const std::string& a, const std::string& b);
  // Computes the transitive closure; returns an error message on a cycle.
  std::optional<std::string> finalize();

  bool equiv(const std::string& a, const std::string& b) const;
  bool gt(const std::string& a, const std::string& b) const;  // strict a > b
  bool ge(const std::string& a, const std::string& b) const {
    return equiv(a, b) || gt(a, b);
  }
  std::string rep(const std::string& a) const;

 private:
  mutable std::map<std::string, std::string> parent_;
  std::set<std::pair<std::string, std::string>> edges_;    // rep > rep
  std::set<std::pair<std::string, std::string>> closure_;  // transitive
  std::string find(const std::string& a) const;
};

struct Signature {
  std::vector<SymbolDecl> decls;
  std::map<std::string, size_t> index;
  Precedence prec;
  MonMap mon;                                  // C -> monotonic argument indices
  std::map<std::string, std::set<int>> acc_declared;  // explicit Acc overrides

  bool has(const std::string& f) const { return index.count(f) != 0; }
  const SymbolDecl* find(const std::string& f) const;
  SymbolDecl* find_mut(const std::string& f);
  void add_symbol(const std::string& name, Term type);

  bool is_defined(const std::string& f) const;
  bool is_constant(const std::string& f) const { return has(f) && !is_defined(f); }
  bool is_predicate_level(const std::string& f) const;  // f in F^box
  // CF^box: constant predicate symbol
  bool is_const_predicate(const std::string& f) const {
    return is_predicate_level(f) && is_constant(f);
  }
  std::set<std::string> const_predicates() const;
  std::set<std::string> defined_symbols() const;

  // Output head when tau_f = (y:U...)C v with C a constant predicate; empty
  // optional otherwise.
  std::optional<std::string> const_pred_output(const std::string& f) const;
  // Acc(f): declared override, else all argument indices when the output is a
  // constant-predicate application, else empty.
  std::set<int> acc(const std::string& f) const;
  std::set<int> mon_of(const std::string& C) const;

  // Symbols occurring in tau_f must be below f (their declarations come
  // first); record that in the precedence before finalizing it.
  void augment_prec_from_types();

  // Status actually used for f: declared, or the default (one lex slot
  // containing every argument whose type is a constant-predicate application;
  // all arguments if there are none).
  Status status_of(const std::string& f) const;
};

// decompose a (possibly product) type into formals + output
void decompose_product(const Term& type, std::vector<std::pair<Var, Term>>& formals,
                       Term& output);

// ---------------------------------------------------------------------------
// Admissibility of the inductive structure (I2-I6).
struct AdmissibilityEntry {
  std::string key;  // e.g. "I3(list,cons,3)"
  Verdict verdict;
};
struct AdmissibilityReport {
  std::vector<AdmissibilityEntry> entries;
  // iota witnesses: for (f, j, Y) the index i with v_i = Y
  std::map<std::string, std::map<Var, int>> iota;
  Verdict overall;
};
AdmissibilityReport admissible_check(const Signature& sig);

// ---------------------------------------------------------------------------
// Predicate classification (most specific first).
enum class PredClass { Primitive, Basic, StrictlyPositive, General };
const char* to_string(PredClass c);
PredClass classify_predicate(const Signature& sig, const std::string& C);

// Strictly positive status slots SP(f) with their witness types T_f^i.
struct SPInfo {
  std::set<int> slots;              // 1-based lex-slot indices in SP(f)
  std::map<int, Term> witness;      // slot -> T_f^i
};
SPInfo strictly_positive_positions(const Signature& sig, const std::string& f);

// Structural elaboration checks that need no typing: status arities,
// precedence compatibility with a set of (head, rhs) pairs, acyclicity.
std::vector<std::string> structural_check(
    const Signature& sig, const std::vector<std::pair<std::string, Term>>& head_rhs);

}  // namespace cac
