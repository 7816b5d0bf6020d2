// Beta-reduction, algebraic rewriting, normalization, weak-head reduction,
// convertibility and critical pairs.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cac/term.hpp"
#include "cac/verdict.hpp"

namespace cac {

// A rewrite rule stripped down to what the reduction engine needs; the rules
// module wraps this with the certifying environment and rho.
struct RewriteRule {
  std::string name;   // e.g. "plus#1"
  std::string head;
  std::vector<Term> lhs_args;
  Term rhs;

  Term lhs() const { return make_spine(Term::symb(head), lhs_args); }
};

class RewriteSystem {
 public:
  RewriteSystem() = default;
  explicit RewriteSystem(std::vector<RewriteRule> rules) { reset(std::move(rules)); }
  void reset(std::vector<RewriteRule> rules);
  void add(RewriteRule r);
  const std::vector<RewriteRule>& rules() const { return rules_; }
  // indices of rules headed by f taking exactly n lhs arguments
  std::vector<size_t> candidates(const std::string& f, size_t n) const;
  bool empty() const { return rules_.empty(); }

 private:
  std::vector<RewriteRule> rules_;
};

// First-order matching of an algebraic lhs against an arbitrary term;
// non-linear lhs require alpha-equal duplicates.
std::optional<Subst> match_algebraic(const Term& l, const Term& t);

struct Reduct {
  Term term;
  std::string tag;  // "beta" or rule name
  Position pos;
};

// All one-step beta/R reducts, listed in leftmost-innermost position order.
std::vector<Reduct> one_step_reducts(const RewriteSystem& R, const Term& t);

enum class Strategy { Innermost, Outermost };

struct NormalizeResult {
  Term term;            // last term reached (the normal form when complete)
  bool complete = false;
  long long steps = 0;
  std::vector<Reduct> trace;  // filled only when tracing
};
NormalizeResult normalize(const RewriteSystem& R, const Term& t, Fuel& fuel,
                          Strategy strat = Strategy::Innermost, bool trace = false,
                          bool beta = true);

enum class WhnfMode { BetaOnly, BetaR };
struct WhnfResult {
  Term term;
  bool complete = false;
};
WhnfResult weak_head_normalize(const RewriteSystem& R, WhnfMode mode, const Term& t,
                               Fuel& fuel);

Verdict convertible(const RewriteSystem& R, const Term& t, const Term& u, Fuel& fuel);

// R-only joinability via normal forms (no beta).
Verdict joinable(const RewriteSystem& R, const Term& t, const Term& u, Fuel& fuel);

struct CriticalPair {
  Term peak;
  Term left;   // reduct by the inner rule
  Term right;  // reduct by the outer rule
  std::string rule_inner, rule_outer;
  Position pos;  // overlap position inside the outer lhs
};
std::vector<CriticalPair> critical_pairs(const RewriteSystem& R);
// overlaps of rules from G-headed rules against all of R (and vice versa),
// for the "simple" classification
std::vector<CriticalPair> critical_pairs_between(const RewriteSystem& R,
                                                 const std::vector<std::string>& heads_G);

// First-order syntactic unification on algebraic terms (exposed for tests).
std::optional<Subst> unify_algebraic(const Term& a, const Term& b);

}  // namespace cac
