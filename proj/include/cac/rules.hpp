// Rewrite rules packaged with their certifying environment Gamma and
// linearization substitution rho, plus the per-rule checks: syntactic sanity,
// accessibility, well-formedness and well-typedness (S3/S4/S5).
#pragma once

#include <string>
#include <vector>

#include "cac/reduction.hpp"
#include "cac/signature.hpp"
#include "cac/term.hpp"
#include "cac/typing.hpp"
#include "cac/verdict.hpp"

namespace cac {

struct Rule {
  std::string name;  // "<head>#<k>"
  std::string head;
  std::vector<Term> lhs_args;
  Term rhs;
  Environment env;  // Gamma
  Subst rho;
  bool assume_s5 = false;
  bool env_defaulted = false;  // Gamma was inferred from derived types

  Term lhs() const { return make_spine(Term::symb(head), lhs_args); }
  RewriteRule engine_rule() const { return RewriteRule{name, head, lhs_args, rhs}; }
};

// gamma = {x -> l} for f:(x:T...)U restricted to the applied arguments
Subst rule_gamma(const Signature& sig, const Rule& r);
// U gamma rho: the type the instantiated lhs must have
Term rule_lhs_type(const Signature& sig, const Rule& r);
// object- vs type-level rule, from the head's sort
RuleLevel rule_level(const Signature& sig, const Rule& r);

struct SyntacticResult {
  Verdict verdict;
  bool left_linear = false;
  bool duplicating = false;
};
SyntacticResult syntactic_check(const Signature& sig, const Rule& r);

// Typed pairs t:T manipulated by accessibility and the argument ordering.
struct TypedPair {
  Term term;
  Term type;
};

// one accessibility step: t:T |>_rho u:U
bool accessible(const Signature& sig, const Subst& rho, const Term& t, const Term& T,
                const Term& u, const Term& U);
// all pairs one step below t:T (with canonical derived types)
std::vector<TypedPair> accessible_children(const Signature& sig, const Subst& rho,
                                           const Term& t, const Term& T);
// reflexive-transitive / transitive closure search towards an exact pair;
// types are compared modulo rho
bool accessible_star(const Signature& sig, const Subst& rho, const TypedPair& from,
                     const TypedPair& to, bool at_least_one_step = false);

Verdict well_formed_check(const Signature& sig, const RewriteSystem& conv, const Rule& r,
                          Fuel& fuel);
Verdict s3_check(const Signature& sig, const RewriteSystem& conv, const Rule& r,
                 Fuel& fuel);
Verdict s4_check(const Signature& sig, const Rule& r);
Verdict s5_check(const Signature& sig, const Rule& r);

}  // namespace cac
