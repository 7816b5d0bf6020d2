// Syntax-directed typing for the calculus: infer/check modulo beta+R
// conversion, canonical and derived types, term classification, and the
// right-hand-side shape checks.
#pragma once

#include <string>
#include <vector>

#include "cac/reduction.hpp"
#include "cac/signature.hpp"
#include "cac/term.hpp"
#include "cac/verdict.hpp"

namespace cac {

struct TypeError {
  std::string message;
};

class Environment {
 public:
  Environment() = default;
  void push(Var x, Term T) { bindings_.emplace_back(std::move(x), std::move(T)); }
  const Term* lookup(const Var& x) const;
  bool declares(const Var& x) const { return lookup(x) != nullptr; }
  const std::vector<std::pair<Var, Term>>& bindings() const { return bindings_; }
  size_t size() const { return bindings_.size(); }

 private:
  std::vector<std::pair<Var, Term>> bindings_;
};

enum class TermClass { Kind, Predicate, Object, TopSort };
const char* to_string(TermClass c);

// infer returns the type; throws TypeError, FuelExhausted.
Term infer(const Signature& sig, const RewriteSystem& conv, const Environment& env,
           const Term& t, Fuel& fuel);
Verdict check(const Signature& sig, const RewriteSystem& conv, const Environment& env,
              const Term& t, const Term& T, Fuel& fuel);
// validates each binding's type against the binder's sort
void check_env(const Signature& sig, const RewriteSystem& conv, const Environment& env,
               Fuel& fuel);  // throws TypeError

TermClass classify(const Signature& sig, const RewriteSystem& conv,
                   const Environment& env, const Term& t, Fuel& fuel);

// Ugamma for t = f t1..tn with n = arity of tau_f.
Term canonical_type(const Signature& sig, const Term& t);  // throws TypeError
// tau(t, p) for p of the form (1*2)+ addressing spine arguments recursively.
Term derived_type(const Signature& sig, const Term& t, const Position& p);  // throws

enum class RuleLevel { Object, Type };
Verdict rhs_shape_check(const Signature& sig, const Term& r, RuleLevel level);

// syntactic kinds: product towers ending in *
bool is_kind_shape(const Term& t);

}  // namespace cac
