// The termination schema for higher-order rules: the ordering on symbol
// arguments (accessibility-based, with a dedicated treatment of strictly
// positive slots), its multiset/lexicographic status extension, and the
// computability closure of a rule.
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cac/rules.hpp"
#include "cac/signature.hpp"

namespace cac {

using PairRel = std::function<bool(const TypedPair&, const TypedPair&)>;

// typed-pair equality: alpha-equal terms with alpha-equal types modulo rho
bool typed_pair_eq(const Subst& rho, const TypedPair& a, const TypedPair& b);

// strict multiset extension of `gt` with `eq` as the matching equality
bool multiset_gt(const PairRel& gt, const PairRel& eq, std::vector<TypedPair> lhs,
                 std::vector<TypedPair> rhs);

// >^i_R on a strictly positive slot
bool sp_arg_gt(const Signature& sig, const Rule& r, const TypedPair& t, const TypedPair& u);

// the full ordering >_R: lhs = x gamma : T gamma of the rule head, rhs = the
// typed arguments of an equivalent callee
bool args_gt(const Signature& sig, const Rule& r, const std::vector<TypedPair>& lhs,
             const std::vector<TypedPair>& rhs);

// status comparison with a per-slot base relation chosen by 1-based slot index
bool status_compare(const Status& st, const std::function<PairRel(int)>& base_for_slot,
                    const PairRel& eq, const std::vector<TypedPair>& lhs,
                    const std::vector<TypedPair>& rhs);

// Delta |-_c r : U gamma rho, with conversion restricted to beta plus the
// already-validated fragment
Verdict cc_check(const Signature& sig, const RewriteSystem& conv, const Rule& r,
                 Fuel& fuel);

// well-formedness plus membership of the right hand-side in the closure
Verdict general_schema_check(const Signature& sig, const RewriteSystem& conv,
                             const Rule& r, Fuel& fuel);

}  // namespace cac
