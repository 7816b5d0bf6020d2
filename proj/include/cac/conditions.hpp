// Whole-system checks: the rewrite-system flags (first-order, primitive,
// simple, small, positive, safe), the strong-normalization conditions A0-A4,
// the confluence pipeline, the logical-consistency criterion, and the full
// report that ties everything together.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cac/rules.hpp"
#include "cac/schema.hpp"
#include "cac/signature.hpp"

namespace cac {

struct System {
  Signature sig;
  std::vector<Rule> rules;

  RewriteSystem engine() const;
  std::vector<const Rule*> rules_of(const std::set<std::string>& heads) const;
};

struct CheckEntry {
  std::string key;
  Verdict verdict;
  bool informational = false;  // not folded into the overall verdict
};

struct Report {
  std::vector<CheckEntry> entries;
  Verdict overall = Verdict::holds();

  void add(std::string key, Verdict v, bool informational = false);
  const Verdict* find(const std::string& key) const;
};

struct ReportOptions {
  bool assume_s5 = false;
  bool assume_confluence = false;
  bool assume_fo_termination = false;
  // user-supplied partition of the defined symbols (F1, Fomega)
  std::optional<std::pair<std::set<std::string>, std::set<std::string>>> partition;
  long long fuel = 100000;
};

// ---------------------------------------------------------------------------
// Rewrite-system flags for a subset G of the defined symbols.
Verdict system_first_order(const System& sys, const std::set<std::string>& G);
Verdict system_primitive(const System& sys, const std::set<std::string>& G);
Verdict system_simple(const System& sys, const std::set<std::string>& G);
Verdict system_small(const System& sys, const std::set<std::string>& G);
Verdict system_positive(const System& sys, const std::set<std::string>& G);
Verdict system_safe(const System& sys, const std::set<std::string>& G);
// every left hand-side variable occurs at most as often in the right hand-side
Verdict system_non_duplicating(const System& sys, const std::set<std::string>& G);

// First-order recursive path ordering induced by the precedence and statuses.
bool rpo_gt(const Signature& sig, const Term& s, const Term& t);

// ---------------------------------------------------------------------------
// A-conditions. Schema verdicts are shared between A3 and A4.
using SchemaMap = std::map<std::string, Verdict>;  // rule name -> schema verdict

struct A3Result {
  std::vector<CheckEntry> entries;
  Verdict overall;
};
A3Result a3_check(const System& sys, const SchemaMap& schema, Fuel& fuel);

struct A4Result {
  std::set<std::string> f1, fw;
  std::vector<CheckEntry> entries;
  Verdict overall;
};
A4Result a4_check(const System& sys, const SchemaMap& schema, const ReportOptions& opt,
                  Fuel& fuel);

// A1 via left-linearity + strong normalization (A4) + joinable critical pairs.
Verdict a1_check(const System& sys, const Verdict& a4, bool assume_confluence, Fuel& fuel);

struct ConsistencyResult {
  std::vector<CheckEntry> entries;
  Verdict overall;
};
ConsistencyResult consistency_check(const System& sys, const Verdict& a1, Fuel& fuel);

// Constructor-completeness of the definition of f over fully-applied
// constructor instances (exposed for the consistency criterion and tests).
Verdict completely_defined(const System& sys, const std::string& f, Fuel& fuel);

// ---------------------------------------------------------------------------
// The whole pipeline, in deterministic order.
Report full_report(System& sys, const ReportOptions& opt);

}  // namespace cac
