// Verdict plumbing shared by every checker: a four-state outcome with
// human-readable evidence.
#pragma once

#include <string>
#include <vector>

namespace cac {

enum class VerdictTag { Holds, Fails, Assumed, Undecided };

struct Verdict {
  VerdictTag tag = VerdictTag::Holds;
  std::string reason;  // evidence / failure / assumption text

  static Verdict holds(std::string why = "") { return {VerdictTag::Holds, std::move(why)}; }
  static Verdict fails(std::string why) { return {VerdictTag::Fails, std::move(why)}; }
  static Verdict assumed(std::string why) { return {VerdictTag::Assumed, std::move(why)}; }
  static Verdict undecided(std::string why) { return {VerdictTag::Undecided, std::move(why)}; }

  bool is_holds() const { return tag == VerdictTag::Holds; }
  bool is_fails() const { return tag == VerdictTag::Fails; }
  bool is_assumed() const { return tag == VerdictTag::Assumed; }
  bool is_undecided() const { return tag == VerdictTag::Undecided; }
  // acceptable = counts toward an overall pass (Holds, or Assumed when the
  // caller tolerates assumptions)
  bool ok(bool allow_assumed = true) const {
    return tag == VerdictTag::Holds || (allow_assumed && tag == VerdictTag::Assumed);
  }
};

inline const char* to_string(VerdictTag t) {
  switch (t) {
    case VerdictTag::Holds: return "Holds";
    case VerdictTag::Fails: return "Fails";
    case VerdictTag::Assumed: return "Assumed";
    case VerdictTag::Undecided: return "Undecided";
  }
  return "?";
}

// Conjunction: Fails dominates, then Undecided, then Assumed, then Holds.
inline Verdict meet(const Verdict& a, const Verdict& b) {
  auto rank = [](VerdictTag t) {
    switch (t) {
      case VerdictTag::Fails: return 3;
      case VerdictTag::Undecided: return 2;
      case VerdictTag::Assumed: return 1;
      case VerdictTag::Holds: return 0;
    }
    return 0;
  };
  return rank(a.tag) >= rank(b.tag) ? a : b;
}

// Fuel: a shared step budget; exhaustion surfaces as Undecided verdicts.
struct Fuel {
  long long remaining = 100000;
  bool spend(long long n = 1) {
    if (remaining < n) {
      remaining = 0;
      return false;
    }
    remaining -= n;
    return true;
  }
  bool exhausted() const { return remaining <= 0; }
};

struct FuelExhausted {
  std::string where;
};

}  // namespace cac
