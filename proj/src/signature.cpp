#include "cac/signature.hpp"

#include <algorithm>
#include <sstream>

namespace cac {

std::string Status::to_string() const {
  std::string s = "lex";
  for (const auto& m : slots) {
    s += " (mul";
    for (int i : m) s += " x" + std::to_string(i);
    s += ")";
  }
  return s;
}

void decompose_product(const Term& type, std::vector<std::pair<Var, Term>>& formals,
                       Term& output) {
  formals.clear();
  Term cur = type;
  // bound variables must stay distinct from each other for gamma = {x->l} to
  // be a well-defined parallel substitution; rename on clash
  std::set<Var> seen;
  while (cur.is(TermKind::Prod)) {
    Var x = cur.var_ref();
    Term body = cur.body();
    if (seen.count(x)) {
      std::set<Var> avoid = seen;
      for (const Var& v : free_vars(body)) avoid.insert(v);
      Var x2 = fresh_var(x, avoid);
      body = subst1(body, x, Term::var(x2));
      x = x2;
    }
    seen.insert(x);
    formals.emplace_back(x, cur.ann());
    cur = body;
  }
  output = cur;
}

// ---------------------------------------------------------------------------
// Precedence

std::string Precedence::find(const std::string& a) const {
  auto it = parent_.find(a);
  if (it == parent_.end()) return a;
  std::string r = find(it->second);
  parent_[a] = r;
  return r;
}

std::string Precedence::rep(const std::string& a) const { return find(a); }

void Precedence::declare_eq(const std::string& a, const std::string& b) {
  std::string ra = find(a), rb = find(b);
  if (ra != rb) parent_[ra] = rb;
}

void Precedence::declare_gt(const std::string& a, const std::string& b) {
  edges_.insert({a, b});
}

std::optional<std::string> Precedence::finalize() {
  // project edges onto representatives, then transitive closure
  std::set<std::pair<std::string, std::string>> e;
  std::set<std::string> nodes;
  for (const auto& [a, b] : edges_) {
    e.insert({find(a), find(b)});
    nodes.insert(find(a));
    nodes.insert(find(b));
  }
  closure_ = e;
  bool changed = true;
  while (changed) {
    changed = false;
    std::set<std::pair<std::string, std::string>> add;
    for (const auto& [a, b] : closure_)
      for (const auto& [c, d] : closure_)
        if (b == c && !closure_.count({a, d})) add.insert({a, d});
    if (!add.empty()) {
      closure_.insert(add.begin(), add.end());
      changed = true;
    }
  }
  for (const std::string& n : nodes)
    if (closure_.count({n, n}))
      return "precedence has a cycle through '" + n + "'";
  return std::nullopt;
}

bool Precedence::equiv(const std::string& a, const std::string& b) const {
  return find(a) == find(b);
}

bool Precedence::gt(const std::string& a, const std::string& b) const {
  return closure_.count({find(a), find(b)}) != 0;
}

// ---------------------------------------------------------------------------
// Signature

const SymbolDecl* Signature::find(const std::string& f) const {
  auto it = index.find(f);
  return it == index.end() ? nullptr : &decls[it->second];
}

SymbolDecl* Signature::find_mut(const std::string& f) {
  auto it = index.find(f);
  return it == index.end() ? nullptr : &decls[it->second];
}

namespace {
bool syntactic_kind_type(const Term& t) {
  if (t.is(TermKind::Sort)) return t.sort_tag() == SortTag::Star;
  if (t.is(TermKind::Prod)) return syntactic_kind_type(t.body());
  return false;
}
}  // namespace

void Signature::add_symbol(const std::string& name, Term type) {
  SymbolDecl d;
  d.name = name;
  d.type = type;
  // s_f: Box when tau_f is a kind (product tower ending in *); the full
  // judgement |- tau_f : s_f is verified by the typing pass
  d.sort = syntactic_kind_type(type) ? SortTag::Box : SortTag::Star;
  decompose_product(type, d.formals, d.output);
  index[name] = decls.size();
  decls.push_back(std::move(d));
}

void Signature::augment_prec_from_types() {
  for (const auto& d : decls)
    for (const std::string& g : symbols_of(d.type))
      if (g != d.name && !prec.equiv(d.name, g)) prec.declare_gt(d.name, g);
}

bool Signature::is_defined(const std::string& f) const {
  const SymbolDecl* d = find(f);
  return d && d->defined;
}

bool Signature::is_predicate_level(const std::string& f) const {
  const SymbolDecl* d = find(f);
  return d && d->sort == SortTag::Box;
}

std::set<std::string> Signature::const_predicates() const {
  std::set<std::string> out;
  for (const auto& d : decls)
    if (d.sort == SortTag::Box && !d.defined) out.insert(d.name);
  return out;
}

std::set<std::string> Signature::defined_symbols() const {
  std::set<std::string> out;
  for (const auto& d : decls)
    if (d.defined) out.insert(d.name);
  return out;
}

std::optional<std::string> Signature::const_pred_output(const std::string& f) const {
  const SymbolDecl* d = find(f);
  if (!d) return std::nullopt;
  Spine sp = spine(d->output);
  if (!sp.head.is(TermKind::Symb)) return std::nullopt;
  const std::string& C = sp.head.symb_name();
  if (!is_const_predicate(C)) return std::nullopt;
  return C;
}

std::set<int> Signature::acc(const std::string& f) const {
  if (!const_pred_output(f)) return {};
  auto it = acc_declared.find(f);
  if (it != acc_declared.end()) return it->second;
  const SymbolDecl* d = find(f);
  std::set<int> all;
  for (int i = 1; i <= static_cast<int>(d->formals.size()); ++i) all.insert(i);
  return all;
}

std::set<int> Signature::mon_of(const std::string& C) const {
  auto it = mon.find(C);
  return it == mon.end() ? std::set<int>{} : it->second;
}

Status Signature::status_of(const std::string& f) const {
  const SymbolDecl* d = find(f);
  if (d && d->declared_status) return *d->declared_status;
  Status st;
  std::vector<int> slot;
  if (d) {
    for (size_t i = 0; i < d->formals.size(); ++i) {
      Spine sp = spine(d->formals[i].second);
      if (sp.head.is(TermKind::Symb) && is_const_predicate(sp.head.symb_name()))
        slot.push_back(static_cast<int>(i) + 1);
    }
    if (slot.empty())
      for (size_t i = 0; i < d->formals.size(); ++i)
        slot.push_back(static_cast<int>(i) + 1);
  }
  if (!slot.empty()) st.slots.push_back(slot);
  return st;
}

// ---------------------------------------------------------------------------
// Admissibility (I2-I6)

namespace {
// gamma-free occurrence scan for a constant predicate symbol set
std::set<std::string> equiv_const_preds(const Signature& sig, const std::string& C) {
  std::set<std::string> out;
  for (const std::string& D : sig.const_predicates())
    if (sig.prec.equiv(D, C)) out.insert(D);
  return out;
}
}  // namespace

AdmissibilityReport admissible_check(const Signature& sig) {
  AdmissibilityReport rep;
  rep.overall = Verdict::holds();
  auto add = [&](std::string key, Verdict v) {
    rep.overall = meet(rep.overall, v);
    rep.entries.push_back({std::move(key), std::move(v)});
  };

  // structural sanity of Mon / declared Acc
  for (const auto& [C, ms] : sig.mon) {
    const SymbolDecl* d = sig.find(C);
    if (!d || !sig.is_const_predicate(C)) {
      add("Mon(" + C + ")", Verdict::fails("Mon declared for non constant-predicate symbol"));
      continue;
    }
    for (int i : ms) {
      bool ok = i >= 1 && i <= static_cast<int>(d->formals.size()) &&
                d->formals[static_cast<size_t>(i) - 1].first.sort == SortTag::Box;
      if (!ok)
        add("Mon(" + C + ")",
            Verdict::fails("index " + std::to_string(i) +
                           " is not a predicate-sorted argument of " + C));
    }
  }
  for (const auto& [f, as] : sig.acc_declared) {
    const SymbolDecl* d = sig.find(f);
    if (!d) {
      add("Acc(" + f + ")", Verdict::fails("unknown symbol"));
      continue;
    }
    if (!sig.const_pred_output(f) && !as.empty())
      add("Acc(" + f + ")",
          Verdict::fails("Acc declared but the output of " + f +
                         " is not a constant-predicate application"));
    for (int i : as)
      if (i < 1 || i > static_cast<int>(d->formals.size()))
        add("Acc(" + f + ")", Verdict::fails("index out of range"));
  }

  for (const auto& d : sig.decls) {
    auto Copt = sig.const_pred_output(d.name);
    if (!Copt) continue;
    const std::string& C = *Copt;
    Spine out_sp = spine(sig.find(d.name)->output);
    for (int j : sig.acc(d.name)) {
      const Term& Uj = d.formals[static_cast<size_t>(j) - 1].second;
      std::string where = "(" + C + "," + d.name + "," + std::to_string(j) + ")";
      std::set<Position> pos_plus = signed_positions(Uj, +1, sig.mon);

      // I3: equivalent symbols at positive positions
      {
        Verdict v = Verdict::holds();
        for (const std::string& D : equiv_const_preds(sig, C)) {
          for (const Position& p : symbol_positions(Uj, D)) {
            if (!pos_plus.count(p)) {
              v = Verdict::fails("symbol " + D + " occurs at non-positive position " +
                                 p.to_string() + " in argument " + std::to_string(j) +
                                 " of " + d.name);
              break;
            }
          }
          if (!v.is_holds()) break;
        }
        add("I3" + where, v);
      }
      // I4: no strictly greater constant predicate occurs
      {
        Verdict v = Verdict::holds();
        for (const std::string& D : sig.const_predicates()) {
          if (sig.prec.gt(D, C) && occurs_symbol(Uj, D)) {
            v = Verdict::fails("symbol " + D + " >_C " + C + " occurs in argument " +
                               std::to_string(j) + " of " + d.name);
            break;
          }
        }
        add("I4" + where, v);
      }
      // I5: no defined symbol occurs
      {
        Verdict v = Verdict::holds();
        for (const std::string& F : symbols_of(Uj)) {
          if (sig.is_defined(F)) {
            v = Verdict::fails("defined symbol " + F + " occurs in argument " +
                               std::to_string(j) + " of " + d.name);
            break;
          }
        }
        add("I5" + where, v);
      }
      // I6 + I2: predicate variables are parameters; monotonic ones positive
      {
        Verdict v6 = Verdict::holds();
        Verdict v2 = Verdict::holds();
        for (const Var& Y : free_vars(Uj, SortTag::Box)) {
          int iota = 0;
          for (size_t i = 0; i < out_sp.args.size(); ++i) {
            if (out_sp.args[i].is(TermKind::Var) && out_sp.args[i].var_ref() == Y) {
              iota = static_cast<int>(i) + 1;
              break;
            }
          }
          if (iota == 0) {
            v6 = meet(v6, Verdict::fails("predicate variable " + Y.name +
                                         " of argument " + std::to_string(j) + " of " +
                                         d.name + " is not a parameter of " + C));
            continue;
          }
          rep.iota[d.name + "#" + std::to_string(j)][Y] = iota;
          if (sig.mon_of(C).count(iota)) {
            for (const Position& p : var_positions(Uj, Y)) {
              if (!pos_plus.count(p)) {
                v2 = meet(v2, Verdict::fails("monotonic parameter " + Y.name +
                                             " occurs at non-positive position in argument " +
                                             std::to_string(j) + " of " + d.name));
                break;
              }
            }
          }
        }
        add("I6" + where, v6);
        add("I2" + where, v2);
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Predicate classification

const char* to_string(PredClass c) {
  switch (c) {
    case PredClass::Primitive: return "primitive";
    case PredClass::Basic: return "basic";
    case PredClass::StrictlyPositive: return "strictly-positive";
    case PredClass::General: return "general";
  }
  return "?";
}

namespace {
struct ClassCtx {
  const Signature& sig;
  std::map<std::string, int> prim_memo;  // rep -> 0 unknown/in progress, 1 yes, -1 no
};

// all (f, j, U_j) triples quantified over D =_C C
std::vector<std::pair<std::string, Term>> acc_arg_types_of_class(const Signature& sig,
                                                                 const std::string& C) {
  std::vector<std::pair<std::string, Term>> out;
  for (const auto& d : sig.decls) {
    auto Dopt = sig.const_pred_output(d.name);
    if (!Dopt || !sig.prec.equiv(*Dopt, C)) continue;
    for (int j : sig.acc(d.name))
      out.emplace_back(d.name, d.formals[static_cast<size_t>(j) - 1].second);
  }
  return out;
}

bool is_primitive(ClassCtx& ctx, const std::string& C);

// U_j = E t with E a constant predicate related suitably
bool primitive_arg(ClassCtx& ctx, const std::string& C, const Term& Uj) {
  Spine sp = spine(Uj);
  if (!sp.head.is(TermKind::Symb)) return false;
  const std::string& E = sp.head.symb_name();
  if (!ctx.sig.is_const_predicate(E)) return false;
  if (ctx.sig.prec.equiv(E, C)) return true;
  if (ctx.sig.prec.gt(C, E) && is_primitive(ctx, E)) return true;
  return false;
}

bool is_primitive(ClassCtx& ctx, const std::string& C) {
  std::string key = ctx.sig.prec.rep(C);
  auto it = ctx.prim_memo.find(key);
  if (it != ctx.prim_memo.end()) return it->second == 1;
  ctx.prim_memo[key] = -1;  // guard against precedence-equal cycles
  bool ok = true;
  for (const auto& [f, Uj] : acc_arg_types_of_class(ctx.sig, C)) {
    (void)f;
    if (!primitive_arg(ctx, C, Uj)) {
      ok = false;
      break;
    }
  }
  ctx.prim_memo[key] = ok ? 1 : -1;
  return ok;
}

bool occurs_equiv(const Signature& sig, const std::string& C, const Term& t) {
  for (const std::string& D : sig.const_predicates())
    if (sig.prec.equiv(D, C) && occurs_symbol(t, D)) return true;
  return false;
}
}  // namespace

PredClass classify_predicate(const Signature& sig, const std::string& C) {
  ClassCtx ctx{sig, {}};
  if (is_primitive(ctx, C)) return PredClass::Primitive;

  bool basic = true, sp_ok = true;
  for (const auto& [f, Uj] : acc_arg_types_of_class(sig, C)) {
    (void)f;
    if (!occurs_equiv(sig, C, Uj)) continue;
    // basic: U_j itself must be an application of an equivalent symbol
    Spine h = spine(Uj);
    bool headed_equiv = h.head.is(TermKind::Symb) &&
                        sig.is_const_predicate(h.head.symb_name()) &&
                        sig.prec.equiv(h.head.symb_name(), C);
    if (!headed_equiv) basic = false;
    // strictly positive: U_j = (z:V...)E t with no equivalent symbol in V
    std::vector<std::pair<Var, Term>> zs;
    Term core;
    decompose_product(Uj, zs, core);
    Spine ch = spine(core);
    bool core_ok = ch.head.is(TermKind::Symb) &&
                   sig.is_const_predicate(ch.head.symb_name()) &&
                   sig.prec.equiv(ch.head.symb_name(), C);
    if (!core_ok) {
      sp_ok = false;
    } else {
      for (const auto& [z, V] : zs) {
        (void)z;
        if (occurs_equiv(sig, C, V)) {
          sp_ok = false;
          break;
        }
      }
      // equivalent symbols must also not occur in the arguments t of E t
      for (const Term& a : ch.args)
        if (occurs_equiv(sig, C, a)) sp_ok = false;
    }
    if (!basic && !sp_ok) break;
  }
  if (basic) return PredClass::Basic;
  if (sp_ok) return PredClass::StrictlyPositive;
  return PredClass::General;
}

// ---------------------------------------------------------------------------
// SP(f)

SPInfo strictly_positive_positions(const Signature& sig, const std::string& f) {
  SPInfo info;
  const SymbolDecl* d = sig.find(f);
  if (!d) return info;
  Status st = sig.status_of(f);
  for (size_t i = 0; i < st.slots.size(); ++i) {
    const std::vector<int>& ks = st.slots[i];
    if (ks.empty()) continue;
    // candidate witness: the type of the first compared argument
    bool ok = true;
    Term witness;
    std::string C;
    for (int k : ks) {
      if (k < 1 || k > static_cast<int>(d->formals.size())) {
        ok = false;
        break;
      }
      const Term& Tk = d->formals[static_cast<size_t>(k) - 1].second;
      Spine sp = spine(Tk);
      if (!sp.head.is(TermKind::Symb) || !sig.is_const_predicate(sp.head.symb_name())) {
        ok = false;
        break;
      }
      if (!witness.valid()) {
        witness = Tk;
        C = sp.head.symb_name();
        if (classify_predicate(sig, C) == PredClass::General) {
          ok = false;
          break;
        }
      } else {
        if (sp.head.symb_name() != C) {
          ok = false;
          break;
        }
        // predicate arguments must agree: u|_C = a|_C
        const SymbolDecl* cd = sig.find(C);
        Spine wp = spine(witness);
        bool agree = true;
        for (size_t z = 0; z < cd->formals.size() && z < sp.args.size(); ++z) {
          if (cd->formals[z].first.sort != SortTag::Box) continue;
          if (z >= wp.args.size() || !alpha_eq(sp.args[z], wp.args[z])) {
            agree = false;
            break;
          }
        }
        if (!agree) {
          ok = false;
          break;
        }
      }
    }
    if (ok && witness.valid()) {
      info.slots.insert(static_cast<int>(i) + 1);
      info.witness[static_cast<int>(i) + 1] = witness;
    }
  }
  return info;
}

// ---------------------------------------------------------------------------
// Structural elaboration checks

std::vector<std::string> structural_check(
    const Signature& sig, const std::vector<std::pair<std::string, Term>>& head_rhs) {
  std::vector<std::string> errs;
  for (const auto& d : sig.decls) {
    if (!free_vars(d.type).empty())
      errs.push_back("type of symbol " + d.name + " is not closed");
    if (d.declared_status) {
      if (d.declared_status->slots.empty())
        errs.push_back("status of " + d.name + " is empty");
      if (d.declared_status->arity() > static_cast<int>(d.formals.size()))
        errs.push_back("status of " + d.name + " uses argument index " +
                       std::to_string(d.declared_status->arity()) + " but " + d.name +
                       " has only " + std::to_string(d.formals.size()) + " arguments");
      for (const auto& m : d.declared_status->slots)
        if (m.empty()) errs.push_back("empty multiset in status of " + d.name);
    }
  }
  // precedence compatibility: f >= g for every g occurring in a rhs of f
  for (const auto& [head, rhs] : head_rhs) {
    for (const std::string& g : symbols_of(rhs)) {
      if (!sig.prec.ge(head, g))
        errs.push_back("precedence incompatible with rules: rule of " + head +
                       " mentions " + g + " but " + head + " >= " + g +
                       " is not declared");
    }
  }
  // statuses of equivalent symbols must coincide
  for (const auto& d1 : sig.decls)
    for (const auto& d2 : sig.decls) {
      if (d1.name >= d2.name || !sig.prec.equiv(d1.name, d2.name)) continue;
      if (!(sig.status_of(d1.name) == sig.status_of(d2.name)))
        errs.push_back("equivalent symbols " + d1.name + " and " + d2.name +
                       " have different statuses");
    }
  return errs;
}

}  // namespace cac
