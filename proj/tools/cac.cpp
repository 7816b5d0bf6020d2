// Command-line front end: check / report / typecheck / normalize.
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "cac/conditions.hpp"
#include "cac/parser.hpp"
#include "cac/typing.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitFails = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitParseError = 3;

long long default_fuel() {
  if (const char* env = std::getenv("CAC_FUEL")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 100000;
}

struct CommonOpts {
  std::string file;
  long long fuel = default_fuel();
  bool json_out = false;
  bool strict = false;
  std::vector<std::string> assumes;
  std::string partition;
};

int exit_code(const cac::Verdict& overall, bool strict) {
  if (overall.is_holds()) return kExitOk;
  if (overall.is_fails()) return kExitFails;
  return strict ? kExitFails : kExitInconclusive;
}

cac::ReportOptions make_options(const CommonOpts& c) {
  cac::ReportOptions opt;
  opt.fuel = c.fuel;
  for (const std::string& a : c.assumes) {
    if (a == "s5")
      opt.assume_s5 = true;
    else if (a == "confluence")
      opt.assume_confluence = true;
    else if (a == "fo-termination")
      opt.assume_fo_termination = true;
    else
      throw CLI::ValidationError("--assume",
                                 "unknown assumption '" + a +
                                     "' (expected s5, confluence or fo-termination)");
  }
  if (!c.partition.empty()) {
    std::set<std::string> f1, fw;
    std::set<std::string>* target = nullptr;
    std::string tok;
    auto flush = [&]() {
      if (!tok.empty() && target) target->insert(tok);
      tok.clear();
    };
    for (size_t i = 0; i <= c.partition.size(); ++i) {
      char ch = i < c.partition.size() ? c.partition[i] : ';';
      if (ch == '=' ) {
        if (tok == "f1") target = &f1;
        else if (tok == "fw") target = &fw;
        else throw CLI::ValidationError("--partition", "expected f1=... or fw=...");
        tok.clear();
      } else if (ch == ',' || ch == ';') {
        flush();
      } else {
        tok += ch;
      }
    }
    opt.partition = std::make_pair(std::move(f1), std::move(fw));
  }
  return opt;
}

json verdict_json(const cac::Verdict& v) {
  json j;
  j["tag"] = cac::to_string(v.tag);
  j["reason"] = v.reason;
  return j;
}

void print_report(const cac::Report& rep, bool full, bool json_out) {
  if (json_out) {
    json j;
    j["entries"] = json::array();
    for (const auto& e : rep.entries) {
      json je = verdict_json(e.verdict);
      je["key"] = e.key;
      je["informational"] = e.informational;
      j["entries"].push_back(std::move(je));
    }
    j["overall"] = verdict_json(rep.overall);
    std::cout << j.dump(2) << "\n";
    return;
  }
  for (const auto& e : rep.entries) {
    if (!full && e.verdict.is_holds() && e.key.find('(') != std::string::npos) continue;
    std::cout << e.key << ": " << cac::to_string(e.verdict.tag);
    if (!e.verdict.reason.empty()) std::cout << " -- " << e.verdict.reason;
    std::cout << "\n";
  }
  std::cout << "overall: " << cac::to_string(rep.overall.tag);
  if (!rep.overall.reason.empty()) std::cout << " -- " << rep.overall.reason;
  std::cout << "\n";
}

int run_check(const CommonOpts& c, bool full) {
  cac::System sys = cac::parse_system_file(c.file);
  cac::Report rep = cac::full_report(sys, make_options(c));
  print_report(rep, full, c.json_out);
  return exit_code(rep.overall, c.strict);
}

int run_typecheck(const CommonOpts& c, const std::string& expr, const std::string& type) {
  cac::System sys = cac::parse_system_file(c.file);
  sys.sig.augment_prec_from_types();
  (void)sys.sig.prec.finalize();
  cac::RewriteSystem R = sys.engine();
  cac::Fuel fuel{c.fuel};
  cac::Environment env;
  cac::Term t = cac::parse_term_string(sys.sig, expr);
  try {
    if (!type.empty()) {
      cac::Term T = cac::parse_term_string(sys.sig, type);
      cac::Verdict v = cac::check(sys.sig, R, env, t, T, fuel);
      std::cout << cac::to_string(t) << " : " << cac::to_string(T) << " -- "
                << cac::to_string(v.tag)
                << (v.reason.empty() ? "" : " -- " + v.reason) << "\n";
      return exit_code(v, c.strict);
    }
    cac::Term T = cac::infer(sys.sig, R, env, t, fuel);
    std::cout << cac::to_string(t) << " : " << cac::to_string(T) << "\n";
    return kExitOk;
  } catch (const cac::TypeError& e) {
    std::cout << "type error: " << e.message << "\n";
    return kExitFails;
  } catch (const cac::FuelExhausted& e) {
    std::cout << "fuel exhausted during " << e.where << "\n";
    return kExitInconclusive;
  }
}

int run_normalize(const CommonOpts& c, const std::string& expr, const std::string& strategy,
                  bool trace) {
  cac::System sys = cac::parse_system_file(c.file);
  cac::RewriteSystem R = sys.engine();
  cac::Fuel fuel{c.fuel};
  cac::Term t = cac::parse_term_string(sys.sig, expr);
  cac::Strategy strat =
      strategy == "outermost" ? cac::Strategy::Outermost : cac::Strategy::Innermost;
  cac::NormalizeResult res = cac::normalize(R, t, fuel, strat, trace);
  if (trace)
    for (const auto& step : res.trace)
      std::cout << step.tag << " @ '" << step.pos.to_string() << "': "
                << cac::to_string(step.term) << "\n";
  std::cout << cac::to_string(res.term) << "\n";
  if (!res.complete) {
    std::cout << "(fuel exhausted after " << res.steps << " steps)\n";
    return kExitInconclusive;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Type checker and strong-normalization checker for the Calculus of "
               "Algebraic Constructions"};
  app.require_subcommand(1);

  CommonOpts c;
  std::string expr, type, strategy = "innermost";
  bool trace = false;

  auto add_common = [&](CLI::App* sub, bool with_assume) {
    sub->add_option("file", c.file, "input .cac file")->required();
    sub->add_option("--fuel", c.fuel, "reduction/step budget");
    sub->add_flag("--strict", c.strict, "treat inconclusive results as failures");
    if (with_assume) {
      sub->add_flag("--json", c.json_out, "machine-readable output");
      sub->add_option("--assume", c.assumes,
                      "grant an assumption: s5, confluence, fo-termination");
      sub->add_option("--partition", c.partition,
                      "defined-symbol partition, e.g. f1=plus,neg;fw=times");
    }
  };

  CLI::App* check = app.add_subcommand("check", "run all checks, print a summary");
  add_common(check, true);
  CLI::App* report = app.add_subcommand("report", "run all checks, print every entry");
  add_common(report, true);
  CLI::App* typecheck = app.add_subcommand("typecheck", "infer or check the type of a term");
  add_common(typecheck, false);
  typecheck->add_option("-e,--expr", expr, "term to type")->required();
  typecheck->add_option("-t,--type", type, "expected type");
  CLI::App* normalize = app.add_subcommand("normalize", "normalize a term");
  add_common(normalize, false);
  normalize->add_option("-e,--expr", expr, "term to normalize")->required();
  normalize->add_option("--strategy", strategy, "innermost (default) or outermost")
      ->check(CLI::IsMember({"innermost", "outermost"}));
  normalize->add_flag("--trace", trace, "print each rewrite step");

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) return run_check(c, /*full=*/false);
    if (report->parsed()) return run_check(c, /*full=*/true);
    if (typecheck->parsed()) return run_typecheck(c, expr, type);
    if (normalize->parsed()) return run_normalize(c, expr, strategy, trace);
  } catch (const cac::ParseError& e) {
    std::cerr << e.pretty(c.file) << "\n";
    return kExitParseError;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kExitParseError;
  }
  return kExitOk;
}
