#include "pepa_cli/run_cli.hpp"

#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pepa/ctmc.hpp"
#include "pepa/equivalence.hpp"
#include "pepa/json_io.hpp"
#include "pepa/oracle.hpp"
#include "pepa/parser.hpp"
#include "pepa/security.hpp"
#include "pepa/semantics.hpp"

namespace pepa_cli {
namespace {

using namespace pepa;

// Unwinds straight to run_cli's exit with a code; the message is already out.
struct CliFailure {
  int code;
};

struct Options {
  std::string file;
  std::string leftFile;
  std::string rightFile;
  std::string envsFile;
  std::string kindName;
  std::vector<std::string> high;
  bool json = false;
  bool dot = false;
  bool steady = false;
  bool useFloat = false;
  bool rootOnly = false;
  std::size_t cap = kDefaultStateCap;
};

std::string read_file(const std::string& path, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "cannot read " << path << "\n";
    throw CliFailure{2};
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void print_diagnostics(const std::string& path,
                       const std::vector<Diagnostic>& diagnostics,
                       std::ostream& to) {
  for (const Diagnostic& d : diagnostics)
    to << path << ":" << d.pos.line << ":" << d.pos.column << ": " << d.message
       << "\n";
}

ModelEnv load_model(const std::string& path, std::ostream& err) {
  ParseResult parsed = parse_model(read_file(path, err));
  if (!parsed.env) {
    print_diagnostics(path, parsed.diagnostics, err);
    throw CliFailure{3};
  }
  std::vector<Diagnostic> problems = validate(*parsed.env);
  if (!problems.empty()) {
    print_diagnostics(path, problems, err);
    throw CliFailure{3};
  }
  return std::move(*parsed.env);
}

ActionSet checked_action_set(const std::vector<std::string>& names,
                             std::ostream& err) {
  ActionSet set = make_action_set(names);
  if (set_contains(set, kTau)) {
    err << "tau cannot be declared high\n";
    throw CliFailure{2};
  }
  return set;
}

void apply_high_override(ModelEnv& env, const std::vector<std::string>& names,
                         bool given, std::ostream& err) {
  if (!given) return;
  ActionSet high = checked_action_set(names, err);
  if (!env.high.empty() && env.high != high)
    err << "note: --high overrides the high set declared in the file\n";
  env.high = std::move(high);
}

EquivalenceKind parse_kind(const std::string& name, const ActionSet& high) {
  if (name == "exact") return EquivalenceKind::exact();
  if (name == "weak-exact") return EquivalenceKind::weak_exact();
  if (name == "lumpable") return EquivalenceKind::lumpable();
  return EquivalenceKind::weak_exact_up_to(high);
}

void print_violation(std::ostream& out, const Violation& v,
                     const AnalysisGraph* g) {
  out << "witness: ";
  if (g != nullptr)
    out << g->render_state(v.left_state) << "  vs  "
        << g->render_state(v.right_state);
  else
    out << "state " << v.left_state << " vs state " << v.right_state;
  out << "\n  action " << v.action << ", clause " << v.clause;
  if (v.block >= 0) out << ", block " << v.block;
  out << ": " << format_rational(v.left_value) << " vs "
      << format_rational(v.right_value) << "\n";
}

// Battery files are ordinary model files; each constant definition, in
// source order, is one candidate context run with the base model's high set.
std::vector<HighEnvironment> load_battery(const std::string& path,
                                          const ModelEnv& base,
                                          std::ostream& err, std::size_t cap) {
  ModelEnv batteryEnv = load_model(path, err);
  std::vector<HighEnvironment> battery;
  for (const Definition& d : batteryEnv.definitions) {
    HighEnvironment H;
    H.label = d.name;
    H.env = batteryEnv;
    H.env.root = Term::constant(d.name);
    H.env.high = base.high;
    if (!is_high_component(H.env, H.env.root, cap)) {
      err << "battery member " << d.name << " is not a high component over {"
          << set_str(base.high) << "}\n";
      throw CliFailure{3};
    }
    battery.push_back(std::move(H));
  }
  return battery;
}

void print_security(std::ostream& out, const SecurityVerdict& v,
                    const ModelEnv& env, const std::string& property) {
  out << "high set: " << (env.high.empty() ? "(none)" : set_str(env.high))
      << "\n";
  if (v.secure) {
    out << property << (v.vacuous ? " passed vacuously" : " holds");
    if (v.method == "definition-battery" && !v.vacuous)
      out << " for the supplied battery";
    out << "\n";
    return;
  }
  out << property << " fails\n";
  if (v.failing) {
    out << "derivative: " << v.failing->derivative << "\n";
    if (!v.failing->high_environment.empty())
      out << "context: " << v.failing->high_environment << "\n";
    print_violation(out, v.failing->violation, v.graph.get());
  }
}

int do_validate(const Options& o, std::ostream& out, std::ostream& err) {
  ParseResult parsed = parse_model(read_file(o.file, err));
  std::vector<Diagnostic> diagnostics = parsed.diagnostics;
  if (parsed.env) {
    std::vector<Diagnostic> more = validate(*parsed.env);
    diagnostics.insert(diagnostics.end(), more.begin(), more.end());
  }
  if (o.json)
    out << diagnostics_json(diagnostics);
  else if (diagnostics.empty())
    out << "ok\n";
  else
    print_diagnostics(o.file, diagnostics, out);
  return diagnostics.empty() ? 0 : 1;
}

int do_graph(const Options& o, std::ostream& out, std::ostream& err) {
  ModelEnv env = load_model(o.file, err);
  DerivationGraph g = derive(env, o.cap);
  if (o.dot) {
    out << graph_dot(g);
    return 0;
  }
  if (o.json) {
    out << graph_json(g);
    return 0;
  }
  out << g.state_count() << " states, " << g.edges().size()
      << " transitions\n";
  for (int i = 0; i < g.state_count(); ++i)
    out << "  " << i << ": " << to_string(g.state(i)) << "\n";
  for (const Edge& e : g.edges()) {
    out << "  " << e.src << " -> " << e.dst << "  " << e.activity.str();
    if (e.multiplicity > 1) out << " x" << e.multiplicity;
    out << "\n";
  }
  CompletenessReport report = is_complete(g);
  if (!report.complete) {
    out << "incomplete: passive rates escape in states";
    for (int s : report.passive_states) out << " " << s;
    out << "\n";
  }
  for (int s : report.absorbing_states) out << "absorbing state: " << s << "\n";
  return 0;
}

int do_ctmc(const Options& o, std::ostream& out, std::ostream& err) {
  ModelEnv env = load_model(o.file, err);
  DerivationGraph g = derive(env, o.cap);
  Generator gen = generator(g);
  std::optional<SteadyState> exact;
  std::optional<std::vector<double>> approx;
  if (o.steady || o.useFloat) {
    if (o.useFloat)
      approx = steady_state_double(gen, g);
    else
      exact = steady_state(gen, g);
  }
  if (o.json) {
    out << ctmc_json(g, gen, exact ? &*exact : nullptr,
                     approx ? &*approx : nullptr);
    return 0;
  }
  out << "generator (" << gen.n << " x " << gen.n << "):\n";
  for (const auto& row : gen.q) {
    out << " ";
    for (const Rational& q : row) out << " " << format_rational(q);
    out << "\n";
  }
  if (exact) {
    out << "steady state:\n";
    for (std::size_t i = 0; i < exact->pi.size(); ++i)
      out << "  " << i << "  " << format_rational(exact->pi[i]) << "  "
          << to_string(g.state(static_cast<int>(i))) << "\n";
  }
  if (approx) {
    out << "steady state (floating point):\n";
    for (std::size_t i = 0; i < approx->size(); ++i)
      out << "  " << i << "  " << std::setprecision(12) << (*approx)[i] << "  "
          << to_string(g.state(static_cast<int>(i))) << "\n";
  }
  return 0;
}

int do_equiv(const Options& o, std::ostream& out, std::ostream& err) {
  ModelEnv left = load_model(o.leftFile, err);
  ModelEnv right = load_model(o.rightFile, err);
  ActionSet high = checked_action_set(o.high, err);
  EquivalenceKind kind = parse_kind(o.kindName, high);
  EquivalenceResult r =
      equivalent(left, left.root, right, right.root, kind, o.cap);
  if (o.json) {
    out << equivalence_json(r, kind);
  } else {
    out << kind.name() << ": " << (r.related ? "related" : "not related")
        << "\n";
    if (r.witness) print_violation(out, *r.witness, r.graph.get());
    out << "partition: " << r.certificate.block_count() << " blocks over "
        << r.graph->state_count() << " states\n";
  }
  return r.related ? 0 : 1;
}

int do_epsni(const Options& o, bool highGiven, std::ostream& out,
             std::ostream& err) {
  ModelEnv env = load_model(o.file, err);
  apply_high_override(env, o.high, highGiven, err);
  SecurityVerdict v = check_epsni(env, o.cap);
  if (o.json)
    out << verdict_json(v);
  else
    print_security(out, v, env, "EPSNI");
  return v.secure ? 0 : 1;
}

int do_esni(const Options& o, bool highGiven, std::ostream& out,
            std::ostream& err) {
  ModelEnv env = load_model(o.file, err);
  apply_high_override(env, o.high, highGiven, err);
  std::vector<HighEnvironment> battery =
      load_battery(o.envsFile, env, err, o.cap);
  SecurityVerdict v;
  if (o.rootOnly) {
    v.method = "definition-battery";
    v.secure = true;
    v.vacuous = battery.empty();
    for (const HighEnvironment& H : battery) {
      EsniResult r = check_esni_with(env, env.root, H, o.cap);
      if (r.holds) continue;
      v.secure = false;
      SecurityVerdict::Failing failing;
      failing.derivative = to_string(env.root);
      failing.high_environment = H.label;
      if (r.details.witness) failing.violation = *r.details.witness;
      v.failing = std::move(failing);
      v.certificate = std::move(r.details.certificate);
      v.graph = r.details.graph;
      break;
    }
  } else {
    v = check_epsni_definition(env, battery, o.cap);
  }
  if (o.json)
    out << verdict_json(v);
  else
    print_security(out, v, env,
                   o.rootOnly ? "ESNI (root only, battery)" : "ESNI (battery)");
  return v.secure ? 0 : 1;
}

int do_psni(const Options& o, bool highGiven, std::ostream& out,
            std::ostream& err) {
  ModelEnv env = load_model(o.file, err);
  apply_high_override(env, o.high, highGiven, err);
  std::vector<HighEnvironment> battery =
      load_battery(o.envsFile, env, err, o.cap);
  SecurityVerdict v = check_psni_with(env, env.root, battery, o.cap);
  if (o.json)
    out << verdict_json(v);
  else
    print_security(out, v, env, "PSNI (battery)");
  return v.secure ? 0 : 1;
}

int do_unwind(const Options& o, bool highGiven, std::ostream& out,
              std::ostream& err) {
  ModelEnv env = load_model(o.file, err);
  apply_high_override(env, o.high, highGiven, err);
  UnwindingReport report = check_unwinding(env, o.cap);
  if (o.json) {
    out << unwinding_json(report);
  } else {
    for (const UnwindingEdge& e : report.edges) {
      out << e.source << " -(" << e.action << ")-> " << e.target
          << ": up-to " << (e.upto_ok ? "pass" : "FAIL") << ", restricted "
          << (e.restricted_ok ? "pass" : "FAIL") << "\n";
    }
    if (report.vacuous)
      out << "no high transitions\n";
    else
      out << (report.all_pass ? "all high transitions pass"
                              : "some high transition fails")
          << "\n";
  }
  return report.all_pass ? 0 : 1;
}

int do_oracle(const Options& o, bool highGiven, std::ostream& out,
              std::ostream& err) {
  ModelEnv env = load_model(o.file, err);
  apply_high_override(env, o.high, highGiven, err);
  EquivalenceKind kind = parse_kind(o.kindName, env.high);
  AnalysisGraph g(derive(env, o.cap));
  EnumerationStats stats;
  Partition largest = largest_by_enumeration(g, kind, &stats);
  Partition fixpoint = coarsest(g, kind);
  bool agree = largest == fixpoint;
  if (o.json) {
    out << oracle_json(g, kind, largest, fixpoint, stats);
  } else {
    out << "states: " << g.state_count() << "\n"
        << "partitions visited: " << stats.visited << "\n"
        << "partitions satisfying the clauses: " << stats.kept << "\n"
        << "largest by enumeration: " << largest.block_count() << " blocks\n"
        << "refinement fixpoint: " << fixpoint.block_count() << " blocks\n"
        << "agree: " << (agree ? "yes" : "NO") << "\n";
  }
  return agree ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"verifier for stochastic process models"};
  app.set_version_flag("--version", "0.1.0");
  app.require_subcommand(1);
  Options o;
  int code = 0;

  auto addJson = [&](CLI::App* cmd) {
    cmd->add_flag("--json", o.json, "emit JSON instead of text");
  };
  auto addCap = [&](CLI::App* cmd) {
    cmd->add_option("--cap", o.cap, "state space cap");
  };
  auto addHigh = [&](CLI::App* cmd) {
    return cmd
        ->add_option("--high", o.high,
                     "override the high action set (comma separated)")
        ->delimiter(',');
  };
  const std::vector<std::string> kindNames = {
      "exact", "weak-exact", "lumpable", "weak-exact-up-to-h"};

  CLI::App* cValidate =
      app.add_subcommand("validate", "parse and check a model file");
  cValidate->add_option("file", o.file, "model file")->required();
  addJson(cValidate);
  cValidate->callback([&] { code = do_validate(o, out, err); });

  CLI::App* cGraph =
      app.add_subcommand("graph", "derive the labelled transition graph");
  cGraph->add_option("file", o.file, "model file")->required();
  addJson(cGraph);
  addCap(cGraph);
  CLI::Option* dotFlag = cGraph->add_flag("--dot", o.dot, "emit Graphviz");
  cGraph->get_option("--json")->excludes(dotFlag);
  cGraph->callback([&] { code = do_graph(o, out, err); });

  CLI::App* cCtmc =
      app.add_subcommand("ctmc", "generator matrix and stationary analysis");
  cCtmc->add_option("file", o.file, "model file")->required();
  addJson(cCtmc);
  addCap(cCtmc);
  cCtmc->add_flag("--steady", o.steady, "solve for the stationary distribution");
  cCtmc->add_flag("--float", o.useFloat,
                  "use the floating point solver (implies --steady)");
  cCtmc->callback([&] { code = do_ctmc(o, out, err); });

  CLI::App* cEquiv =
      app.add_subcommand("equiv", "decide an equivalence between two models");
  cEquiv->add_option("--left", o.leftFile, "left model file")->required();
  cEquiv->add_option("--right", o.rightFile, "right model file")->required();
  cEquiv->add_option("--kind", o.kindName, "equivalence kind")
      ->required()
      ->check(CLI::IsMember(kindNames));
  addHigh(cEquiv);
  addJson(cEquiv);
  addCap(cEquiv);
  cEquiv->callback([&] { code = do_equiv(o, out, err); });

  CLI::App* cEpsni = app.add_subcommand(
      "epsni", "decide EPSNI: restriction equivalent to the original");
  cEpsni->add_option("file", o.file, "model file")->required();
  CLI::Option* epsniHigh = addHigh(cEpsni);
  addJson(cEpsni);
  addCap(cEpsni);
  cEpsni->callback(
      [&] { code = do_epsni(o, epsniHigh->count() > 0, out, err); });

  CLI::App* cEsni = app.add_subcommand(
      "esni", "probe the definition with a battery of high contexts");
  cEsni->add_option("file", o.file, "model file")->required();
  cEsni->add_option("--envs", o.envsFile, "battery model file")->required();
  cEsni->add_flag("--root-only", o.rootOnly,
                  "probe only the root, not every derivative");
  CLI::Option* esniHigh = addHigh(cEsni);
  addJson(cEsni);
  addCap(cEsni);
  cEsni->callback([&] { code = do_esni(o, esniHigh->count() > 0, out, err); });

  CLI::App* cPsni = app.add_subcommand(
      "psni", "probe the lumpable variant with a battery of high contexts");
  cPsni->add_option("file", o.file, "model file")->required();
  cPsni->add_option("--envs", o.envsFile, "battery model file")->required();
  CLI::Option* psniHigh = addHigh(cPsni);
  addJson(cPsni);
  addCap(cPsni);
  cPsni->callback([&] { code = do_psni(o, psniHigh->count() > 0, out, err); });

  CLI::App* cUnwind = app.add_subcommand(
      "unwind", "local checks on every high transition");
  cUnwind->add_option("file", o.file, "model file")->required();
  CLI::Option* unwindHigh = addHigh(cUnwind);
  addJson(cUnwind);
  addCap(cUnwind);
  cUnwind->callback(
      [&] { code = do_unwind(o, unwindHigh->count() > 0, out, err); });

  CLI::App* cOracle = app.add_subcommand(
      "oracle", "cross-check refinement against brute force enumeration");
  cOracle->add_option("file", o.file, "model file")->required();
  cOracle->add_option("--kind", o.kindName, "equivalence kind")
      ->required()
      ->check(CLI::IsMember(kindNames));
  CLI::Option* oracleHigh = addHigh(cOracle);
  addJson(cOracle);
  addCap(cOracle);
  cOracle->callback(
      [&] { code = do_oracle(o, oracleHigh->count() > 0, out, err); });

  try {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("pepa");
    for (const std::string& a : args) argv.push_back(a.c_str());
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int parseCode = app.exit(e, out, err);
    return parseCode == 0 ? 0 : 2;
  } catch (const CliFailure& f) {
    return f.code;
  } catch (const pepa::Error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  }
  return code;
}

}  // namespace pepa_cli
