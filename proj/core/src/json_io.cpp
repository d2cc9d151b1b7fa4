#include "pepa/json_io.hpp"

#include <string>
#include <utility>

#include "json.hpp"
#include "pepa/rational.hpp"
#include "pepa/semantics.hpp"

namespace pepa {

namespace {

using nlohmann::json;

// dump(2) with sorted keys is the byte-deterministic house format.
std::string finish(const json& j) { return j.dump(2) + "\n"; }

json violation_obj(const Violation& v, const AnalysisGraph* g) {
  json j;
  j["left_state"] = v.left_state;
  j["right_state"] = v.right_state;
  if (g != nullptr) {
    j["left"] = g->render_state(v.left_state);
    j["right"] = g->render_state(v.right_state);
  }
  j["action"] = v.action;
  j["clause"] = v.clause;
  j["block"] = v.block;
  j["left_rate"] = format_rational(v.left_value);
  j["right_rate"] = format_rational(v.right_value);
  return j;
}

json partition_obj(const Partition& p, const AnalysisGraph& g) {
  json blocks = json::array();
  for (const auto& block : p.blocks) {
    json b = json::array();
    for (int s : block)
      b.push_back({{"origin", g.origin_of(s)}, {"term", g.render_state(s)}});
    blocks.push_back(std::move(b));
  }
  return blocks;
}

json states_obj(const DerivationGraph& g) {
  json states = json::array();
  for (int i = 0; i < g.state_count(); ++i)
    states.push_back(to_string(g.state(i)));
  return states;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '\\' || c == '"') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string diagnostics_json(const std::vector<Diagnostic>& diagnostics) {
  json j;
  j["ok"] = diagnostics.empty();
  json list = json::array();
  for (const Diagnostic& d : diagnostics)
    list.push_back({{"message", d.message},
                    {"line", d.pos.line},
                    {"column", d.pos.column}});
  j["diagnostics"] = std::move(list);
  return finish(j);
}

std::string graph_json(const DerivationGraph& g) {
  json j;
  j["states"] = states_obj(g);
  json edges = json::array();
  for (const Edge& e : g.edges())
    edges.push_back({{"source", e.src},
                     {"action", e.activity.action},
                     {"rate", e.activity.rate.str()},
                     {"target", e.dst},
                     {"multiplicity", e.multiplicity}});
  j["edges"] = std::move(edges);
  CompletenessReport report = is_complete(g);
  j["complete"] = report.complete;
  j["passive_states"] = report.passive_states;
  j["absorbing_states"] = report.absorbing_states;
  return finish(j);
}

std::string ctmc_json(const DerivationGraph& g, const Generator& gen,
                      const SteadyState* exact,
                      const std::vector<double>* approx) {
  json j;
  j["states"] = states_obj(g);
  json rows = json::array();
  for (const auto& row : gen.q) {
    json r = json::array();
    for (const Rational& q : row) r.push_back(format_rational(q));
    rows.push_back(std::move(r));
  }
  j["generator"] = std::move(rows);
  if (exact != nullptr) {
    json pi = json::array();
    for (const Rational& p : exact->pi) pi.push_back(format_rational(p));
    j["steady_state"] = std::move(pi);
  }
  if (approx != nullptr) j["steady_state_float"] = *approx;
  return finish(j);
}

std::string partition_json(const Partition& p, const AnalysisGraph& g) {
  json j;
  j["blocks"] = partition_obj(p, g);
  return finish(j);
}

std::string equivalence_json(const EquivalenceResult& r,
                             const EquivalenceKind& kind) {
  json j;
  j["kind"] = kind.name();
  j["high"] = kind.high;
  j["related"] = r.related;
  j["left_root"] = r.graph->render_state(r.graph->root_of(0));
  j["right_root"] = r.graph->render_state(r.graph->root_of(1));
  j["partition"] = partition_obj(r.certificate, *r.graph);
  j["witness"] =
      r.witness ? violation_obj(*r.witness, r.graph.get()) : json(nullptr);
  return finish(j);
}

std::string verdict_json(const SecurityVerdict& v) {
  json j;
  j["secure"] = v.secure;
  j["method"] = v.method;
  j["vacuous"] = v.vacuous;
  if (v.failing) {
    json f;
    f["derivative"] = v.failing->derivative;
    f["high_environment"] = v.failing->high_environment;
    f["violation"] = violation_obj(v.failing->violation, v.graph.get());
    j["failing"] = std::move(f);
  } else {
    j["failing"] = nullptr;
  }
  if (v.certificate && v.graph)
    j["certificate"] = partition_obj(*v.certificate, *v.graph);
  else
    j["certificate"] = nullptr;
  return finish(j);
}

std::string unwinding_json(const UnwindingReport& r) {
  json j;
  j["all_pass"] = r.all_pass;
  j["vacuous"] = r.vacuous;
  json edges = json::array();
  for (const UnwindingEdge& e : r.edges) {
    json je;
    je["source"] = e.source;
    je["action"] = e.action;
    je["target"] = e.target;
    je["upto_ok"] = e.upto_ok;
    je["restricted_ok"] = e.restricted_ok;
    je["upto_violation"] =
        e.upto_violation ? violation_obj(*e.upto_violation, nullptr)
                         : json(nullptr);
    je["restricted_violation"] =
        e.restricted_violation ? violation_obj(*e.restricted_violation, nullptr)
                               : json(nullptr);
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  return finish(j);
}

std::string oracle_json(const AnalysisGraph& g, const EquivalenceKind& kind,
                        const Partition& largest, const Partition& coarsest,
                        const EnumerationStats& stats) {
  json j;
  j["kind"] = kind.name();
  j["high"] = kind.high;
  j["states"] = g.state_count();
  j["partitions_visited"] = stats.visited;
  j["partitions_kept"] = stats.kept;
  j["largest"] = partition_obj(largest, g);
  j["coarsest"] = partition_obj(coarsest, g);
  j["agree"] = largest == coarsest;
  return finish(j);
}

std::string graph_dot(const DerivationGraph& g) {
  std::string out = "digraph model {\n  rankdir=LR;\n  node [shape=box];\n";
  for (int i = 0; i < g.state_count(); ++i) {
    out += "  s" + std::to_string(i) + " [label=\"" +
           dot_escape(to_string(g.state(i))) + "\"];\n";
  }
  for (const Edge& e : g.edges()) {
    std::string label = e.activity.str();
    if (e.multiplicity > 1) label += " x" + std::to_string(e.multiplicity);
    out += "  s" + std::to_string(e.src) + " -> s" + std::to_string(e.dst) +
           " [label=\"" + dot_escape(label) + "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace pepa
