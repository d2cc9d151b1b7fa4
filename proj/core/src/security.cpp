#include "pepa/security.hpp"

#include <map>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "pepa/errors.hpp"
#include "pepa/semantics.hpp"

namespace pepa {

namespace {

TermPtr rename_constants(const TermPtr& t,
                         const std::unordered_map<std::string, std::string>& renames) {
  switch (t->kind()) {
    case Term::Kind::Nil:
      return t;
    case Term::Kind::Prefix:
      return Term::prefix(t->activity(), rename_constants(t->body(), renames));
    case Term::Kind::Choice:
      return Term::choice(rename_constants(t->left(), renames),
                          rename_constants(t->right(), renames));
    case Term::Kind::Const: {
      auto it = renames.find(t->name());
      return it == renames.end() ? t : Term::constant(it->second);
    }
    case Term::Kind::Hide:
      return Term::hide(rename_constants(t->body(), renames), t->action_set());
    case Term::Kind::Coop:
      return Term::coop(rename_constants(t->left(), renames), t->action_set(),
                        rename_constants(t->right(), renames));
  }
  throw Error("unhandled term kind");
}

// The violation names two states of the combined graph; the one from the
// unrestricted side (origin 1) is a derivative of the model under scrutiny.
std::string original_side_state(const AnalysisGraph& g, const Violation& v) {
  if (g.origin_of(v.right_state) == 1) return g.render_state(v.right_state);
  if (g.origin_of(v.left_state) == 1) return g.render_state(v.left_state);
  return g.render_state(v.right_state);
}

void require_root(const ModelEnv& env) {
  if (!env.root) throw ModelError("model has no system declaration");
}

// Security verdicts compare equilibrium flows, so every state the comparison
// touches must keep evolving: a zero exit rate or an unresolved passive weight
// makes the underlying chain undefined and the question ill-posed.
void require_live(const DerivationGraph& g, const std::string& what) {
  CompletenessReport r = is_complete(g);
  if (!r.complete)
    throw ModelError(what + " leaves a passive rate unresolved in state " +
                     to_string(g.state(r.passive_states.front())));
  if (!r.absorbing_states.empty())
    throw ModelError(what + " is incomplete: state " +
                     to_string(g.state(r.absorbing_states.front())) +
                     " has exit rate zero");
}

// Shared core of the definition-style checks: one derivative against one
// high context under the given equivalence.
EsniResult instance_check(const ModelEnv& env, const TermPtr& P,
                          const HighEnvironment& H, const EquivalenceKind& kind,
                          std::size_t stateCap) {
  auto [merged, ht] = merge_envs(env, H.env);
  if (!ht) throw ModelError("high environment has no root term");
  if (!is_high_component(merged, ht, stateCap))
    throw ModelError("context is not a high component: " + H.label);
  TermPtr blocked = restrict_high(merged, P);
  TermPtr probed =
      Term::hide(Term::coop(P, merged.high, ht), merged.high);
  require_live(derive_term(merged, blocked, stateCap),
               "the composition with the silent context");
  require_live(derive_term(merged, probed, stateCap),
               "the composition with context " + H.label);
  EsniResult out;
  out.details = equivalent(merged, blocked, merged, probed, kind, stateCap);
  out.holds = out.details.related;
  return out;
}

SecurityVerdict battery_sweep(const ModelEnv& env, const DerivationGraph& g,
                              const std::vector<HighEnvironment>& battery,
                              const EquivalenceKind& kind, std::size_t stateCap) {
  SecurityVerdict verdict;
  verdict.method = "definition-battery";
  if (battery.empty()) {
    verdict.secure = true;
    verdict.vacuous = true;
    return verdict;
  }
  for (int i = 0; i < g.state_count(); ++i) {
    const TermPtr& derivative = g.state(i);
    for (const HighEnvironment& H : battery) {
      EsniResult r = instance_check(env, derivative, H, kind, stateCap);
      if (r.holds) continue;
      verdict.secure = false;
      SecurityVerdict::Failing failing;
      failing.derivative = to_string(derivative);
      failing.high_environment = H.label;
      if (r.details.witness) failing.violation = *r.details.witness;
      verdict.failing = std::move(failing);
      verdict.certificate = std::move(r.details.certificate);
      verdict.graph = std::move(r.details.graph);
      return verdict;
    }
  }
  verdict.secure = true;
  return verdict;
}

}  // namespace

bool is_high_component(const ModelEnv& env, const TermPtr& term,
                       std::size_t stateCap) {
  DerivationGraph g = derive_term(env, term, stateCap);
  for (const Edge& e : g.edges())
    if (!set_contains(env.high, e.activity.action)) return false;
  return true;
}

TermPtr restrict_high(const ModelEnv& env, const TermPtr& term) {
  return Term::hide(Term::coop(term, env.high, Term::nil()), env.high);
}

SecurityVerdict check_epsni(const ModelEnv& env, std::size_t stateCap) {
  require_root(env);
  require_live(derive(env, stateCap), "the model");
  require_live(derive_term(env, restrict_high(env, env.root), stateCap),
               "the restricted model");
  SecurityVerdict verdict;
  verdict.method = "corollary";
  EquivalenceResult r =
      equivalent(env, restrict_high(env, env.root), env, env.root,
                 EquivalenceKind::weak_exact_up_to(env.high), stateCap);
  verdict.secure = r.related;
  verdict.certificate = std::move(r.certificate);
  verdict.graph = r.graph;
  if (!verdict.secure && r.witness) {
    SecurityVerdict::Failing failing;
    failing.derivative = original_side_state(*r.graph, *r.witness);
    failing.violation = *r.witness;
    verdict.failing = std::move(failing);
  }
  return verdict;
}

EsniResult check_esni_with(const ModelEnv& env, const TermPtr& P,
                           const HighEnvironment& H, std::size_t stateCap) {
  return instance_check(env, P, H, EquivalenceKind::weak_exact(), stateCap);
}

SecurityVerdict check_epsni_definition(const ModelEnv& env,
                                       const std::vector<HighEnvironment>& battery,
                                       std::size_t stateCap) {
  require_root(env);
  DerivationGraph g = derive(env, stateCap);
  return battery_sweep(env, g, battery, EquivalenceKind::weak_exact(), stateCap);
}

SecurityVerdict check_psni_with(const ModelEnv& env, const TermPtr& P,
                                const std::vector<HighEnvironment>& battery,
                                std::size_t stateCap) {
  DerivationGraph g = derive_term(env, P, stateCap);
  return battery_sweep(env, g, battery, EquivalenceKind::lumpable(), stateCap);
}

UnwindingReport check_unwinding(const ModelEnv& env, std::size_t stateCap) {
  require_root(env);
  UnwindingReport report;
  DerivationGraph g = derive(env, stateCap);
  require_live(g, "the model");
  for (const Edge& e : g.edges()) {
    if (!set_contains(env.high, e.activity.action)) continue;
    UnwindingEdge ue;
    ue.source = to_string(g.state(e.src));
    ue.action = e.activity.action;
    ue.target = to_string(g.state(e.dst));
    EquivalenceResult upto =
        equivalent(env, g.state(e.src), env, g.state(e.dst),
                   EquivalenceKind::weak_exact_up_to(env.high), stateCap);
    ue.upto_ok = upto.related;
    if (!upto.related) ue.upto_violation = upto.witness;
    TermPtr src_restricted = restrict_high(env, g.state(e.src));
    TermPtr dst_restricted = restrict_high(env, g.state(e.dst));
    require_live(derive_term(env, src_restricted, stateCap),
                 "the restriction of state " + ue.source);
    require_live(derive_term(env, dst_restricted, stateCap),
                 "the restriction of state " + ue.target);
    EquivalenceResult restricted = equivalent(
        env, src_restricted, env, dst_restricted,
        EquivalenceKind::weak_exact(), stateCap);
    ue.restricted_ok = restricted.related;
    if (!restricted.related) ue.restricted_violation = restricted.witness;
    report.all_pass = report.all_pass && ue.upto_ok && ue.restricted_ok;
    report.edges.push_back(std::move(ue));
  }
  report.vacuous = report.edges.empty();
  return report;
}

std::vector<HighEnvironment> default_battery(const ModelEnv& env) {
  std::vector<HighEnvironment> battery;
  for (const Action& h : env.high) {
    HighEnvironment passive;
    passive.label = "(" + h + ",T)-loop";
    passive.env.definitions.push_back(
        {"H", Term::prefix({h, Rate::passive(1)}, Term::constant("H")), {}});
    passive.env.root = Term::constant("H");
    passive.env.high = env.high;
    battery.push_back(std::move(passive));

    HighEnvironment active;
    active.label = "(" + h + ",1)-loop";
    active.env.definitions.push_back(
        {"H", Term::prefix({h, Rate::active(1)}, Term::constant("H")), {}});
    active.env.root = Term::constant("H");
    active.env.high = env.high;
    battery.push_back(std::move(active));
  }
  HighEnvironment silent;
  silent.label = "0";
  silent.env.root = Term::nil();
  silent.env.high = env.high;
  battery.push_back(std::move(silent));
  return battery;
}

HighEnvironment random_high_environment(const ModelEnv& base, std::uint64_t seed,
                                        int maxStates) {
  if (base.high.empty())
    throw ModelError("model declares no high actions to build a context from");
  if (maxStates < 1) maxStates = 1;
  std::mt19937_64 rng(seed);
  auto pick = [&rng](std::size_t n) {
    return static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(n));
  };

  HighEnvironment out;
  out.label = "high-context-" + std::to_string(seed);
  out.env.high = base.high;
  int k = 1 + static_cast<int>(pick(static_cast<std::size_t>(maxStates)));
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) names.push_back("H" + std::to_string(i));

  const Rational rateChoices[] = {Rational(1), Rational(2), Rational(1, 2),
                                  Rational(3)};
  for (int i = 0; i < k; ++i) {
    int summands = 1 + static_cast<int>(pick(2));
    // One rate kind per action within a body, or the choice would mix active
    // and passive capacity for the same action type.
    std::map<Action, bool> passiveByAction;
    TermPtr body;
    for (int s = 0; s < summands; ++s) {
      const Action& h = base.high[pick(base.high.size())];
      auto it = passiveByAction.find(h);
      bool passive = it != passiveByAction.end() ? it->second : pick(3) == 0;
      passiveByAction.emplace(h, passive);
      Rate rate = passive ? Rate::passive(1 + static_cast<long>(pick(2)))
                          : Rate::active(rateChoices[pick(4)]);
      TermPtr summand = Term::prefix({h, rate}, Term::constant(names[pick(names.size())]));
      body = body ? Term::choice(body, summand) : summand;
    }
    out.env.definitions.push_back({names[static_cast<std::size_t>(i)], body, {}});
  }
  out.env.root = Term::constant("H0");
  return out;
}

std::pair<ModelEnv, TermPtr> merge_envs(const ModelEnv& base, const ModelEnv& extra) {
  ModelEnv merged = base;
  std::unordered_set<std::string> used;
  for (const Definition& d : base.definitions) used.insert(d.name);
  for (const Definition& d : extra.definitions) used.insert(d.name);

  std::unordered_map<std::string, std::string> renames;
  for (const Definition& d : extra.definitions) {
    if (!base.defines(d.name)) continue;
    int suffix = 2;
    std::string fresh;
    do {
      fresh = d.name + "_" + std::to_string(suffix++);
    } while (used.count(fresh));
    used.insert(fresh);
    renames.emplace(d.name, fresh);
  }
  for (const Definition& d : extra.definitions) {
    auto it = renames.find(d.name);
    merged.definitions.push_back({it == renames.end() ? d.name : it->second,
                                  rename_constants(d.body, renames), d.pos});
  }
  TermPtr root = extra.root ? rename_constants(extra.root, renames) : nullptr;
  return {std::move(merged), std::move(root)};
}

}  // namespace pepa
