#pragma once

#include <cstdint>

#include "pepa/equivalence.hpp"

namespace pepa {

// A closed environment whose root term engages only in high actions, used as
// the hostile context in the definition-based checks.
struct HighEnvironment {
  ModelEnv env;        // env.root is the high term; definitions self-contained
  std::string label;   // short display name, e.g. "(h,T)-loop"
};

struct SecurityVerdict {
  bool secure = false;
  std::string method;  // "corollary" | "definition-battery" | "unwinding"
  bool vacuous = false;  // empty battery / no high edges: a pass by default
  struct Failing {
    std::string derivative;        // rendered derivative term responsible
    std::string high_environment;  // rendered context, empty for corollary
    Violation violation;
  };
  std::optional<Failing> failing;  // present whenever secure is false
  std::optional<Partition> certificate;
  std::shared_ptr<const AnalysisGraph> graph;  // what the certificate indexes
};

// True iff every derivative of term enables only high action types.
bool is_high_component(const ModelEnv& env, const TermPtr& term,
                       std::size_t stateCap = kDefaultStateCap);

// The syntactic restriction (term <high> 0)/{high}: high actions blocked by
// a silent partner, then hidden. With an empty high set this degenerates to
// term <> 0.
TermPtr restrict_high(const ModelEnv& env, const TermPtr& term);

// The decision procedure: secure iff restrict_high(root) and root are
// weak-exact equivalent up to the high set. Incomplete graphs raise
// ModelError rather than producing a verdict.
SecurityVerdict check_epsni(const ModelEnv& env,
                            std::size_t stateCap = kDefaultStateCap);

struct EsniResult {
  bool holds = false;
  EquivalenceResult details;
};

// One definitional instance: (P <high> 0)/{high} weak-exact equivalent to
// (P <high> H_t)/{high}. H_t must be a high component.
EsniResult check_esni_with(const ModelEnv& env, const TermPtr& P,
                           const HighEnvironment& H,
                           std::size_t stateCap = kDefaultStateCap);

// Falsifier: every derivative of env.root against every battery member.
// Insecure on the first failing pair (deterministic order: derivatives in
// discovery order, then battery order); otherwise battery-passed, which is
// not a proof of security. An empty battery passes vacuously.
SecurityVerdict check_epsni_definition(const ModelEnv& env,
                                       const std::vector<HighEnvironment>& battery,
                                       std::size_t stateCap = kDefaultStateCap);

// Same loop for the lumpable-bisimulation variant, over the derivatives of P.
SecurityVerdict check_psni_with(const ModelEnv& env, const TermPtr& P,
                                const std::vector<HighEnvironment>& battery,
                                std::size_t stateCap = kDefaultStateCap);

struct UnwindingEdge {
  std::string source;  // rendered derivative performing the high action
  Action action;
  std::string target;
  bool upto_ok = false;        // source and target weak-exact up to high
  bool restricted_ok = false;  // their restrictions weak-exact
  std::optional<Violation> upto_violation;
  std::optional<Violation> restricted_violation;
};

struct UnwindingReport {
  bool all_pass = true;
  bool vacuous = false;  // no high-labelled edges
  std::vector<UnwindingEdge> edges;
};

// Per-high-edge local indistinguishability. A necessary condition for the
// corollary-based verdict, reported as a diagnostic, never a proof.
UnwindingReport check_unwinding(const ModelEnv& env,
                                std::size_t stateCap = kDefaultStateCap);

// Per high action h: a passive loop (h,T).H and an active loop (h,1).H, plus
// the silent context 0. Passive loops synchronise with whatever high rates
// the model sets, which makes them the sharpest default probes.
std::vector<HighEnvironment> default_battery(const ModelEnv& env);

// Seeded random high component over base.high with at most maxStates
// constants. Deterministic in seed.
HighEnvironment random_high_environment(const ModelEnv& base, std::uint64_t seed,
                                        int maxStates = 4);

// base's definitions plus extra's, renaming extra's constants where names
// collide; returns the merged env and extra's root after renaming. The high
// set is taken from base.
std::pair<ModelEnv, TermPtr> merge_envs(const ModelEnv& base, const ModelEnv& extra);

}  // namespace pepa
