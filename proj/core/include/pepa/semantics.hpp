#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pepa/model.hpp"

namespace pepa {

inline constexpr std::size_t kDefaultStateCap = 100000;

struct Transition {
  Activity activity;
  TermPtr target;
  std::int64_t multiplicity;  // > 0; arcs with equal (activity, target) merge
};
using TransitionMultiset = std::vector<Transition>;

// The multiset of activities term can perform, one entry per distinct
// (activity, target) pair, in deterministic left-first emission order:
//   prefix fires itself; a constant inherits its body's transitions; choice
//   unions both sides; hiding relabels actions in the set to tau; cooperation
//   interleaves outside the set and synchronises inside it with shared_rate.
TransitionMultiset enabled(const ModelEnv& env, const TermPtr& term);

// Multiplicity-weighted rate sum of the enabled alpha-activities; nullopt
// when none is enabled. Throws ModelError when active and passive rates meet
// for one action type (fix: synchronise on it or restrict it).
std::optional<Rate> apparent_rate(const ModelEnv& env, const TermPtr& term,
                                  const Action& alpha);

// Rate of one synchronised activity: (r1/raP)*(r2/raQ)*min(raP, raQ), where
// raP/raQ are the operands' apparent rates of the shared action and r1/r2 the
// participating activities' own rates. Passive rates take part through their
// weights; min(active, passive) is the active rate. Kind mismatches between
// r1/raP or r2/raQ throw.
Rate shared_rate(const Rate& r1, const Rate& r2, const Rate& raP, const Rate& raQ);

struct Edge {
  int src;
  Activity activity;
  int dst;
  std::int64_t multiplicity;
};

// Reachable states (index 0 = root, breadth-first discovery order) and all
// transitions between them. Immutable once built.
class DerivationGraph {
 public:
  DerivationGraph(std::shared_ptr<const ModelEnv> env, TermPtr root,
                  std::size_t stateCap);

  int state_count() const { return static_cast<int>(states_.size()); }
  const TermPtr& state(int i) const { return states_.at(i); }
  std::optional<int> index_of(const TermPtr& term) const;

  const std::vector<Edge>& edges() const { return edges_; }
  // Edges leaving state i, contiguous in edges().
  std::pair<const Edge*, const Edge*> out_edges(int i) const;

  const ModelEnv& env() const { return *env_; }
  std::shared_ptr<const ModelEnv> env_ptr() const { return env_; }

 private:
  std::shared_ptr<const ModelEnv> env_;
  std::vector<TermPtr> states_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> edgeOffsets_;  // size n+1
};

// Exhaustive closure from env.root. Exceeding the cap raises ResourceError.
DerivationGraph derive(const ModelEnv& env, std::size_t stateCap = kDefaultStateCap);

// Same, from an arbitrary root term over env's definitions.
DerivationGraph derive_term(const ModelEnv& env, TermPtr root,
                            std::size_t stateCap = kDefaultStateCap);

struct CompletenessReport {
  bool complete;                    // no passive rate escapes to the top level
  std::vector<int> passive_states;  // states with a passive edge
  std::vector<int> absorbing_states;  // states with no edges (reported, legal)
};
CompletenessReport is_complete(const DerivationGraph& graph);

}  // namespace pepa
