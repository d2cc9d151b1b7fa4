#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pepa/ctmc.hpp"
#include "pepa/semantics.hpp"

namespace pepa {

struct EquivalenceKind {
  enum class Tag { Exact, WeakExact, Lumpable, WeakExactUpToH };
  Tag tag = Tag::WeakExact;
  ActionSet high;  // WeakExactUpToH only; never contains tau

  static EquivalenceKind exact() { return {Tag::Exact, {}}; }
  static EquivalenceKind weak_exact() { return {Tag::WeakExact, {}}; }
  static EquivalenceKind lumpable() { return {Tag::Lumpable, {}}; }
  static EquivalenceKind weak_exact_up_to(ActionSet high);

  // Actions getting the relaxed treatment: tau for WeakExact, high+tau for
  // WeakExactUpToH, tau for Lumpable's own-block exemption.
  bool special(const Action& action) const;

  std::string name() const;  // "exact" | "weak-exact" | "lumpable" | "weak-exact-up-to-h"
};

// One or two derivation graphs re-indexed into a single state range, with
// interned actions and merged rational arc weights. Construction requires
// complete graphs (passive rates throw ModelError). This is the universe the
// equivalence clauses quantify over; the graphs share no transitions, so all
// cross-graph rates are zero by construction.
class AnalysisGraph {
 public:
  explicit AnalysisGraph(DerivationGraph single);
  AnalysisGraph(DerivationGraph left, DerivationGraph right);

  int state_count() const { return static_cast<int>(stateOrigin_.size()); }
  int origin_count() const { return static_cast<int>(graphs_.size()); }
  int origin_of(int s) const { return stateOrigin_.at(s); }
  int root_of(int origin) const;
  const DerivationGraph& graph(int origin) const { return graphs_.at(origin); }
  const TermPtr& state_term(int s) const;
  std::string render_state(int s) const;

  int action_count() const { return static_cast<int>(actions_.size()); }
  const Action& action_name(int id) const { return actions_.at(id); }
  int tau_id() const { return tauId_; }
  std::optional<int> action_id(const Action& name) const;

  struct Arc {
    int peer;
    int action;
    Rational weight;  // rate times multiplicity, merged over parallel arcs
  };
  const std::vector<Arc>& out(int s) const { return out_.at(s); }
  const std::vector<Arc>& in(int s) const { return in_.at(s); }
  // q[s, alpha], self-loops included.
  const Rational& total_out(int s, int action) const;

 private:
  void add_graph(DerivationGraph g);
  void finish();

  std::vector<DerivationGraph> graphs_;
  std::vector<int> stateOrigin_;
  std::vector<int> originBase_;
  std::vector<Action> actions_;  // sorted; ids are lexicographic ranks
  int tauId_ = -1;
  std::vector<std::vector<Arc>> out_, in_;
  std::vector<std::vector<Rational>> totalOut_;  // [state][action]
};

struct Partition {
  std::vector<int> blockOf;              // state -> block id
  std::vector<std::vector<int>> blocks;  // sorted members; ordered by least member

  static Partition one_block(int n);
  static Partition identity(int n);
  // Any labelling; ids are renumbered so blocks order by least member.
  static Partition from_block_of(const std::vector<int>& raw);

  int block_count() const { return static_cast<int>(blocks.size()); }
  bool same_block(int a, int b) const { return blockOf.at(a) == blockOf.at(b); }
  bool valid(int n) const;
  // Every block of this partition lies inside one block of coarser.
  bool refines(const Partition& coarser) const;
  bool operator==(const Partition& other) const { return blockOf == other.blockOf; }
};

struct Violation {
  int left_state = -1;
  int right_state = -1;
  std::string action;
  int block = -1;  // involved block id; -1 when the clause has no block
  std::string clause;  // "total-outgoing" | "incoming" | "incoming-own-adjusted" | "outgoing"
  Rational left_value = 0;
  Rational right_value = 0;
};

struct CheckResult {
  bool ok = false;
  std::optional<Violation> violation;
};

// True iff every same-block pair satisfies every clause of the kind. First
// violation is deterministic: least block, least pair within it, then
// lexicographic action. Throws on invalid partitions or incomplete graphs.
CheckResult check_partition(const AnalysisGraph& g, const Partition& pi,
                            const EquivalenceKind& kind);

// Coarsest partition passing check_partition, computed by signature
// refinement from `initial` (default: everything in one block). Each round
// splits blocks by distinct clause signatures evaluated against the current
// partition; fixpoint reached in at most state_count rounds. The result is
// asserted to pass check_partition before being returned.
Partition coarsest(const AnalysisGraph& g, const EquivalenceKind& kind);
Partition coarsest(const AnalysisGraph& g, const EquivalenceKind& kind,
                   const Partition& initial);

struct EquivalenceResult {
  bool related = false;
  Partition certificate;
  std::optional<Violation> witness;  // set when unrelated
  std::shared_ptr<const AnalysisGraph> graph;
};

// Builds the two-graph AnalysisGraph, refines, and reports whether the two
// roots share a block. The witness explains the first refinement step that
// separated the roots.
EquivalenceResult equivalent(const ModelEnv& envL, const TermPtr& termL,
                             const ModelEnv& envR, const TermPtr& termR,
                             const EquivalenceKind& kind,
                             std::size_t stateCap = kDefaultStateCap);

// Up-to technique: forms the join of rel and weBase (transitive closure of
// their union) and checks the weak-exact clauses for every rel-related pair
// with blocks drawn from the join. weBase must itself pass
// check_partition(WeakExact).
CheckResult is_up_to_we(const AnalysisGraph& g, const Partition& rel,
                        const Partition& weBase);

// The join used by is_up_to_we, exposed for tests.
Partition join_partitions(const Partition& a, const Partition& b);

}  // namespace pepa
