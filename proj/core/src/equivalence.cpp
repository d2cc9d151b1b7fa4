#include "pepa/equivalence.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "pepa/errors.hpp"

namespace pepa {

EquivalenceKind EquivalenceKind::weak_exact_up_to(ActionSet high) {
  if (set_contains(high, kTau))
    throw Error("the high set of weak-exact-up-to-h cannot contain tau");
  return {Tag::WeakExactUpToH, std::move(high)};
}

bool EquivalenceKind::special(const Action& action) const {
  switch (tag) {
    case Tag::Exact:
      return false;
    case Tag::WeakExact:
    case Tag::Lumpable:
      return action == kTau;
    case Tag::WeakExactUpToH:
      return action == kTau || set_contains(high, action);
  }
  return false;
}

std::string EquivalenceKind::name() const {
  switch (tag) {
    case Tag::Exact: return "exact";
    case Tag::WeakExact: return "weak-exact";
    case Tag::Lumpable: return "lumpable";
    case Tag::WeakExactUpToH: return "weak-exact-up-to-h";
  }
  return "?";
}

// ---------------------------------------------------------------- graph ----

AnalysisGraph::AnalysisGraph(DerivationGraph single) {
  add_graph(std::move(single));
  finish();
}

AnalysisGraph::AnalysisGraph(DerivationGraph left, DerivationGraph right) {
  add_graph(std::move(left));
  add_graph(std::move(right));
  finish();
}

void AnalysisGraph::add_graph(DerivationGraph g) {
  int origin = static_cast<int>(graphs_.size());
  originBase_.push_back(static_cast<int>(stateOrigin_.size()));
  for (int i = 0; i < g.state_count(); ++i) stateOrigin_.push_back(origin);
  graphs_.push_back(std::move(g));
}

namespace {

void add_arc_merged(std::vector<AnalysisGraph::Arc>& arcs, int peer, int action,
                    const Rational& weight) {
  for (auto& a : arcs) {
    if (a.peer == peer && a.action == action) {
      a.weight += weight;
      return;
    }
  }
  arcs.push_back({peer, action, weight});
}

}  // namespace

void AnalysisGraph::finish() {
  std::vector<Action> names{kTau};
  for (const auto& g : graphs_) {
    for (const Edge& e : g.edges()) names.push_back(e.activity.action);
  }
  actions_ = make_action_set(std::move(names));
  tauId_ = static_cast<int>(
      std::lower_bound(actions_.begin(), actions_.end(), kTau) - actions_.begin());

  int n = state_count();
  out_.assign(n, {});
  in_.assign(n, {});
  totalOut_.assign(n, std::vector<Rational>(actions_.size(), Rational(0)));
  for (std::size_t o = 0; o < graphs_.size(); ++o) {
    int base = originBase_[o];
    const DerivationGraph& g = graphs_[o];
    for (const Edge& e : g.edges()) {
      if (e.activity.rate.is_passive())
        throw ModelError("analysis requires a complete model: state " +
                         to_string(g.state(e.src)) + " has a passive " +
                         e.activity.action + " activity");
      auto id = action_id(e.activity.action);
      Rational w =
          e.activity.rate.value() * Rational(static_cast<long>(e.multiplicity));
      add_arc_merged(out_[base + e.src], base + e.dst, *id, w);
      add_arc_merged(in_[base + e.dst], base + e.src, *id, w);
      totalOut_[base + e.src][*id] += w;
    }
  }
}

int AnalysisGraph::root_of(int origin) const { return originBase_.at(origin); }

const TermPtr& AnalysisGraph::state_term(int s) const {
  int origin = stateOrigin_.at(s);
  return graphs_[origin].state(s - originBase_[origin]);
}

std::string AnalysisGraph::render_state(int s) const {
  return to_string(state_term(s));
}

std::optional<int> AnalysisGraph::action_id(const Action& name) const {
  auto it = std::lower_bound(actions_.begin(), actions_.end(), name);
  if (it == actions_.end() || *it != name) return std::nullopt;
  return static_cast<int>(it - actions_.begin());
}

const Rational& AnalysisGraph::total_out(int s, int action) const {
  return totalOut_.at(s).at(action);
}

// ------------------------------------------------------------ partition ----

Partition Partition::one_block(int n) {
  return from_block_of(std::vector<int>(n, 0));
}

Partition Partition::identity(int n) {
  std::vector<int> raw(n);
  std::iota(raw.begin(), raw.end(), 0);
  return from_block_of(raw);
}

Partition Partition::from_block_of(const std::vector<int>& raw) {
  Partition pi;
  pi.blockOf.assign(raw.size(), -1);
  std::map<int, int> relabel;  // raw label -> id in least-member order
  for (std::size_t s = 0; s < raw.size(); ++s) {
    auto [it, inserted] = relabel.emplace(raw[s], static_cast<int>(pi.blocks.size()));
    if (inserted) pi.blocks.emplace_back();
    pi.blockOf[s] = it->second;
    pi.blocks[it->second].push_back(static_cast<int>(s));
  }
  return pi;
}

bool Partition::valid(int n) const {
  if (static_cast<int>(blockOf.size()) != n) return false;
  if (n == 0) return blocks.empty();
  Partition canonical = from_block_of(blockOf);
  return canonical.blockOf == blockOf && canonical.blocks == blocks;
}

bool Partition::refines(const Partition& coarser) const {
  if (blockOf.size() != coarser.blockOf.size()) return false;
  for (const auto& block : blocks) {
    int target = coarser.blockOf[block.front()];
    for (int s : block) {
      if (coarser.blockOf[s] != target) return false;
    }
  }
  return true;
}

// -------------------------------------------------------------- clauses ----

namespace {

// Clause codes in witness order.
enum Clause : int {
  kTotalOutgoing = 0,
  kIncoming = 1,
  kIncomingOwnAdjusted = 2,
  kOutgoing = 3,
};

const char* clause_name(int c) {
  switch (c) {
    case kTotalOutgoing: return "total-outgoing";
    case kIncoming: return "incoming";
    case kIncomingOwnAdjusted: return "incoming-own-adjusted";
    case kOutgoing: return "outgoing";
  }
  return "?";
}

struct SigEntry {
  int action;
  int clause;
  int block;  // -1 for total-outgoing and own-adjusted entries
  Rational value;

  bool operator==(const SigEntry& o) const {
    return action == o.action && clause == o.clause && block == o.block &&
           value == o.value;
  }
  bool operator<(const SigEntry& o) const {
    if (action != o.action) return action < o.action;
    if (clause != o.clause) return clause < o.clause;
    if (block != o.block) return block < o.block;
    return value < o.value;
  }
};

using Signature = std::vector<SigEntry>;

struct KindContext {
  EquivalenceKind kind;
  std::vector<char> special;     // per action id
  std::vector<int> specialIds;   // ascending
};

KindContext make_context(const AnalysisGraph& g, const EquivalenceKind& kind) {
  KindContext ctx;
  ctx.kind = kind;
  ctx.special.assign(g.action_count(), 0);
  for (int a = 0; a < g.action_count(); ++a) {
    if (kind.special(g.action_name(a))) {
      ctx.special[a] = 1;
      ctx.specialIds.push_back(a);
    }
  }
  return ctx;
}

// The exact tuple of rate sums the kind's clauses compare for state s against
// partition pi. Zero-valued entries are omitted uniformly so omission means
// "this sum is zero" on both sides of any comparison.
Signature state_signature(const AnalysisGraph& g, const Partition& pi,
                          const KindContext& ctx, int s) {
  Signature out;
  int own = pi.blockOf[s];
  if (ctx.kind.tag == EquivalenceKind::Tag::Lumpable) {
    std::map<std::pair<int, int>, Rational> outSums;  // (action, block)
    for (const auto& arc : g.out(s))
      outSums[{arc.action, pi.blockOf[arc.peer]}] += arc.weight;
    for (const auto& [key, value] : outSums) {
      if (value == 0) continue;
      if (ctx.special[key.first] && key.second == own) continue;  // tau inside own block
      out.push_back({key.first, kOutgoing, key.second, value});
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::map<std::pair<int, int>, Rational> inSums;  // (action, block)
  for (const auto& arc : g.in(s))
    inSums[{arc.action, pi.blockOf[arc.peer]}] += arc.weight;

  for (int a = 0; a < g.action_count(); ++a) {
    if (ctx.special[a]) continue;
    const Rational& total = g.total_out(s, a);
    if (total != 0) out.push_back({a, kTotalOutgoing, -1, total});
  }
  for (const auto& [key, value] : inSums) {
    if (value == 0) continue;
    if (ctx.special[key.first] && key.second == own) continue;  // folded into the adjusted entry
    out.push_back({key.first, kIncoming, key.second, value});
  }
  for (int a : ctx.specialIds) {
    Rational adj = -g.total_out(s, a);
    auto it = inSums.find({a, own});
    if (it != inSums.end()) adj += it->second;
    if (adj != 0) out.push_back({a, kIncomingOwnAdjusted, -1, adj});
  }
  std::sort(out.begin(), out.end());
  return out;
}

// First differing entry of two signatures, as a violation between states
// `left` and `right`. A key present on one side only compares against zero.
Violation signature_diff(const AnalysisGraph& g, int left, int right,
                         const Signature& ls, const Signature& rs) {
  Violation v;
  v.left_state = left;
  v.right_state = right;
  std::size_t i = 0, j = 0;
  auto fill = [&](const SigEntry& e, bool fromLeft, bool otherHasKey,
                  const Rational& otherValue) {
    v.action = g.action_name(e.action);
    v.clause = clause_name(e.clause);
    v.block = e.block;
    v.left_value = fromLeft ? e.value : (otherHasKey ? otherValue : Rational(0));
    v.right_value = fromLeft ? (otherHasKey ? otherValue : Rational(0)) : e.value;
  };
  while (i < ls.size() || j < rs.size()) {
    if (i == ls.size()) {
      fill(rs[j], false, false, 0);
      return v;
    }
    if (j == rs.size()) {
      fill(ls[i], true, false, 0);
      return v;
    }
    const SigEntry& a = ls[i];
    const SigEntry& b = rs[j];
    bool sameKey = a.action == b.action && a.clause == b.clause && a.block == b.block;
    if (sameKey) {
      if (a.value != b.value) {
        fill(a, true, true, b.value);
        return v;
      }
      ++i;
      ++j;
      continue;
    }
    // compare keys only (not values)
    SigEntry ak{a.action, a.clause, a.block, 0}, bk{b.action, b.clause, b.block, 0};
    if (ak < bk) {
      fill(a, true, false, 0);
    } else {
      fill(b, false, false, 0);
    }
    return v;
  }
  throw Error("internal: signatures are equal, no difference to report");
}

}  // namespace

CheckResult check_partition(const AnalysisGraph& g, const Partition& pi,
                            const EquivalenceKind& kind) {
  if (!pi.valid(g.state_count()))
    throw Error("invalid partition for this graph");
  KindContext ctx = make_context(g, kind);
  for (const auto& block : pi.blocks) {
    if (block.size() == 1) continue;
    Signature repSig = state_signature(g, pi, ctx, block.front());
    for (std::size_t k = 1; k < block.size(); ++k) {
      Signature sig = state_signature(g, pi, ctx, block[k]);
      if (sig != repSig) {
        return {false, signature_diff(g, block.front(), block[k], repSig, sig)};
      }
    }
  }
  return {true, std::nullopt};
}

namespace {

struct SplitWatch {
  int a = -1, b = -1;
  bool split = false;
  Violation violation;
};

Partition coarsest_impl(const AnalysisGraph& g, const EquivalenceKind& kind,
                        const Partition& initial, SplitWatch* watch) {
  int n = g.state_count();
  if (!initial.valid(n)) throw Error("invalid initial partition");
  KindContext ctx = make_context(g, kind);
  Partition pi = initial;
  while (true) {
    bool changed = false;
    std::vector<int> next(n, -1);
    int nextId = 0;
    for (const auto& block : pi.blocks) {
      if (block.size() == 1) {
        next[block.front()] = nextId++;
        continue;
      }
      std::map<Signature, std::vector<int>> groups;
      for (int s : block) groups[state_signature(g, pi, ctx, s)].push_back(s);
      if (groups.size() > 1) changed = true;
      if (watch && !watch->split && groups.size() > 1) {
        auto inBlock = [&](int s) {
          return std::binary_search(block.begin(), block.end(), s);
        };
        if (inBlock(watch->a) && inBlock(watch->b)) {
          Signature sa = state_signature(g, pi, ctx, watch->a);
          Signature sb = state_signature(g, pi, ctx, watch->b);
          if (!(sa == sb)) {
            watch->split = true;
            watch->violation = signature_diff(g, watch->a, watch->b, sa, sb);
          }
        }
      }
      for (auto& [sig, members] : groups) {
        for (int s : members) next[s] = nextId;
        ++nextId;
      }
    }
    if (!changed) break;
    pi = Partition::from_block_of(next);
  }
  CheckResult final = check_partition(g, pi, kind);
  if (!final.ok)
    throw Error("internal: refinement fixpoint fails its own clauses");
  return pi;
}

}  // namespace

Partition coarsest(const AnalysisGraph& g, const EquivalenceKind& kind) {
  return coarsest_impl(g, kind, Partition::one_block(g.state_count()), nullptr);
}

Partition coarsest(const AnalysisGraph& g, const EquivalenceKind& kind,
                   const Partition& initial) {
  return coarsest_impl(g, kind, initial, nullptr);
}

EquivalenceResult equivalent(const ModelEnv& envL, const TermPtr& termL,
                             const ModelEnv& envR, const TermPtr& termR,
                             const EquivalenceKind& kind, std::size_t stateCap) {
  DerivationGraph gl = derive_term(envL, termL, stateCap);
  DerivationGraph gr = derive_term(envR, termR, stateCap);
  auto graph = std::make_shared<AnalysisGraph>(std::move(gl), std::move(gr));
  SplitWatch watch;
  watch.a = graph->root_of(0);
  watch.b = graph->root_of(1);
  Partition cert = coarsest_impl(*graph, kind,
                                 Partition::one_block(graph->state_count()),
                                 &watch);
  EquivalenceResult result;
  result.related = cert.same_block(watch.a, watch.b);
  result.certificate = std::move(cert);
  if (!result.related && watch.split) result.witness = watch.violation;
  result.graph = graph;
  return result;
}

Partition join_partitions(const Partition& a, const Partition& b) {
  if (a.blockOf.size() != b.blockOf.size())
    throw Error("partitions cover different state counts");
  int n = static_cast<int>(a.blockOf.size());
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  auto unite = [&](int x, int y) { parent[find(x)] = find(y); };
  for (const auto& block : a.blocks)
    for (std::size_t k = 1; k < block.size(); ++k) unite(block[0], block[k]);
  for (const auto& block : b.blocks)
    for (std::size_t k = 1; k < block.size(); ++k) unite(block[0], block[k]);
  std::vector<int> raw(n);
  for (int s = 0; s < n; ++s) raw[s] = find(s);
  return Partition::from_block_of(raw);
}

CheckResult is_up_to_we(const AnalysisGraph& g, const Partition& rel,
                        const Partition& weBase) {
  if (!rel.valid(g.state_count()) || !weBase.valid(g.state_count()))
    throw Error("invalid partition for this graph");
  CheckResult base = check_partition(g, weBase, EquivalenceKind::weak_exact());
  if (!base.ok)
    throw Error("is_up_to_we: weBase does not pass the weak-exact clauses");
  Partition join = join_partitions(rel, weBase);
  KindContext ctx = make_context(g, EquivalenceKind::weak_exact());
  for (const auto& block : rel.blocks) {
    if (block.size() == 1) continue;
    Signature repSig = state_signature(g, join, ctx, block.front());
    for (std::size_t k = 1; k < block.size(); ++k) {
      Signature sig = state_signature(g, join, ctx, block[k]);
      if (sig != repSig) {
        return {false, signature_diff(g, block.front(), block[k], repSig, sig)};
      }
    }
  }
  return {true, std::nullopt};
}

}  // namespace pepa
