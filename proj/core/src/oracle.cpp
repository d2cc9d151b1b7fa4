#include "pepa/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <random>

#include "pepa/errors.hpp"

namespace pepa {

namespace {

// Partition-independent necessary conditions for two states to share a block
// of any passing partition. Derived by summing each kind's clauses over all
// blocks: totals must match for visible actions, and for the relaxed actions
// the difference total-incoming minus total-outgoing must match.
std::vector<int> prefilter_classes(const AnalysisGraph& g,
                                   const EquivalenceKind& kind) {
  int n = g.state_count();
  int A = g.action_count();
  std::vector<std::vector<Rational>> totalIn(n, std::vector<Rational>(A, Rational(0)));
  for (int s = 0; s < n; ++s) {
    for (const auto& arc : g.in(s)) totalIn[s][arc.action] += arc.weight;
  }
  std::map<std::vector<Rational>, int> classes;
  std::vector<int> classOf(n, -1);
  for (int s = 0; s < n; ++s) {
    std::vector<Rational> key;
    key.reserve(2 * A);
    for (int a = 0; a < A; ++a) {
      bool special = kind.special(g.action_name(a));
      if (kind.tag == EquivalenceKind::Tag::Lumpable) {
        if (!special) key.push_back(g.total_out(s, a));
        continue;
      }
      if (!special) {
        key.push_back(g.total_out(s, a));
        key.push_back(totalIn[s][a]);
      } else {
        key.push_back(totalIn[s][a] - g.total_out(s, a));
      }
    }
    auto [it, inserted] = classes.emplace(std::move(key),
                                          static_cast<int>(classes.size()));
    classOf[s] = it->second;
  }
  return classOf;
}

}  // namespace

Partition largest_by_enumeration(const AnalysisGraph& g,
                                 const EquivalenceKind& kind,
                                 EnumerationStats* stats) {
  int n = g.state_count();
  if (n > 10)
    throw ResourceError("enumeration oracle is guarded to 10 states, got " +
                        std::to_string(n));
  if (n == 0) throw Error("empty analysis graph");

  std::vector<int> classOf = prefilter_classes(g, kind);

  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  EnumerationStats local;
  std::vector<int> rgs(n, 0), maxv(n, 0);
  while (true) {
    ++local.visited;
    // blocks must be uniform in prefilter class, else the partition cannot
    // pass; the full clause check runs only on survivors
    bool plausible = true;
    {
      std::vector<int> blockClass;
      for (int s = 0; s < n && plausible; ++s) {
        int b = rgs[s];
        if (b >= static_cast<int>(blockClass.size())) {
          blockClass.push_back(classOf[s]);
        } else if (blockClass[b] != classOf[s]) {
          plausible = false;
        }
      }
    }
    if (plausible) {
      Partition pi = Partition::from_block_of(rgs);
      if (check_partition(g, pi, kind).ok) {
        ++local.kept;
        for (const auto& block : pi.blocks) {
          for (std::size_t k = 1; k < block.size(); ++k)
            parent[find(block[k])] = find(block[0]);
        }
      }
    }
    // next restricted growth string: bump the rightmost position that can
    // still grow, reset everything after it
    int i = n - 1;
    while (i > 0 && rgs[i] > maxv[i - 1]) --i;
    if (i == 0) break;
    ++rgs[i];
    maxv[i] = std::max(maxv[i - 1], rgs[i]);
    for (int j = i + 1; j < n; ++j) {
      rgs[j] = 0;
      maxv[j] = maxv[j - 1];
    }
  }

  std::vector<int> raw(n);
  for (int s = 0; s < n; ++s) raw[s] = find(s);
  Partition closure = Partition::from_block_of(raw);
  CheckResult final = check_partition(g, closure, kind);
  if (!final.ok)
    throw Error(
        "union-not-closed: the union of all passing partitions does not "
        "itself pass the clauses for kind " + kind.name());
  if (stats) *stats = local;
  return closure;
}

namespace {

Action pick(const std::vector<Action>& pool, std::mt19937_64& rng) {
  return pool[rng() % pool.size()];
}

TermPtr random_chain(std::mt19937_64& rng, const GeneratorParams& params,
                     int constants, std::map<Action, bool>& kindOf) {
  int len = 1;
  if (params.maxStates > 2 && rng() % 3 == 0) len = 2;
  TermPtr tail = Term::constant("X" + std::to_string(rng() % constants));
  for (int i = 0; i < len; ++i) {
    Action action = pick(params.actionPool, rng);
    bool active = true;
    if (params.includePassive && rng() % 4 == 0) active = false;
    auto it = kindOf.find(action);
    if (it != kindOf.end()) active = it->second;  // keep one kind per action per body
    kindOf.emplace(action, active);
    Rate rate = active
                    ? Rate::active(params.rateChoices[rng() % params.rateChoices.size()])
                    : Rate::passive(Rational(1 + static_cast<long>(rng() % 2)));
    tail = Term::prefix({action, rate}, tail);
  }
  return tail;
}

ModelEnv generate_once(std::mt19937_64& rng, const GeneratorParams& params) {
  ModelEnv env;
  env.high = make_action_set(params.highNames);
  int k = 1 + static_cast<int>(rng() % std::min(params.maxStates, 4));
  for (int i = 0; i < k; ++i) {
    std::map<Action, bool> kindOf;
    int summands = 1 + static_cast<int>(rng() % 3);
    TermPtr body = random_chain(rng, params, k, kindOf);
    for (int s = 1; s < summands; ++s)
      body = Term::choice(body, random_chain(rng, params, k, kindOf));
    env.definitions.push_back({"X" + std::to_string(i), body, {}});
  }

  ActionSet hidable;
  for (const auto& a : params.actionPool) {
    if (a != kTau) hidable.push_back(a);
  }
  hidable = make_action_set(hidable);

  int shape = static_cast<int>(rng() % 10);
  if (shape >= 8 && k >= 2) {
    std::vector<Action> coopSet;
    int count = static_cast<int>(rng() % 3);
    for (int i = 0; i < count && !hidable.empty(); ++i)
      coopSet.push_back(hidable[rng() % hidable.size()]);
    env.root = Term::coop(Term::constant("X0"), make_action_set(coopSet),
                          Term::constant("X1"));
  } else if (shape >= 6 && !hidable.empty()) {
    std::vector<Action> hideSet{hidable[rng() % hidable.size()]};
    if (hidable.size() > 1 && rng() % 2 == 0)
      hideSet.push_back(hidable[rng() % hidable.size()]);
    env.root = Term::hide(Term::constant("X0"), make_action_set(hideSet));
  } else {
    env.root = Term::constant("X0");
  }
  return env;
}

}  // namespace

ModelEnv random_model(const GeneratorParams& params) {
  if (params.maxStates < 1 || params.maxStates > 12)
    throw Error("random_model: maxStates must be between 1 and 12");
  if (params.actionPool.empty()) throw Error("random_model: empty action pool");
  if (params.rateChoices.empty()) throw Error("random_model: no rate choices");
  for (const auto& r : params.rateChoices) {
    if (r <= 0) throw Error("random_model: rate choices must be positive");
  }
  for (const auto& h : params.highNames) {
    if (h == kTau) throw Error("random_model: tau cannot be high");
  }

  std::mt19937_64 rng(params.seed);
  for (int attempt = 0; attempt < 64; ++attempt) {
    ModelEnv env = generate_once(rng, params);
    if (!validate(env).empty()) continue;
    try {
      DerivationGraph g = derive(env, static_cast<std::size_t>(params.maxStates));
      if (!params.includePassive && !is_complete(g).complete) continue;
      return env;
    } catch (const ResourceError&) {
      continue;
    } catch (const ModelError&) {
      continue;
    }
  }
  throw Error("random_model: retry budget exhausted for seed " +
              std::to_string(params.seed));
}

}  // namespace pepa
