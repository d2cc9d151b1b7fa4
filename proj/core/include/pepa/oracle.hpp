#pragma once

#include <cstdint>

#include "pepa/equivalence.hpp"

namespace pepa {

struct GeneratorParams {
  std::uint64_t seed = 1;
  int maxStates = 8;               // 1..12
  std::vector<Action> actionPool;  // actions used in prefixes; may include tau
  std::vector<Action> highNames;   // declared high in the produced env
  std::vector<Rational> rateChoices;  // positive
  bool includePassive = false;     // false => complete by construction
};

struct EnumerationStats {
  std::uint64_t visited = 0;  // equals the Bell number of the state count
  std::uint64_t kept = 0;     // partitions passing the kind's clauses
};

// Ground truth: enumerates every set partition of the states (restricted
// growth strings), keeps those passing check_partition, and returns the
// transitive closure of the union of all kept relations. The closure is
// itself checked; a failure would mean the union of passing relations is not
// one of them, and raises an Error mentioning "union-not-closed" rather than
// returning silently. Guarded to at most 10 states.
Partition largest_by_enumeration(const AnalysisGraph& g,
                                 const EquivalenceKind& kind,
                                 EnumerationStats* stats = nullptr);

// Deterministic in seed. The result passes validate, derives to at most
// maxStates states, and is complete whenever includePassive is false.
// Sequential constant definitions, optionally wrapped in hiding or
// cooperation at the root.
ModelEnv random_model(const GeneratorParams& params);

}  // namespace pepa
