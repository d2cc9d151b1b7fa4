#pragma once

#include <string>
#include <vector>

#include "pepa/ctmc.hpp"
#include "pepa/equivalence.hpp"
#include "pepa/oracle.hpp"
#include "pepa/security.hpp"

namespace pepa {

// Every exporter returns pretty-printed JSON with lexicographically sorted
// keys and a trailing newline, so equal inputs serialize to equal bytes.

std::string diagnostics_json(const std::vector<Diagnostic>& diagnostics);

// States, labelled edges, and the completeness report of a derivation graph.
std::string graph_json(const DerivationGraph& g);

// Generator matrix as exact rational strings; optional stationary
// distributions (exact and floating-point).
std::string ctmc_json(const DerivationGraph& g, const Generator& gen,
                      const SteadyState* exact,
                      const std::vector<double>* approx);

// Blocks as arrays of {origin, term} state labels.
std::string partition_json(const Partition& p, const AnalysisGraph& g);

std::string equivalence_json(const EquivalenceResult& r,
                             const EquivalenceKind& kind);

std::string verdict_json(const SecurityVerdict& v);

std::string unwinding_json(const UnwindingReport& r);

// Cross-check of the refinement fixpoint against brute-force enumeration.
std::string oracle_json(const AnalysisGraph& g, const EquivalenceKind& kind,
                        const Partition& largest, const Partition& coarsest,
                        const EnumerationStats& stats);

// Graphviz digraph of a derivation graph, one box per state.
std::string graph_dot(const DerivationGraph& g);

}  // namespace pepa
