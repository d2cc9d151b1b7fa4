#pragma once

#include <vector>

#include "pepa/semantics.hpp"

namespace pepa {

// Rate queries over a complete derivation graph. All are multiplicity-
// weighted exact rational sums; every query throws ModelError when it meets
// a passive rate (incomplete model). Self-loop arcs count here; only the
// generator matrix drops them.

// q(i,j): total rate from state i to state j over all action types.
Rational transition_rate(const DerivationGraph& g, int i, int j);

// q(i,j,alpha): rate from i to j via activities of type alpha.
Rational conditional_rate(const DerivationGraph& g, int i, int j, const Action& alpha);

// q[i,alpha]: total outgoing rate of type alpha from i (all targets).
Rational total_conditional_rate(const DerivationGraph& g, int i, const Action& alpha);

// q[i,S,alpha]: outgoing rate of type alpha from i into the state set S.
Rational outgoing_to(const DerivationGraph& g, int i, const std::vector<int>& S,
                     const Action& alpha);

// q[S,j,alpha]: incoming rate of type alpha into j from states in S.
Rational incoming_from(const DerivationGraph& g, const std::vector<int>& S, int j,
                       const Action& alpha);

// q(P_i): exit rate, the total rate of all activities enabled in i.
Rational exit_rate(const DerivationGraph& g, int i);

// Infinitesimal generator: off-diagonal entries are transition rates, each
// diagonal entry the negated sum of its row's off-diagonal entries. Rows sum
// to exactly zero. Self-loops do not appear.
struct Generator {
  int n = 0;
  std::vector<std::vector<Rational>> q;
};

Generator generator(const DerivationGraph& g);

struct SteadyState {
  std::vector<Rational> pi;  // sums to exactly 1
};

// Unique solution of pi*Q = 0, sum(pi) = 1 by exact rational Gaussian
// elimination (one balance equation replaced by normalization). Requires a
// complete, irreducible graph; otherwise throws ModelError naming the
// blocking component.
SteadyState steady_state(const Generator& gen, const DerivationGraph& g);

// Floating-point variant for large models. Residual checked against 1e-12
// (relative to the largest generator entry); failure throws.
std::vector<double> steady_state_double(const Generator& gen, const DerivationGraph& g);

// Strongly connected components in deterministic order (by smallest state
// index); each component's states sorted ascending.
std::vector<std::vector<int>> strongly_connected_components(const DerivationGraph& g);

bool is_irreducible(const DerivationGraph& g);

}  // namespace pepa
