#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pepa/term.hpp"

namespace pepa {

struct SourcePos {
  int line = 0;  // 1-based; 0 means "no source location" (synthetic env)
  int column = 0;
};

struct Diagnostic {
  std::string message;
  SourcePos pos;
};

struct Definition {
  std::string name;
  TermPtr body;
  SourcePos pos;  // where the definition starts, when parsed
};

// A closed model: constant definitions (source order preserved), the system
// term, and the declared high action types.
struct ModelEnv {
  std::vector<Definition> definitions;
  TermPtr root;
  ActionSet high;  // never contains tau

  const TermPtr* find(const std::string& name) const;
  bool defines(const std::string& name) const { return find(name) != nullptr; }
};

// Checks every ModelEnv invariant and returns one diagnostic per violation:
// duplicate definitions, undefined constants, unguarded recursion, active and
// passive rates mixed for one action type inside a sequential body, tau in a
// hide/cooperation/high set, non-sequential definition bodies, missing root.
// Deterministic: same env yields the same list in the same order.
std::vector<Diagnostic> validate(const ModelEnv& env);

// Every action type syntactically occurring in term and in the bodies of
// transitively referenced constants. Hiding keeps the hidden names in the
// set and additionally contributes tau.
ActionSet action_alphabet(const ModelEnv& env, const TermPtr& term);

}  // namespace pepa
