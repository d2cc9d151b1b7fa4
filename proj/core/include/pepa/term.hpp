#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "pepa/rate.hpp"

namespace pepa {

// Action types are interned as plain names; "tau" is the unobservable type.
using Action = std::string;
inline const Action kTau = "tau";

// Sorted, duplicate-free.
using ActionSet = std::vector<Action>;

ActionSet make_action_set(std::vector<Action> names);
bool set_contains(const ActionSet& set, const Action& name);
ActionSet set_union(const ActionSet& a, const ActionSet& b);
std::string set_str(const ActionSet& set);  // "a, b, c"

struct Activity {
  Action action;
  Rate rate;

  bool operator==(const Activity& other) const {
    return action == other.action && rate == other.rate;
  }
  std::size_t hash() const;
  std::string str() const;  // "(a, 3/2)"
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable process term. Structural equality (with constants kept folded)
// is state identity everywhere downstream, so every node caches a hash.
class Term {
 public:
  enum class Kind { Nil, Prefix, Choice, Const, Hide, Coop };

  static TermPtr nil();
  static TermPtr prefix(Activity activity, TermPtr body);
  static TermPtr choice(TermPtr left, TermPtr right);
  static TermPtr constant(std::string name);
  // Hiding the empty set relabels nothing and has no concrete syntax, so it
  // normalizes away.
  static TermPtr hide(TermPtr body, ActionSet set);
  // The cooperation set must not contain tau.
  static TermPtr coop(TermPtr left, ActionSet set, TermPtr right);

  Kind kind() const { return kind_; }
  const Activity& activity() const;          // Prefix
  const TermPtr& body() const;               // Prefix, Hide
  const TermPtr& left() const;               // Choice, Coop
  const TermPtr& right() const;              // Choice, Coop
  const std::string& name() const;           // Const
  const ActionSet& action_set() const;       // Hide, Coop

  std::size_t hash() const { return hash_; }

  // Nil/Prefix/Choice/Const transitively (no Hide/Coop anywhere inside).
  bool is_sequential() const;

 private:
  Term(Kind kind, std::unique_ptr<Activity> activity, TermPtr a, TermPtr b,
       std::string name, ActionSet set);

  Kind kind_;
  std::unique_ptr<Activity> activity_;
  TermPtr a_, b_;  // Prefix/Hide body in a_; Choice/Coop operands in a_, b_
  std::string name_;
  ActionSet set_;
  std::size_t hash_;
};

bool term_eq(const TermPtr& a, const TermPtr& b);

struct TermPtrHash {
  std::size_t operator()(const TermPtr& t) const { return t->hash(); }
};
struct TermPtrEq {
  bool operator()(const TermPtr& a, const TermPtr& b) const { return term_eq(a, b); }
};

// Concrete syntax for an expression position (the form `system ...;` takes).
// Throws Error for shapes the grammar cannot print, e.g. a choice whose first
// operand is not a prefix, or a choice directly under a prefix.
std::string to_string(const TermPtr& term);

// Concrete syntax for a definition body (`X = ...;`), which additionally
// allows choices led by constants or 0.
std::string to_definition_string(const TermPtr& term);

}  // namespace pepa
