#include "pepa/model.hpp"

#include <map>
#include <set>

#include "pepa/errors.hpp"

namespace pepa {

const TermPtr* ModelEnv::find(const std::string& name) const {
  for (const auto& def : definitions) {
    if (def.name == name) return &def.body;
  }
  return nullptr;
}

namespace {

void check_unguarded(const TermPtr& t, bool guarded, const Definition& def,
                     std::vector<Diagnostic>& out) {
  switch (t->kind()) {
    case Term::Kind::Nil:
      return;
    case Term::Kind::Const:
      if (!guarded) {
        std::string msg = "unguarded constant " + t->name();
        if (t->name() != def.name) msg += " in definition of " + def.name;
        out.push_back({msg, def.pos});
      }
      return;
    case Term::Kind::Prefix:
      check_unguarded(t->body(), true, def, out);
      return;
    case Term::Kind::Choice:
      check_unguarded(t->left(), guarded, def, out);
      check_unguarded(t->right(), guarded, def, out);
      return;
    case Term::Kind::Hide:
      check_unguarded(t->body(), guarded, def, out);
      return;
    case Term::Kind::Coop:
      check_unguarded(t->left(), guarded, def, out);
      check_unguarded(t->right(), guarded, def, out);
      return;
  }
}

// One action type must not appear with both active and passive rates inside
// one sequential body.
void check_rate_mixing(const TermPtr& t, std::map<Action, bool>& kinds,
                       std::set<Action>& flagged, const std::string& where,
                       SourcePos pos, std::vector<Diagnostic>& out) {
  switch (t->kind()) {
    case Term::Kind::Prefix: {
      const Activity& act = t->activity();
      auto [it, inserted] = kinds.emplace(act.action, act.rate.is_active());
      if (!inserted && it->second != act.rate.is_active() &&
          flagged.insert(act.action).second) {
        out.push_back(
            {"action " + act.action + " mixes active and passive in " + where,
             pos});
      }
      check_rate_mixing(t->body(), kinds, flagged, where, pos, out);
      return;
    }
    case Term::Kind::Choice:
      check_rate_mixing(t->left(), kinds, flagged, where, pos, out);
      check_rate_mixing(t->right(), kinds, flagged, where, pos, out);
      return;
    default:
      return;  // stop at constants and at non-sequential operators
  }
}

void check_hide_sets(const TermPtr& t, SourcePos pos,
                     std::vector<Diagnostic>& out) {
  switch (t->kind()) {
    case Term::Kind::Hide:
      if (set_contains(t->action_set(), kTau))
        out.push_back({"tau cannot be hidden", pos});
      check_hide_sets(t->body(), pos, out);
      return;
    case Term::Kind::Prefix:
      check_hide_sets(t->body(), pos, out);
      return;
    case Term::Kind::Choice:
    case Term::Kind::Coop:
      check_hide_sets(t->left(), pos, out);
      check_hide_sets(t->right(), pos, out);
      return;
    default:
      return;
  }
}

// Maximal sequential subterms of a composed expression.
void sequential_parts(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind() == Term::Kind::Hide) {
    sequential_parts(t->body(), out);
  } else if (t->kind() == Term::Kind::Coop) {
    sequential_parts(t->left(), out);
    sequential_parts(t->right(), out);
  } else {
    out.push_back(t);
  }
}

void collect_referenced(const TermPtr& t, std::vector<std::string>& order,
                        std::set<std::string>& seen) {
  switch (t->kind()) {
    case Term::Kind::Const:
      if (seen.insert(t->name()).second) order.push_back(t->name());
      return;
    case Term::Kind::Prefix:
      collect_referenced(t->body(), order, seen);
      return;
    case Term::Kind::Hide:
      collect_referenced(t->body(), order, seen);
      return;
    case Term::Kind::Choice:
    case Term::Kind::Coop:
      collect_referenced(t->left(), order, seen);
      collect_referenced(t->right(), order, seen);
      return;
    default:
      return;
  }
}

}  // namespace

std::vector<Diagnostic> validate(const ModelEnv& env) {
  std::vector<Diagnostic> out;

  std::set<std::string> names;
  for (const auto& def : env.definitions) {
    if (!names.insert(def.name).second)
      out.push_back({"constant " + def.name + " defined more than once", def.pos});
  }

  for (const auto& def : env.definitions) {
    if (!def.body) {
      out.push_back({"definition of " + def.name + " has no body", def.pos});
      continue;
    }
    if (!def.body->is_sequential())
      out.push_back({"definition of " + def.name +
                         " is not sequential (cooperation or hiding in a "
                         "definition body)",
                     def.pos});
    check_unguarded(def.body, false, def, out);
    std::map<Action, bool> kinds;
    std::set<Action> flagged;
    check_rate_mixing(def.body, kinds, flagged, def.name, def.pos, out);
    check_hide_sets(def.body, def.pos, out);
  }

  if (!env.root) {
    out.push_back({"model has no system term", {}});
  } else {
    std::vector<TermPtr> parts;
    sequential_parts(env.root, parts);
    for (const auto& part : parts) {
      if (part->kind() == Term::Kind::Const) continue;  // checked via its def
      std::map<Action, bool> kinds;
      std::set<Action> flagged;
      check_rate_mixing(part, kinds, flagged, "the system term", {}, out);
    }
    check_hide_sets(env.root, {}, out);
  }

  if (set_contains(env.high, kTau))
    out.push_back({"tau cannot be declared high", {}});

  // undefined constants, in first-reference order: definitions then root
  std::vector<std::string> refs;
  std::set<std::string> seen;
  for (const auto& def : env.definitions) {
    if (def.body) collect_referenced(def.body, refs, seen);
  }
  if (env.root) collect_referenced(env.root, refs, seen);
  for (const auto& name : refs) {
    if (!env.defines(name))
      out.push_back({"undefined constant " + name, {}});
  }

  return out;
}

namespace {

void alphabet_walk(const ModelEnv& env, const TermPtr& t, ActionSet& acc,
                   std::set<std::string>& visited) {
  switch (t->kind()) {
    case Term::Kind::Nil:
      return;
    case Term::Kind::Const: {
      if (!visited.insert(t->name()).second) return;
      const TermPtr* body = env.find(t->name());
      if (!body) throw ModelError("undefined constant " + t->name());
      alphabet_walk(env, *body, acc, visited);
      return;
    }
    case Term::Kind::Prefix:
      acc.push_back(t->activity().action);
      alphabet_walk(env, t->body(), acc, visited);
      return;
    case Term::Kind::Choice:
      alphabet_walk(env, t->left(), acc, visited);
      alphabet_walk(env, t->right(), acc, visited);
      return;
    case Term::Kind::Hide:
      acc.push_back(kTau);
      alphabet_walk(env, t->body(), acc, visited);
      return;
    case Term::Kind::Coop:
      alphabet_walk(env, t->left(), acc, visited);
      alphabet_walk(env, t->right(), acc, visited);
      return;
  }
}

}  // namespace

ActionSet action_alphabet(const ModelEnv& env, const TermPtr& term) {
  ActionSet acc;
  std::set<std::string> visited;
  alphabet_walk(env, term, acc, visited);
  return make_action_set(std::move(acc));
}

}  // namespace pepa
