#include "pepa/semantics.hpp"

#include <deque>
#include <unordered_map>

#include "pepa/errors.hpp"

namespace pepa {

namespace {

void merge_into(TransitionMultiset& acc, Activity activity, TermPtr target,
                std::int64_t multiplicity) {
  for (auto& t : acc) {
    if (t.activity == activity && term_eq(t.target, target)) {
      t.multiplicity += multiplicity;
      return;
    }
  }
  acc.push_back({std::move(activity), std::move(target), multiplicity});
}

// Sum of rate*multiplicity over one action's entries; nullopt if none.
// Kind mixing cannot be resolved into a single rate.
std::optional<Rate> sum_for_action(const TransitionMultiset& ts,
                                   const Action& alpha) {
  std::optional<Rate> acc;
  for (const auto& t : ts) {
    if (t.activity.action != alpha) continue;
    Rate part = t.activity.rate.scaled(t.multiplicity);
    if (!acc) {
      acc = part;
    } else {
      if (acc->is_active() != part.is_active())
        throw ModelError("action " + alpha +
                         " has both active and passive rates in one "
                         "component; synchronise on it or restrict it");
      acc = *acc + part;
    }
  }
  return acc;
}

constexpr int kMaxUnfoldDepth = 4096;

TransitionMultiset enabled_rec(const ModelEnv& env, const TermPtr& term,
                               int depth) {
  if (depth > kMaxUnfoldDepth)
    throw ModelError(
        "constant unfolding exceeds depth limit (unguarded recursion?)");
  switch (term->kind()) {
    case Term::Kind::Nil:
      return {};
    case Term::Kind::Prefix:
      return {{term->activity(), term->body(), 1}};
    case Term::Kind::Const: {
      const TermPtr* body = env.find(term->name());
      if (!body) throw ModelError("undefined constant " + term->name());
      return enabled_rec(env, *body, depth + 1);
    }
    case Term::Kind::Choice: {
      TransitionMultiset acc = enabled_rec(env, term->left(), depth + 1);
      for (auto& t : enabled_rec(env, term->right(), depth + 1))
        merge_into(acc, std::move(t.activity), std::move(t.target),
                   t.multiplicity);
      return acc;
    }
    case Term::Kind::Hide: {
      const ActionSet& hidden = term->action_set();
      TransitionMultiset inner = enabled_rec(env, term->body(), depth + 1);
      TransitionMultiset acc;
      for (auto& t : inner) {
        Action name = set_contains(hidden, t.activity.action) ? kTau
                                                              : t.activity.action;
        merge_into(acc, {std::move(name), t.activity.rate},
                   Term::hide(std::move(t.target), hidden), t.multiplicity);
      }
      return acc;
    }
    case Term::Kind::Coop: {
      const ActionSet& shared = term->action_set();
      TransitionMultiset ls = enabled_rec(env, term->left(), depth + 1);
      TransitionMultiset rs = enabled_rec(env, term->right(), depth + 1);
      TransitionMultiset acc;
      for (const auto& t : ls) {
        if (set_contains(shared, t.activity.action)) continue;
        merge_into(acc, t.activity,
                   Term::coop(t.target, shared, term->right()), t.multiplicity);
      }
      for (const auto& t : rs) {
        if (set_contains(shared, t.activity.action)) continue;
        merge_into(acc, t.activity, Term::coop(term->left(), shared, t.target),
                   t.multiplicity);
      }
      for (const Action& alpha : shared) {
        std::optional<Rate> raL = sum_for_action(ls, alpha);
        if (!raL) continue;
        std::optional<Rate> raR = sum_for_action(rs, alpha);
        if (!raR) continue;
        for (const auto& lt : ls) {
          if (lt.activity.action != alpha) continue;
          for (const auto& rt : rs) {
            if (rt.activity.action != alpha) continue;
            Rate rate = shared_rate(lt.activity.rate, rt.activity.rate, *raL, *raR);
            merge_into(acc, {alpha, rate},
                       Term::coop(lt.target, shared, rt.target),
                       lt.multiplicity * rt.multiplicity);
          }
        }
      }
      return acc;
    }
  }
  return {};
}

}  // namespace

TransitionMultiset enabled(const ModelEnv& env, const TermPtr& term) {
  if (!term) throw Error("enabled: null term");
  return enabled_rec(env, term, 0);
}

std::optional<Rate> apparent_rate(const ModelEnv& env, const TermPtr& term,
                                  const Action& alpha) {
  return sum_for_action(enabled(env, term), alpha);
}

Rate shared_rate(const Rate& r1, const Rate& r2, const Rate& raP,
                 const Rate& raQ) {
  if (r1.is_active() != raP.is_active() || r2.is_active() != raQ.is_active())
    throw ModelError(
        "shared rate: participating rate kind differs from its apparent rate");
  Rational ratio1 = r1.value() / raP.value();
  Rational ratio2 = r2.value() / raQ.value();
  const Rate& slower = min(raP, raQ);
  Rational value = ratio1 * ratio2 * slower.value();
  return slower.is_active() ? Rate::active(value) : Rate::passive(value);
}

DerivationGraph::DerivationGraph(std::shared_ptr<const ModelEnv> env,
                                 TermPtr root, std::size_t stateCap)
    : env_(std::move(env)) {
  if (!root) throw Error("derive: null root");
  std::unordered_map<TermPtr, int, TermPtrHash, TermPtrEq> index;
  std::deque<int> queue;
  states_.push_back(root);
  index.emplace(root, 0);
  queue.push_back(0);
  edgeOffsets_.push_back(0);
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (auto& t : enabled(*env_, states_[i])) {
      int j;
      auto it = index.find(t.target);
      if (it != index.end()) {
        j = it->second;
      } else {
        if (states_.size() >= stateCap)
          throw ResourceError("state space exceeds cap of " +
                              std::to_string(stateCap) + " states");
        j = static_cast<int>(states_.size());
        states_.push_back(t.target);
        index.emplace(t.target, j);
        queue.push_back(j);
      }
      edges_.push_back({i, std::move(t.activity), j, t.multiplicity});
    }
    edgeOffsets_.push_back(edges_.size());
  }
}

std::optional<int> DerivationGraph::index_of(const TermPtr& term) const {
  for (int i = 0; i < state_count(); ++i) {
    if (term_eq(states_[i], term)) return i;
  }
  return std::nullopt;
}

std::pair<const Edge*, const Edge*> DerivationGraph::out_edges(int i) const {
  const Edge* base = edges_.data();
  return {base + edgeOffsets_.at(i), base + edgeOffsets_.at(i + 1)};
}

DerivationGraph derive(const ModelEnv& env, std::size_t stateCap) {
  if (!env.root) throw ModelError("model has no system term");
  return DerivationGraph(std::make_shared<const ModelEnv>(env), env.root,
                         stateCap);
}

DerivationGraph derive_term(const ModelEnv& env, TermPtr root,
                            std::size_t stateCap) {
  return DerivationGraph(std::make_shared<const ModelEnv>(env), std::move(root),
                         stateCap);
}

CompletenessReport is_complete(const DerivationGraph& graph) {
  CompletenessReport report;
  for (int i = 0; i < graph.state_count(); ++i) {
    auto [begin, end] = graph.out_edges(i);
    if (begin == end) {
      report.absorbing_states.push_back(i);
      continue;
    }
    for (const Edge* e = begin; e != end; ++e) {
      if (e->activity.rate.is_passive()) {
        report.passive_states.push_back(i);
        break;
      }
    }
  }
  report.complete = report.passive_states.empty();
  return report;
}

}  // namespace pepa
