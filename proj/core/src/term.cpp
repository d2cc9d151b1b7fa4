#include "pepa/term.hpp"

#include <algorithm>

#include "pepa/errors.hpp"

namespace pepa {

namespace {

std::size_t combine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ull + (seed << 6) + (seed >> 2));
}

std::size_t hash_string(const std::string& s) { return std::hash<std::string>{}(s); }

std::size_t hash_set(const ActionSet& set) {
  std::size_t h = 0x5851f42d4c957f2dull;
  for (const auto& a : set) h = combine(h, hash_string(a));
  return h;
}

}  // namespace

ActionSet make_action_set(std::vector<Action> names) {
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

bool set_contains(const ActionSet& set, const Action& name) {
  return std::binary_search(set.begin(), set.end(), name);
}

ActionSet set_union(const ActionSet& a, const ActionSet& b) {
  ActionSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::string set_str(const ActionSet& set) {
  std::string out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out += ", ";
    out += set[i];
  }
  return out;
}

std::size_t Activity::hash() const {
  return combine(hash_string(action), rate.hash());
}

std::string Activity::str() const { return "(" + action + ", " + rate.str() + ")"; }

Term::Term(Kind kind, std::unique_ptr<Activity> activity, TermPtr a, TermPtr b,
           std::string name, ActionSet set)
    : kind_(kind),
      activity_(std::move(activity)),
      a_(std::move(a)),
      b_(std::move(b)),
      name_(std::move(name)),
      set_(std::move(set)) {
  std::size_t h = static_cast<std::size_t>(kind_) * 0x9e3779b97f4a7c15ull + 1;
  if (activity_) h = combine(h, activity_->hash());
  if (a_) h = combine(h, a_->hash());
  if (b_) h = combine(h, b_->hash());
  if (!name_.empty()) h = combine(h, hash_string(name_));
  if (!set_.empty()) h = combine(h, hash_set(set_));
  hash_ = h;
}

TermPtr Term::nil() {
  static const TermPtr instance(
      new Term(Kind::Nil, nullptr, nullptr, nullptr, "", {}));
  return instance;
}

TermPtr Term::prefix(Activity activity, TermPtr body) {
  if (!body) throw Error("prefix body must be non-null");
  return TermPtr(new Term(Kind::Prefix,
                          std::make_unique<Activity>(std::move(activity)),
                          std::move(body), nullptr, "", {}));
}

TermPtr Term::choice(TermPtr left, TermPtr right) {
  if (!left || !right) throw Error("choice operands must be non-null");
  return TermPtr(new Term(Kind::Choice, nullptr, std::move(left),
                          std::move(right), "", {}));
}

TermPtr Term::constant(std::string name) {
  if (name.empty()) throw Error("constant name must be nonempty");
  return TermPtr(new Term(Kind::Const, nullptr, nullptr, nullptr,
                          std::move(name), {}));
}

TermPtr Term::hide(TermPtr body, ActionSet set) {
  if (!body) throw Error("hide body must be non-null");
  if (set.empty()) return body;
  return TermPtr(new Term(Kind::Hide, nullptr, std::move(body), nullptr, "",
                          std::move(set)));
}

TermPtr Term::coop(TermPtr left, ActionSet set, TermPtr right) {
  if (!left || !right) throw Error("cooperation operands must be non-null");
  if (set_contains(set, kTau)) throw Error("cooperation sets cannot contain tau");
  return TermPtr(new Term(Kind::Coop, nullptr, std::move(left),
                          std::move(right), "", std::move(set)));
}

const Activity& Term::activity() const {
  if (!activity_) throw Error("term has no activity");
  return *activity_;
}

const TermPtr& Term::body() const {
  if (kind_ != Kind::Prefix && kind_ != Kind::Hide)
    throw Error("term has no body");
  return a_;
}

const TermPtr& Term::left() const {
  if (kind_ != Kind::Choice && kind_ != Kind::Coop)
    throw Error("term has no left operand");
  return a_;
}

const TermPtr& Term::right() const {
  if (kind_ != Kind::Choice && kind_ != Kind::Coop)
    throw Error("term has no right operand");
  return b_;
}

const std::string& Term::name() const {
  if (kind_ != Kind::Const) throw Error("term is not a constant");
  return name_;
}

const ActionSet& Term::action_set() const {
  if (kind_ != Kind::Hide && kind_ != Kind::Coop)
    throw Error("term has no action set");
  return set_;
}

bool Term::is_sequential() const {
  switch (kind_) {
    case Kind::Nil:
    case Kind::Const:
      return true;
    case Kind::Prefix:
      return a_->is_sequential();
    case Kind::Choice:
      return a_->is_sequential() && b_->is_sequential();
    case Kind::Hide:
    case Kind::Coop:
      return false;
  }
  return false;
}

bool term_eq(const TermPtr& a, const TermPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->hash() != b->hash()) return false;
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case Term::Kind::Nil:
      return true;
    case Term::Kind::Const:
      return a->name() == b->name();
    case Term::Kind::Prefix:
      return a->activity() == b->activity() && term_eq(a->body(), b->body());
    case Term::Kind::Choice:
      return term_eq(a->left(), b->left()) && term_eq(a->right(), b->right());
    case Term::Kind::Hide:
      return a->action_set() == b->action_set() && term_eq(a->body(), b->body());
    case Term::Kind::Coop:
      return a->action_set() == b->action_set() &&
             term_eq(a->left(), b->left()) && term_eq(a->right(), b->right());
  }
  return false;
}

namespace {

// Renderer mirroring the grammar:
//   modexpr   := cooplevel
//   cooplevel := hidelevel ("<" names? ">" hidelevel)*     left-assoc
//   hidelevel := atom ("/" "{" names "}")*
//   atom      := UIDENT | "0" | "(" modexpr ")" | prefix-led choice
//   prefixterm := "(" lident "," rate ")" "." prefixterm | UIDENT | "0"

void flatten_choice(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind() == Term::Kind::Choice) {
    flatten_choice(t->left(), out);
    flatten_choice(t->right(), out);
  } else {
    out.push_back(t);
  }
}

std::string render_rate(const Rate& r) {
  if (r.is_active()) return format_rational(r.value());
  if (r.value() == 1) return "T";
  if (r.value().get_den() != 1)
    throw Error("passive weight " + format_rational(r.value()) +
                " has no concrete syntax (integer weights only)");
  return r.value().get_num().get_str() + "*T";
}

std::string render_prefixterm(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Nil:
      return "0";
    case Term::Kind::Const:
      return t->name();
    case Term::Kind::Prefix:
      return "(" + t->activity().action + "," + render_rate(t->activity().rate) +
             ")." + render_prefixterm(t->body());
    default:
      throw Error(
          "term has no concrete syntax: only prefixes, constants and 0 may "
          "appear under a prefix or inside a choice");
  }
}

// requirePrefixLead: at expression level a choice is only recognisable when
// its first operand starts with "(" lident, i.e. is a prefix.
std::string render_choice(const TermPtr& t, bool requirePrefixLead) {
  std::vector<TermPtr> parts;
  flatten_choice(t, parts);
  if (requirePrefixLead && parts.front()->kind() != Term::Kind::Prefix)
    throw Error(
        "term has no concrete syntax: a choice in expression position must "
        "start with a prefix");
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " + ";
    out += render_prefixterm(parts[i]);
  }
  return out;
}

std::string render_modexpr(const TermPtr& t);

std::string render_atom(const TermPtr& t) {
  switch (t->kind()) {
    case Term::Kind::Nil:
      return "0";
    case Term::Kind::Const:
      return t->name();
    case Term::Kind::Prefix:
      return render_prefixterm(t);
    case Term::Kind::Choice:
      return render_choice(t, /*requirePrefixLead=*/true);
    default:
      return "(" + render_modexpr(t) + ")";
  }
}

std::string render_hidelevel(const TermPtr& t) {
  if (t->kind() == Term::Kind::Hide) {
    const TermPtr& b = t->body();
    std::string base;
    if (b->kind() == Term::Kind::Hide) {
      base = render_hidelevel(b);
    } else if (b->kind() == Term::Kind::Const || b->kind() == Term::Kind::Nil) {
      base = render_atom(b);
    } else {
      // parenthesise prefixes/choices/cooperations so the hiding visibly
      // applies to the whole operand
      base = "(" + render_modexpr(b) + ")";
    }
    return base + "/{" + set_str(t->action_set()) + "}";
  }
  return render_atom(t);
}

std::string render_cooplevel(const TermPtr& t) {
  if (t->kind() == Term::Kind::Coop) {
    std::string left = render_cooplevel(t->left());
    std::string right = t->right()->kind() == Term::Kind::Coop
                            ? "(" + render_modexpr(t->right()) + ")"
                            : render_hidelevel(t->right());
    std::string names = set_str(t->action_set());
    names.erase(std::remove(names.begin(), names.end(), ' '), names.end());
    return left + " <" + names + "> " + right;
  }
  return render_hidelevel(t);
}

std::string render_modexpr(const TermPtr& t) { return render_cooplevel(t); }

}  // namespace

std::string to_string(const TermPtr& term) {
  if (!term) throw Error("cannot render a null term");
  return render_modexpr(term);
}

std::string to_definition_string(const TermPtr& term) {
  if (!term) throw Error("cannot render a null term");
  if (term->kind() == Term::Kind::Choice)
    return render_choice(term, /*requirePrefixLead=*/false);
  return render_prefixterm(term);
}

}  // namespace pepa
