#include "remedy/explainer.hpp"

#include <cctype>
#include <optional>

#include "remedy/errors.hpp"
#include "remedy/remediator.hpp"

namespace remedy {

namespace {

using Alternatives = std::vector<std::vector<std::string>>;

std::string quoted(const std::string& s) { return "'" + s + "'"; }

std::string where(const std::string& op, const std::string& hp) {
  return "argument " + quoted(hp) + " in operator " + op;
}

std::string setting(const std::string& op, const std::string& hp, const Literal& v) {
  return "Try setting " + where(op, hp) + " to " + quoted(to_display(v));
}

std::string presence(const std::string& op, const std::string& hp, const char* state) {
  return std::string("Try ensuring that ") + where(op, hp) + " is " + state +
         " for all runs (a Choice operator may need to be removed)";
}

// Empty for atoms that need no advice of their own.
std::optional<std::string> fragment(const AtomicConstraint& a) {
  return std::visit(
      [](const auto& x) -> std::optional<std::string> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, atom::Eq>) {
          return setting(x.op, x.hp, x.value);
        } else if constexpr (std::is_same_v<T, atom::Neq>) {
          return "Try avoiding value " + quoted(to_display(x.value)) + " for " + where(x.op, x.hp);
        } else if constexpr (std::is_same_v<T, atom::Present>) {
          return presence(x.op, x.hp, "present");
        } else if constexpr (std::is_same_v<T, atom::Absent>) {
          return presence(x.op, x.hp, "absent");
        } else if constexpr (std::is_same_v<T, atom::CmpConst>) {
          return "Try setting " + where(x.op, x.hp) + " to a value " + std::string(to_symbol(x.cmp)) +
                 " " + to_display(x.limit);
        } else if constexpr (std::is_same_v<T, atom::CmpParam>) {
          const char* rel = x.cmp == CmpOp::Lt ? "less than" : "less than or equal to";
          return "Try ensuring " + where(x.op1, x.hp1) + " is " + rel + " " + where(x.op2, x.hp2);
        } else {
          return std::nullopt;
        }
      },
      a);
}

Alternatives cross(const Alternatives& xs, const Alternatives& ys) {
  Alternatives out;
  for (const auto& x : xs)
    for (const auto& y : ys) {
      auto joined = x;
      joined.insert(joined.end(), y.begin(), y.end());
      out.push_back(std::move(joined));
    }
  return out;
}

Alternatives walk_free(const Constraint& c) {
  if (auto* a = c.as_atom()) {
    if (std::holds_alternative<atom::LitFalse>(*a)) return {};
    auto f = fragment(*a);
    return {f ? std::vector<std::string>{*f} : std::vector<std::string>{}};
  }
  if (auto* conj = c.as_and()) {
    Alternatives acc{{}};
    for (const auto& part : conj->children) acc = cross(acc, walk_free(part));
    return acc;
  }
  const auto& ite = *c.as_ite();
  Alternatives out = walk_free(Constraint::conjunction({Constraint(ite.cond), *ite.then_branch}));
  Alternatives rest =
      walk_free(Constraint::conjunction({Constraint(negate_atom(ite.cond)), *ite.else_branch}));
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// A partial alternative paired with the pipeline it has produced so far.
struct Partial {
  std::vector<std::string> fragments;
  PlannedPipeline pipeline;
};

bool dropped(const DomainError& e) {
  return dynamic_cast<const EmptyDomainError*>(&e) || dynamic_cast<const UnsatisfiableBranchError*>(&e) ||
         dynamic_cast<const LitFalseConstraintError*>(&e) || dynamic_cast<const AllBucketsEmptyError*>(&e) ||
         dynamic_cast<const WouldEmptyChoiceError*>(&e);
}

std::optional<std::string> fragment_in(const AtomicConstraint& a, const PlannedPipeline& before,
                                       const PlannedPipeline& after) {
  const atom::Eq* eq = std::get_if<atom::Eq>(&a);
  const atom::Neq* ne = std::get_if<atom::Neq>(&a);
  const atom::CmpConst* cc = std::get_if<atom::CmpConst>(&a);
  if (!eq && !ne && !cc) {
    if (auto* pr = std::get_if<atom::Present>(&a); pr && is_mandatory(before, pr->op)) return std::nullopt;
    return fragment(a);
  }
  BindingKey key = referenced_keys(a).front();
  bool pre_bound = false;
  for_each_operator(before, [&](const OperatorSpec& op) {
    if (op.name == key.op && op.find_fixed(key.hp)) pre_bound = true;
  });
  if (pre_bound) {
    if (is_mandatory(before, key.op)) return std::nullopt;
    return presence(key.op, key.hp, "present");
  }
  if (auto d = lookup_domain(after, key)) {
    if (auto* c = d->get_if<Constant>()) return setting(key.op, key.hp, c->value);
  }
  return fragment(a);
}

std::vector<Partial> walk(const Constraint& c, std::vector<Partial> in, int n_splits) {
  if (auto* a = c.as_atom()) {
    std::vector<Partial> out;
    for (auto& p : in) {
      try {
        PlannedPipeline next = apply_atom(p.pipeline, *a, n_splits);
        if (auto f = fragment_in(*a, p.pipeline, next)) p.fragments.push_back(*f);
        p.pipeline = std::move(next);
        out.push_back(std::move(p));
      } catch (const DomainError& e) {
        if (!dropped(e)) throw;
      }
    }
    return out;
  }
  if (auto* conj = c.as_and()) {
    for (const auto& part : conj->children) in = walk(part, std::move(in), n_splits);
    return in;
  }
  const auto& ite = *c.as_ite();
  auto out = walk(Constraint::conjunction({Constraint(ite.cond), *ite.then_branch}), in, n_splits);
  for (const auto& alt : complement(ite.cond)) {
    std::vector<Partial> live;
    for (const auto& p : in) {
      auto* absent = std::get_if<atom::Absent>(&alt);
      if (!absent || !is_mandatory(p.pipeline, absent->op)) live.push_back(p);
    }
    auto rest = walk(Constraint::conjunction({Constraint(alt), *ite.else_branch}), std::move(live), n_splits);
    for (auto& r : rest) out.push_back(std::move(r));
  }
  return out;
}

std::string sentence_case(std::string s, bool upper) {
  if (!s.empty()) s[0] = static_cast<char>(upper ? std::toupper(static_cast<unsigned char>(s[0]))
                                                 : std::tolower(static_cast<unsigned char>(s[0])));
  return s;
}

Explanation render(Alternatives alts) {
  Explanation e;
  if (alts.empty()) {
    e.text = "No configuration can succeed";
    return e;
  }
  for (size_t i = 0; i < alts.size(); ++i) {
    if (i) e.text += "\nOR\n";
    const auto& frags = alts[i];
    if (frags.empty()) {
      e.text += "No changes needed";
      continue;
    }
    for (size_t k = 0; k < frags.size(); ++k)
      e.text += k == 0 ? sentence_case(frags[k], true) : "\n and " + sentence_case(frags[k], false);
  }
  e.alternatives = std::move(alts);
  return e;
}

}  // namespace

Explanation explain(const Constraint& c) { return render(walk_free(c)); }

Explanation explain(const Constraint& c, const PlannedPipeline& pipeline, int n_splits) {
  auto partials = walk(c, {Partial{{}, pipeline}}, n_splits);
  Alternatives alts;
  for (auto& p : partials) alts.push_back(std::move(p.fragments));
  return render(std::move(alts));
}

}  // namespace remedy
