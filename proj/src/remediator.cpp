#include "remedy/remediator.hpp"

#include <algorithm>
#include <limits>
#include <optional>

#include "remedy/errors.hpp"
#include "remedy/pipeline_json.hpp"

namespace remedy {

namespace {

void note(std::vector<RemediationNote>* notes, std::string rule, std::string target,
          std::string detail) {
  if (notes) notes->push_back({std::move(rule), std::move(target), std::move(detail)});
}

// restrictChoice, keep-only flavour: at every choice that offers the operator,
// drop the alternatives that do not.
Step keep_only(const Step& step, const std::string& op) {
  if (step.as_operator()) return step;
  if (auto* seq = step.as_seq()) {
    SeqNode out;
    for (const auto& s : seq->steps) out.steps.push_back(keep_only(s, op));
    return Step(std::move(out));
  }
  const auto& alts = step.as_choice()->alternatives;
  bool offered = std::any_of(alts.begin(), alts.end(),
                             [&](const Step& a) { return step_mentions(a, op); });
  ChoiceNode out;
  for (const auto& a : alts)
    if (!offered || step_mentions(a, op)) out.alternatives.push_back(keep_only(a, op));
  return Step(std::move(out));
}

std::vector<Step> keep_only(const std::vector<Step>& steps, const std::string& op) {
  std::vector<Step> out;
  for (const auto& s : steps) out.push_back(keep_only(s, op));
  return out;
}

// Applies `a` to every occurrence of (key.op, key.hp). An occurrence that
// cannot satisfy it takes its enclosing choice alternative with it; nullopt
// means nothing is left at this level.
std::optional<Step> restrict_step(const Step& step, const BindingKey& key, const AtomicConstraint& a) {
  if (auto* op = step.as_operator()) {
    if (op->name != key.op) return step;
    OperatorSpec out = *op;
    try {
      if (auto* d = out.find_hyperparam(key.hp)) {
        *d = restrict_domain(*d, a);
      } else if (auto* v = out.find_fixed(key.hp)) {
        restrict_domain(HyperparamDomain::constant(*v), a);
      } else {
        return std::nullopt;
      }
    } catch (const EmptyDomainError&) {
      return std::nullopt;
    }
    return Step(std::move(out));
  }
  if (auto* seq = step.as_seq()) {
    SeqNode out;
    for (const auto& s : seq->steps) {
      auto r = restrict_step(s, key, a);
      if (!r) return std::nullopt;
      out.steps.push_back(std::move(*r));
    }
    return Step(std::move(out));
  }
  ChoiceNode out;
  for (const auto& alt : step.as_choice()->alternatives)
    if (auto r = restrict_step(alt, key, a)) out.alternatives.push_back(std::move(*r));
  if (out.alternatives.empty()) return std::nullopt;
  if (out.alternatives.size() == 1) return std::move(out.alternatives.front());
  return Step(std::move(out));
}

std::optional<std::vector<Step>> restrict_steps(const std::vector<Step>& steps, const BindingKey& key,
                                                const AtomicConstraint& a) {
  std::vector<Step> out;
  for (const auto& s : steps) {
    auto r = restrict_step(s, key, a);
    if (!r) return std::nullopt;
    out.push_back(std::move(*r));
  }
  return out;
}

void collect_domains(const Step& step, const BindingKey& key, std::vector<HyperparamDomain>& out) {
  if (auto* op = step.as_operator()) {
    if (op->name != key.op) return;
    if (auto* d = op->find_hyperparam(key.hp)) out.push_back(*d);
    else if (auto* v = op->find_fixed(key.hp)) out.push_back(HyperparamDomain::constant(*v));
    return;
  }
  const auto& children = step.as_choice() ? step.as_choice()->alternatives : step.as_seq()->steps;
  for (const auto& c : children) collect_domains(c, key, out);
}

std::vector<HyperparamDomain> domains_of(const std::vector<Step>& steps, const BindingKey& key) {
  std::vector<HyperparamDomain> out;
  for (const auto& s : steps) collect_domains(s, key, out);
  return out;
}

bool integral(const HyperparamDomain& d) {
  if (d.get_if<IntRange>()) return true;
  if (auto* c = d.get_if<Constant>()) return std::holds_alternative<std::int64_t>(c->value);
  if (auto* c = d.get_if<Categorical>())
    return std::all_of(c->values.begin(), c->values.end(), [](const Literal& v) {
      return std::holds_alternative<std::int64_t>(v);
    });
  return false;
}

bool all_numeric(const HyperparamDomain& d) {
  if (d.is_range()) return true;
  if (auto* c = d.get_if<Constant>()) return is_numeric(c->value);
  if (auto* c = d.get_if<Categorical>())
    return std::all_of(c->values.begin(), c->values.end(), [](const Literal& v) { return is_numeric(v); });
  return false;
}

struct Hull {
  double lo, hi;
  bool integral;
};

// Numeric hull over every occurrence; nullopt if some occurrence has no
// finite numeric form.
std::optional<Hull> hull_of(const std::vector<HyperparamDomain>& doms) {
  if (doms.empty()) return std::nullopt;
  Hull h{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), true};
  for (const auto& d : doms) {
    if (!all_numeric(d)) return std::nullopt;
    auto nh = d.numeric_hull();
    if (!nh) return std::nullopt;
    h.lo = std::min(h.lo, nh->first);
    h.hi = std::max(h.hi, nh->second);
    h.integral = h.integral && integral(d);
  }
  return h;
}

Literal number_literal(double x, bool as_int) {
  if (as_int) return static_cast<std::int64_t>(x);
  return x;
}

std::string key_text(const std::string& op, const std::string& hp) { return op + "." + hp; }

std::vector<Step> compare_in(const std::vector<Step>& steps, const atom::CmpParam& a, int n_splits,
                             std::vector<RemediationNote>* notes) {
  const BindingKey lhs{a.op1, a.hp1}, rhs{a.op2, a.hp2};
  auto index_of = [&](const std::string& op) {
    for (size_t i = 0; i < steps.size(); ++i)
      if (step_mentions(steps[i], op)) return static_cast<long>(i);
    return -1L;
  };
  long i = index_of(a.op1), j = index_of(a.op2);
  if (i < 0 || j < 0)
    throw UnsatisfiableBranchError("comparison " + to_string(AtomicConstraint{a}) +
                                   " refers to an operator that is not on this path");
  size_t lo = static_cast<size_t>(std::min(i, j)), hi = static_cast<size_t>(std::max(i, j));

  if (lo == hi && !steps[lo].as_operator()) {
    std::vector<Step> out = steps;
    if (auto* seq = steps[lo].as_seq()) {
      out[lo] = Step(SeqNode{compare_in(seq->steps, a, n_splits, notes)});
      return out;
    }
    ChoiceNode choice;
    for (const auto& alt : steps[lo].as_choice()->alternatives) {
      std::vector<Step> inner = alt.as_seq() ? alt.as_seq()->steps : std::vector<Step>{alt};
      choice.alternatives.push_back(Step(SeqNode{compare_in(inner, a, n_splits, notes)}));
    }
    out[lo] = Step(std::move(choice));
    return out;
  }

  std::vector<Step> span(steps.begin() + static_cast<long>(lo), steps.begin() + static_cast<long>(hi) + 1);
  auto rhs_hull = hull_of(domains_of(span, rhs));
  if (!rhs_hull)
    throw NotNumericError(key_text(a.op2, a.hp2) + " has no bounded numeric domain to split");
  auto lhs_doms = domains_of(span, lhs);
  if (lhs_doms.empty())
    throw NotNumericError(key_text(a.op1, a.hp1) + " is not a hyperparameter of " + a.op1);
  for (const auto& d : lhs_doms)
    if (!d.is_anything() && !all_numeric(d))
      throw NotNumericError(key_text(a.op1, a.hp1) + " has non-numeric domain " + to_string(d));
  if (auto lh = hull_of(lhs_doms); lh && compare(lh->hi, a.cmp, rhs_hull->lo)) {
    note(notes, "noop", to_string(AtomicConstraint{a}), "already holds for every value in the domains");
    return steps;
  }

  HyperparamDomain whole = rhs_hull->integral
                               ? HyperparamDomain::int_range(static_cast<std::int64_t>(rhs_hull->lo),
                                                             static_cast<std::int64_t>(rhs_hull->hi))
                               : HyperparamDomain::float_range(rhs_hull->lo, rhs_hull->hi);
  std::vector<std::vector<Step>> pairs;
  std::vector<std::string> described;
  for (const auto& piece : split_range(whole, n_splits)) {
    CmpOp lo_op = CmpOp::Ge, hi_op = CmpOp::Le;
    auto [blo, bhi] = *piece.numeric_hull();
    if (auto* f = piece.get_if<FloatRange>()) {
      if (f->open_lo) lo_op = CmpOp::Gt;
      if (f->open_hi) hi_op = CmpOp::Lt;
    }
    auto clone = restrict_steps(span, rhs, atom::CmpConst{a.op2, a.hp2, lo_op, number_literal(blo, rhs_hull->integral)});
    if (clone) clone = restrict_steps(*clone, rhs, atom::CmpConst{a.op2, a.hp2, hi_op, number_literal(bhi, rhs_hull->integral)});
    if (!clone) continue;
    auto bucket = hull_of(domains_of(*clone, rhs));
    Literal cap = number_literal(bucket->lo, rhs_hull->integral);
    clone = restrict_steps(*clone, lhs, atom::CmpConst{a.op1, a.hp1, a.cmp, cap});
    if (!clone) continue;
    pairs.push_back(std::move(*clone));
    described.push_back(to_string(piece) + " with " + a.hp1 + " " + std::string(to_symbol(a.cmp)) +
                        " " + to_source(cap));
  }
  if (pairs.empty())
    throw AllBucketsEmptyError("no range of " + key_text(a.op2, a.hp2) + " leaves a value of " +
                               key_text(a.op1, a.hp1) + " satisfying " + to_string(AtomicConstraint{a}));

  std::string detail = "split " + key_text(a.op2, a.hp2) + " into";
  for (size_t k = 0; k < described.size(); ++k) detail += (k ? "; " : " ") + described[k];
  note(notes, "makeComparison", to_string(AtomicConstraint{a}), detail);

  std::vector<Step> out(steps.begin(), steps.begin() + static_cast<long>(lo));
  if (pairs.size() == 1) {
    for (auto& s : pairs.front()) out.push_back(std::move(s));
  } else {
    ChoiceNode choice;
    for (auto& pr : pairs) choice.alternatives.push_back(Step(SeqNode{std::move(pr)}));
    out.push_back(Step(std::move(choice)));
  }
  for (size_t k = hi + 1; k < steps.size(); ++k) out.push_back(steps[k]);
  return out;
}

PlannedPipeline customize(const PlannedPipeline& p, const BindingKey& key, const AtomicConstraint& a,
                          std::vector<RemediationNote>* notes) {
  auto before = lookup_domain(p, key);
  auto steps = restrict_steps(p.steps, key, a);
  if (!steps)
    throw EmptyDomainError(to_string(a) + " rules out every configuration of " + key.op);
  PlannedPipeline out = normalize_structure(PlannedPipeline{std::move(*steps)});
  auto after = lookup_domain(out, key);
  std::string detail = before && after ? to_string(*before) + " -> " + to_string(*after) : "restricted";
  note(notes, "customizeSchemas", to_string(key), detail);
  return out;
}

PlannedPipeline require_operator(const PlannedPipeline& p, const std::string& op,
                                 std::vector<RemediationNote>* notes) {
  if (!occurs(p, op))
    throw UnsatisfiableBranchError("operator " + op + " is not available on this branch");
  if (is_mandatory(p, op)) return p;
  PlannedPipeline out = normalize_structure(PlannedPipeline{keep_only(p.steps, op)});
  note(notes, "restrictChoice", op, "kept only the alternatives that use " + op);
  return out;
}

bool branch_failure(const std::exception& e) {
  return dynamic_cast<const EmptyDomainError*>(&e) || dynamic_cast<const UnsatisfiableBranchError*>(&e) ||
         dynamic_cast<const LitFalseConstraintError*>(&e) || dynamic_cast<const AllBucketsEmptyError*>(&e) ||
         dynamic_cast<const WouldEmptyChoiceError*>(&e);
}

PlannedPipeline process(const PlannedPipeline& p, const Constraint& c, int n_splits,
                        std::vector<RemediationNote>* notes) {
  if (auto* a = c.as_atom()) return apply_atom(p, *a, n_splits, notes);
  if (auto* conj = c.as_and()) {
    PlannedPipeline cur = p;
    for (const auto& part : conj->children) cur = process(cur, part, n_splits, notes);
    return cur;
  }
  const auto& ite = *c.as_ite();
  Constraint then_c = Constraint::conjunction({Constraint(ite.cond), *ite.then_branch});
  Constraint else_c = Constraint::conjunction({Constraint(negate_atom(ite.cond)), *ite.else_branch});

  std::vector<RemediationNote> then_notes, else_notes;
  std::optional<PlannedPipeline> then_p;
  std::string then_err, else_err;
  try {
    then_p = process(p, then_c, n_splits, &then_notes);
  } catch (const DomainError& e) {
    if (!branch_failure(e)) throw;
    then_err = e.what();
  }

  // The else side covers every instance the condition rejects, including
  // those where the condition's operator was not chosen at all.
  std::vector<PlannedPipeline> else_parts;
  for (const auto& alt : complement(ite.cond)) {
    auto* absent = std::get_if<atom::Absent>(&alt);
    if (absent && is_mandatory(p, absent->op)) continue;
    std::vector<RemediationNote> part_notes;
    try {
      else_parts.push_back(
          process(p, Constraint::conjunction({Constraint(alt), *ite.else_branch}), n_splits, &part_notes));
      else_notes.insert(else_notes.end(), part_notes.begin(), part_notes.end());
    } catch (const DomainError& e) {
      if (!branch_failure(e)) throw;
      if (!absent) else_err = e.what();
    }
  }
  if (else_parts.empty() && else_err.empty()) else_err = "no configuration rejects " + to_string(ite.cond);
  std::optional<PlannedPipeline> else_p;
  if (else_parts.size() == 1) {
    else_p = std::move(else_parts.front());
  } else if (!else_parts.empty()) {
    ChoiceNode parts;
    for (auto& part : else_parts) parts.alternatives.push_back(Step(SeqNode{std::move(part.steps)}));
    else_p = normalize_structure(PlannedPipeline{{Step(std::move(parts))}});
  }

  const std::string cond = to_string(ite.cond);
  if (!then_p && !else_p)
    throw UnsatisfiableBranchError("both branches of 'if " + cond + "' are unsatisfiable: " + then_err +
                                   "; " + else_err);
  note(notes, "makeChoice", cond, "then: " + to_string(then_c) + "; else: " + to_string(else_c));
  auto append = [&](std::vector<RemediationNote>& src) {
    if (notes) notes->insert(notes->end(), src.begin(), src.end());
  };
  append(then_notes);
  append(else_notes);
  if (!then_p) {
    note(notes, "dropBranch", "then", then_err);
    return *else_p;
  }
  if (!else_p) {
    note(notes, "dropBranch", "else", else_err);
    return *then_p;
  }
  ChoiceNode choice{{Step(SeqNode{then_p->steps}), Step(SeqNode{else_p->steps})}};
  return normalize_structure(PlannedPipeline{{Step(std::move(choice))}});
}

void check_references(const PlannedPipeline& p, const Constraint& c) {
  auto check_atom = [&](const AtomicConstraint& a) {
    for (const auto& key : referenced_keys(a)) {
      if (!occurs(p, key.op))
        throw ValidationError("constraint mentions operator " + key.op + ", which is not in the pipeline");
      if (!key.hp.empty() && !lookup_domain(p, key))
        throw ValidationError("constraint mentions " + to_string(key) + ", which the pipeline does not declare");
    }
  };
  if (auto* a = c.as_atom()) return check_atom(*a);
  if (auto* conj = c.as_and()) {
    for (const auto& part : conj->children) check_references(p, part);
    return;
  }
  check_atom(c.as_ite()->cond);
  check_references(p, *c.as_ite()->then_branch);
  check_references(p, *c.as_ite()->else_branch);
}

}  // namespace

PlannedPipeline make_comparison(const PlannedPipeline& p, const atom::CmpParam& a, int n_splits,
                                std::vector<RemediationNote>* notes) {
  if (n_splits < 1) throw ValidationError("split count must be at least 1");
  std::vector<Step> steps = keep_only(keep_only(p.steps, a.op1), a.op2);
  return normalize_structure(PlannedPipeline{compare_in(steps, a, n_splits, notes)});
}

PlannedPipeline apply_atom(const PlannedPipeline& p, const AtomicConstraint& a, int n_splits,
                           std::vector<RemediationNote>* notes) {
  if (std::holds_alternative<atom::LitTrue>(a)) return p;
  if (std::holds_alternative<atom::LitFalse>(a))
    throw LitFalseConstraintError("constraint is false: no configuration can succeed");

  if (auto* ab = std::get_if<atom::Absent>(&a)) {
    if (!occurs(p, ab->op)) {
      note(notes, "noop", to_string(a), ab->op + " is not in the pipeline");
      return p;
    }
    if (is_mandatory(p, ab->op))
      throw UnsatisfiableBranchError(to_string(a) + " cannot hold: " + ab->op + " is a mandatory step");
    PlannedPipeline out = remove_choice_alternative(p, ab->op);
    note(notes, "restrictChoice", ab->op, "removed the alternatives that use " + ab->op);
    return out;
  }

  PlannedPipeline cur = p;
  std::vector<std::string> ops;
  for (const auto& key : referenced_keys(a))
    if (std::find(ops.begin(), ops.end(), key.op) == ops.end()) ops.push_back(key.op);
  for (const auto& op : ops) cur = require_operator(cur, op, notes);

  if (auto* pr = std::get_if<atom::Present>(&a)) {
    if (auto d = lookup_domain(cur, {pr->op, pr->hp}); d && d->is_anything())
      throw UnrepresentableDomainError(to_string(a) + ": an unconstrained hyperparameter cannot be made mandatory");
    if (is_mandatory(p, pr->op))
      note(notes, "noop", to_string(a), pr->op + " is already a mandatory step");
    return cur;
  }
  if (auto* cp = std::get_if<atom::CmpParam>(&a)) return make_comparison(cur, *cp, n_splits, notes);

  BindingKey key = referenced_keys(a).front();
  return customize(cur, key, a, notes);
}

Remediation remediate(const PlannedPipeline& original, const Constraint& c, int n_splits) {
  if (n_splits < 1) throw ValidationError("split count must be at least 1");
  Remediation r{original, original, c, {}};
  if (c.is_true()) return r;
  check_references(original, c);
  r.remediated = normalize_structure(process(original, c, n_splits, &r.notes));
  return r;
}

Json to_json(const RemediationNote& n) {
  Json j = Json::object();
  j["rule"] = n.rule;
  j["target"] = n.target;
  j["detail"] = n.detail;
  return j;
}

Json to_json(const Remediation& r) {
  Json notes = Json::array();
  for (const auto& n : r.notes) notes.push_back(to_json(n));
  Json j = Json::object();
  j["original"] = to_json(r.original);
  j["remediated"] = to_json(r.remediated);
  j["constraint"] = to_json(r.constraint);
  j["notes"] = notes;
  return j;
}

}  // namespace remedy
