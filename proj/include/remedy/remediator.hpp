#pragma once

#include <string>
#include <vector>

#include "remedy/constraint.hpp"
#include "remedy/json_util.hpp"
#include "remedy/search_space.hpp"

namespace remedy {

// One rewrite step: which rule fired, on what, and what it did.
struct RemediationNote {
  std::string rule;  // makeChoice, restrictChoice, customizeSchemas, makeComparison, dropBranch, noop
  std::string target;
  std::string detail;
  bool operator==(const RemediationNote&) const = default;
};

struct Remediation {
  PlannedPipeline original;
  PlannedPipeline remediated;
  Constraint constraint;
  std::vector<RemediationNote> notes;
};

Remediation remediate(const PlannedPipeline& original, const Constraint& c, int n_splits = 5);

// The atomic case on its own. Throws the same errors as remediate.
PlannedPipeline apply_atom(const PlannedPipeline& p, const AtomicConstraint& a, int n_splits = 5,
                           std::vector<RemediationNote>* notes = nullptr);

PlannedPipeline make_comparison(const PlannedPipeline& p, const atom::CmpParam& a, int n_splits,
                                std::vector<RemediationNote>* notes = nullptr);

Json to_json(const RemediationNote& n);
Json to_json(const Remediation& r);

}  // namespace remedy
