#pragma once

#include <optional>
#include <vector>

#include "remedy/constraint.hpp"
#include "remedy/instance.hpp"
#include "remedy/search_space.hpp"

namespace remedy {

struct EvaluationTrace {
  PlannedPipeline pipeline;
  std::vector<PipelineInstance> instances;
};

struct LocalizerConfig {
  int max_depth = 2;
  int n_splits_hint = 5;
};

// Throws ValidationError on an empty trace, duplicate ids, or an instance the
// pipeline does not contain.
void validate_trace(const EvaluationTrace& trace);

// Every atom the solver may use on this trace, in search order.
std::vector<AtomicConstraint> candidate_atoms(const std::vector<PipelineInstance>& instances);

// First candidate atom that separates successes from failures exactly.
// All-success traces give LitTrue, all-failure traces LitFalse.
std::optional<AtomicConstraint> solve_atomic(const EvaluationTrace& trace);

// Shallowest constraint (atoms, then if-then-else trees up to cfg.max_depth)
// that agrees with every result in the trace. Throws AllFailedError when
// nothing succeeded and NoExplanationError when the search comes up empty.
Constraint solve(const EvaluationTrace& trace, const LocalizerConfig& cfg = {});

}  // namespace remedy
