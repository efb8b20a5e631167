#pragma once

#include <string>
#include <vector>

#include "remedy/constraint.hpp"
#include "remedy/search_space.hpp"

namespace remedy {

struct Explanation {
  std::string text;
  // One entry per OR-separated alternative, each the list of its fragments
  // in sentence case. An empty list reads "No changes needed".
  std::vector<std::vector<std::string>> alternatives;
};

// Context-free rendering: one fragment per atom.
Explanation explain(const Constraint& c);

// Rendering against the pipeline being remediated. Each branch is followed
// through the same rewrites as the remediator, so a restriction that leaves
// one value reads as "setting ... to" that value, checks on pre-bound values
// read as the presence of their operator, and branches the remediator drops
// are left out.
Explanation explain(const Constraint& c, const PlannedPipeline& pipeline, int n_splits = 5);

}  // namespace remedy
