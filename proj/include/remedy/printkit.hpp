#pragma once

#include <map>
#include <string>

#include "remedy/instance.hpp"
#include "remedy/search_space.hpp"

namespace remedy {

struct PipelineSource {
  std::string text;  // ends with exactly one '\n'
  // Operator name -> variable holding its first occurrence.
  std::map<std::string, std::string> binding_names;
};

// lower_snake_case of a CamelCase class name: SelectKBest -> select_k_best.
std::string snake_case(const std::string& class_name);

PipelineSource pretty_print(const PlannedPipeline& p);

// Throws ParseError("line L, column C: ...").
PlannedPipeline parse_dsl(const std::string& src);

// A fully bound instance in the same surface syntax, keyword arguments in
// alphabetical order.
std::string print_instance(const PlannedPipeline& p, const PipelineInstance& inst);

// Unified diff (3 lines of context) of the two pretty-printed pipelines in a
// markdown ```diff fence. Identical pipelines give an empty fence.
std::string pipeline_diff(const PlannedPipeline& a, const PlannedPipeline& b);
std::string text_diff(const std::string& a, const std::string& b, const std::string& a_label = "original",
                      const std::string& b_label = "remediated");

}  // namespace remedy
