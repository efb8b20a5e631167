#pragma once

#include <string>

#include "remedy/json_util.hpp"
#include "remedy/search_space.hpp"

namespace remedy {

Json to_json(const HyperparamDomain& d);
HyperparamDomain domain_from_json(const Json& j, const std::string& path = "$");

Json to_json(const PlannedPipeline& p);
// Parses, validates and normalizes. Throws ParseError / ValidationError.
PlannedPipeline pipeline_from_json(const Json& j, const std::string& path = "$");

}  // namespace remedy
