#pragma once

#include <string>

#include <json.hpp>

#include "remedy/literal.hpp"

namespace remedy {

// Insertion-ordered so hyperparameter declaration order survives a round trip.
using Json = nlohmann::ordered_json;

Json literal_to_json(const Literal& v);
// Accepts JSON booleans, integers, reals and strings; throws ParseError otherwise.
Literal literal_from_json(const Json& j, const std::string& path);

}  // namespace remedy
