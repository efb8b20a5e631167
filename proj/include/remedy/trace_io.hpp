#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "remedy/instance.hpp"

namespace remedy {

// JSONL, one instance per line:
//   {"id":"p0","status":"ok"|"fail","params":{"Op.hp":value,...},"loss":0.12}
// Blank lines are skipped. Throws ParseError naming the line, and
// ValidationError on duplicate ids.
std::vector<PipelineInstance> read_trace(std::istream& in, const std::string& source = "trace");
void write_trace(std::ostream& out, const std::vector<PipelineInstance>& instances);

}  // namespace remedy
