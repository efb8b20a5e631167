#include "remedy/trace_io.hpp"

#include <set>

#include "remedy/errors.hpp"
#include "remedy/json_util.hpp"

namespace remedy {

std::vector<PipelineInstance> read_trace(std::istream& in, const std::string& source) {
  std::vector<PipelineInstance> out;
  std::set<std::string> ids;
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw ParseError(where + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    PipelineInstance inst;
    if (!j.contains("id") || !j["id"].is_string()) throw ParseError(where + ": missing string \"id\"");
    inst.id = j["id"].get<std::string>();
    if (!j.contains("status") || !j["status"].is_string()) throw ParseError(where + ": missing \"status\"");
    std::string status = j["status"].get<std::string>();
    if (status != "ok" && status != "fail")
      throw ParseError(where + ": status must be \"ok\" or \"fail\", got \"" + status + "\"");
    inst.success = status == "ok";
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ParseError(where + ": \"params\" must be an object");
      for (const auto& [k, v] : j["params"].items()) {
        auto key = parse_binding_key(k);
        if (!key) throw ParseError(where + ": parameter key '" + k + "' is not Operator.hyperparam");
        inst.bindings[*key] = literal_from_json(v, where + ": params." + k);
      }
    }
    if (j.contains("loss") && !j["loss"].is_null()) {
      if (!j["loss"].is_number()) throw ParseError(where + ": \"loss\" must be a number");
      inst.loss = j["loss"].get<double>();
    }
    if (!ids.insert(inst.id).second) throw ValidationError(where + ": duplicate id '" + inst.id + "'");
    out.push_back(std::move(inst));
  }
  return out;
}

void write_trace(std::ostream& out, const std::vector<PipelineInstance>& instances) {
  for (const auto& inst : instances) {
    Json params = Json::object();
    for (const auto& [k, v] : inst.bindings) params[to_string(k)] = literal_to_json(v);
    Json j = Json::object();
    j["id"] = inst.id;
    j["status"] = inst.success ? "ok" : "fail";
    j["params"] = params;
    if (inst.loss) j["loss"] = *inst.loss;
    out << j.dump() << "\n";
  }
}

}  // namespace remedy
