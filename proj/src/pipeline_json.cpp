#include "remedy/pipeline_json.hpp"

#include <cmath>

#include "remedy/errors.hpp"

namespace remedy {

Json literal_to_json(const Literal& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

Literal literal_from_json(const Json& j, const std::string& path) {
  if (j.is_boolean()) return j.get<bool>();
  if (j.is_number_integer()) {
    if (j.is_number_unsigned() && j.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
      throw ParseError(path + ": integer out of range");
    return j.get<std::int64_t>();
  }
  if (j.is_number_float()) return j.get<double>();
  if (j.is_string()) return j.get<std::string>();
  throw ParseError(path + ": expected a scalar (bool, number or string)");
}

Json to_json(const HyperparamDomain& dom) {
  return std::visit(
      [](const auto& d) -> Json {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          Json arr = Json::array();
          for (const auto& v : d.values) arr.push_back(literal_to_json(v));
          return Json{{"cat", arr}};
        } else if constexpr (std::is_same_v<T, IntRange>) {
          return Json{{"int", Json::array({d.lo, d.hi})}};
        } else if constexpr (std::is_same_v<T, FloatRange>) {
          Json j = Json::object();
          j["float"] = Json::array({d.lo, d.hi});
          if (d.open_lo) j["openLo"] = true;
          j["openHi"] = d.open_hi;
          return j;
        } else if constexpr (std::is_same_v<T, Constant>) {
          return Json{{"const", literal_to_json(d.value)}};
        } else {
          return Json{{"any", true}};
        }
      },
      dom.value());
}

namespace {

double real_from_json(const Json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

std::int64_t int_from_json(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path + ": expected an integer");
  return j.get<std::int64_t>();
}

bool flag(const Json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) return false;
  if (!j[key].is_boolean()) throw ParseError(path + "." + key + ": expected a boolean");
  return j[key].get<bool>();
}

}  // namespace

HyperparamDomain domain_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected a domain object");
  if (j.contains("cat")) {
    const Json& arr = j["cat"];
    if (!arr.is_array() || arr.empty()) throw ParseError(path + ".cat: expected non-empty array");
    std::vector<Literal> values;
    for (size_t i = 0; i < arr.size(); ++i)
      values.push_back(literal_from_json(arr[i], path + ".cat[" + std::to_string(i) + "]"));
    return HyperparamDomain::categorical(std::move(values));
  }
  if (j.contains("int")) {
    const Json& arr = j["int"];
    if (!arr.is_array() || arr.size() != 2) throw ParseError(path + ".int: expected [lo, hi]");
    return HyperparamDomain::int_range(int_from_json(arr[0], path + ".int[0]"),
                                       int_from_json(arr[1], path + ".int[1]"));
  }
  if (j.contains("float")) {
    const Json& arr = j["float"];
    if (!arr.is_array() || arr.size() != 2) throw ParseError(path + ".float: expected [lo, hi]");
    return HyperparamDomain::float_range(real_from_json(arr[0], path + ".float[0]"),
                                         real_from_json(arr[1], path + ".float[1]"),
                                         flag(j, "openLo", path), flag(j, "openHi", path));
  }
  if (j.contains("const")) return HyperparamDomain::constant(literal_from_json(j["const"], path + ".const"));
  if (j.contains("any")) return HyperparamDomain::anything();
  throw ParseError(path + ": unknown domain form");
}

namespace {

Json step_to_json(const Step& s) {
  if (auto* op = s.as_operator()) {
    Json hps = Json::object();
    for (const auto& [k, d] : op->hyperparams) hps[k] = to_json(d);
    Json fixed = Json::object();
    for (const auto& [k, v] : op->fixed) fixed[k] = literal_to_json(v);
    Json body = Json::object();
    body["name"] = op->name;
    body["hyperparams"] = hps;
    body["fixed"] = fixed;
    return Json{{"op", body}};
  }
  Json arr = Json::array();
  const auto& children = s.as_choice() ? s.as_choice()->alternatives : s.as_seq()->steps;
  for (const auto& c : children) arr.push_back(step_to_json(c));
  return Json{{s.as_choice() ? "choice" : "seq", arr}};
}

Step step_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || j.size() != 1) throw ParseError(path + ": expected a single-key step object");
  const std::string key = j.begin().key();
  const Json& body = j.begin().value();
  const std::string p = path + "." + key;
  if (key == "op") {
    if (!body.is_object() || !body.contains("name") || !body["name"].is_string())
      throw ParseError(p + ": operator needs a string name");
    OperatorSpec op;
    op.name = body["name"].get<std::string>();
    if (op.name.empty()) throw ParseError(p + ".name: empty operator name");
    if (body.contains("hyperparams")) {
      if (!body["hyperparams"].is_object()) throw ParseError(p + ".hyperparams: expected object");
      for (const auto& [hp, d] : body["hyperparams"].items())
        op.hyperparams.emplace_back(hp, domain_from_json(d, p + ".hyperparams." + hp));
    }
    if (body.contains("fixed")) {
      if (!body["fixed"].is_object()) throw ParseError(p + ".fixed: expected object");
      for (const auto& [hp, v] : body["fixed"].items())
        op.fixed.emplace_back(hp, literal_from_json(v, p + ".fixed." + hp));
    }
    return Step(std::move(op));
  }
  if (key == "choice" || key == "seq") {
    if (!body.is_array()) throw ParseError(p + ": expected array");
    std::vector<Step> children;
    for (size_t i = 0; i < body.size(); ++i)
      children.push_back(step_from_json(body[i], p + "[" + std::to_string(i) + "]"));
    if (key == "choice") return Step(ChoiceNode{std::move(children)});
    return Step(SeqNode{std::move(children)});
  }
  throw ParseError(path + ": unknown step kind '" + key + "'");
}

}  // namespace

Json to_json(const PlannedPipeline& p) {
  Json arr = Json::array();
  for (const auto& s : p.steps) arr.push_back(step_to_json(s));
  return Json{{"steps", arr}};
}

PlannedPipeline pipeline_from_json(const Json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("steps") || !j["steps"].is_array())
    throw ParseError(path + ": expected {\"steps\": [...]}");
  PlannedPipeline p;
  for (size_t i = 0; i < j["steps"].size(); ++i)
    p.steps.push_back(step_from_json(j["steps"][i], path + ".steps[" + std::to_string(i) + "]"));
  validate(p);
  return normalize(std::move(p));
}

}  // namespace remedy
