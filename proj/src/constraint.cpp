#include "remedy/constraint.hpp"

#include <algorithm>
#include <sstream>

#include "remedy/errors.hpp"

namespace remedy {

std::string to_string(const BindingKey& key) { return key.op + "." + key.hp; }

std::optional<BindingKey> parse_binding_key(std::string_view text) {
  auto dot = text.find('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) return std::nullopt;
  return BindingKey{std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

bool PipelineInstance::binds_operator(const std::string& op) const {
  auto it = bindings.lower_bound(BindingKey{op, ""});
  return it != bindings.end() && it->first.op == op;
}

std::string_view to_symbol(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return "<=";
    case CmpOp::Lt: return "<";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
  }
  return "?";
}

std::optional<CmpOp> parse_cmp_op(std::string_view text) {
  if (text == "<=") return CmpOp::Le;
  if (text == "<") return CmpOp::Lt;
  if (text == ">=") return CmpOp::Ge;
  if (text == ">") return CmpOp::Gt;
  return std::nullopt;
}

CmpOp negate(CmpOp op) {
  switch (op) {
    case CmpOp::Le: return CmpOp::Gt;
    case CmpOp::Lt: return CmpOp::Ge;
    case CmpOp::Ge: return CmpOp::Lt;
    case CmpOp::Gt: return CmpOp::Le;
  }
  return op;
}

bool compare(double lhs, CmpOp op, double rhs) {
  switch (op) {
    case CmpOp::Le: return lhs <= rhs;
    case CmpOp::Lt: return lhs < rhs;
    case CmpOp::Ge: return lhs >= rhs;
    case CmpOp::Gt: return lhs > rhs;
  }
  return false;
}

bool AndNode::operator==(const AndNode& o) const { return children == o.children; }
bool IteNode::operator==(const IteNode& o) const {
  return cond == o.cond && then_branch == o.then_branch && else_branch == o.else_branch;
}

Constraint Constraint::conjunction(std::vector<Constraint> parts) {
  std::vector<Constraint> flat;
  for (auto& p : parts) {
    if (p.is_true()) continue;
    if (p.is_false()) return Constraint(atom::LitFalse{});
    if (auto* a = p.as_and()) {
      for (const auto& c : a->children) flat.push_back(c);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return Constraint(atom::LitTrue{});
  if (flat.size() == 1) return std::move(flat.front());
  return Constraint(Node{AndNode{std::move(flat)}});
}

Constraint Constraint::ite(AtomicConstraint cond, Constraint then_branch,
                           Constraint else_branch) {
  return Constraint(
      Node{IteNode{std::move(cond), Box<Constraint>(std::move(then_branch)),
                   Box<Constraint>(std::move(else_branch))}});
}

bool Constraint::is_true() const {
  auto* a = as_atom();
  return a && std::holds_alternative<atom::LitTrue>(*a);
}
bool Constraint::is_false() const {
  auto* a = as_atom();
  return a && std::holds_alternative<atom::LitFalse>(*a);
}

namespace {

double numeric_binding(const Literal& v, const std::string& op, const std::string& hp) {
  auto n = as_number(v);
  if (!n)
    throw TypeMismatchError("numeric comparison on non-numeric value " + to_source(v) +
                            " of " + op + "." + hp);
  return *n;
}

}  // namespace

bool eval(const AtomicConstraint& a, const PipelineInstance& inst) {
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, atom::Eq>) {
          auto* v = inst.find(x.op, x.hp);
          return v && literal_equal(*v, x.value);
        } else if constexpr (std::is_same_v<T, atom::Neq>) {
          auto* v = inst.find(x.op, x.hp);
          return v && !literal_equal(*v, x.value);
        } else if constexpr (std::is_same_v<T, atom::Present>) {
          return inst.find(x.op, x.hp) != nullptr;
        } else if constexpr (std::is_same_v<T, atom::Absent>) {
          return inst.find(x.op, x.hp) == nullptr;
        } else if constexpr (std::is_same_v<T, atom::CmpConst>) {
          auto* v = inst.find(x.op, x.hp);
          if (!v) return false;
          auto limit = as_number(x.limit);
          if (!limit) throw TypeMismatchError("non-numeric limit in " + to_string(AtomicConstraint{x}));
          return compare(numeric_binding(*v, x.op, x.hp), x.cmp, *limit);
        } else if constexpr (std::is_same_v<T, atom::CmpParam>) {
          auto* l = inst.find(x.op1, x.hp1);
          auto* r = inst.find(x.op2, x.hp2);
          if (!l || !r) return false;
          return compare(numeric_binding(*l, x.op1, x.hp1), x.cmp,
                         numeric_binding(*r, x.op2, x.hp2));
        } else if constexpr (std::is_same_v<T, atom::LitTrue>) {
          return true;
        } else {
          return false;
        }
      },
      a);
}

bool eval(const Constraint& c, const PipelineInstance& inst) {
  if (auto* a = c.as_atom()) return eval(*a, inst);
  if (auto* conj = c.as_and()) {
    return std::all_of(conj->children.begin(), conj->children.end(),
                       [&](const Constraint& x) { return eval(x, inst); });
  }
  const auto& node = *c.as_ite();
  return eval(node.cond, inst) ? eval(*node.then_branch, inst) : eval(*node.else_branch, inst);
}

AtomicConstraint negate_atom(const AtomicConstraint& a) {
  return std::visit(
      [](const auto& x) -> AtomicConstraint {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, atom::Eq>) return atom::Neq{x.op, x.hp, x.value};
        else if constexpr (std::is_same_v<T, atom::Neq>) return atom::Eq{x.op, x.hp, x.value};
        else if constexpr (std::is_same_v<T, atom::Present>) return atom::Absent{x.op, x.hp};
        else if constexpr (std::is_same_v<T, atom::Absent>) return atom::Present{x.op, x.hp};
        else if constexpr (std::is_same_v<T, atom::CmpConst>)
          return atom::CmpConst{x.op, x.hp, negate(x.cmp), x.limit};
        else if constexpr (std::is_same_v<T, atom::CmpParam>) {
          // not (a <= b) is b < a; not (a < b) is b <= a.
          CmpOp flipped = x.cmp == CmpOp::Le ? CmpOp::Lt : CmpOp::Le;
          return atom::CmpParam{x.op2, x.hp2, flipped, x.op1, x.hp1};
        } else if constexpr (std::is_same_v<T, atom::LitTrue>) return atom::LitFalse{};
        else return atom::LitTrue{};
      },
      a);
}

std::vector<AtomicConstraint> complement(const AtomicConstraint& a) {
  std::vector<AtomicConstraint> out{negate_atom(a)};
  if (std::holds_alternative<atom::Present>(a) || std::holds_alternative<atom::Absent>(a)) return out;
  for (const auto& key : referenced_keys(a))
    if (!key.hp.empty()) out.push_back(atom::Absent{key.op, key.hp});
  return out;
}

int depth(const Constraint& c) {
  if (c.as_atom()) return 0;
  if (auto* conj = c.as_and()) {
    int d = 0;
    for (const auto& x : conj->children) d = std::max(d, depth(x));
    return d;
  }
  const auto& node = *c.as_ite();
  return 1 + std::max(depth(*node.then_branch), depth(*node.else_branch));
}

std::vector<BindingKey> referenced_keys(const AtomicConstraint& a) {
  return std::visit(
      [](const auto& x) -> std::vector<BindingKey> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, atom::CmpParam>)
          return {BindingKey{x.op1, x.hp1}, BindingKey{x.op2, x.hp2}};
        else if constexpr (std::is_same_v<T, atom::LitTrue> || std::is_same_v<T, atom::LitFalse>)
          return {};
        else
          return {BindingKey{x.op, x.hp}};
      },
      a);
}

std::string to_string(const AtomicConstraint& a) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, atom::Eq>)
          return x.op + "." + x.hp + " = " + to_source(x.value);
        else if constexpr (std::is_same_v<T, atom::Neq>)
          return x.op + "." + x.hp + " != " + to_source(x.value);
        else if constexpr (std::is_same_v<T, atom::Present>)
          return "present(" + x.op + "." + x.hp + ")";
        else if constexpr (std::is_same_v<T, atom::Absent>)
          return "absent(" + x.op + "." + x.hp + ")";
        else if constexpr (std::is_same_v<T, atom::CmpConst>)
          return x.op + "." + x.hp + " " + std::string(to_symbol(x.cmp)) + " " +
                 to_source(x.limit);
        else if constexpr (std::is_same_v<T, atom::CmpParam>)
          return x.op1 + "." + x.hp1 + " " + std::string(to_symbol(x.cmp)) + " " + x.op2 + "." +
                 x.hp2;
        else if constexpr (std::is_same_v<T, atom::LitTrue>)
          return "True";
        else
          return "False";
      },
      a);
}

std::string to_string(const Constraint& c) {
  if (auto* a = c.as_atom()) return to_string(*a);
  if (auto* conj = c.as_and()) {
    std::string out;
    for (size_t i = 0; i < conj->children.size(); ++i) {
      if (i) out += " and ";
      bool paren = conj->children[i].as_ite() != nullptr;
      out += paren ? "(" + to_string(conj->children[i]) + ")" : to_string(conj->children[i]);
    }
    return out;
  }
  const auto& node = *c.as_ite();
  return "if " + to_string(node.cond) + " then " + to_string(*node.then_branch) + " else " +
         to_string(*node.else_branch);
}

// ---------------------------------------------------------------------------
// JSON

Json to_json(const AtomicConstraint& a) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, atom::Eq>)
          return Json{{"eq", Json::array({x.op, x.hp, literal_to_json(x.value)})}};
        else if constexpr (std::is_same_v<T, atom::Neq>)
          return Json{{"neq", Json::array({x.op, x.hp, literal_to_json(x.value)})}};
        else if constexpr (std::is_same_v<T, atom::Present>)
          return Json{{"present", Json::array({x.op, x.hp})}};
        else if constexpr (std::is_same_v<T, atom::Absent>)
          return Json{{"absent", Json::array({x.op, x.hp})}};
        else if constexpr (std::is_same_v<T, atom::CmpConst>)
          return Json{{"cmp", Json::array({x.op, x.hp, std::string(to_symbol(x.cmp)),
                                           literal_to_json(x.limit)})}};
        else if constexpr (std::is_same_v<T, atom::CmpParam>)
          return Json{{"cmp2", Json::array({x.op1, x.hp1, std::string(to_symbol(x.cmp)), x.op2,
                                            x.hp2})}};
        else if constexpr (std::is_same_v<T, atom::LitTrue>)
          return Json(true);
        else
          return Json(false);
      },
      a);
}

Json to_json(const Constraint& c) {
  if (auto* a = c.as_atom()) return to_json(*a);
  if (auto* conj = c.as_and()) {
    Json arr = Json::array();
    for (const auto& x : conj->children) arr.push_back(to_json(x));
    return Json{{"and", arr}};
  }
  const auto& node = *c.as_ite();
  Json body = Json::object();
  body["if"] = to_json(node.cond);
  body["then"] = to_json(*node.then_branch);
  body["else"] = to_json(*node.else_branch);
  return Json{{"ite", body}};
}

namespace {

const Json& expect_array(const Json& j, size_t n, const std::string& path) {
  if (!j.is_array() || j.size() != n)
    throw ParseError(path + ": expected array of " + std::to_string(n) + " elements");
  return j;
}

std::string expect_name(const Json& j, const std::string& path) {
  if (!j.is_string() || j.get<std::string>().empty())
    throw ParseError(path + ": expected non-empty string");
  return j.get<std::string>();
}

CmpOp expect_cmp(const Json& j, const std::string& path, bool param_form) {
  if (!j.is_string()) throw ParseError(path + ": expected comparison operator string");
  auto op = parse_cmp_op(j.get<std::string>());
  if (!op) throw ParseError(path + ": unknown comparison operator '" + j.get<std::string>() + "'");
  if (param_form && *op != CmpOp::Le && *op != CmpOp::Lt)
    throw ParseError(path + ": cmp2 supports only <= and <");
  return *op;
}

}  // namespace

AtomicConstraint atom_from_json(const Json& j, const std::string& path) {
  if (j.is_boolean()) {
    if (j.get<bool>()) return atom::LitTrue{};
    return atom::LitFalse{};
  }
  if (!j.is_object() || j.size() != 1) throw ParseError(path + ": expected atomic constraint");
  const std::string key = j.begin().key();
  const Json& body = j.begin().value();
  const std::string p = path + "." + key;
  if (key == "eq" || key == "neq") {
    expect_array(body, 3, p);
    auto op = expect_name(body[0], p + "[0]");
    auto hp = expect_name(body[1], p + "[1]");
    auto v = literal_from_json(body[2], p + "[2]");
    if (key == "eq") return atom::Eq{op, hp, v};
    return atom::Neq{op, hp, v};
  }
  if (key == "present" || key == "absent") {
    expect_array(body, 2, p);
    auto op = expect_name(body[0], p + "[0]");
    auto hp = expect_name(body[1], p + "[1]");
    if (key == "present") return atom::Present{op, hp};
    return atom::Absent{op, hp};
  }
  if (key == "cmp") {
    expect_array(body, 4, p);
    auto limit = literal_from_json(body[3], p + "[3]");
    if (!is_numeric(limit)) throw ParseError(p + "[3]: comparison limit must be numeric");
    return atom::CmpConst{expect_name(body[0], p + "[0]"), expect_name(body[1], p + "[1]"),
                          expect_cmp(body[2], p + "[2]", false), limit};
  }
  if (key == "cmp2") {
    expect_array(body, 5, p);
    return atom::CmpParam{expect_name(body[0], p + "[0]"), expect_name(body[1], p + "[1]"),
                          expect_cmp(body[2], p + "[2]", true), expect_name(body[3], p + "[3]"),
                          expect_name(body[4], p + "[4]")};
  }
  throw ParseError(path + ": '" + key + "' is not an atomic constraint");
}

Constraint constraint_from_json(const Json& j, const std::string& path) {
  if (j.is_object() && j.size() == 1) {
    const std::string key = j.begin().key();
  const Json& body = j.begin().value();
    if (key == "and") {
      if (!body.is_array() || body.size() < 2)
        throw ParseError(path + ".and: expected array of at least two constraints");
      std::vector<Constraint> parts;
      for (size_t i = 0; i < body.size(); ++i)
        parts.push_back(constraint_from_json(body[i], path + ".and[" + std::to_string(i) + "]"));
      return Constraint::conjunction(std::move(parts));
    }
    if (key == "ite") {
      const std::string p = path + ".ite";
      if (!body.is_object() || !body.contains("if") || !body.contains("then") ||
          !body.contains("else") || body.size() != 3)
        throw ParseError(p + ": expected object with if/then/else");
      const Json& cond = body["if"];
      if (cond.is_object() && cond.size() == 1) {
        const std::string k = cond.begin().key();
        if (k == "and" || k == "ite") throw ParseError(p + ".if: condition must be atomic");
      }
      return Constraint::ite(atom_from_json(cond, p + ".if"),
                             constraint_from_json(body["then"], p + ".then"),
                             constraint_from_json(body["else"], p + ".else"));
    }
  }
  return Constraint(atom_from_json(j, path));
}

}  // namespace remedy
