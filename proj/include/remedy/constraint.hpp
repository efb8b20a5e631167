#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "remedy/box.hpp"
#include "remedy/instance.hpp"
#include "remedy/json_util.hpp"
#include "remedy/literal.hpp"

namespace remedy {

enum class CmpOp { Le, Lt, Ge, Gt };

std::string_view to_symbol(CmpOp op);
std::optional<CmpOp> parse_cmp_op(std::string_view text);
CmpOp negate(CmpOp op);
bool compare(double lhs, CmpOp op, double rhs);

namespace atom {

struct Eq {
  std::string op, hp;
  Literal value;
  bool operator==(const Eq&) const = default;
};
struct Neq {
  std::string op, hp;
  Literal value;
  bool operator==(const Neq&) const = default;
};
struct Present {
  std::string op, hp;
  bool operator==(const Present&) const = default;
};
struct Absent {
  std::string op, hp;
  bool operator==(const Absent&) const = default;
};
struct CmpConst {
  std::string op, hp;
  CmpOp cmp;
  Literal limit;
  bool operator==(const CmpConst&) const = default;
};
// lhs cmp rhs, with cmp restricted to Le or Lt.
struct CmpParam {
  std::string op1, hp1;
  CmpOp cmp;
  std::string op2, hp2;
  bool operator==(const CmpParam&) const = default;
};
struct LitTrue {
  bool operator==(const LitTrue&) const = default;
};
struct LitFalse {
  bool operator==(const LitFalse&) const = default;
};

}  // namespace atom

using AtomicConstraint = std::variant<atom::Eq, atom::Neq, atom::Absent, atom::Present,
                                      atom::CmpConst, atom::CmpParam, atom::LitTrue,
                                      atom::LitFalse>;

class Constraint;

struct AndNode {
  std::vector<Constraint> children;
  bool operator==(const AndNode&) const;
};

struct IteNode {
  AtomicConstraint cond;
  Box<Constraint> then_branch;
  Box<Constraint> else_branch;
  bool operator==(const IteNode&) const;
};

// Atom | And | Ite. Build through the factories so that And stays flat and
// free of LitTrue children.
class Constraint {
 public:
  using Node = std::variant<AtomicConstraint, AndNode, IteNode>;

  Constraint(AtomicConstraint a) : node_(std::move(a)) {}  // NOLINT
  Constraint(atom::Eq a) : node_(AtomicConstraint{std::move(a)}) {}  // NOLINT
  Constraint(atom::Neq a) : node_(AtomicConstraint{std::move(a)}) {}  // NOLINT
  Constraint(atom::Present a) : node_(AtomicConstraint{std::move(a)}) {}  // NOLINT
  Constraint(atom::Absent a) : node_(AtomicConstraint{std::move(a)}) {}  // NOLINT
  Constraint(atom::CmpConst a) : node_(AtomicConstraint{std::move(a)}) {}  // NOLINT
  Constraint(atom::CmpParam a) : node_(AtomicConstraint{std::move(a)}) {}  // NOLINT
  Constraint(atom::LitTrue a) : node_(AtomicConstraint{a}) {}  // NOLINT
  Constraint(atom::LitFalse a) : node_(AtomicConstraint{a}) {}  // NOLINT

  static Constraint conjunction(std::vector<Constraint> parts);
  static Constraint ite(AtomicConstraint cond, Constraint then_branch, Constraint else_branch);

  const Node& node() const { return node_; }
  const AtomicConstraint* as_atom() const { return std::get_if<AtomicConstraint>(&node_); }
  const AndNode* as_and() const { return std::get_if<AndNode>(&node_); }
  const IteNode* as_ite() const { return std::get_if<IteNode>(&node_); }

  bool is_true() const;
  bool is_false() const;

  bool operator==(const Constraint& other) const { return node_ == other.node_; }

 private:
  explicit Constraint(Node n) : node_(std::move(n)) {}
  Node node_;
};

bool eval(const AtomicConstraint& a, const PipelineInstance& inst);
bool eval(const Constraint& c, const PipelineInstance& inst);

AtomicConstraint negate_atom(const AtomicConstraint& a);
// Atoms whose disjunction is exactly the logical complement of `a`. Value
// atoms are false on a missing binding, so besides negate_atom(a) this lists
// Absent for each key `a` reads.
std::vector<AtomicConstraint> complement(const AtomicConstraint& a);

// Ite nesting depth: atoms and conjunctions of atoms are depth 0.
int depth(const Constraint& c);

// Operators and (operator, hyperparameter) pairs an atom mentions.
std::vector<BindingKey> referenced_keys(const AtomicConstraint& a);

// Readable formula for logs and error messages, e.g. PCA.n_components <= SelectKBest.k.
std::string to_string(const AtomicConstraint& a);
std::string to_string(const Constraint& c);

Json to_json(const AtomicConstraint& a);
Json to_json(const Constraint& c);
// Throws ParseError naming the JSON path of the offending element.
Constraint constraint_from_json(const Json& j, const std::string& path = "$");
AtomicConstraint atom_from_json(const Json& j, const std::string& path = "$");

}  // namespace remedy
