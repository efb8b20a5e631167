#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "remedy/constraint.hpp"
#include "remedy/instance.hpp"
#include "remedy/literal.hpp"

namespace remedy {

// Hyperparameter schemas ----------------------------------------------------

struct Categorical {
  std::vector<Literal> values;
  bool operator==(const Categorical&) const = default;
};

struct IntRange {
  std::int64_t lo = 0, hi = 0;
  bool operator==(const IntRange&) const = default;
  // Number of members; saturates on overflow.
  std::uint64_t size() const;
};

struct FloatRange {
  double lo = 0, hi = 0;
  bool open_lo = false, open_hi = false;
  bool operator==(const FloatRange&) const = default;
};

struct Constant {
  Literal value;
  bool operator==(const Constant&) const = default;
};

struct Anything {
  bool operator==(const Anything&) const = default;
};

// A canonical value domain. The factories canonicalize: one-element
// categoricals and zero-width ranges become Constant.
class HyperparamDomain {
 public:
  using Variant = std::variant<Categorical, IntRange, FloatRange, Constant, Anything>;

  static HyperparamDomain categorical(std::vector<Literal> values);
  static HyperparamDomain int_range(std::int64_t lo, std::int64_t hi);
  static HyperparamDomain float_range(double lo, double hi, bool open_lo = false,
                                      bool open_hi = false);
  static HyperparamDomain constant(Literal value);
  static HyperparamDomain anything();

  const Variant& value() const { return v_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

  bool contains(const Literal& v) const;
  bool is_anything() const { return std::holds_alternative<Anything>(v_); }
  bool is_range() const {
    return std::holds_alternative<IntRange>(v_) || std::holds_alternative<FloatRange>(v_);
  }
  // [min, max] of the numeric members; nullopt if the domain has none or is
  // unbounded.
  std::optional<std::pair<double, double>> numeric_hull() const;

  bool operator==(const HyperparamDomain&) const = default;

 private:
  explicit HyperparamDomain(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

std::string to_string(const HyperparamDomain& d);

// Pipelines -----------------------------------------------------------------

struct OperatorSpec {
  // Identity within a pipeline: the class name, suffixed "#n" when the same
  // class occurs more than once along one dataflow path.
  std::string name;
  std::vector<std::pair<std::string, HyperparamDomain>> hyperparams;
  std::vector<std::pair<std::string, Literal>> fixed;

  bool operator==(const OperatorSpec&) const = default;

  // Class name without the "#n" suffix.
  std::string class_name() const;
  const HyperparamDomain* find_hyperparam(const std::string& hp) const;
  HyperparamDomain* find_hyperparam(const std::string& hp);
  const Literal* find_fixed(const std::string& hp) const;
  // True if an instance choosing this operator must carry at least one binding.
  bool leaves_trace() const;
};

struct Step;

struct ChoiceNode {
  std::vector<Step> alternatives;
  bool operator==(const ChoiceNode&) const;
};

// A nested chain, used as a choice alternative (a >> b) | (c >> d).
struct SeqNode {
  std::vector<Step> steps;
  bool operator==(const SeqNode&) const;
};

struct Step {
  std::variant<OperatorSpec, ChoiceNode, SeqNode> node;

  Step(OperatorSpec op) : node(std::move(op)) {}  // NOLINT
  Step(ChoiceNode c) : node(std::move(c)) {}      // NOLINT
  Step(SeqNode s) : node(std::move(s)) {}         // NOLINT

  const OperatorSpec* as_operator() const { return std::get_if<OperatorSpec>(&node); }
  const ChoiceNode* as_choice() const { return std::get_if<ChoiceNode>(&node); }
  const SeqNode* as_seq() const { return std::get_if<SeqNode>(&node); }
  OperatorSpec* as_operator() { return std::get_if<OperatorSpec>(&node); }
  ChoiceNode* as_choice() { return std::get_if<ChoiceNode>(&node); }
  SeqNode* as_seq() { return std::get_if<SeqNode>(&node); }

  bool operator==(const Step& o) const { return node == o.node; }
};

struct PlannedPipeline {
  std::vector<Step> steps;
  bool operator==(const PlannedPipeline&) const = default;
};

// Structural helpers --------------------------------------------------------

bool step_mentions(const Step& step, const std::string& op_name);

// Pre-order visit of every operator occurrence.
void for_each_operator(const PlannedPipeline& p, const std::function<void(const OperatorSpec&)>& f);
void for_each_operator(PlannedPipeline& p, const std::function<void(OperatorSpec&)>& f);

// Names of operators on every path (outside any choice).
bool is_mandatory(const PlannedPipeline& p, const std::string& op_name);
bool occurs(const PlannedPipeline& p, const std::string& op_name);

// Domain of the first occurrence of (operator, hyperparameter); fixed values
// come back as a Constant domain.
std::optional<HyperparamDomain> lookup_domain(const PlannedPipeline& p, const BindingKey& key);

// Flattens nested chains, collapses single-alternative choices, drops
// duplicate alternatives and recomputes "#n" operator names. Loaders and the
// remediator keep every pipeline in this form.
PlannedPipeline normalize(PlannedPipeline p);
// normalize() without the renaming pass; operator identities are kept.
PlannedPipeline normalize_structure(PlannedPipeline p);

// Throws ValidationError if lo > hi somewhere, fixed keys overlap
// hyperparameters, the pipeline is empty, or a choice has < 2 alternatives.
void validate(const PlannedPipeline& p);

// Operations ----------------------------------------------------------------

// True iff some resolution of the pipeline's choices explains the instance
// exactly: each chosen operator has every fixed and non-Anything
// hyperparameter bound to a member of its domain, and nothing else is bound.
bool contains(const PlannedPipeline& p, const PipelineInstance& inst);

// {v in d : a(v)}. `a` must be Eq, Neq or CmpConst. Throws EmptyDomainError
// when nothing remains.
HyperparamDomain restrict_domain(const HyperparamDomain& d, const AtomicConstraint& a);

// Deletes every choice alternative that mentions the operator. Throws
// NotInChoiceError if it is a mandatory step and WouldEmptyChoiceError if it
// is the last remaining alternative of its choice.
PlannedPipeline remove_choice_alternative(const PlannedPipeline& p, const std::string& op_name);

// n contiguous disjoint pieces covering d; integer remainders go to the
// earliest pieces. Integer ranges with fewer than n members split into
// singletons. Throws NotNumericError for non-range domains.
std::vector<HyperparamDomain> split_range(const HyperparamDomain& d, int n);

}  // namespace remedy
