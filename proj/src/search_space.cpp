#include "remedy/search_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "remedy/errors.hpp"

namespace remedy {

// Domains -------------------------------------------------------------------

std::uint64_t IntRange::size() const {
  auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
  return span == std::numeric_limits<std::uint64_t>::max() ? span : span + 1;
}

HyperparamDomain HyperparamDomain::categorical(std::vector<Literal> values) {
  std::vector<Literal> unique;
  for (auto& v : values) {
    bool seen = std::any_of(unique.begin(), unique.end(),
                            [&](const Literal& u) { return literal_equal(u, v); });
    if (!seen) unique.push_back(std::move(v));
  }
  if (unique.empty()) throw ValidationError("categorical domain must not be empty");
  if (unique.size() == 1) return constant(std::move(unique.front()));
  return HyperparamDomain(Categorical{std::move(unique)});
}

HyperparamDomain HyperparamDomain::int_range(std::int64_t lo, std::int64_t hi) {
  if (lo > hi)
    throw ValidationError("int range with lo > hi: " + std::to_string(lo) + ".." +
                          std::to_string(hi));
  if (lo == hi) return constant(lo);
  return HyperparamDomain(IntRange{lo, hi});
}

HyperparamDomain HyperparamDomain::float_range(double lo, double hi, bool open_lo,
                                               bool open_hi) {
  if (std::isnan(lo) || std::isnan(hi)) throw ValidationError("float range bound is NaN");
  if (lo > hi || (lo == hi && (open_lo || open_hi)))
    throw ValidationError("empty float range " + format_double(lo) + ".." + format_double(hi));
  if (lo == hi) return constant(lo);
  return HyperparamDomain(FloatRange{lo, hi, open_lo, open_hi});
}

HyperparamDomain HyperparamDomain::constant(Literal value) {
  return HyperparamDomain(Constant{std::move(value)});
}

HyperparamDomain HyperparamDomain::anything() { return HyperparamDomain(Anything{}); }

namespace {

bool in_float_range(const FloatRange& r, double x) {
  bool lo_ok = r.open_lo ? x > r.lo : x >= r.lo;
  bool hi_ok = r.open_hi ? x < r.hi : x <= r.hi;
  return lo_ok && hi_ok;
}

std::optional<std::int64_t> as_integer(const Literal& v) {
  if (auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (auto* d = std::get_if<double>(&v)) {
    if (std::isfinite(*d) && std::floor(*d) == *d && std::fabs(*d) < 9.2e18)
      return static_cast<std::int64_t>(*d);
  }
  return std::nullopt;
}

}  // namespace

bool HyperparamDomain::contains(const Literal& v) const {
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          return std::any_of(d.values.begin(), d.values.end(),
                             [&](const Literal& x) { return literal_equal(x, v); });
        } else if constexpr (std::is_same_v<T, IntRange>) {
          auto i = as_integer(v);
          return i && *i >= d.lo && *i <= d.hi;
        } else if constexpr (std::is_same_v<T, FloatRange>) {
          auto x = as_number(v);
          return x && in_float_range(d, *x);
        } else if constexpr (std::is_same_v<T, Constant>) {
          return literal_equal(d.value, v);
        } else {
          return true;
        }
      },
      v_);
}

std::optional<std::pair<double, double>> HyperparamDomain::numeric_hull() const {
  return std::visit(
      [](const auto& d) -> std::optional<std::pair<double, double>> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          std::optional<std::pair<double, double>> hull;
          for (const auto& v : d.values) {
            auto x = as_number(v);
            if (!x) continue;
            if (!hull) hull = std::pair{*x, *x};
            hull->first = std::min(hull->first, *x);
            hull->second = std::max(hull->second, *x);
          }
          return hull;
        } else if constexpr (std::is_same_v<T, IntRange>) {
          return std::pair{static_cast<double>(d.lo), static_cast<double>(d.hi)};
        } else if constexpr (std::is_same_v<T, FloatRange>) {
          return std::pair{d.lo, d.hi};
        } else if constexpr (std::is_same_v<T, Constant>) {
          auto x = as_number(d.value);
          if (!x) return std::nullopt;
          return std::pair{*x, *x};
        } else {
          return std::nullopt;
        }
      },
      v_);
}

std::string to_string(const HyperparamDomain& dom) {
  return std::visit(
      [](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          std::string out = "cat(";
          for (size_t i = 0; i < d.values.size(); ++i) {
            if (i) out += ", ";
            out += to_source(d.values[i]);
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, IntRange>) {
          return "int(" + std::to_string(d.lo) + ", " + std::to_string(d.hi) + ")";
        } else if constexpr (std::is_same_v<T, FloatRange>) {
          std::string out = "float(" + format_double(d.lo) + ", " + format_double(d.hi);
          if (d.open_lo && d.open_hi) out += ", \"both\"";
          else if (d.open_lo) out += ", \"lo\"";
          else if (d.open_hi) out += ", \"hi\"";
          return out + ")";
        } else if constexpr (std::is_same_v<T, Constant>) {
          return "const(" + to_source(d.value) + ")";
        } else {
          return "any()";
        }
      },
      dom.value());
}

// Operators and steps ---------------------------------------------------------

std::string OperatorSpec::class_name() const { return name.substr(0, name.find('#')); }

const HyperparamDomain* OperatorSpec::find_hyperparam(const std::string& hp) const {
  for (const auto& [k, d] : hyperparams)
    if (k == hp) return &d;
  return nullptr;
}

HyperparamDomain* OperatorSpec::find_hyperparam(const std::string& hp) {
  for (auto& [k, d] : hyperparams)
    if (k == hp) return &d;
  return nullptr;
}

const Literal* OperatorSpec::find_fixed(const std::string& hp) const {
  for (const auto& [k, v] : fixed)
    if (k == hp) return &v;
  return nullptr;
}

bool OperatorSpec::leaves_trace() const {
  if (!fixed.empty()) return true;
  return std::any_of(hyperparams.begin(), hyperparams.end(),
                     [](const auto& kv) { return !kv.second.is_anything(); });
}

bool ChoiceNode::operator==(const ChoiceNode& o) const { return alternatives == o.alternatives; }
bool SeqNode::operator==(const SeqNode& o) const { return steps == o.steps; }

bool step_mentions(const Step& step, const std::string& op_name) {
  if (auto* op = step.as_operator()) return op->name == op_name;
  const auto& children = step.as_choice() ? step.as_choice()->alternatives : step.as_seq()->steps;
  return std::any_of(children.begin(), children.end(),
                     [&](const Step& s) { return step_mentions(s, op_name); });
}

namespace {

template <class StepT, class F>
void visit_ops(StepT& step, F& f) {
  if (auto* op = step.as_operator()) {
    f(*op);
    return;
  }
  auto& children = step.as_choice() ? step.as_choice()->alternatives : step.as_seq()->steps;
  for (auto& c : children) visit_ops(c, f);
}

bool on_every_path(const Step& step, const std::string& name) {
  if (auto* op = step.as_operator()) return op->name == name;
  if (auto* seq = step.as_seq())
    return std::any_of(seq->steps.begin(), seq->steps.end(),
                       [&](const Step& s) { return on_every_path(s, name); });
  const auto& alts = step.as_choice()->alternatives;
  return !alts.empty() && std::all_of(alts.begin(), alts.end(), [&](const Step& s) {
    return on_every_path(s, name);
  });
}

}  // namespace

void for_each_operator(const PlannedPipeline& p,
                       const std::function<void(const OperatorSpec&)>& f) {
  for (const auto& s : p.steps) visit_ops(s, f);
}

void for_each_operator(PlannedPipeline& p, const std::function<void(OperatorSpec&)>& f) {
  for (auto& s : p.steps) visit_ops(s, f);
}

bool is_mandatory(const PlannedPipeline& p, const std::string& op_name) {
  return std::any_of(p.steps.begin(), p.steps.end(),
                     [&](const Step& s) { return on_every_path(s, op_name); });
}

bool occurs(const PlannedPipeline& p, const std::string& op_name) {
  return std::any_of(p.steps.begin(), p.steps.end(),
                     [&](const Step& s) { return step_mentions(s, op_name); });
}

std::optional<HyperparamDomain> lookup_domain(const PlannedPipeline& p, const BindingKey& key) {
  std::optional<HyperparamDomain> found;
  for_each_operator(p, [&](const OperatorSpec& op) {
    if (found || op.name != key.op) return;
    if (auto* d = op.find_hyperparam(key.hp)) found = *d;
    else if (auto* v = op.find_fixed(key.hp)) found = HyperparamDomain::constant(*v);
  });
  return found;
}

// Normalization -------------------------------------------------------------

namespace {

void append_flat(std::vector<Step>& out, Step step);

std::vector<Step> flatten_steps(std::vector<Step> steps) {
  std::vector<Step> out;
  for (auto& s : steps) append_flat(out, std::move(s));
  return out;
}

// Returns the normalized form of a choice alternative or chain element.
Step normalize_step(Step step) {
  if (step.as_operator()) return step;
  if (auto* seq = step.as_seq()) {
    auto flat = flatten_steps(std::move(seq->steps));
    if (flat.size() == 1) return std::move(flat.front());
    return Step(SeqNode{std::move(flat)});
  }
  std::vector<Step> alts;
  for (auto& a : step.as_choice()->alternatives) {
    Step n = normalize_step(std::move(a));
    auto add = [&](Step s) {
      if (std::find(alts.begin(), alts.end(), s) == alts.end()) alts.push_back(std::move(s));
    };
    if (auto* inner = n.as_choice()) {
      for (auto& x : inner->alternatives) add(std::move(x));
    } else {
      add(std::move(n));
    }
  }
  if (alts.size() == 1) return std::move(alts.front());
  return Step(ChoiceNode{std::move(alts)});
}

void append_flat(std::vector<Step>& out, Step step) {
  Step n = normalize_step(std::move(step));
  if (auto* seq = n.as_seq()) {
    for (auto& s : seq->steps) out.push_back(std::move(s));
  } else {
    out.push_back(std::move(n));
  }
}

using NameCounts = std::map<std::string, int>;

void rename(Step& step, NameCounts& counts) {
  if (auto* op = step.as_operator()) {
    std::string base = op->class_name();
    int n = ++counts[base];
    op->name = n == 1 ? base : base + "#" + std::to_string(n);
    return;
  }
  if (auto* seq = step.as_seq()) {
    for (auto& s : seq->steps) rename(s, counts);
    return;
  }
  NameCounts merged = counts;
  for (auto& alt : step.as_choice()->alternatives) {
    NameCounts local = counts;
    rename(alt, local);
    for (const auto& [k, v] : local) merged[k] = std::max(merged[k], v);
  }
  counts = std::move(merged);
}

}  // namespace

PlannedPipeline normalize(PlannedPipeline p) {
  PlannedPipeline out{flatten_steps(std::move(p.steps))};
  NameCounts counts;
  for (auto& s : out.steps) rename(s, counts);
  return PlannedPipeline{flatten_steps(std::move(out.steps))};
}

PlannedPipeline normalize_structure(PlannedPipeline p) {
  return PlannedPipeline{flatten_steps(std::move(p.steps))};
}

void validate(const PlannedPipeline& p) {
  if (p.steps.empty()) throw ValidationError("pipeline has no steps");
  std::function<void(const Step&)> check = [&](const Step& s) {
    if (auto* op = s.as_operator()) {
      if (op->name.empty()) throw ValidationError("operator with empty name");
      std::set<std::string> keys;
      for (const auto& [k, d] : op->hyperparams)
        if (!keys.insert(k).second)
          throw ValidationError("duplicate hyperparameter " + op->name + "." + k);
      for (const auto& [k, v] : op->fixed)
        if (!keys.insert(k).second)
          throw ValidationError("hyperparameter " + op->name + "." + k +
                                " is both fixed and searched");
      return;
    }
    if (auto* c = s.as_choice()) {
      if (c->alternatives.size() < 2)
        throw ValidationError("choice needs at least two alternatives");
      for (const auto& a : c->alternatives) check(a);
      return;
    }
    if (s.as_seq()->steps.empty()) throw ValidationError("empty nested chain");
    for (const auto& x : s.as_seq()->steps) check(x);
  };
  for (const auto& s : p.steps) check(s);
}

// Membership ----------------------------------------------------------------

namespace {

bool operator_matches(const OperatorSpec& op, const PipelineInstance& inst) {
  for (const auto& [k, v] : op.fixed) {
    auto* b = inst.find(op.name, k);
    if (!b || !literal_equal(*b, v)) return false;
  }
  for (const auto& [k, d] : op.hyperparams) {
    auto* b = inst.find(op.name, k);
    if (!b) {
      if (d.is_anything()) continue;
      return false;
    }
    if (!d.contains(*b)) return false;
  }
  return true;
}

bool declared(const std::vector<const OperatorSpec*>& path, const BindingKey& key) {
  for (const auto* op : path) {
    if (op->name != key.op) continue;
    if (op->find_hyperparam(key.hp) || op->find_fixed(key.hp)) return true;
  }
  return false;
}

// Depth-first search over choice resolutions. `todo` is a stack of pending
// steps (back = next).
bool match_paths(std::vector<const Step*> todo, std::vector<const OperatorSpec*>& path,
                 const PipelineInstance& inst) {
  while (!todo.empty()) {
    const Step* s = todo.back();
    todo.pop_back();
    if (auto* op = s->as_operator()) {
      if (!operator_matches(*op, inst)) return false;
      path.push_back(op);
      bool ok = match_paths(std::move(todo), path, inst);
      path.pop_back();
      return ok;
    }
    if (auto* seq = s->as_seq()) {
      for (auto it = seq->steps.rbegin(); it != seq->steps.rend(); ++it) todo.push_back(&*it);
      continue;
    }
    for (const auto& alt : s->as_choice()->alternatives) {
      auto branch = todo;
      branch.push_back(&alt);
      if (match_paths(std::move(branch), path, inst)) return true;
    }
    return false;
  }
  for (const auto& [key, value] : inst.bindings)
    if (!declared(path, key)) return false;
  return true;
}

}  // namespace

bool contains(const PlannedPipeline& p, const PipelineInstance& inst) {
  std::vector<const Step*> todo;
  for (auto it = p.steps.rbegin(); it != p.steps.rend(); ++it) todo.push_back(&*it);
  std::vector<const OperatorSpec*> path;
  return match_paths(std::move(todo), path, inst);
}

// Restriction ---------------------------------------------------------------

namespace {

constexpr std::uint64_t kMaxEnumeratedHole = 4096;

bool value_holds(const Literal& v, const AtomicConstraint& a) {
  if (auto* eq = std::get_if<atom::Eq>(&a)) return literal_equal(v, eq->value);
  if (auto* ne = std::get_if<atom::Neq>(&a)) return !literal_equal(v, ne->value);
  const auto& c = std::get<atom::CmpConst>(a);
  auto x = as_number(v);
  return x && compare(*x, c.cmp, *as_number(c.limit));
}

[[noreturn]] void empty(const HyperparamDomain& d, const AtomicConstraint& a) {
  throw EmptyDomainError("restricting " + to_string(d) + " by " + to_string(a) +
                         " leaves no values");
}

// Clamps a real to the int64 range before converting.
std::int64_t clamp_to_int(double x) {
  constexpr double lo = -9.2e18, hi = 9.2e18;
  if (x <= lo) return std::numeric_limits<std::int64_t>::min();
  if (x >= hi) return std::numeric_limits<std::int64_t>::max();
  return static_cast<std::int64_t>(x);
}

HyperparamDomain restrict_int(const IntRange& r, const HyperparamDomain& d,
                              const AtomicConstraint& a) {
  if (auto* eq = std::get_if<atom::Eq>(&a)) {
    auto i = as_integer(eq->value);
    if (!i || *i < r.lo || *i > r.hi) empty(d, a);
    return HyperparamDomain::constant(*i);
  }
  if (auto* ne = std::get_if<atom::Neq>(&a)) {
    auto i = as_integer(ne->value);
    if (!i || *i < r.lo || *i > r.hi) return d;
    if (*i == r.lo) return HyperparamDomain::int_range(r.lo + 1, r.hi);
    if (*i == r.hi) return HyperparamDomain::int_range(r.lo, r.hi - 1);
    if (r.size() > kMaxEnumeratedHole)
      throw UnrepresentableDomainError("excluding " + to_source(ne->value) + " from " +
                                       to_string(d) + " leaves a hole in a wide range");
    std::vector<Literal> values;
    for (std::int64_t x = r.lo; x <= r.hi; ++x)
      if (x != *i) values.emplace_back(x);
    return HyperparamDomain::categorical(std::move(values));
  }
  const auto& c = std::get<atom::CmpConst>(a);
  double limit = *as_number(c.limit);
  std::int64_t lo = r.lo, hi = r.hi;
  switch (c.cmp) {
    case CmpOp::Le: hi = std::min(hi, clamp_to_int(std::floor(limit))); break;
    case CmpOp::Lt: hi = std::min(hi, clamp_to_int(std::ceil(limit) - 1)); break;
    case CmpOp::Ge: lo = std::max(lo, clamp_to_int(std::ceil(limit))); break;
    case CmpOp::Gt: lo = std::max(lo, clamp_to_int(std::floor(limit) + 1)); break;
  }
  if (lo > hi) empty(d, a);
  return HyperparamDomain::int_range(lo, hi);
}

HyperparamDomain restrict_float(const FloatRange& r, const HyperparamDomain& d,
                                const AtomicConstraint& a) {
  if (auto* eq = std::get_if<atom::Eq>(&a)) {
    auto x = as_number(eq->value);
    if (!x || !in_float_range(r, *x)) empty(d, a);
    return HyperparamDomain::constant(*x);
  }
  if (auto* ne = std::get_if<atom::Neq>(&a)) {
    auto x = as_number(ne->value);
    if (!x || !in_float_range(r, *x)) return d;
    if (*x == r.lo) return HyperparamDomain::float_range(r.lo, r.hi, true, r.open_hi);
    if (*x == r.hi) return HyperparamDomain::float_range(r.lo, r.hi, r.open_lo, true);
    throw UnrepresentableDomainError("excluding " + to_source(ne->value) + " from " +
                                     to_string(d) + " leaves a hole in a real range");
  }
  const auto& c = std::get<atom::CmpConst>(a);
  double limit = *as_number(c.limit);
  FloatRange out = r;
  switch (c.cmp) {
    case CmpOp::Le:
      if (limit < out.hi) { out.hi = limit; out.open_hi = false; }
      break;
    case CmpOp::Lt:
      if (limit <= out.hi) { out.hi = limit; out.open_hi = true; }
      break;
    case CmpOp::Ge:
      if (limit > out.lo) { out.lo = limit; out.open_lo = false; }
      break;
    case CmpOp::Gt:
      if (limit >= out.lo) { out.lo = limit; out.open_lo = true; }
      break;
  }
  if (out.lo > out.hi || (out.lo == out.hi && (out.open_lo || out.open_hi))) empty(d, a);
  return HyperparamDomain::float_range(out.lo, out.hi, out.open_lo, out.open_hi);
}

HyperparamDomain restrict_anything(const AtomicConstraint& a) {
  if (auto* eq = std::get_if<atom::Eq>(&a)) return HyperparamDomain::constant(eq->value);
  if (std::holds_alternative<atom::Neq>(a))
    throw UnrepresentableDomainError("cannot exclude a single value from an unconstrained domain");
  const auto& c = std::get<atom::CmpConst>(a);
  if (auto* i = std::get_if<std::int64_t>(&c.limit)) {
    constexpr auto kMin = std::numeric_limits<std::int64_t>::min();
    constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
    switch (c.cmp) {
      case CmpOp::Le: return HyperparamDomain::int_range(kMin, *i);
      case CmpOp::Lt: return HyperparamDomain::int_range(kMin, *i - 1);
      case CmpOp::Ge: return HyperparamDomain::int_range(*i, kMax);
      case CmpOp::Gt: return HyperparamDomain::int_range(*i + 1, kMax);
    }
  }
  double limit = *as_number(c.limit);
  constexpr double kBig = std::numeric_limits<double>::max();
  switch (c.cmp) {
    case CmpOp::Le: return HyperparamDomain::float_range(-kBig, limit);
    case CmpOp::Lt: return HyperparamDomain::float_range(-kBig, limit, false, true);
    case CmpOp::Ge: return HyperparamDomain::float_range(limit, kBig);
    case CmpOp::Gt: return HyperparamDomain::float_range(limit, kBig, true, false);
  }
  return HyperparamDomain::anything();
}

}  // namespace

HyperparamDomain restrict_domain(const HyperparamDomain& d, const AtomicConstraint& a) {
  if (!std::holds_alternative<atom::Eq>(a) && !std::holds_alternative<atom::Neq>(a) &&
      !std::holds_alternative<atom::CmpConst>(a))
    throw std::invalid_argument("restrict_domain needs an Eq, Neq or CmpConst atom, got " +
                                to_string(a));
  if (auto* c = std::get_if<atom::CmpConst>(&a); c && !is_numeric(c->limit))
    throw TypeMismatchError("non-numeric limit in " + to_string(a));

  return std::visit(
      [&](const auto& v) -> HyperparamDomain {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Categorical>) {
          std::vector<Literal> kept;
          for (const auto& x : v.values)
            if (value_holds(x, a)) kept.push_back(x);
          if (kept.empty()) empty(d, a);
          return HyperparamDomain::categorical(std::move(kept));
        } else if constexpr (std::is_same_v<T, Constant>) {
          if (!value_holds(v.value, a)) empty(d, a);
          return d;
        } else if constexpr (std::is_same_v<T, IntRange>) {
          return restrict_int(v, d, a);
        } else if constexpr (std::is_same_v<T, FloatRange>) {
          return restrict_float(v, d, a);
        } else {
          return restrict_anything(a);
        }
      },
      d.value());
}

// Choice editing ------------------------------------------------------------

namespace {

std::optional<Step> without_operator(const Step& step, const std::string& name) {
  if (auto* op = step.as_operator()) {
    if (op->name == name) return std::nullopt;
    return step;
  }
  if (auto* seq = step.as_seq()) {
    SeqNode out;
    for (const auto& s : seq->steps) {
      auto r = without_operator(s, name);
      if (!r) return std::nullopt;
      out.steps.push_back(std::move(*r));
    }
    return Step(std::move(out));
  }
  ChoiceNode out;
  for (const auto& alt : step.as_choice()->alternatives) {
    auto r = without_operator(alt, name);
    if (r) out.alternatives.push_back(std::move(*r));
  }
  if (out.alternatives.empty()) return std::nullopt;
  return Step(std::move(out));
}

}  // namespace

PlannedPipeline remove_choice_alternative(const PlannedPipeline& p, const std::string& op_name) {
  bool top_level = std::any_of(p.steps.begin(), p.steps.end(), [&](const Step& s) {
    auto* op = s.as_operator();
    return op && op->name == op_name;
  });
  if (top_level || !occurs(p, op_name))
    throw NotInChoiceError("operator " + op_name + " is not a choice alternative");
  if (is_mandatory(p, op_name))
    throw WouldEmptyChoiceError("every alternative of a choice uses " + op_name);
  PlannedPipeline out;
  for (const auto& s : p.steps) out.steps.push_back(*without_operator(s, op_name));
  return PlannedPipeline{flatten_steps(std::move(out.steps))};
}

// Splitting -----------------------------------------------------------------

std::vector<HyperparamDomain> split_range(const HyperparamDomain& d, int n) {
  if (n < 1) throw std::invalid_argument("split count must be positive");
  if (auto* r = d.get_if<IntRange>()) {
    std::uint64_t total = r->size();
    std::uint64_t pieces = std::min<std::uint64_t>(static_cast<std::uint64_t>(n), total);
    std::uint64_t base = total / pieces, extra = total % pieces;
    std::vector<HyperparamDomain> out;
    std::int64_t lo = r->lo;
    for (std::uint64_t i = 0; i < pieces; ++i) {
      std::uint64_t width = base + (i < extra ? 1 : 0);
      auto hi = static_cast<std::int64_t>(static_cast<std::uint64_t>(lo) + width - 1);
      out.push_back(HyperparamDomain::int_range(lo, hi));
      if (i + 1 < pieces) lo = hi + 1;
    }
    return out;
  }
  if (auto* r = d.get_if<FloatRange>()) {
    std::vector<HyperparamDomain> out;
    double width = (r->hi - r->lo) / n;
    for (int i = 0; i < n; ++i) {
      double lo = r->lo + width * i;
      double hi = i + 1 == n ? r->hi : r->lo + width * (i + 1);
      bool open_lo = i == 0 ? r->open_lo : false;
      bool open_hi = i + 1 == n ? r->open_hi : true;
      out.push_back(HyperparamDomain::float_range(lo, hi, open_lo, open_hi));
    }
    return out;
  }
  if (auto* c = d.get_if<Constant>(); c && is_numeric(c->value)) return {d};
  throw NotNumericError("cannot split non-numeric domain " + to_string(d));
}

}  // namespace remedy
