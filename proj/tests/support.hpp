#pragma once

#include <bitset>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "remedy/constraint.hpp"
#include "remedy/errors.hpp"
#include "remedy/harness.hpp"
#include "remedy/localizer.hpp"
#include "remedy/pipeline_json.hpp"
#include "remedy/search_space.hpp"
#include "remedy/trace_io.hpp"

namespace testing {

using namespace remedy;
using D = HyperparamDomain;

inline std::string data_path(const std::string& rel) { return std::string(REMEDY_TEST_DATA) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing test file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline PlannedPipeline load_fixture_pipeline(const std::string& name) {
  return pipeline_from_json(Json::parse(slurp(data_path("fixtures/" + name))));
}

inline std::vector<PipelineInstance> load_fixture_trace(const std::string& name) {
  std::ifstream in(data_path("fixtures/" + name));
  return read_trace(in, name);
}

inline Constraint load_fixture_constraint(const std::string& name) {
  return constraint_from_json(Json::parse(slurp(data_path("fixtures/" + name))));
}

inline OperatorSpec op(std::string name, std::vector<std::pair<std::string, D>> hps = {},
                       std::vector<std::pair<std::string, Literal>> fixed = {}) {
  return OperatorSpec{std::move(name), std::move(hps), std::move(fixed)};
}

// Every member of a finite domain; small integer ranges only.
inline std::vector<Literal> members(const D& d) {
  if (auto* c = d.get_if<Categorical>()) return c->values;
  if (auto* c = d.get_if<Constant>()) return {c->value};
  if (auto* r = d.get_if<IntRange>()) {
    if (r->size() > 200) throw std::runtime_error("range too large to enumerate");
    std::vector<Literal> out;
    for (auto x = r->lo; x <= r->hi; ++x) out.emplace_back(x);
    return out;
  }
  throw std::runtime_error("domain is not enumerable: " + to_string(d));
}

// Every instance of a pipeline whose searched domains are all finite.
// Anything hyperparameters stay unbound.
inline std::vector<PipelineInstance> enumerate(const PlannedPipeline& p) {
  using Partial = std::map<BindingKey, Literal>;
  std::function<std::vector<Partial>(const std::vector<Step>&, size_t, std::vector<Partial>)> seq;
  std::function<std::vector<Partial>(const Step&, std::vector<Partial>)> one;
  one = [&](const Step& s, std::vector<Partial> in) -> std::vector<Partial> {
    if (auto* o = s.as_operator()) {
      for (auto& part : in)
        for (const auto& [k, v] : o->fixed) part[{o->name, k}] = v;
      for (const auto& [k, d] : o->hyperparams) {
        if (d.is_anything()) continue;
        std::vector<Partial> next;
        for (const auto& part : in)
          for (const auto& v : members(d)) {
            auto copy = part;
            copy[{o->name, k}] = v;
            next.push_back(std::move(copy));
          }
        in = std::move(next);
      }
      return in;
    }
    if (auto* sq = s.as_seq()) return seq(sq->steps, 0, std::move(in));
    std::vector<Partial> out;
    for (const auto& alt : s.as_choice()->alternatives) {
      auto r = one(alt, in);
      out.insert(out.end(), r.begin(), r.end());
    }
    return out;
  };
  seq = [&](const std::vector<Step>& steps, size_t i, std::vector<Partial> in) {
    for (; i < steps.size(); ++i) in = one(steps[i], std::move(in));
    return in;
  };
  std::vector<PipelineInstance> out;
  int n = 0;
  for (auto& b : seq(p.steps, 0, {Partial{}})) {
    PipelineInstance inst;
    inst.id = "e" + std::to_string(n++);
    inst.bindings = std::move(b);
    out.push_back(std::move(inst));
  }
  return out;
}

inline Literal random_literal(SplitMix64& rng) {
  switch (rng.below(4)) {
    case 0: return rng.below(2) == 1;
    case 1: return static_cast<std::int64_t>(rng.below(100)) - 50;
    case 2: return static_cast<double>(rng.below(1000)) / 8.0 - 20.0;
    default: return std::string(1, static_cast<char>('a' + rng.below(5))) + (rng.below(2) ? "x" : "");
  }
}

inline D random_domain(SplitMix64& rng) {
  switch (rng.below(6)) {
    case 0: {
      std::vector<Literal> vals;
      for (std::uint64_t i = 0, n = 2 + rng.below(3); i < n; ++i) vals.push_back(random_literal(rng));
      return D::categorical(vals);
    }
    case 1: {
      auto lo = static_cast<std::int64_t>(rng.below(50)) - 10;
      return D::int_range(lo, lo + static_cast<std::int64_t>(rng.below(60)));
    }
    case 2: {
      double lo = static_cast<double>(rng.below(100)) / 4.0 - 5.0;
      double hi = lo + 0.25 + static_cast<double>(rng.below(400)) / 16.0;
      return D::float_range(lo, hi, rng.below(2) == 1, rng.below(2) == 1);
    }
    case 3: return D::constant(random_literal(rng));
    case 4: return D::anything();
    default: return D::categorical({"mean", "median", "most_frequent"});
  }
}

inline OperatorSpec random_operator(SplitMix64& rng) {
  static const char* names[] = {"PCA", "SelectKBest", "LogisticRegression", "SimpleImputer",
                                "OneHotEncoder", "KNeighborsClassifier", "StandardScaler", "Nystroem"};
  static const char* hps[] = {"alpha", "k", "strategy", "n_components", "tol", "C", "whiten"};
  OperatorSpec o{names[rng.below(8)], {}, {}};
  std::vector<std::string> used;
  auto fresh = [&]() {
    while (true) {
      std::string h = hps[rng.below(7)];
      if (std::find(used.begin(), used.end(), h) == used.end()) {
        used.push_back(h);
        return h;
      }
    }
  };
  for (std::uint64_t i = 0, n = rng.below(3); i < n; ++i) o.hyperparams.emplace_back(fresh(), random_domain(rng));
  for (std::uint64_t i = 0, n = rng.below(2); i < n; ++i) o.fixed.emplace_back(fresh(), random_literal(rng));
  return o;
}

// Random pipelines with choices nested at most two deep.
inline Step random_step(SplitMix64& rng, int depth) {
  if (depth == 0 || rng.below(3) != 0) return random_operator(rng);
  ChoiceNode c;
  for (std::uint64_t i = 0, n = 2 + rng.below(2); i < n; ++i) {
    if (rng.below(2) == 0) {
      c.alternatives.push_back(random_step(rng, depth - 1));
    } else {
      SeqNode s;
      for (std::uint64_t j = 0, m = 2 + rng.below(2); j < m; ++j) s.steps.push_back(random_step(rng, depth - 1));
      c.alternatives.push_back(Step(std::move(s)));
    }
  }
  return Step(std::move(c));
}

inline PlannedPipeline random_pipeline(SplitMix64& rng) {
  PlannedPipeline p;
  for (std::uint64_t i = 0, n = 1 + rng.below(4); i < n; ++i) p.steps.push_back(random_step(rng, 2));
  return normalize(std::move(p));
}

// Small pipeline with finite domains: up to three hyperparameters with up to
// three values each, optionally behind a two-way choice.
inline PlannedPipeline small_pipeline(SplitMix64& rng) {
  auto dom = [&]() -> D {
    switch (rng.below(3)) {
      case 0: return D::categorical({"a", "b", "c"});
      case 1: return D::int_range(1, 3);
      default: return D::categorical({true, false});
    }
  };
  std::uint64_t layout = rng.below(3);
  if (layout == 0)
    return normalize(PlannedPipeline{{op("A", {{"x", dom()}, {"y", dom()}, {"z", D::int_range(1, 3)}})}});
  if (layout == 1)
    return normalize(PlannedPipeline{{op("A", {{"x", D::int_range(1, 3)}}), op("B", {{"y", dom()}, {"z", D::int_range(1, 3)}})}});
  return normalize(PlannedPipeline{{op("A", {{"x", dom()}}),
                                    ChoiceNode{{op("B", {{"y", D::int_range(1, 3)}}), op("C", {{"z", dom()}})}}}});
}

// An atom over the pipeline's declared keys, with constants from their domains.
inline AtomicConstraint random_atom(SplitMix64& rng, const PlannedPipeline& p) {
  std::vector<std::pair<BindingKey, D>> keys;
  for_each_operator(p, [&](const OperatorSpec& o) {
    for (const auto& [k, d] : o.hyperparams) keys.push_back({{o.name, k}, d});
  });
  auto pick = [&]() { return keys[rng.below(keys.size())]; };
  while (true) {
    auto [key, d] = pick();
    auto vals = members(d);
    Literal v = vals[rng.below(vals.size())];
    switch (rng.below(6)) {
      case 0: return atom::Eq{key.op, key.hp, v};
      case 1: return atom::Neq{key.op, key.hp, v};
      case 2: return atom::Present{key.op, key.hp};
      case 3: return atom::Absent{key.op, key.hp};
      case 4:
        if (is_numeric(v)) return atom::CmpConst{key.op, key.hp, rng.below(2) ? CmpOp::Le : CmpOp::Ge, v};
        break;
      default: {
        auto [k2, d2] = pick();
        if (!(k2 == key) && is_numeric(v) && is_numeric(members(d2).front()))
          return atom::CmpParam{key.op, key.hp, rng.below(2) ? CmpOp::Le : CmpOp::Lt, k2.op, k2.hp};
      }
    }
  }
}

// Random constraint trees of the given depth over made-up keys, for
// serialization tests.
inline AtomicConstraint loose_atom(SplitMix64& rng) {
  static const char* ops[] = {"PCA", "SVC", "Nystroem#2"};
  static const char* hps[] = {"k", "C", "kernel"};
  std::string o = ops[rng.below(3)], h = hps[rng.below(3)];
  switch (rng.below(8)) {
    case 0: return atom::Eq{o, h, random_literal(rng)};
    case 1: return atom::Neq{o, h, random_literal(rng)};
    case 2: return atom::Present{o, h};
    case 3: return atom::Absent{o, h};
    case 4: return atom::CmpConst{o, h, static_cast<CmpOp>(rng.below(4)), static_cast<std::int64_t>(rng.below(9))};
    case 5: return atom::CmpParam{o, h, rng.below(2) ? CmpOp::Le : CmpOp::Lt, ops[rng.below(3)], "n"};
    case 6: return atom::LitTrue{};
    default: return atom::LitFalse{};
  }
}

inline Constraint random_constraint(SplitMix64& rng, int depth) {
  if (depth == 0 || rng.below(3) == 0) {
    if (rng.below(3) == 0) return Constraint::conjunction({loose_atom(rng), loose_atom(rng), loose_atom(rng)});
    return loose_atom(rng);
  }
  return Constraint::ite(loose_atom(rng), random_constraint(rng, depth - 1), random_constraint(rng, depth - 1));
}

inline std::vector<PipelineInstance> label(std::vector<PipelineInstance> xs,
                                           const std::function<bool(const PipelineInstance&)>& oracle) {
  for (auto& x : xs) x.success = oracle(x);
  return xs;
}

inline bool separates(const Constraint& c, const std::vector<PipelineInstance>& xs) {
  for (const auto& x : xs)
    if (eval(c, x) != x.success) return false;
  return true;
}

// Atoms over every observed key: Eq/Neq per observed value, presence, and
// <=/>= per observed number, plus <=/< between numeric keys. Built from the
// template family directly, not from the localizer's candidate list.
inline std::vector<AtomicConstraint> universe(const std::vector<PipelineInstance>& xs) {
  std::map<BindingKey, std::vector<Literal>> seen;
  for (const auto& x : xs)
    for (const auto& [k, v] : x.bindings) {
      auto& vs = seen[k];
      if (std::none_of(vs.begin(), vs.end(), [&](const Literal& w) { return literal_equal(v, w); })) vs.push_back(v);
    }
  std::vector<AtomicConstraint> out{atom::LitTrue{}, atom::LitFalse{}};
  std::vector<BindingKey> numeric;
  for (const auto& [k, vs] : seen) {
    out.push_back(atom::Present{k.op, k.hp});
    out.push_back(atom::Absent{k.op, k.hp});
    bool all_num = true;
    for (const auto& v : vs) {
      out.push_back(atom::Eq{k.op, k.hp, v});
      out.push_back(atom::Neq{k.op, k.hp, v});
      if (is_numeric(v)) {
        out.push_back(atom::CmpConst{k.op, k.hp, CmpOp::Le, v});
        out.push_back(atom::CmpConst{k.op, k.hp, CmpOp::Ge, v});
      } else {
        all_num = false;
      }
    }
    if (all_num) numeric.push_back(k);
  }
  for (const auto& a : numeric)
    for (const auto& b : numeric)
      if (!(a == b)) {
        out.push_back(atom::CmpParam{a.op, a.hp, CmpOp::Le, b.op, b.hp});
        out.push_back(atom::CmpParam{a.op, a.hp, CmpOp::Lt, b.op, b.hp});
      }
  return out;
}

using Bits = std::bitset<64>;

// Does any atom or depth-1 tree over the universe separate xs exactly?
inline bool brute_force_depth1(const std::vector<PipelineInstance>& xs) {
  if (xs.size() > 64) throw std::runtime_error("brute force handles at most 64 instances");
  Bits want, all;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.set(i);
    if (xs[i].success) want.set(i);
  }
  std::vector<Bits> masks;
  for (const auto& a : universe(xs)) {
    Bits m;
    for (std::size_t i = 0; i < xs.size(); ++i)
      if (eval(a, xs[i])) m.set(i);
    masks.push_back(m);
  }
  for (const auto& m : masks)
    if (m == want) return true;
  for (const auto& c : masks) {
    bool then_ok = false, else_ok = false;
    for (const auto& t : masks) then_ok = then_ok || ((t ^ want) & c).none();
    for (const auto& e : masks) else_ok = else_ok || ((e ^ want) & (all & ~c)).none();
    if (then_ok && else_ok) return true;
  }
  return false;
}

}  // namespace testing
