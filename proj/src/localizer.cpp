#include "remedy/localizer.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <tuple>

#include "remedy/errors.hpp"

namespace remedy {

void validate_trace(const EvaluationTrace& trace) {
  if (trace.instances.empty()) throw ValidationError("trace has no instances");
  std::set<std::string> ids;
  for (const auto& inst : trace.instances) {
    if (!ids.insert(inst.id).second) throw ValidationError("duplicate instance id '" + inst.id + "'");
    if (!contains(trace.pipeline, inst))
      throw ValidationError("instance '" + inst.id + "' is not part of the pipeline's search space");
  }
}

namespace {

// Bit i stands for instance i.
class Mask {
 public:
  explicit Mask(size_t n = 0) : n_(n), words_((n + 63) / 64, 0) {}

  static Mask full(size_t n) {
    Mask m(n);
    for (size_t i = 0; i < n; ++i) m.set(i);
    return m;
  }

  void set(size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

  Mask operator&(const Mask& o) const {
    Mask r = *this;
    for (size_t w = 0; w < words_.size(); ++w) r.words_[w] &= o.words_[w];
    return r;
  }
  // this & ~o
  Mask minus(const Mask& o) const {
    Mask r = *this;
    for (size_t w = 0; w < words_.size(); ++w) r.words_[w] &= ~o.words_[w];
    return r;
  }
  bool any() const {
    return std::any_of(words_.begin(), words_.end(), [](std::uint64_t w) { return w != 0; });
  }
  size_t count() const {
    size_t c = 0;
    for (auto w : words_) c += static_cast<size_t>(std::popcount(w));
    return c;
  }
  long first() const {
    for (size_t w = 0; w < words_.size(); ++w)
      if (words_[w]) return static_cast<long>(w * 64 + static_cast<size_t>(std::countr_zero(words_[w])));
    return -1;
  }
  bool operator==(const Mask&) const = default;
  auto operator<=>(const Mask& o) const { return words_ <=> o.words_; }

 private:
  size_t n_;
  std::vector<std::uint64_t> words_;
};

enum Kind { kEq, kNeq, kAbsent, kPresent, kCmpConst, kCmpParam };

struct Candidate {
  AtomicConstraint atom;
  int kind;
  int key1, key2;  // indices into the sorted key list; key2 = -1 unless CmpParam
  long rank;       // order within (kind, keys); Eq/Neq re-rank per sub-trace
  Mask truth;      // instances where the atom holds
  Mask witness;    // instances that exhibit the atom's constant
  Mask bound;      // instances binding every key the atom mentions
};

struct KeyInfo {
  BindingKey key;
  std::vector<Literal> values;  // distinct, first-seen order
  std::vector<Mask> value_masks;
  Mask bound;
  bool numeric = true;
};

class Solver {
 public:
  explicit Solver(const std::vector<PipelineInstance>& instances)
      : instances_(instances), n_(instances.size()), success_(n_) {
    for (size_t i = 0; i < n_; ++i)
      if (instances_[i].success) success_.set(i);
    collect_keys();
    build_candidates();
  }

  size_t size() const { return n_; }
  const Mask& success() const { return success_; }
  const std::vector<Candidate>& candidates() const { return cands_; }

  // Candidate indices usable on sub-trace t, in search order.
  std::vector<size_t> ordered(const Mask& t) const {
    std::vector<std::tuple<int, int, int, long, size_t>> keyed;
    for (size_t i = 0; i < cands_.size(); ++i) {
      const auto& c = cands_[i];
      Mask w = c.witness & t;
      if (!w.any()) continue;
      long rank = (c.kind == kEq || c.kind == kNeq) ? w.first() : c.rank;
      keyed.emplace_back(c.kind, c.key1, c.key2, rank, i);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<size_t> out;
    out.reserve(keyed.size());
    for (const auto& k : keyed) out.push_back(std::get<4>(k));
    return out;
  }

  bool separates(const Candidate& c, const Mask& t) const {
    return (c.truth & t) == (success_ & t);
  }

  std::optional<Constraint> find(const Mask& t, int depth) {
    for (int e = 0; e <= depth; ++e)
      if (auto r = attempt(t, e)) return r;
    return std::nullopt;
  }

 private:
  void collect_keys() {
    std::map<BindingKey, KeyInfo> by_key;
    for (size_t i = 0; i < n_; ++i) {
      for (const auto& [key, value] : instances_[i].bindings) {
        auto [it, fresh] = by_key.try_emplace(key);
        KeyInfo& info = it->second;
        if (fresh) {
          info.key = key;
          info.bound = Mask(n_);
        }
        info.bound.set(i);
        if (!is_numeric(value)) info.numeric = false;
        size_t v = 0;
        while (v < info.values.size() && !literal_equal(info.values[v], value)) ++v;
        if (v == info.values.size()) {
          info.values.push_back(value);
          info.value_masks.emplace_back(n_);
        }
        info.value_masks[v].set(i);
      }
    }
    for (auto& [k, info] : by_key) keys_.push_back(std::move(info));
  }

  void add(AtomicConstraint atom, int kind, int k1, int k2, long rank, Mask witness, Mask bound) {
    Mask truth(n_);
    for (size_t i = 0; i < n_; ++i)
      if (eval(atom, instances_[i])) truth.set(i);
    cands_.push_back(Candidate{std::move(atom), kind, k1, k2, rank, std::move(truth),
                               std::move(witness), std::move(bound)});
  }

  void build_candidates() {
    const int nk = static_cast<int>(keys_.size());
    for (int k = 0; k < nk; ++k) {
      const auto& info = keys_[static_cast<size_t>(k)];
      for (size_t v = 0; v < info.values.size(); ++v) {
        add(atom::Eq{info.key.op, info.key.hp, info.values[v]}, kEq, k, -1, 0, info.value_masks[v],
            info.bound);
        add(atom::Neq{info.key.op, info.key.hp, info.values[v]}, kNeq, k, -1, 0,
            info.value_masks[v], info.bound);
      }
      add(atom::Absent{info.key.op, info.key.hp}, kAbsent, k, -1, 0, info.bound, info.bound);
      add(atom::Present{info.key.op, info.key.hp}, kPresent, k, -1, 0, info.bound, info.bound);
      if (!info.numeric) continue;
      std::vector<size_t> order(info.values.size());
      for (size_t v = 0; v < order.size(); ++v) order[v] = v;
      std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return *as_number(info.values[a]) < *as_number(info.values[b]);
      });
      long rank = 0;
      for (CmpOp op : {CmpOp::Le, CmpOp::Ge})
        for (size_t v : order)
          add(atom::CmpConst{info.key.op, info.key.hp, op, info.values[v]}, kCmpConst, k, -1,
              rank++, info.value_masks[v], info.bound);
    }
    for (int a = 0; a < nk; ++a) {
      for (int b = 0; b < nk; ++b) {
        const auto& ka = keys_[static_cast<size_t>(a)];
        const auto& kb = keys_[static_cast<size_t>(b)];
        if (a == b || !ka.numeric || !kb.numeric) continue;
        Mask both = ka.bound & kb.bound;
        long rank = 0;
        for (CmpOp op : {CmpOp::Le, CmpOp::Lt})
          add(atom::CmpParam{ka.key.op, ka.key.hp, op, kb.key.op, kb.key.hp}, kCmpParam, a, b,
              rank++, both, both);
      }
    }
  }

  std::optional<Constraint> attempt(const Mask& t, int depth) {
    auto memo_key = std::make_pair(t, depth);
    if (auto it = memo_.find(memo_key); it != memo_.end()) return it->second;
    std::optional<Constraint> result = compute(t, depth);
    memo_.emplace(std::move(memo_key), result);
    return result;
  }

  std::optional<Constraint> compute(const Mask& t, int depth) {
    Mask ok = success_ & t;
    if (ok == t) return Constraint(atom::LitTrue{});
    if (!ok.any()) return Constraint(atom::LitFalse{});
    auto order = ordered(t);
    if (depth == 0) {
      for (size_t i : order)
        if (separates(cands_[i], t)) return Constraint(cands_[i].atom);
      return std::nullopt;
    }
    // Conditions over hyperparameters bound throughout the sub-trace come
    // first: their negation is the exact complement on it.
    std::stable_partition(order.begin(), order.end(),
                          [&](size_t i) { return !t.minus(cands_[i].bound).any(); });
    std::set<Mask> tried;
    for (size_t i : order) {
      Mask yes = cands_[i].truth & t;
      if (!yes.any() || yes == t || !tried.insert(yes).second) continue;
      auto then_c = find(yes, depth - 1);
      if (!then_c) continue;
      auto else_c = find(t.minus(cands_[i].truth), depth - 1);
      if (!else_c) continue;
      return Constraint::ite(cands_[i].atom, std::move(*then_c), std::move(*else_c));
    }
    return std::nullopt;
  }

  const std::vector<PipelineInstance>& instances_;
  size_t n_;
  Mask success_;
  std::vector<KeyInfo> keys_;
  std::vector<Candidate> cands_;
  std::map<std::pair<Mask, int>, std::optional<Constraint>> memo_;
};

}  // namespace

std::vector<AtomicConstraint> candidate_atoms(const std::vector<PipelineInstance>& instances) {
  Solver s(instances);
  std::vector<AtomicConstraint> out;
  for (size_t i : s.ordered(Mask::full(s.size()))) out.push_back(s.candidates()[i].atom);
  return out;
}

std::optional<AtomicConstraint> solve_atomic(const EvaluationTrace& trace) {
  if (trace.instances.empty()) throw ValidationError("trace has no instances");
  Solver s(trace.instances);
  Mask all = Mask::full(s.size());
  if (s.success() == all) return atom::LitTrue{};
  if (!s.success().any()) return atom::LitFalse{};
  for (size_t i : s.ordered(all))
    if (s.separates(s.candidates()[i], all)) return s.candidates()[i].atom;
  return std::nullopt;
}

Constraint solve(const EvaluationTrace& trace, const LocalizerConfig& cfg) {
  if (cfg.max_depth < 0 || cfg.max_depth > 4)
    throw ValidationError("max depth must be between 0 and 4, got " + std::to_string(cfg.max_depth));
  if (trace.instances.empty()) throw ValidationError("trace has no instances");
  Solver s(trace.instances);
  Mask all = Mask::full(s.size());
  if (!s.success().any())
    throw AllFailedError("all " + std::to_string(s.size()) +
                         " instances failed; sample more broadly before localizing");
  if (auto c = s.find(all, cfg.max_depth)) return *c;

  // Report the single atom that gets the most instances right.
  const Candidate* best = nullptr;
  size_t best_right = 0;
  for (size_t i : s.ordered(all)) {
    const auto& c = s.candidates()[i];
    size_t wrong = c.truth.minus(s.success()).count() + s.success().minus(c.truth).count();
    size_t right = s.size() - wrong;
    if (!best || right > best_right) {
      best = &c;
      best_right = right;
    }
  }
  std::vector<std::string> missed;
  std::string best_text = best ? to_string(best->atom) : "none";
  if (best) {
    for (size_t i = 0; i < s.size(); ++i)
      if (best->truth.test(i) != s.success().test(i)) missed.push_back(trace.instances[i].id);
  }
  std::string msg = "no constraint up to depth " + std::to_string(cfg.max_depth) +
                    " separates the trace; best partial separator: " + best_text;
  if (!missed.empty()) {
    msg += " (misclassifies";
    for (const auto& id : missed) msg += " " + id;
    msg += ")";
  }
  throw NoExplanationError(msg, best_text, std::move(missed));
}

}  // namespace remedy
