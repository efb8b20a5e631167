#include "remedy/harness.hpp"

#include <cmath>
#include <limits>

#include "remedy/errors.hpp"
#include "remedy/remediator.hpp"

namespace remedy {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t SplitMix64::below(std::uint64_t n) {
  // Smallest accepted draw is 2^64 mod n, which leaves a multiple of n values.
  std::uint64_t floor = (0 - n) % n;
  while (true) {
    std::uint64_t x = next();
    if (x >= floor) return x % n;
  }
}

double SplitMix64::unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

namespace {

Literal draw(const HyperparamDomain& d, SplitMix64& rng) {
  if (auto* c = d.get_if<Categorical>()) return c->values[rng.below(c->values.size())];
  if (auto* r = d.get_if<IntRange>()) {
    std::uint64_t size = r->size();
    std::uint64_t off = size == std::numeric_limits<std::uint64_t>::max() ? rng.next() : rng.below(size);
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(r->lo) + off);
  }
  if (auto* f = d.get_if<FloatRange>()) {
    while (true) {
      double u = rng.unit();
      double x = f->lo * (1 - u) + f->hi * u;  // stays finite for sentinel bounds
      if ((f->open_lo && x <= f->lo) || (f->open_hi && x >= f->hi) || x < f->lo || x > f->hi) continue;
      return x;
    }
  }
  return d.get_if<Constant>()->value;
}

void draw_step(const Step& s, SplitMix64& rng, PipelineInstance& inst) {
  if (auto* op = s.as_operator()) {
    for (const auto& [k, v] : op->fixed) inst.bindings[{op->name, k}] = v;
    for (const auto& [k, d] : op->hyperparams)
      if (!d.is_anything()) inst.bindings[{op->name, k}] = draw(d, rng);
    return;
  }
  if (auto* seq = s.as_seq()) {
    for (const auto& x : seq->steps) draw_step(x, rng, inst);
    return;
  }
  const auto& alts = s.as_choice()->alternatives;
  draw_step(alts[rng.below(alts.size())], rng, inst);
}

}  // namespace

std::vector<PipelineInstance> sample(const PlannedPipeline& p, int n, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<PipelineInstance> out;
  for (int i = 0; i < n; ++i) {
    PipelineInstance inst;
    inst.id = "p" + std::to_string(i);
    for (const auto& s : p.steps) draw_step(s, rng, inst);
    out.push_back(std::move(inst));
  }
  return out;
}

// Scenarios ------------------------------------------------------------------

namespace {

using D = HyperparamDomain;

OperatorSpec op(std::string name, std::vector<std::pair<std::string, D>> hps = {},
                std::vector<std::pair<std::string, Literal>> fixed = {}) {
  return OperatorSpec{std::move(name), std::move(hps), std::move(fixed)};
}

const Literal* get(const PipelineInstance& p, const char* op, const char* hp) { return p.find(op, hp); }

std::vector<Scenario> make_scenarios() {
  // Every domain below is invented; the modeled examples only name the
  // operators and the failure cause.
  std::vector<Scenario> out;

  OperatorSpec logistic = op("LogisticRegression",
                             {{"dual", D::categorical({true, false})},
                              {"fit_intercept", D::categorical({true, false})},
                              {"intercept_scaling", D::float_range(0.0, 1.0)},
                              {"max_iter", D::int_range(100, 1000)},
                              {"solver", D::categorical({"liblinear", "lbfgs", "saga"})},
                              {"tol", D::float_range(1e-5, 1e-2)}});
  out.push_back(Scenario{
      "imputer-categorical",
      "categorical data: only the most_frequent imputation strategy works",
      normalize(PlannedPipeline{{op("SimpleImputer", {{"strategy", D::categorical({"mean", "median", "most_frequent"})}}),
                                 op("OneHotEncoder", {}, {{"handle_unknown", "ignore"}}), logistic}}),
      [](const PipelineInstance& p) {
        auto* s = get(p, "SimpleImputer", "strategy");
        return s && literal_equal(*s, Literal{"most_frequent"});
      }});

  out.push_back(Scenario{
      "knn-small-data",
      "small dataset: n_neighbors above the fold size (16) fails",
      normalize(PlannedPipeline{{op("StandardScaler"),
                                 op("KNeighborsClassifier", {{"n_neighbors", D::int_range(1, 50)},
                                                             {"weights", D::categorical({"uniform", "distance"})}})}}),
      [](const PipelineInstance& p) {
        auto* k = get(p, "KNeighborsClassifier", "n_neighbors");
        return k && *as_number(*k) <= 16;
      }});

  out.push_back(Scenario{
      "pca-whiten-arpack",
      "whitening combined with the arpack solver fails",
      normalize(PlannedPipeline{{op("PCA", {{"svd_solver", D::categorical({"arpack", "full"})},
                                            {"whiten", D::categorical({true, false})}}),
                                 op("LogisticRegression")}}),
      [](const PipelineInstance& p) {
        auto* s = get(p, "PCA", "svd_solver");
        auto* w = get(p, "PCA", "whiten");
        return !(s && w && literal_equal(*s, Literal{"arpack"}) && literal_equal(*w, Literal{true}));
      }});

  out.push_back(Scenario{
      "pca-selectkbest",
      "more PCA components than SelectKBest keeps fails",
      normalize(PlannedPipeline{{op("PCA", {{"n_components", D::int_range(1, 60)}}),
                                 op("SelectKBest", {{"k", D::int_range(5, 55)}}), op("LogisticRegression")}}),
      [](const PipelineInstance& p) {
        auto* n = get(p, "PCA", "n_components");
        auto* k = get(p, "SelectKBest", "k");
        return n && k && *as_number(*n) <= *as_number(*k);
      }});

  out.push_back(Scenario{
      "scaler-encoder",
      "centering after one-hot encoding fails",
      normalize(PlannedPipeline{{op("ProjectCategoricals"),
                                 ChoiceNode{{op("OneHotEncoder", {}, {{"handle_unknown", "ignore"}}),
                                             op("OrdinalEncoder", {}, {{"handle_unknown", "ignore"}})}},
                                 op("StandardScaler", {{"with_mean", D::categorical({true, false})}}),
                                 op("LogisticRegression")}}),
      [](const PipelineInstance& p) {
        auto* w = get(p, "StandardScaler", "with_mean");
        bool centered = w && literal_equal(*w, Literal{true});
        return !(centered && p.binds_operator("OneHotEncoder"));
      }});
  return out;
}

}  // namespace

const std::vector<Scenario>& builtin_scenarios() {
  static const std::vector<Scenario> all = make_scenarios();
  return all;
}

const Scenario* find_scenario(const std::string& name) {
  for (const auto& s : builtin_scenarios())
    if (s.name == name) return &s;
  return nullptr;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Successful: return "successful";
    case Verdict::Restrictive: return "restrictive";
    case Verdict::Unsuccessful: return "unsuccessful";
  }
  return "unsuccessful";
}

std::uint64_t resample_seed(std::uint64_t seed) { return seed ^ 0x5851f42d4c957f2dULL; }

std::vector<PipelineInstance> labeled_sample(const Scenario& sc, int n, std::uint64_t seed) {
  auto out = sample(sc.pipeline, n, seed);
  for (auto& inst : out) inst.success = sc.oracle(inst);
  return out;
}

RoundTripReport run_scenario(const Scenario& sc, int n_evals, std::uint64_t seed, const LocalizerConfig& cfg,
                             int n_splits) {
  RoundTripReport r;
  r.scenario = sc.name;
  r.seed = seed;
  r.n_evals = n_evals;
  EvaluationTrace trace{sc.pipeline, labeled_sample(sc, n_evals, seed)};
  for (const auto& inst : trace.instances) r.pre_failures += inst.success ? 0 : 1;
  try {
    r.constraint = solve(trace, cfg);
    Remediation rem = remediate(sc.pipeline, *r.constraint, n_splits);
    Scenario after{sc.name, sc.description, rem.remediated, sc.oracle};
    int post = 0;
    for (const auto& inst : labeled_sample(after, n_evals, resample_seed(seed))) post += inst.success ? 0 : 1;
    r.post_failures = post;
    for (const auto& inst : trace.instances)
      if (inst.success && !contains(rem.remediated, inst)) ++r.excluded_successes;
  } catch (const DomainError& e) {
    r.reason = e.what();
    return r;
  }
  if (*r.post_failures > 0) {
    r.reason = std::to_string(*r.post_failures) + " failures after remediation";
  } else if (r.excluded_successes > 0) {
    r.verdict = Verdict::Restrictive;
    r.reason = std::to_string(r.excluded_successes) + " known-good configurations excluded";
  } else {
    r.verdict = Verdict::Successful;
  }
  return r;
}

SuiteResult run_suite(const std::vector<const Scenario*>& scenarios, const std::vector<std::uint64_t>& seeds,
                      int n_evals, const LocalizerConfig& cfg, int n_splits) {
  SuiteResult out;
  for (const auto* sc : scenarios)
    for (auto seed : seeds) {
      out.reports.push_back(run_scenario(*sc, n_evals, seed, cfg, n_splits));
      switch (out.reports.back().verdict) {
        case Verdict::Successful: ++out.successful; break;
        case Verdict::Restrictive: ++out.restrictive; break;
        case Verdict::Unsuccessful: ++out.unsuccessful; break;
      }
    }
  return out;
}

namespace {

std::string fraction(std::optional<int> count, int n) {
  return count ? std::to_string(*count) + "/" + std::to_string(n) : "-";
}

std::string constraint_text(const RoundTripReport& r) {
  return r.constraint ? to_string(*r.constraint) : "-";
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

}  // namespace

std::string format_markdown(const SuiteResult& r) {
  std::string out =
      "| Scenario | Seed | Pre failures | Constraint | Post failures | Verdict |\n"
      "|---|---|---|---|---|---|\n";
  for (const auto& x : r.reports)
    out += "| " + x.scenario + " | " + std::to_string(x.seed) + " | " + fraction(x.pre_failures, x.n_evals) +
           " | " + constraint_text(x) + " | " + fraction(x.post_failures, x.n_evals) + " | " +
           to_string(x.verdict) + " |\n";
  out += "\n| Successful | Restrictive | Unsuccessful |\n|---|---|---|\n";
  out += "| " + std::to_string(r.successful) + " | " + std::to_string(r.restrictive) + " | " +
         std::to_string(r.unsuccessful) + " |\n";
  return out;
}

std::string format_csv(const SuiteResult& r) {
  std::string out = "scenario,seed,evals,pre_failures,constraint,post_failures,verdict,reason\n";
  for (const auto& x : r.reports)
    out += csv_field(x.scenario) + "," + std::to_string(x.seed) + "," + std::to_string(x.n_evals) + "," +
           std::to_string(x.pre_failures) + "," + csv_field(constraint_text(x)) + "," +
           (x.post_failures ? std::to_string(*x.post_failures) : "") + "," + to_string(x.verdict) + "," +
           csv_field(x.reason) + "\n";
  out += "\nsuccessful,restrictive,unsuccessful\n";
  out += std::to_string(r.successful) + "," + std::to_string(r.restrictive) + "," +
         std::to_string(r.unsuccessful) + "\n";
  return out;
}

}  // namespace remedy
