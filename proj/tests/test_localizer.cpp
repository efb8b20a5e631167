#include <chrono>
#include <set>

#include "doctest.h"
#include "support.hpp"

using namespace remedy;
using namespace testing;

namespace {

EvaluationTrace fixture_trace(const std::string& pipe, const std::string& trace) {
  return {load_fixture_pipeline(pipe), load_fixture_trace(trace)};
}

std::vector<PipelineInstance> first_n(const std::vector<PipelineInstance>& xs, std::size_t n) {
  return std::vector<PipelineInstance>(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(std::min(n, xs.size())));
}

}  // namespace

TEST_CASE("imputer trace localizes to strategy = most_frequent") {
  auto t = fixture_trace("imputer.json", "imputer_trace.jsonl");
  auto c = solve(t);
  CHECK(c == Constraint(atom::Eq{"SimpleImputer", "strategy", "most_frequent"}));
  CHECK(solve_atomic(t) == AtomicConstraint{atom::Eq{"SimpleImputer", "strategy", "most_frequent"}});
}

TEST_CASE("(e) trace localizes to n_neighbors <= 8") {
  auto t = fixture_trace("pipeline_e.json", "e_trace.jsonl");
  CHECK(solve(t) == Constraint(atom::CmpConst{"KNeighborsClassifier", "n_neighbors", CmpOp::Le, std::int64_t{8}}));
  // Independent check: the limit is the largest successful observation.
  std::int64_t best = 0;
  for (const auto& x : t.instances)
    if (x.success) best = std::max(best, std::get<std::int64_t>(*x.find("KNeighborsClassifier", "n_neighbors")));
  CHECK(best == 8);
}

TEST_CASE("(g) trace localizes to n_components <= k") {
  auto p = load_fixture_pipeline("pipeline_g.json");
  std::vector<PipelineInstance> xs;
  int n = 0;
  for (std::int64_t nc : {3, 12, 30, 40})
    for (std::int64_t k : {5, 20, 35}) {
      PipelineInstance x;
      x.id = "g" + std::to_string(n++);
      x.bindings = {{{"PCA", "n_components"}, nc}, {{"SelectKBest", "k"}, k}};
      x.success = nc <= k;
      xs.push_back(x);
    }
  auto c = solve({p, xs});
  CHECK(c == Constraint(atom::CmpParam{"PCA", "n_components", CmpOp::Le, "SelectKBest", "k"}));
}

TEST_CASE("all-success trace gives true, all-failure trace is an error") {
  auto t = fixture_trace("imputer.json", "imputer_trace.jsonl");
  for (auto& x : t.instances) x.success = true;
  CHECK(solve(t).is_true());
  CHECK(solve_atomic(t) == AtomicConstraint{atom::LitTrue{}});
  for (auto& x : t.instances) x.success = false;
  CHECK_THROWS_AS(solve(t), AllFailedError);
  CHECK(solve_atomic(t) == AtomicConstraint{atom::LitFalse{}});
}

TEST_CASE("(k) trace gives the expected tree") {
  auto t = fixture_trace("pipeline_k.json", "k_trace.jsonl");
  auto c = solve(t);
  CHECK(c == load_fixture_constraint("k_constraint.json"));
  CHECK(separates(c, t.instances));
}

TEST_CASE("(f) trace: a depth-1 separator that agrees with the hidden rule") {
  auto t = fixture_trace("pipeline_f.json", "f_trace.jsonl");
  auto c = solve(t);
  INFO(to_string(c));
  CHECK(depth(c) == 1);
  CHECK(separates(c, t.instances));
  CHECK(brute_force_depth1(t.instances));
  // No atom on its own explains this trace.
  CHECK_FALSE(solve_atomic(t).has_value());
}

TEST_CASE("(f) hand-built 12-instance trace: any exact depth-1 separator") {
  auto p = load_fixture_pipeline("pipeline_f.json");
  std::vector<PipelineInstance> xs;
  int n = 0;
  for (bool whiten : {true, false})
    for (const char* solver : {"arpack", "full"})
      for (int rep = 0; rep < 3; ++rep) {
        PipelineInstance x;
        x.id = "f" + std::to_string(n++);
        x.bindings = {{{"PCA", "svd_solver"}, std::string(solver)}, {{"PCA", "whiten"}, whiten}};
        x.success = !(whiten && std::string(solver) == "arpack");
        xs.push_back(x);
      }
  REQUIRE(xs.size() == 12);
  auto c = solve({p, xs});
  INFO(to_string(c));
  CHECK(depth(c) == 1);
  CHECK(separates(c, xs));
  for (const auto& x : enumerate(p)) {
    bool hidden = !(std::get<bool>(*x.find("PCA", "whiten")) && std::get<std::string>(*x.find("PCA", "svd_solver")) == "arpack");
    CHECK(eval(c, x) == hidden);
  }
}

TEST_CASE("atom-separable traces never come back as a tree") {
  SplitMix64 rng(21);
  int tested = 0;
  for (int iter = 0; iter < 200; ++iter) {
    auto p = small_pipeline(rng);
    auto a = random_atom(rng, p);
    auto xs = label(sample(p, 20, rng.next()), [&](const PipelineInstance& x) { return eval(a, x); });
    if (std::none_of(xs.begin(), xs.end(), [](const auto& x) { return x.success; })) continue;
    auto c = solve({p, xs});
    CHECK(depth(c) == 0);
    CHECK(c.as_atom());
    CHECK(separates(c, xs));
    ++tested;
  }
  CHECK(tested > 100);
}

TEST_CASE("property: exact separation and brute-force agreement on random traces") {
  SplitMix64 rng(22);
  int solvable = 0, unsolvable = 0;
  for (int iter = 0; iter < 300; ++iter) {
    auto p = small_pipeline(rng);
    auto xs = sample(p, 4 + static_cast<int>(rng.below(14)), rng.next());
    // Mix of random labels and depth-1 rules.
    if (rng.below(2) == 0) {
      for (auto& x : xs) x.success = rng.below(2) == 1;
    } else {
      auto c = Constraint::ite(random_atom(rng, p), random_atom(rng, p), random_atom(rng, p));
      for (auto& x : xs) x.success = eval(c, x);
    }
    if (std::none_of(xs.begin(), xs.end(), [](const auto& x) { return x.success; })) continue;
    bool brute = brute_force_depth1(xs);
    std::optional<Constraint> got;
    try {
      got = solve({p, xs}, LocalizerConfig{1, 5});
    } catch (const NoExplanationError&) {
    }
    INFO("trace size " << xs.size());
    CHECK(got.has_value() == brute);
    if (got) {
      CHECK(separates(*got, xs));
      CHECK(depth(*got) <= 1);
      ++solvable;
    } else {
      ++unsolvable;
    }
  }
  CHECK(solvable > 50);
  CHECK(unsolvable > 10);
}

TEST_CASE("property: minimal depth") {
  SplitMix64 rng(23);
  for (int iter = 0; iter < 150; ++iter) {
    auto p = small_pipeline(rng);
    auto xs = sample(p, 12, rng.next());
    for (auto& x : xs) x.success = rng.below(3) != 0;
    if (std::none_of(xs.begin(), xs.end(), [](const auto& x) { return x.success; })) continue;
    int d0 = -1;
    for (int d = 0; d <= 3 && d0 < 0; ++d) {
      try {
        solve({p, xs}, LocalizerConfig{d, 5});
        d0 = d;
      } catch (const NoExplanationError&) {
      }
    }
    if (d0 < 0) continue;
    auto c = solve({p, xs}, LocalizerConfig{3, 5});
    CHECK(depth(c) == d0);
    CHECK(separates(c, xs));
  }
}

TEST_CASE("determinism") {
  SplitMix64 rng(24);
  for (int iter = 0; iter < 50; ++iter) {
    auto p = small_pipeline(rng);
    auto xs = sample(p, 15, rng.next());
    for (auto& x : xs) x.success = rng.below(2) == 1;
    if (std::none_of(xs.begin(), xs.end(), [](const auto& x) { return x.success; })) continue;
    auto run = [&]() -> std::string {
      try {
        return to_json(solve({p, xs})).dump();
      } catch (const NoExplanationError& e) {
        return std::string("error: ") + e.what();
      }
    };
    CHECK(run() == run());
  }
}

TEST_CASE("threshold monotonicity on growing samples") {
  auto sc = find_scenario("knn-small-data");
  REQUIRE(sc);
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto big = labeled_sample(*sc, 50, seed);
    std::optional<double> prev;
    for (std::size_t n : {10u, 20u, 35u, 50u}) {
      auto xs = first_n(big, n);
      if (std::none_of(xs.begin(), xs.end(), [](const auto& x) { return x.success; })) continue;
      auto c = solve({sc->pipeline, xs});
      auto* a = c.as_atom();
      if (!a) continue;
      auto* cc = std::get_if<atom::CmpConst>(a);
      if (!cc || cc->cmp != CmpOp::Le) continue;
      double lim = *as_number(cc->limit);
      if (prev) CHECK(lim >= *prev);
      CHECK(lim <= 16);
      prev = lim;
    }
  }
}

TEST_CASE("candidate order: kind-major over a categorical key") {
  PipelineInstance a, b;
  a.id = "a";
  b.id = "b";
  a.bindings = {{{"Op", "h"}, std::string("a")}};
  b.bindings = {{{"Op", "h"}, std::string("b")}};
  auto cs = candidate_atoms({a, b});
  std::vector<AtomicConstraint> want{atom::Eq{"Op", "h", "a"}, atom::Eq{"Op", "h", "b"}, atom::Neq{"Op", "h", "a"},
                                     atom::Neq{"Op", "h", "b"}, atom::Absent{"Op", "h"}, atom::Present{"Op", "h"}};
  CHECK(cs == want);
}

TEST_CASE("candidate counts: limits from observed numbers, four parameter comparisons") {
  std::vector<PipelineInstance> xs;
  int i = 0;
  for (std::int64_t v : {3, 8, 20}) {
    PipelineInstance x;
    x.id = "p" + std::to_string(i++);
    x.bindings = {{{"KNeighborsClassifier", "n_neighbors"}, v}, {{"KNeighborsClassifier", "leaf_size"}, v * 2}};
    xs.push_back(x);
  }
  auto cs = candidate_atoms(xs);
  std::set<std::pair<int, std::int64_t>> limits;
  int cmp2 = 0;
  for (const auto& a : cs) {
    if (auto* c = std::get_if<atom::CmpConst>(&a); c && c->hp == "n_neighbors")
      limits.insert({static_cast<int>(c->cmp), std::get<std::int64_t>(c->limit)});
    if (std::holds_alternative<atom::CmpParam>(a)) ++cmp2;
  }
  std::set<std::pair<int, std::int64_t>> want;
  for (std::int64_t v : {3, 8, 20}) {
    want.insert({static_cast<int>(CmpOp::Le), v});
    want.insert({static_cast<int>(CmpOp::Ge), v});
  }
  CHECK(limits == want);
  CHECK(cmp2 == 4);
}

TEST_CASE("solve_atomic returns nothing when no atom fits") {
  auto t = fixture_trace("pipeline_k.json", "k_trace.jsonl");
  CHECK_FALSE(solve_atomic(t).has_value());
}

TEST_CASE("NoExplanation reports the best partial separator") {
  auto t = fixture_trace("pipeline_k.json", "k_trace.jsonl");
  try {
    solve(t, LocalizerConfig{0, 5});
    FAIL("expected NoExplanationError");
  } catch (const NoExplanationError& e) {
    CHECK_FALSE(e.best_partial().empty());
    CHECK_FALSE(e.misclassified().empty());
    for (const auto& id : e.misclassified()) CHECK(std::string(e.what()).find(id) != std::string::npos);
  }
}

TEST_CASE("flaky labels cannot be separated") {
  auto t = fixture_trace("imputer.json", "imputer_trace.jsonl");
  auto dup = t.instances.front();
  dup.id = "dup";
  dup.success = !dup.success;
  t.instances.push_back(dup);
  CHECK_THROWS_AS(solve(t), NoExplanationError);
}

TEST_CASE("validation") {
  auto t = fixture_trace("imputer.json", "imputer_trace.jsonl");
  CHECK_THROWS_AS(solve(t, LocalizerConfig{5, 5}), ValidationError);
  CHECK_THROWS_AS(solve(t, LocalizerConfig{-1, 5}), ValidationError);
  auto dup = t;
  dup.instances.push_back(dup.instances.front());
  CHECK_THROWS_AS(validate_trace(dup), ValidationError);
  auto stray = t;
  stray.instances.front().bindings[{"SimpleImputer", "strategy"}] = std::string("mode");
  CHECK_THROWS_AS(validate_trace(stray), ValidationError);
  CHECK_THROWS_AS(validate_trace(EvaluationTrace{t.pipeline, {}}), ValidationError);
  CHECK_NOTHROW(validate_trace(t));
}

TEST_CASE("depth-4 search on a small trace stays fast") {
  SplitMix64 rng(25);
  auto p = small_pipeline(rng);
  auto xs = sample(p, 20, 3);
  for (auto& x : xs) x.success = rng.below(2) == 1;
  xs.front().success = true;
  auto start = std::chrono::steady_clock::now();
  try {
    auto c = solve({p, xs}, LocalizerConfig{4, 5});
    CHECK(separates(c, xs));
  } catch (const NoExplanationError&) {
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
}
