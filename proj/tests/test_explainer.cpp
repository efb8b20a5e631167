#include "doctest.h"
#include "support.hpp"

#include "remedy/explainer.hpp"

using namespace remedy;
using namespace testing;

namespace {

std::string golden(const std::string& name) {
  auto s = slurp(data_path("golden/" + name));
  if (!s.empty() && s.back() == '\n') s.pop_back();
  return s;
}

int leaves(const Constraint& c) {
  if (auto* ite = c.as_ite()) return leaves(*ite->then_branch) + leaves(*ite->else_branch);
  return 1;
}

int count_or(const std::string& text) {
  int n = 0;
  std::size_t pos = 0;
  while ((pos = text.find("\nOR\n", pos)) != std::string::npos) {
    ++n;
    pos += 4;
  }
  return n;
}

}  // namespace

TEST_CASE("imputer explanation") {
  CHECK(explain(atom::Eq{"SimpleImputer", "strategy", "most_frequent"}).text ==
        "Try setting argument 'strategy' in operator SimpleImputer to 'most_frequent'");
  auto p = load_fixture_pipeline("imputer.json");
  CHECK(explain(atom::Eq{"SimpleImputer", "strategy", "most_frequent"}, p).text ==
        "Try setting argument 'strategy' in operator SimpleImputer to 'most_frequent'");
}

TEST_CASE("(k) explanation against its pipeline") {
  auto p = load_fixture_pipeline("pipeline_k.json");
  auto c = load_fixture_constraint("k_constraint.json");
  CHECK(explain(c, p).text == golden("k_explanation.txt"));
}

TEST_CASE("templates") {
  CHECK(explain(atom::LitTrue{}).text == "No changes needed");
  CHECK(explain(atom::CmpConst{"KNeighborsClassifier", "n_neighbors", CmpOp::Le, std::int64_t{8}}).text ==
        "Try setting argument 'n_neighbors' in operator KNeighborsClassifier to a value <= 8");
  CHECK(explain(atom::Neq{"PCA", "svd_solver", "arpack"}).text ==
        "Try avoiding value 'arpack' for argument 'svd_solver' in operator PCA");
  CHECK(explain(atom::Present{"OrdinalEncoder", "handle_unknown"}).text ==
        "Try ensuring that argument 'handle_unknown' in operator OrdinalEncoder is present for all runs (a Choice "
        "operator may need to be removed)");
  CHECK(explain(atom::CmpParam{"PCA", "n_components", CmpOp::Lt, "SelectKBest", "k"}).text ==
        "Try ensuring argument 'n_components' in operator PCA is less than argument 'k' in operator SelectKBest");
  CHECK(explain(atom::LitFalse{}).text == "No configuration can succeed");
}

TEST_CASE("context-free conjunction and alternatives") {
  auto c = Constraint::ite(atom::Eq{"StandardScaler", "with_mean", false}, atom::LitTrue{},
                           atom::Present{"OrdinalEncoder", "handle_unknown"});
  CHECK(explain(c).text ==
        "Try setting argument 'with_mean' in operator StandardScaler to 'False'\n"
        "OR\n"
        "Try avoiding value 'False' for argument 'with_mean' in operator StandardScaler\n"
        " and try ensuring that argument 'handle_unknown' in operator OrdinalEncoder is present for all runs (a "
        "Choice operator may need to be removed)");
}

TEST_CASE("property: alternatives follow the tree shape, text is stable") {
  SplitMix64 rng(41);
  for (int i = 0; i < 300; ++i) {
    auto c = random_constraint(rng, 3);
    auto e = explain(c);
    CHECK(e.text == explain(c).text);
    CHECK(e.text.find(" \n") == std::string::npos);
    CHECK(e.text.back() != '\n');
    // LitFalse leaves contribute no alternative.
    int lit_false_free = static_cast<int>(e.alternatives.size());
    CHECK(lit_false_free <= leaves(c));
    if (!e.alternatives.empty()) CHECK(count_or(e.text) + 1 == lit_false_free);
  }
}

TEST_CASE("property: conjunct count matches and-fragments") {
  SplitMix64 rng(42);
  for (int i = 0; i < 200; ++i) {
    std::vector<Constraint> parts;
    int n = 1 + static_cast<int>(rng.below(4));
    for (int k = 0; k < n; ++k) {
      AtomicConstraint a = loose_atom(rng);
      while (std::holds_alternative<atom::LitTrue>(a) || std::holds_alternative<atom::LitFalse>(a)) a = loose_atom(rng);
      parts.push_back(a);
    }
    auto c = Constraint::conjunction(parts);
    auto e = explain(c);
    REQUIRE(e.alternatives.size() == 1);
    std::size_t conjuncts = c.as_and() ? c.as_and()->children.size() : 1;
    CHECK(e.alternatives[0].size() == conjuncts);
    std::size_t ands = 0, pos = 0;
    while ((pos = e.text.find("\n and ", pos)) != std::string::npos) {
      ++ands;
      pos += 6;
    }
    CHECK(ands + 1 == conjuncts);
  }
}

TEST_CASE("property: double negation does not change the text") {
  SplitMix64 rng(43);
  for (int i = 0; i < 500; ++i) {
    auto a = loose_atom(rng);
    CHECK(explain(negate_atom(negate_atom(a))).text == explain(a).text);
  }
}

TEST_CASE("pipeline-aware rendering of a (g) comparison") {
  auto p = load_fixture_pipeline("pipeline_g.json");
  auto e = explain(load_fixture_constraint("g_le.json"), p);
  CHECK(e.text ==
        "Try ensuring argument 'n_components' in operator PCA is less than or equal to argument 'k' in operator "
        "SelectKBest");
}

TEST_CASE("an unsatisfiable branch drops out of the pipeline-aware text") {
  auto p = load_fixture_pipeline("imputer.json");
  auto c = Constraint::ite(atom::Eq{"SimpleImputer", "strategy", "mean"}, atom::Neq{"SimpleImputer", "strategy", "mean"},
                           atom::LitTrue{});
  CHECK(explain(c, p).text == "Try avoiding value 'mean' for argument 'strategy' in operator SimpleImputer");
}
