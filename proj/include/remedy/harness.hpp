#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "remedy/constraint.hpp"
#include "remedy/instance.hpp"
#include "remedy/localizer.hpp"
#include "remedy/search_space.hpp"

namespace remedy {

// SplitMix64 (Steele, Lea and Flood): 64-bit state advanced by the golden
// gamma 0x9e3779b97f4a7c15, output mixed with the variant-13 finalizer.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, n), by rejection; n > 0.
  std::uint64_t below(std::uint64_t n);
  // Uniform in [0, 1) with 53 bits of precision.
  double unit();

 private:
  std::uint64_t state_;
};

// n instances "p0".."p{n-1}" drawn from one generator stream, so a shorter
// sample is always a prefix of a longer one with the same seed. Each choice
// picks an alternative uniformly; each hyperparameter is drawn uniformly from
// its domain in declaration order; Anything hyperparameters stay unbound.
// Results are left unlabeled (success = false).
std::vector<PipelineInstance> sample(const PlannedPipeline& p, int n, std::uint64_t seed);

struct Scenario {
  std::string name;
  std::string description;
  PlannedPipeline pipeline;
  std::function<bool(const PipelineInstance&)> oracle;  // true = success
};

const std::vector<Scenario>& builtin_scenarios();
const Scenario* find_scenario(const std::string& name);

enum class Verdict { Successful, Restrictive, Unsuccessful };
std::string to_string(Verdict v);

struct RoundTripReport {
  std::string scenario;
  std::uint64_t seed = 0;
  int n_evals = 0;
  int pre_failures = 0;
  std::optional<Constraint> constraint;
  std::optional<int> post_failures;  // unset when no remediation was produced
  int excluded_successes = 0;        // pre-trace successes outside the remediated space
  Verdict verdict = Verdict::Unsuccessful;
  std::string reason;
};

// Seed of the fresh sample drawn from the remediated pipeline.
std::uint64_t resample_seed(std::uint64_t seed);

std::vector<PipelineInstance> labeled_sample(const Scenario& sc, int n, std::uint64_t seed);

RoundTripReport run_scenario(const Scenario& sc, int n_evals, std::uint64_t seed,
                             const LocalizerConfig& cfg = {}, int n_splits = 5);

struct SuiteResult {
  std::vector<RoundTripReport> reports;  // ordered by (scenario, seed)
  int successful = 0, restrictive = 0, unsuccessful = 0;
};

SuiteResult run_suite(const std::vector<const Scenario*>& scenarios, const std::vector<std::uint64_t>& seeds,
                      int n_evals = 20, const LocalizerConfig& cfg = {}, int n_splits = 5);

std::string format_markdown(const SuiteResult& r);
std::string format_csv(const SuiteResult& r);

}  // namespace remedy
