#include "remedy/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "remedy/errors.hpp"
#include "remedy/explainer.hpp"
#include "remedy/harness.hpp"
#include "remedy/localizer.hpp"
#include "remedy/pipeline_json.hpp"
#include "remedy/printkit.hpp"
#include "remedy/remediator.hpp"
#include "remedy/trace_io.hpp"

namespace remedy::cli {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw InputError("cannot write " + path);
}

Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(path + ": invalid JSON: " + e.what());
  }
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

PlannedPipeline load_pipeline(const std::string& path) {
  std::string text = read_file(path);
  if (ends_with(path, ".mpl")) {
    try {
      return parse_dsl(text);
    } catch (const ParseError& e) {
      throw ParseError(path + ": " + e.what());
    }
  }
  return pipeline_from_json(parse_json(text, path), path);
}

EvaluationTrace load_trace(const PlannedPipeline& p, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  EvaluationTrace trace{p, read_trace(in, path)};
  try {
    validate_trace(trace);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return trace;
}

Constraint load_constraint(const std::string& path) {
  return constraint_from_json(parse_json(read_file(path), path), path);
}

int resolve_splits(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("MARO_SPLITS"); env && *env) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1000) throw ValidationError("MARO_SPLITS must be a positive integer");
    return static_cast<int>(v);
  }
  return 5;
}

std::string pipeline_text(const PlannedPipeline& p) { return to_json(p).dump(2) + "\n"; }

std::vector<std::uint64_t> parse_seeds(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    try {
      size_t used = 0;
      out.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError("bad seed '" + item + "' in --seeds");
    }
  }
  if (out.empty()) throw ValidationError("--seeds needs at least one seed");
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Localize, remediate and explain failures in planned ML pipelines", "remedy"};
  app.require_subcommand(1);

  std::string pipeline_path, evals_path, constraint_path, out_path, report_path;
  int max_depth = 2, splits = 0;
  bool want_explain = false, want_diff = false;

  auto* localize = app.add_subcommand("localize", "Infer a root-cause constraint from a trace");
  localize->add_option("--pipeline", pipeline_path, "Planned pipeline (.json or .mpl)")->required();
  localize->add_option("--evals", evals_path, "Evaluation trace (JSONL)")->required();
  localize->add_option("--max-depth", max_depth, "Deepest if-then-else nesting to try (0-4)");
  localize->add_option("-o,--output", out_path, "Write the constraint JSON here instead of stdout");

  auto* rem = app.add_subcommand("remediate", "Rewrite a planned pipeline to exclude a failure region");
  rem->add_option("--pipeline", pipeline_path, "Planned pipeline (.json or .mpl)")->required();
  auto* c_opt = rem->add_option("--constraint", constraint_path, "Constraint JSON");
  auto* e_opt = rem->add_option("--evals", evals_path, "Evaluation trace; localizes first");
  c_opt->excludes(e_opt);
  rem->add_option("--max-depth", max_depth, "Localizer depth when --evals is given");
  rem->add_option("--splits", splits, "Ranges per comparison (default $MARO_SPLITS or 5)")
      ->check(CLI::Range(1, 1000));
  rem->add_option("-o,--output", out_path, "Write the remediated pipeline JSON here");
  rem->add_option("--report", report_path, "Write the full remediation record JSON here");
  rem->add_flag("--explain", want_explain, "Print a natural-language explanation");
  rem->add_flag("--diff", want_diff, "Print a markdown diff of the pretty-printed pipelines");

  auto* print = app.add_subcommand("print", "Pretty-print a planned pipeline");
  print->add_option("--pipeline", pipeline_path, "Planned pipeline (.json or .mpl)")->required();

  std::string diff_a, diff_b;
  auto* diff = app.add_subcommand("diff", "Markdown diff of two planned pipelines");
  diff->add_option("a", diff_a, "First pipeline")->required();
  diff->add_option("b", diff_b, "Second pipeline")->required();

  auto* roundtrip = app.add_subcommand("roundtrip", "Check that print, parse, print is a fixpoint");
  roundtrip->add_option("--pipeline", pipeline_path, "Planned pipeline (.json or .mpl)")->required();

  std::string scenario, seeds_text = "1,2,3,4,5", format = "md", trace_out, pipeline_out;
  std::uint64_t seed = 1;
  int n_evals = 20;
  bool suite = false, list = false;
  auto* sim = app.add_subcommand("simulate", "Run the synthetic sample-localize-remediate loop");
  sim->add_option("--scenario", scenario, "Built-in scenario name");
  sim->add_option("--seed", seed, "Sampler seed");
  sim->add_option("--evals", n_evals, "Evaluations per round")->check(CLI::Range(1, 100000));
  sim->add_flag("--suite", suite, "Run every scenario (or --scenario) over --seeds");
  sim->add_option("--seeds", seeds_text, "Comma-separated seeds for --suite");
  sim->add_option("--format", format, "md or csv")->check(CLI::IsMember({"md", "csv"}));
  sim->add_option("--max-depth", max_depth, "Localizer depth");
  sim->add_option("--splits", splits, "Ranges per comparison")->check(CLI::Range(1, 1000));
  sim->add_option("--trace-out", trace_out, "Write the labeled first-round trace (JSONL)");
  sim->add_option("--pipeline-out", pipeline_out, "Write the scenario's planned pipeline (JSON)");
  sim->add_flag("--list", list, "List the built-in scenarios");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    LocalizerConfig cfg;
    cfg.max_depth = max_depth;

    if (localize->parsed()) {
      PlannedPipeline p = load_pipeline(pipeline_path);
      Constraint c = solve(load_trace(p, evals_path), cfg);
      std::string text = to_json(c).dump() + "\n";
      if (out_path.empty()) out << text;
      else write_file(out_path, text);
      return 0;
    }

    if (rem->parsed()) {
      if (constraint_path.empty() && evals_path.empty())
        throw ValidationError("remediate needs --constraint or --evals");
      PlannedPipeline p = load_pipeline(pipeline_path);
      int n = resolve_splits(splits);
      Constraint c = constraint_path.empty() ? solve(load_trace(p, evals_path), cfg) : load_constraint(constraint_path);
      Remediation r = remediate(p, c, n);
      if (!out_path.empty()) write_file(out_path, pipeline_text(r.remediated));
      if (!report_path.empty()) write_file(report_path, to_json(r).dump(2) + "\n");
      if (want_explain) out << explain(c, p, n).text << "\n";
      if (want_diff) out << pipeline_diff(p, r.remediated);
      if (!want_explain && !want_diff && out_path.empty()) out << pipeline_text(r.remediated);
      return 0;
    }

    if (print->parsed()) {
      out << pretty_print(load_pipeline(pipeline_path)).text;
      return 0;
    }

    if (diff->parsed()) {
      std::string a = pretty_print(load_pipeline(diff_a)).text;
      std::string b = pretty_print(load_pipeline(diff_b)).text;
      out << text_diff(a, b, diff_a, diff_b);
      return 0;
    }

    if (roundtrip->parsed()) {
      std::string once = pretty_print(load_pipeline(pipeline_path)).text;
      std::string twice = pretty_print(parse_dsl(once)).text;
      if (once == twice) {
        out << "roundtrip ok\n";
        return 0;
      }
      out << text_diff(once, twice, "printed", "reprinted");
      err << "error: print, parse, print is not a fixpoint\n";
      return 2;
    }

    if (sim->parsed()) {
      if (list) {
        for (const auto& s : builtin_scenarios()) out << s.name << "\t" << s.description << "\n";
        return 0;
      }
      std::vector<const Scenario*> chosen;
      if (!scenario.empty()) {
        const Scenario* sc = find_scenario(scenario);
        if (!sc) throw ValidationError("unknown scenario '" + scenario + "' (see simulate --list)");
        chosen.push_back(sc);
      } else if (suite) {
        for (const auto& s : builtin_scenarios()) chosen.push_back(&s);
      } else {
        throw ValidationError("simulate needs --scenario, --suite or --list");
      }
      std::vector<std::uint64_t> seeds = suite ? parse_seeds(seeds_text) : std::vector<std::uint64_t>{seed};
      if (!pipeline_out.empty()) write_file(pipeline_out, pipeline_text(chosen.front()->pipeline));
      if (!trace_out.empty()) {
        std::ostringstream ss;
        write_trace(ss, labeled_sample(*chosen.front(), n_evals, seeds.front()));
        write_file(trace_out, ss.str());
      }
      SuiteResult r = run_suite(chosen, seeds, n_evals, cfg, resolve_splits(splits));
      out << (format == "csv" ? format_csv(r) : format_markdown(r));
      return 0;
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace remedy::cli
