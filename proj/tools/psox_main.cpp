// Command-line front end. Each verb maps onto one library entry point in
// psox/runner.hpp; this file only parses flags, resolves defaults, and prints
// where the artifacts landed. Exit codes: 0 success, 1 bad arguments (ours or
// CLI parse errors), 2 integrity refusal (checkpoint/plan disagreement).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "psox/common.hpp"
#include "psox/configspace.hpp"
#include "psox/runner.hpp"

namespace {

using namespace psox;

// "1,3,5-7" -> {1,3,5,6,7}; "all" -> lo..hi
std::vector<int> parse_id_list(const std::string& text, int lo, int hi,
                               const std::string& what) {
  std::vector<int> out;
  if (text == "all") {
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    require(!tok.empty(), what + ": empty entry in '" + text + "'");
    const size_t dash = tok.find('-');
    long long a, b;
    if (dash == std::string::npos) {
      a = b = parse_int(tok);
    } else {
      a = parse_int(tok.substr(0, dash));
      b = parse_int(tok.substr(dash + 1));
    }
    require(a <= b, what + ": descending range '" + tok + "'");
    require(a >= lo && b <= hi, what + ": '" + tok + "' is outside " +
                                    fmt_int(lo) + ".." + fmt_int(hi));
    for (long long v = a; v <= b; ++v) out.push_back(static_cast<int>(v));
    pos = comma + 1;
  }
  require(!out.empty(), what + ": empty list");
  return out;
}

// "star,ring" -> kinds; "all" -> every topology
std::vector<TopologyKind> parse_topology_list(const std::string& text) {
  if (text == "all")
    return {TopologyKind::star, TopologyKind::ring, TopologyKind::von_neumann};
  std::vector<TopologyKind> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(topology_from_string(text.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_point(const std::string& text) {
  std::vector<double> out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(pos, comma - pos);
    require(!tok.empty(), "--x: empty coordinate in '" + text + "'");
    out.push_back(parse_double(tok));
    pos = comma + 1;
  }
  return out;
}

// the eight corners of the continuous axes at mid-grid discrete values; a
// cheap stand-in for the full grid when smoke-testing a pipeline
std::vector<HyperParams> corner_configs() {
  std::vector<HyperParams> out;
  for (double c1 : {0.3, 0.9})
    for (double c2 : {0.2, 0.7})
      for (double w : {0.5, 0.9}) out.push_back({c1, c2, w, 50, 2, 2, 1});
  return out;
}

// --configs grid|corners|<path>; the file format is one serialized config per
// line, blank lines ignored
std::vector<HyperParams> load_configs(const std::string& source,
                                      std::string& provenance) {
  if (source == "grid") {
    provenance = "grid";
    return full_grid(TopologyKind::star).configs;
  }
  if (source == "corners") {
    provenance = "list";
    return corner_configs();
  }
  std::ifstream in(source);
  require(in.good(), "--configs: cannot open '" + source + "'");
  std::vector<HyperParams> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out.push_back(parse_config(line));
  }
  require(!out.empty(), "--configs: no configs in '" + source + "'");
  provenance = "file:" + source;
  return out;
}

std::string default_out_dir() {
  const char* env = std::getenv("PSOX_OUT");
  return (env != nullptr && *env != '\0') ? env : ".";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "lofo") return Scheme::lofo;
  if (s == "loio") return Scheme::loio;
  throw ArgumentError("--scheme must be 'lofo' or 'loio', got '" + s + "'");
}

LearnerKind kind_from_string(const std::string& s) {
  if (s == "dt") return LearnerKind::dt;
  if (s == "rf") return LearnerKind::rf;
  throw ArgumentError("--learner must be 'dt' or 'rf', got '" + s + "'");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"particle swarm benchmarking, landscape features, and"
               " explainable config selection"};
  app.require_subcommand(1);

  // shared flag storage; each verb registers only the flags it reads
  std::string topology_text = "star";
  std::string fids_text = "1", iids_text = "1", dims_text = "2";
  std::string out_dir = default_out_dir();
  std::string runs_csv, ela_csv;
  uint64_t seed = 1;
  int depth = 7;

  auto* run_cmd = app.add_subcommand(
      "run", "execute a seeded sweep with checkpoint/resume -> runs.csv");
  std::string configs_text = "grid";
  std::string run_iids = "1-5";
  int reps = 5, jobs = 1, budget = 0;
  run_cmd->add_option("--topology", topology_text,
                      "star|ring|von_neumann, comma list, or 'all'")
      ->capture_default_str();
  run_cmd->add_option("--configs", configs_text,
                      "'grid' (full 1728-point grid), 'corners' (8 continuous-"
                      "axis corners), or a file of serialized configs")
      ->capture_default_str();
  run_cmd->add_option("--fids", fids_text, "function ids, e.g. 1,3,5-7 or 'all'")
      ->capture_default_str();
  run_cmd->add_option("--iids", run_iids, "instance ids")->capture_default_str();
  run_cmd->add_option("--dims", dims_text, "dimensions")->capture_default_str();
  run_cmd->add_option("--reps", reps, "repetitions per crossing")
      ->capture_default_str();
  auto* budget_opt = run_cmd->add_option(
      "--budget", budget,
      "iteration budget for every requested dimension (default map: dim 2 -> "
      "100, dim 5 -> 500)");
  run_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  run_cmd->add_option("--jobs", jobs, "worker threads")->capture_default_str();
  run_cmd->add_option("--out", out_dir, "output directory (default: $PSOX_OUT or .)");
  run_cmd->callback([&] {
    ExperimentPlan plan;
    plan.topologies = parse_topology_list(topology_text);
    plan.configs = load_configs(configs_text, plan.config_source);
    plan.fids = parse_id_list(fids_text, 1, 24, "--fids");
    plan.iids = parse_id_list(run_iids, 1, 1000000, "--iids");
    plan.dims = parse_id_list(dims_text, 1, 40, "--dims");
    plan.reps = reps;
    if (budget_opt->count() > 0) {
      plan.budget_by_dim.clear();
      for (int d : plan.dims) plan.budget_by_dim[d] = budget;
    }
    plan.master_seed = seed;
    plan.out_dir = out_dir;
    plan.jobs = jobs;
    const RunOutcome r = cmd_run(plan);
    std::cout << "runs: " << r.runs_path << "\n"
              << "executed " << r.executed << ", resumed " << r.resumed
              << ", failed " << r.failed << "\n";
    if (r.failed > 0) std::cout << "failures: " << r.failures_path << "\n";
  });

  auto* ela_cmd = app.add_subcommand(
      "ela", "landscape features per (fid, iid, dim) -> ela.csv");
  size_t ela_n = 1000;
  ela_cmd->add_option("--fids", fids_text, "function ids")->capture_default_str();
  ela_cmd->add_option("--iids", iids_text, "instance ids")->capture_default_str();
  ela_cmd->add_option("--dims", dims_text, "dimensions")->capture_default_str();
  ela_cmd->add_option("--n", ela_n, "sample points per instance")
      ->capture_default_str();
  ela_cmd->add_option("--seed", seed, "master seed")->capture_default_str();
  ela_cmd->add_option("--out", out_dir, "output directory (default: $PSOX_OUT or .)");
  ela_cmd->callback([&] {
    const ElaOutcome r =
        cmd_ela(parse_id_list(fids_text, 1, 24, "--fids"),
                parse_id_list(iids_text, 1, 1000000, "--iids"),
                parse_id_list(dims_text, 1, 40, "--dims"), ela_n, seed, out_dir);
    print_warnings(r.warnings);
    std::cout << "ela: " << r.csv_path << "\n";
  });

  auto* stats_cmd = app.add_subcommand(
      "stats", "per-function performance stats from a run table -> stats.csv");
  stats_cmd->add_option("--runs", runs_csv, "run table (default: <out>/runs.csv)");
  stats_cmd->add_option("--out", out_dir, "output directory (default: $PSOX_OUT or .)");
  stats_cmd->callback([&] {
    if (runs_csv.empty()) runs_csv = out_dir + "/runs.csv";
    std::cout << "stats: " << cmd_stats(runs_csv, out_dir) << "\n";
  });

  auto* explain_cmd = app.add_subcommand(
      "explain", "surrogate-model SHAP attributions per (topology, fid, dim) "
                 "-> shap.csv, model JSON, swarm SVG");
  explain_cmd->add_option("--runs", runs_csv, "run table (default: <out>/runs.csv)");
  explain_cmd->add_option("--seed", seed, "attribution seed")->capture_default_str();
  explain_cmd->add_option("--out", out_dir, "output directory (default: $PSOX_OUT or .)");
  explain_cmd->callback([&] {
    if (runs_csv.empty()) runs_csv = out_dir + "/runs.csv";
    const ExplainOutcome r = cmd_explain(runs_csv, out_dir, seed);
    print_warnings(r.warnings);
    std::cout << "shap: " << r.csv_path << "\n"
              << r.model_paths.size() << " model dumps, " << r.svg_paths.size()
              << " swarm plots\n";
  });

  auto* learn_cmd = app.add_subcommand(
      "learn", "label best configs and export per-parameter decision rules "
               "-> dataset.csv, rules_<param>.txt");
  learn_cmd->add_option("--runs", runs_csv, "run table (default: <out>/runs.csv)");
  learn_cmd->add_option("--ela", ela_csv, "feature table (default: <out>/ela.csv)");
  learn_cmd->add_option("--topology", topology_text, "topology slice to learn on")
      ->capture_default_str();
  learn_cmd->add_option("--depth", depth, "tree depth")->capture_default_str();
  learn_cmd->add_option("--out", out_dir, "output directory (default: $PSOX_OUT or .)");
  learn_cmd->callback([&] {
    if (runs_csv.empty()) runs_csv = out_dir + "/runs.csv";
    if (ela_csv.empty()) ela_csv = out_dir + "/ela.csv";
    const LearnOutcome r = cmd_learn(runs_csv, ela_csv,
                                     topology_from_string(topology_text), depth,
                                     out_dir);
    for (const std::string& e : r.exclusions)
      std::cerr << "excluded: " << e << "\n";
    std::cout << "dataset: " << r.dataset_path << "\n"
              << r.rules_paths.size() << " rule files\n";
  });

  auto* validate_cmd = app.add_subcommand(
      "validate", "cross-validated selection report -> validation.csv");
  std::string scheme_text = "lofo", kind_text = "dt";
  validate_cmd->add_option("--runs", runs_csv, "run table (default: <out>/runs.csv)");
  validate_cmd->add_option("--ela", ela_csv, "feature table (default: <out>/ela.csv)");
  validate_cmd->add_option("--topology", topology_text, "topology slice to validate")
      ->capture_default_str();
  validate_cmd->add_option("--scheme", scheme_text, "lofo (leave-one-function-out)"
                           " or loio (leave-one-instance-out)")
      ->capture_default_str();
  validate_cmd->add_option("--learner", kind_text, "dt or rf")->capture_default_str();
  validate_cmd->add_option("--depth", depth, "tree depth")->capture_default_str();
  validate_cmd->add_option("--seed", seed, "forest seed")->capture_default_str();
  validate_cmd->add_option("--out", out_dir, "output directory (default: $PSOX_OUT or .)");
  validate_cmd->callback([&] {
    if (runs_csv.empty()) runs_csv = out_dir + "/runs.csv";
    if (ela_csv.empty()) ela_csv = out_dir + "/ela.csv";
    const ValidateOutcome r = cmd_validate(
        runs_csv, ela_csv, topology_from_string(topology_text),
        scheme_from_string(scheme_text), kind_from_string(kind_text), depth,
        seed, out_dir);
    std::cout << "validation: " << r.csv_path << "\n";
    for (const auto& [method, loss] : r.report.mean_loss)
      std::cout << "mean aocc_loss " << method << " " << fmt_double(loss) << "\n";
  });

  auto* bench_cmd = app.add_subcommand(
      "bench-eval", "evaluate one benchmark point, print the objective value");
  int fid = 1, iid = 1, dim = 2;
  std::string x_text;
  bench_cmd->add_option("--fid", fid, "function id")->capture_default_str();
  bench_cmd->add_option("--iid", iid, "instance id")->capture_default_str();
  bench_cmd->add_option("--dim", dim, "dimension")->capture_default_str();
  bench_cmd->add_option("--x", x_text, "comma-separated coordinates")->required();
  bench_cmd->callback([&] {
    std::cout << fmt_double(bench_eval(fid, iid, dim, parse_point(x_text)))
              << "\n";
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    (void)app.exit(e);  // prints the parse error; our exit-code contract is 1
    return 1;
  } catch (const IntegrityError& e) {
    std::cerr << "integrity error: " << e.what() << "\n";
    return 2;
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
