#pragma once
// Experiment orchestration: expands a plan into independently seeded runs,
// executes them on a worker pool with checkpoint/resume, and emits the
// canonical CSV/JSON/SVG artifacts the analysis verbs consume.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psox/ela.hpp"
#include "psox/learner.hpp"
#include "psox/metrics.hpp"
#include "psox/models.hpp"
#include "psox/swarm.hpp"

namespace psox {

struct ExperimentPlan {
  std::vector<TopologyKind> topologies = {TopologyKind::star};
  std::vector<HyperParams> configs;    // run seeds key off the index order
  std::string config_source = "grid";  // provenance note: "grid", "file:...", "list"
  std::vector<int> fids = {1};
  std::vector<int> iids = {1};
  std::vector<int> dims = {2};
  int reps = 5;
  std::map<int, int> budget_by_dim = {{2, 100}, {5, 500}};  // iterations
  uint64_t master_seed = 1;
  std::string out_dir = ".";
  int jobs = 1;
};

// |topologies| * |configs| * |fids| * |iids| * |dims| * reps
size_t plan_total(const ExperimentPlan& plan);
// mapped budget for the dimension; unmapped dimensions are an argument error
int budget_for(const ExperimentPlan& plan, int dim);
uint64_t run_seed(uint64_t master_seed, TopologyKind topology, size_t config_index,
                  int fid, int iid, int dim, int rep);

// one full PSO run folded into its record (AOCC over the trajectory, final
// regret against the instance optimum)
RunRecord execute_run(TopologyKind topology, const HyperParams& config, int fid,
                      int iid, int dim, int rep, int budget, uint64_t seed);

// a record plus its position in the plan's config list, which the canonical
// sort and the checkpoint need
struct IndexedRun {
  size_t config_index = 0;
  RunRecord record;
  bool operator==(const IndexedRun&) const = default;
};

std::string run_csv_header();
std::string run_csv_row(const IndexedRun& r);
IndexedRun parse_run_row(const std::string& line);
// header-checked read of a full run table
std::vector<IndexedRun> read_run_csv(const std::string& path);
std::vector<RunRecord> records_of(const std::vector<IndexedRun>& rows);

struct RunOutcome {
  size_t executed = 0;  // runs performed by this invocation
  size_t resumed = 0;   // keys found completed in the checkpoint
  size_t failed = 0;    // rows appended to failures.csv
  std::string runs_path, checkpoint_path, failures_path;
};

// Executes every run in the plan. Completed rows append to
// <out>/checkpoint.csv as they finish; re-invocation skips keys already
// there (a checkpoint that disagrees with the plan refuses to resume).
// Per-run failures land in <out>/failures.csv without stopping the sweep.
// The final <out>/runs.csv is sorted by (topology, fid, iid, dim, rep,
// config_index) and is byte-identical for a given plan and master seed no
// matter how often the sweep was interrupted or how many workers ran it.
RunOutcome cmd_run(const ExperimentPlan& plan);

// landscape features for every (fid, iid, dim) crossing: <out>/ela.csv.
// Per-instance feature warnings are collected, not fatal.
struct ElaOutcome {
  std::string csv_path;
  std::vector<std::string> warnings;
};
ElaOutcome cmd_ela(const std::vector<int>& fids, const std::vector<int>& iids,
                   const std::vector<int>& dims, size_t n, uint64_t seed,
                   const std::string& out_dir);
std::vector<ElaVector> read_ela_csv(const std::string& path);

// per-function performance stats for every (topology, dim) group in the run
// table: <out>/stats.csv
std::string cmd_stats(const std::string& runs_csv, const std::string& out_dir);

// SHAP attributions per (topology, fid, dim) group: one combined
// <out>/shap.csv, plus a surrogate-model JSON dump and a swarm-plot SVG per
// group
struct ExplainOutcome {
  std::string csv_path;
  std::vector<std::string> model_paths;
  std::vector<std::string> svg_paths;
  std::vector<std::string> warnings;
};
ExplainOutcome cmd_explain(const std::string& runs_csv, const std::string& out_dir,
                           uint64_t seed);

// labeled dataset plus per-parameter decision rules for one topology's runs:
// <out>/dataset.csv, <out>/rules_<param>.txt
struct LearnOutcome {
  std::string dataset_path;
  std::vector<std::string> rules_paths;
  std::vector<std::string> exclusions;
};
LearnOutcome cmd_learn(const std::string& runs_csv, const std::string& ela_csv,
                       TopologyKind topology, int depth, const std::string& out_dir);

// cross-validated fold report for one topology's runs: <out>/validation.csv
struct ValidateOutcome {
  std::string csv_path;
  ValidationReport report;
};
ValidateOutcome cmd_validate(const std::string& runs_csv, const std::string& ela_csv,
                             TopologyKind topology, Scheme scheme, LearnerKind kind,
                             int depth, uint64_t seed, const std::string& out_dir);

// single benchmark probe: objective value of x on (fid, iid, dim)
double bench_eval(int fid, int iid, int dim, const std::vector<double>& x);

// SVG swarm plot of a SHAP table: one horizontal band per feature, points at
// (shap value, jittered y), fill encoding the feature value on a blue-to-red
// ramp. Deterministic bytes for a given table.
std::string shap_swarm_svg(const ShapTable& table);

}  // namespace psox
