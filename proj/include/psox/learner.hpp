#pragma once
// Configuration learning: turns run tables plus landscape features into a
// labeled dataset, trains interpretable per-parameter classifiers, and scores
// them with leave-one-function-out / leave-one-instance-out protocols against
// single-best and average-best oracle baselines.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psox/ela.hpp"
#include "psox/metrics.hpp"
#include "psox/models.hpp"

namespace psox {

struct DatasetRow {
  int fid = 0, iid = 0, dim = 0;
  std::vector<double> features;  // landscape features in canonical column order
  HyperParams best;              // single-best config on this (fid, iid, dim)
  double best_mean_aocc = 0.0;   // that config's mean AOCC over its repetitions
  double w_star = 0.0;           // best.w, the primary classification target
  int aocc_class = -1;           // bin index when class bounds were supplied
  bool operator==(const DatasetRow&) const = default;
};

struct LabeledDataset {
  std::vector<std::string> feature_names;   // ela_canonical_keys()
  std::vector<DatasetRow> rows;             // sorted by (fid, iid, dim)
  std::vector<std::string> exclusions;      // run keys that had no ELA vector
  bool operator==(const LabeledDataset&) const = default;
};

// One row per (fid, iid, dim) present in the run table. The label is the
// config with the highest mean AOCC among that key's runs, ties to the
// lexicographically first config — the same rule perf-metrics applies.
// Keys without a matching ELA vector land in `exclusions` instead of a row.
// Optional `aocc_class_bounds` (strictly ascending) bin best_mean_aocc into
// performance classes: class = number of bounds at or below the value.
LabeledDataset build_dataset(const std::vector<RunRecord>& runs,
                             const std::vector<ElaVector>& ela,
                             const std::vector<double>& aocc_class_bounds = {});

enum class Scheme { lofo, loio };
const char* to_string(Scheme s);

enum class LearnerKind { dt, rf };

struct FoldResult {
  Scheme scheme = Scheme::lofo;
  int fold = 0;         // held-out fid (LoFo) or iid (LoIo)
  std::string method;   // "DT", "RF", "SB" or "AB"
  HyperParams predicted;
  double achieved = 0.0;  // mean AOCC of the predicted config on the fold
  double sbm = 0.0;       // best single config's mean AOCC on the fold
  double loss = 0.0;      // sbm - achieved
  bool operator==(const FoldResult&) const = default;
};

struct ValidationReport {
  Scheme scheme = Scheme::lofo;
  std::vector<FoldResult> folds;            // sorted by (fold, method)
  std::map<std::string, double> mean_loss;  // per method over all folds
};

// Cross-validates per-parameter classifiers: per fold, train one classifier
// per hyperparameter on the remaining rows, predict every held-out row,
// snap to the grid, and commit to the fold's modal config. SB (oracle
// single-best on the fold, loss 0 by construction) and AB (average-best of
// the training runs) are reported alongside as baselines. A predicted config
// with no runs on the fold raises IntegrityError.
ValidationReport validate(const LabeledDataset& dataset,
                          const std::vector<RunRecord>& runs, Scheme scheme,
                          LearnerKind kind, int depth, uint64_t seed = 1);

// Classifier for one parameter ("c1", "c2", "w", "n_particles", "k", "p",
// "r") trained on the full dataset; features are median-imputed.
TreeModel fit_param_tree(const LabeledDataset& dataset, const std::string& param,
                         int depth);

// Depth-ordered textual rules, one branch per line, leaves with their class
// histogram (or mean value for regression trees). Stable for golden diffs.
std::string export_tree_rules(const TreeModel& tree,
                              const std::vector<std::string>& feature_names);

// Nearest grid value per parameter, absolute distance, ties to the smaller.
HyperParams snap_config(const HyperParams& raw);

std::string learner_csv_header();
std::string learner_csv_row(const FoldResult& r);

}  // namespace psox
