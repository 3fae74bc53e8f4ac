#pragma once
// Surrogate models over benchmark results: CART decision trees, random
// forests, exact conditional-expectation SHAP attributions, and the
// per-run attribution table the explain pipeline writes to CSV.

#include <cstdint>
#include <string>
#include <vector>

#include "psox/common.hpp"
#include "psox/metrics.hpp"

namespace psox {

enum class Task { regression, classification };

// One node of a binary tree, stored in a flat preorder array. Internal nodes
// route x[feature] < threshold to `left` and everything else to `right`;
// leaves have feature == -1. `cover` counts the training rows that reached
// the node, so the two children of any split add up to their parent.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1, right = -1;
  double cover = 0.0;
  double value = 0.0;             // leaf payload: mean (regression) or modal label
  std::vector<double> histogram;  // classification leaves: count per label
  bool operator==(const TreeNode&) const = default;
};

struct TreeModel {
  Task task = Task::regression;
  int n_features = 0;
  int max_depth = 0;           // cap the tree was grown with, not realized depth
  std::vector<double> labels;  // classification: sorted distinct training labels
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  bool operator==(const TreeModel&) const = default;
};

struct ForestModel {
  Task task = Task::regression;
  int n_features = 0;
  int n_trees = 0;
  uint64_t seed = 0;
  std::vector<double> labels;
  std::vector<TreeModel> trees;
  bool operator==(const ForestModel&) const = default;
};

// Randomness knobs for fit_forest. Turning both off makes a one-tree forest
// coincide with fit_tree node for node, which the tests rely on.
struct ForestOptions {
  bool bootstrap = true;          // resample n rows with replacement per tree
  bool feature_subsample = true;  // per split: ceil(sqrt(m)) cls, ceil(m/3) reg
};

// Greedy CART over exhaustive midpoint splits. Splits minimize the weighted
// child impurity (Gini for classification, variance for regression) and must
// improve on the parent strictly; ties go to the lowest feature index, then
// the lowest threshold. Growth stops at max_depth, below 2*min_leaf rows, or
// on a pure node. A node whose rows are identical in x but not y becomes a
// leaf, never an error.
TreeModel fit_tree(const Matrix& x, const std::vector<double>& y, Task task,
                   int max_depth, int min_leaf);

// Random forest: per-tree RNG seeded from (seed, tree index), bootstrap of n
// rows, and a fresh feature subset drawn at every split. Trees are therefore
// independent of the order they are trained in.
ForestModel fit_forest(const Matrix& x, const std::vector<double>& y, Task task,
                       int n_trees, int max_depth, int min_leaf, uint64_t seed,
                       const ForestOptions& opt = {});

double predict(const TreeModel& tree, const std::vector<double>& x);
// Regression: mean of tree predictions. Classification: majority vote with
// ties broken toward the smallest label.
double predict(const ForestModel& forest, const std::vector<double>& x);

struct ShapAttribution {
  double base_value = 0.0;            // cover-weighted mean leaf value
  std::vector<double> contributions;  // one per feature
  double prediction = 0.0;            // base_value + sum(contributions)
};

// Exact path-dependent SHAP for a regression forest: per tree, conditional
// expectations are taken over the training distribution encoded by node
// covers; per-tree attributions are averaged so they decompose the ensemble
// mean. base_value + sum(contributions) equals the forest prediction up to
// rounding. Classification forests are rejected: a majority vote has no
// additive decomposition.
ShapAttribution tree_shap(const ForestModel& forest, const std::vector<double>& x);

// 1 - SSres/SStot; defined as 0 when the actual values are constant.
double r_squared(const std::vector<double>& predicted,
                 const std::vector<double>& actual);

// --- run-level attribution table --------------------------------------------

// Surrogate features, in column order: the seven hyperparameters plus the
// instance and repetition indices as integer-valued variance proxies.
const std::vector<std::string>& shap_feature_names();

struct ShapForestParams {
  int n_trees = 100;
  int max_depth = 7;
  int min_leaf = 5;
};

struct ShapRow {
  size_t record_id = 0;  // index of the run record in the input order
  std::string feature;
  double feature_value = 0.0;
  double shap_value = 0.0;
};

struct ShapTable {
  TopologyKind topology = TopologyKind::star;
  int fid = 0, dim = 0;
  double r2_train = 0.0;
  double base_value = 0.0;
  std::vector<double> predictions;  // surrogate prediction per record
  std::vector<ShapRow> rows;        // record-major, n_records x n_features
  std::vector<std::string> warnings;
  ForestModel model;  // the fitted surrogate, for dumping
};

// Fits a regression forest from hyperparameters (+ iid/rep) to AOCC for one
// (topology, fid, dim) group and attributes every record's prediction.
// Requires at least 30 records, all from the same group. A constant AOCC
// column yields all-zero attributions and a train R^2 of 0, with a warning.
ShapTable aggregate_shap(const std::vector<RunRecord>& records, uint64_t seed,
                         const ShapForestParams& params = {});

std::string shap_csv_header();
std::string shap_csv_row(const ShapTable& table, size_t row_index);

// Versioned JSON dump of the flat node arrays, one object per node with
// feature, threshold, children, value and cover.
std::string model_to_json(const ForestModel& forest);

}  // namespace psox
