// CART trees, random forests, and exact cover-weighted SHAP attributions.
//
// The SHAP walk maintains, per feature on the current root-to-node path, the
// fraction of feature subsets that would flow through the split blind (scaled
// by child cover ratios) versus follow the probe, together with a weight per
// subset size. Extending that path on the way down and unwinding it at leaves
// yields the exact Shapley value of the conditional-expectation game, so the
// tests can pin it against a brute-force enumeration over all subsets.

#include "psox/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

#include "json.hpp"

namespace psox {

namespace {

void validate_xy(const Matrix& x, const std::vector<double>& y, const std::string& who) {
  require(x.cols >= 1, who + ": needs at least one feature column");
  require(x.rows == y.size(), who + ": x rows and y length differ");
  for (double v : x.a) require(std::isfinite(v), who + ": non-finite feature value");
  for (double v : y) require(std::isfinite(v), who + ": non-finite target value");
}

std::vector<double> distinct_labels(const std::vector<double>& y) {
  std::vector<double> l = y;
  std::sort(l.begin(), l.end());
  l.erase(std::unique(l.begin(), l.end()), l.end());
  return l;
}

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double score = std::numeric_limits<double>::infinity();
};

struct TreeBuilder {
  const Matrix& x;
  const std::vector<double>& y;
  Task task;
  int max_depth;
  int min_leaf;
  const std::vector<double>& labels;  // empty for regression
  Rng* rng = nullptr;                 // forest mode: draws feature subsets
  int mtry = 0;                       // candidate features per split, 0 = all
  std::vector<TreeNode> nodes;

  int label_index(double v) const {
    return int(std::lower_bound(labels.begin(), labels.end(), v) - labels.begin());
  }

  void make_leaf(TreeNode& nd, const std::vector<int>& rows) const {
    if (task == Task::regression) {
      NeumaierSum s;
      for (int i : rows) s.add(y[size_t(i)]);
      nd.value = s.value() / double(rows.size());
      return;
    }
    nd.histogram.assign(labels.size(), 0.0);
    for (int i : rows) nd.histogram[size_t(label_index(y[size_t(i)]))] += 1.0;
    size_t best = 0;  // ties keep the smaller label: labels are sorted
    for (size_t k = 1; k < nd.histogram.size(); ++k)
      if (nd.histogram[k] > nd.histogram[best]) best = k;
    nd.value = labels[best];
  }

  std::vector<int> candidate_features() {
    std::vector<int> feats(x.cols);
    std::iota(feats.begin(), feats.end(), 0);
    if (rng != nullptr && mtry > 0 && mtry < int(x.cols)) {
      rng->shuffle(feats);
      feats.resize(size_t(mtry));
      // scan candidates in index order so the lowest-feature tie rule holds
      std::sort(feats.begin(), feats.end());
    }
    return feats;
  }

  // Exhaustive scan over midpoints of adjacent distinct values, one sorted
  // pass per feature with running left-side statistics. Candidates are
  // visited feature-ascending then threshold-ascending, and only a strictly
  // lower weighted impurity replaces the incumbent, which realizes the
  // lowest-feature / lowest-threshold tie rule.
  SplitChoice best_split(const std::vector<int>& rows) {
    const size_t n = rows.size();
    const std::vector<int> feats = candidate_features();
    SplitChoice best;

    if (task == Task::regression) {
      NeumaierSum ms;
      for (int i : rows) ms.add(y[size_t(i)]);
      const double mu = ms.value() / double(n);  // centering tames cancellation
      double sum_t = 0.0, sq_t = 0.0;
      for (int i : rows) {
        double d = y[size_t(i)] - mu;
        sum_t += d;
        sq_t += d * d;
      }
      best.score = std::max(0.0, sq_t - sum_t * sum_t / double(n)) / double(n);

      std::vector<std::pair<double, double>> col(n);
      for (int f : feats) {
        for (size_t i = 0; i < n; ++i)
          col[i] = {x(size_t(rows[i]), size_t(f)), y[size_t(rows[i])] - mu};
        std::sort(col.begin(), col.end());
        if (col.front().first == col.back().first) continue;
        double sum_l = 0.0, sq_l = 0.0;
        for (size_t i = 0; i + 1 < n; ++i) {
          sum_l += col[i].second;
          sq_l += col[i].second * col[i].second;
          if (col[i].first == col[i + 1].first) continue;
          const size_t nl = i + 1, nr = n - nl;
          if (nl < size_t(min_leaf) || nr < size_t(min_leaf)) continue;
          const double thr = 0.5 * (col[i].first + col[i + 1].first);
          if (!(col[i].first < thr)) continue;  // midpoint rounded onto the low value
          const double sse_l = std::max(0.0, sq_l - sum_l * sum_l / double(nl));
          const double sum_r = sum_t - sum_l;
          const double sse_r = std::max(0.0, (sq_t - sq_l) - sum_r * sum_r / double(nr));
          const double score = (sse_l + sse_r) / double(n);
          if (score < best.score) best = {f, thr, score};
        }
      }
      return best;
    }

    const size_t nlab = labels.size();
    auto gini = [nlab](const std::vector<double>& cnt, double side) {
      double s = 0.0;
      for (size_t k = 0; k < nlab; ++k) s += (cnt[k] / side) * (cnt[k] / side);
      return 1.0 - s;
    };
    std::vector<double> cnt_t(nlab, 0.0);
    for (int i : rows) cnt_t[size_t(label_index(y[size_t(i)]))] += 1.0;
    best.score = gini(cnt_t, double(n));

    std::vector<std::pair<double, int>> col(n);
    std::vector<double> cnt_l(nlab), cnt_r(nlab);
    for (int f : feats) {
      for (size_t i = 0; i < n; ++i)
        col[i] = {x(size_t(rows[i]), size_t(f)), label_index(y[size_t(rows[i])])};
      std::sort(col.begin(), col.end());
      if (col.front().first == col.back().first) continue;
      std::fill(cnt_l.begin(), cnt_l.end(), 0.0);
      for (size_t i = 0; i + 1 < n; ++i) {
        cnt_l[size_t(col[i].second)] += 1.0;
        if (col[i].first == col[i + 1].first) continue;
        const size_t nl = i + 1, nr = n - nl;
        if (nl < size_t(min_leaf) || nr < size_t(min_leaf)) continue;
        const double thr = 0.5 * (col[i].first + col[i + 1].first);
        if (!(col[i].first < thr)) continue;
        for (size_t k = 0; k < nlab; ++k) cnt_r[k] = cnt_t[k] - cnt_l[k];
        const double score =
            (double(nl) * gini(cnt_l, double(nl)) + double(nr) * gini(cnt_r, double(nr))) /
            double(n);
        if (score < best.score) best = {f, thr, score};
      }
    }
    return best;
  }

  int build(const std::vector<int>& rows, int depth) {
    const int id = int(nodes.size());
    nodes.emplace_back();
    TreeNode nd;
    nd.cover = double(rows.size());

    bool pure = true;
    for (size_t i = 1; i < rows.size() && pure; ++i)
      pure = y[size_t(rows[i])] == y[size_t(rows[0])];

    SplitChoice sp;
    if (depth < max_depth && !pure && int(rows.size()) >= 2 * min_leaf)
      sp = best_split(rows);
    if (sp.feature < 0) {
      make_leaf(nd, rows);
      nodes[size_t(id)] = std::move(nd);
      return id;
    }

    std::vector<int> lrows, rrows;
    lrows.reserve(rows.size());
    rrows.reserve(rows.size());
    for (int i : rows)
      (x(size_t(i), size_t(sp.feature)) < sp.threshold ? lrows : rrows).push_back(i);
    nd.feature = sp.feature;
    nd.threshold = sp.threshold;
    nd.left = build(lrows, depth + 1);
    nd.right = build(rrows, depth + 1);
    nodes[size_t(id)] = std::move(nd);
    return id;
  }
};

int forest_mtry(Task task, size_t m) {
  const double md = double(m);
  const int k = task == Task::classification ? int(std::ceil(std::sqrt(md)))
                                             : int(std::ceil(md / 3.0));
  return std::clamp(k, 1, int(m));
}

}  // namespace

TreeModel fit_tree(const Matrix& x, const std::vector<double>& y, Task task,
                   int max_depth, int min_leaf) {
  validate_xy(x, y, "fit_tree");
  require(max_depth >= 0, "fit_tree: max_depth must be >= 0");
  require(min_leaf >= 1, "fit_tree: min_leaf must be >= 1");
  require(x.rows >= 2 * size_t(min_leaf), "fit_tree: needs at least 2*min_leaf rows");

  TreeModel t;
  t.task = task;
  t.n_features = int(x.cols);
  t.max_depth = max_depth;
  if (task == Task::classification) t.labels = distinct_labels(y);

  TreeBuilder b{x, y, task, max_depth, min_leaf, t.labels, nullptr, 0, {}};
  std::vector<int> rows(x.rows);
  std::iota(rows.begin(), rows.end(), 0);
  b.build(rows, 0);
  t.nodes = std::move(b.nodes);
  return t;
}

ForestModel fit_forest(const Matrix& x, const std::vector<double>& y, Task task,
                       int n_trees, int max_depth, int min_leaf, uint64_t seed,
                       const ForestOptions& opt) {
  validate_xy(x, y, "fit_forest");
  require(n_trees >= 1, "fit_forest: n_trees must be >= 1");
  require(max_depth >= 0, "fit_forest: max_depth must be >= 0");
  require(min_leaf >= 1, "fit_forest: min_leaf must be >= 1");
  require(x.rows >= 2 * size_t(min_leaf), "fit_forest: needs at least 2*min_leaf rows");

  ForestModel f;
  f.task = task;
  f.n_features = int(x.cols);
  f.n_trees = n_trees;
  f.seed = seed;
  if (task == Task::classification) f.labels = distinct_labels(y);
  const int mtry = opt.feature_subsample ? forest_mtry(task, x.cols) : 0;

  for (int ti = 0; ti < n_trees; ++ti) {
    Rng rng(split64(seed, uint64_t(ti)));  // trees never share RNG state
    std::vector<int> rows(x.rows);
    if (opt.bootstrap)
      for (auto& r : rows) r = int(rng.below(x.rows));
    else
      std::iota(rows.begin(), rows.end(), 0);

    TreeBuilder b{x,      y,
                  task,   max_depth,
                  min_leaf, f.labels,
                  opt.feature_subsample ? &rng : nullptr, mtry,
                  {}};
    b.build(rows, 0);

    TreeModel tm;
    tm.task = task;
    tm.n_features = f.n_features;
    tm.max_depth = max_depth;
    tm.labels = f.labels;
    tm.nodes = std::move(b.nodes);
    f.trees.push_back(std::move(tm));
  }
  return f;
}

double predict(const TreeModel& tree, const std::vector<double>& x) {
  require(int(x.size()) == tree.n_features, "predict: feature count mismatch");
  int id = 0;
  while (tree.nodes[size_t(id)].feature >= 0) {
    const TreeNode& nd = tree.nodes[size_t(id)];
    id = x[size_t(nd.feature)] < nd.threshold ? nd.left : nd.right;
  }
  return tree.nodes[size_t(id)].value;
}

double predict(const ForestModel& forest, const std::vector<double>& x) {
  require(int(x.size()) == forest.n_features, "predict: feature count mismatch");
  require(!forest.trees.empty(), "predict: empty forest");
  if (forest.task == Task::regression) {
    NeumaierSum s;
    for (const TreeModel& t : forest.trees) s.add(predict(t, x));
    return s.value() / double(forest.trees.size());
  }
  std::vector<int> votes(forest.labels.size(), 0);
  for (const TreeModel& t : forest.trees) {
    const double lab = predict(t, x);
    const size_t k = size_t(std::lower_bound(forest.labels.begin(), forest.labels.end(),
                                             lab) -
                            forest.labels.begin());
    votes[k] += 1;
  }
  size_t best = 0;  // first maximum: vote ties go to the smallest label
  for (size_t k = 1; k < votes.size(); ++k)
    if (votes[k] > votes[best]) best = k;
  return forest.labels[best];
}

namespace {

// --- SHAP path bookkeeping ---------------------------------------------------
// One element per feature met on the way down (element 0 is a sentinel).
// zero_frac: proportion of cover that flows through when the feature is
// absent from the subset; one_frac: 1 if the probe follows the path, else 0;
// pweight[i]: permutation weight mass for subsets of size i along the path.

struct PathElem {
  int feature = -1;
  double zero_frac = 1.0;
  double one_frac = 1.0;
  double pweight = 1.0;
};

void path_extend(std::vector<PathElem>& path, double pz, double po, int pf) {
  const int l = int(path.size());
  path.push_back({pf, pz, po, l == 0 ? 1.0 : 0.0});
  for (int i = l - 1; i >= 0; --i) {
    path[size_t(i + 1)].pweight +=
        po * path[size_t(i)].pweight * double(i + 1) / double(l + 1);
    path[size_t(i)].pweight =
        pz * path[size_t(i)].pweight * double(l - i) / double(l + 1);
  }
}

// Inverse of path_extend for the element at idx: recovers the weights the
// path had before that feature was appended, then drops the element.
std::vector<PathElem> path_unwind(const std::vector<PathElem>& path, int idx) {
  const int n = int(path.size()) - 1;
  const double z = path[size_t(idx)].zero_frac;
  const double o = path[size_t(idx)].one_frac;
  std::vector<PathElem> out(path.begin(), path.end() - 1);
  if (o != 0.0) {
    double next = path[size_t(n)].pweight;
    for (int i = n - 1; i >= 0; --i) {
      const double w = next * double(n + 1) / (o * double(i + 1));
      next = path[size_t(i)].pweight - w * z * double(n - i) / double(n + 1);
      out[size_t(i)].pweight = w;
    }
  } else {
    for (int i = 0; i < n; ++i)
      out[size_t(i)].pweight = path[size_t(i)].pweight * double(n + 1) / (z * double(n - i));
  }
  for (int i = idx; i < n; ++i) {
    out[size_t(i)].feature = path[size_t(i + 1)].feature;
    out[size_t(i)].zero_frac = path[size_t(i + 1)].zero_frac;
    out[size_t(i)].one_frac = path[size_t(i + 1)].one_frac;
  }
  return out;
}

// Sum of the unwound weights without materializing the shorter path; this is
// the leaf-loop hot path.
double path_unwound_sum(const std::vector<PathElem>& path, int idx) {
  const int n = int(path.size()) - 1;
  const double z = path[size_t(idx)].zero_frac;
  const double o = path[size_t(idx)].one_frac;
  double total = 0.0;
  if (o != 0.0) {
    double next = path[size_t(n)].pweight;
    for (int i = n - 1; i >= 0; --i) {
      const double w = next * double(n + 1) / (o * double(i + 1));
      total += w;
      next = path[size_t(i)].pweight - w * z * double(n - i) / double(n + 1);
    }
  } else {
    for (int i = 0; i < n; ++i)
      total += path[size_t(i)].pweight * double(n + 1) / (z * double(n - i));
  }
  return total;
}

void shap_walk(const TreeModel& t, int id, std::vector<PathElem> path, double pz,
               double po, int pf, const std::vector<double>& x,
               std::vector<double>& phi) {
  path_extend(path, pz, po, pf);
  const TreeNode& nd = t.nodes[size_t(id)];
  if (nd.feature < 0) {
    for (int i = 1; i < int(path.size()); ++i)
      phi[size_t(path[size_t(i)].feature)] +=
          path_unwound_sum(path, i) *
          (path[size_t(i)].one_frac - path[size_t(i)].zero_frac) * nd.value;
    return;
  }
  const int hot = x[size_t(nd.feature)] < nd.threshold ? nd.left : nd.right;
  const int cold = hot == nd.left ? nd.right : nd.left;
  double iz = 1.0, io = 1.0;
  int prev = -1;
  for (int i = 1; i < int(path.size()); ++i)
    if (path[size_t(i)].feature == nd.feature) {
      prev = i;
      break;
    }
  if (prev >= 0) {  // feature met again: fold its old fractions into this split
    iz = path[size_t(prev)].zero_frac;
    io = path[size_t(prev)].one_frac;
    path = path_unwind(path, prev);
  }
  shap_walk(t, hot, path, iz * t.nodes[size_t(hot)].cover / nd.cover, io, nd.feature,
            x, phi);
  shap_walk(t, cold, path, iz * t.nodes[size_t(cold)].cover / nd.cover, 0.0,
            nd.feature, x, phi);
}

double expected_value(const TreeModel& t, int id) {
  const TreeNode& nd = t.nodes[size_t(id)];
  if (nd.feature < 0) return nd.value;
  return (t.nodes[size_t(nd.left)].cover * expected_value(t, nd.left) +
          t.nodes[size_t(nd.right)].cover * expected_value(t, nd.right)) /
         nd.cover;
}

}  // namespace

ShapAttribution tree_shap(const ForestModel& forest, const std::vector<double>& x) {
  require(!forest.trees.empty(), "tree_shap: empty forest");
  require(forest.task == Task::regression,
          "tree_shap: majority votes have no additive decomposition, fit a "
          "regression forest");
  require(int(x.size()) == forest.n_features, "tree_shap: feature count mismatch");
  for (double v : x) require(std::isfinite(v), "tree_shap: non-finite probe value");

  const size_t m = x.size();
  std::vector<NeumaierSum> acc(m);
  NeumaierSum base;
  std::vector<double> phi(m);
  for (const TreeModel& t : forest.trees) {
    std::fill(phi.begin(), phi.end(), 0.0);
    shap_walk(t, 0, {}, 1.0, 1.0, -1, x, phi);
    for (size_t f = 0; f < m; ++f) acc[f].add(phi[f]);
    base.add(expected_value(t, 0));
  }

  ShapAttribution out;
  out.contributions.resize(m);
  const double nt = double(forest.trees.size());
  for (size_t f = 0; f < m; ++f) out.contributions[f] = acc[f].value() / nt;
  out.base_value = base.value() / nt;
  out.prediction = predict(forest, x);
  return out;
}

double r_squared(const std::vector<double>& predicted,
                 const std::vector<double>& actual) {
  require(predicted.size() == actual.size(), "r_squared: length mismatch");
  require(actual.size() >= 2, "r_squared: needs at least two points");
  for (double v : predicted) require(std::isfinite(v), "r_squared: non-finite prediction");
  for (double v : actual) require(std::isfinite(v), "r_squared: non-finite actual value");

  NeumaierSum ms;
  for (double v : actual) ms.add(v);
  const double mu = ms.value() / double(actual.size());
  NeumaierSum res, tot;
  for (size_t i = 0; i < actual.size(); ++i) {
    const double e = actual[i] - predicted[i];
    const double d = actual[i] - mu;
    res.add(e * e);
    tot.add(d * d);
  }
  const double sstot = tot.value();
  if (sstot == 0.0) return 0.0;
  return 1.0 - res.value() / sstot;
}

const std::vector<std::string>& shap_feature_names() {
  static const std::vector<std::string> names = {
      "c1", "c2", "w", "n_particles", "k", "p", "r",
      "instance_variance", "stochastic_variance"};
  return names;
}

ShapTable aggregate_shap(const std::vector<RunRecord>& records, uint64_t seed,
                         const ShapForestParams& params) {
  require(records.size() >= 30, "aggregate_shap: needs at least 30 run records");
  for (const RunRecord& r : records) {
    require(r.topology == records[0].topology && r.fid == records[0].fid &&
                r.dim == records[0].dim,
            "aggregate_shap: records span more than one (topology, fid, dim) group");
    require(std::isfinite(r.aocc), "aggregate_shap: non-finite AOCC");
  }

  const size_t n = records.size();
  const std::vector<std::string>& names = shap_feature_names();
  const size_t m = names.size();
  Matrix x(n, m);
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    const RunRecord& r = records[i];
    x(i, 0) = r.config.c1;
    x(i, 1) = r.config.c2;
    x(i, 2) = r.config.w;
    x(i, 3) = double(r.config.n_particles);
    x(i, 4) = double(r.config.k);
    x(i, 5) = double(r.config.p);
    x(i, 6) = double(r.config.r);
    x(i, 7) = double(r.iid);
    x(i, 8) = double(r.rep);
    y[i] = r.aocc;
  }

  ShapTable tab;
  tab.topology = records[0].topology;
  tab.fid = records[0].fid;
  tab.dim = records[0].dim;
  tab.model = fit_forest(x, y, Task::regression, params.n_trees, params.max_depth,
                         params.min_leaf, seed);

  bool constant = true;
  for (size_t i = 1; i < n && constant; ++i) constant = y[i] == y[0];
  if (constant)
    tab.warnings.push_back(
        "aggregate_shap: constant AOCC across records, surrogate explains nothing");

  tab.predictions.resize(n);
  tab.rows.reserve(n * m);
  std::vector<double> probe(m);
  for (size_t i = 0; i < n; ++i) {
    for (size_t f = 0; f < m; ++f) probe[f] = x(i, f);
    const ShapAttribution a = tree_shap(tab.model, probe);
    if (i == 0) tab.base_value = a.base_value;
    tab.predictions[i] = a.prediction;
    for (size_t f = 0; f < m; ++f)
      tab.rows.push_back({i, names[f], probe[f], a.contributions[f]});
  }
  tab.r2_train = r_squared(tab.predictions, y);
  return tab;
}

std::string shap_csv_header() {
  return "topology,fid,dim,feature,feature_value,shap_value,record_id";
}

std::string shap_csv_row(const ShapTable& table, size_t row_index) {
  require(row_index < table.rows.size(), "shap_csv_row: row index out of range");
  const ShapRow& r = table.rows[row_index];
  std::string s = to_string(table.topology);
  s += ',';
  s += fmt_int(table.fid);
  s += ',';
  s += fmt_int(table.dim);
  s += ',';
  s += r.feature;
  s += ',';
  s += fmt_double_sig(r.feature_value, 17);
  s += ',';
  s += fmt_double_sig(r.shap_value, 17);
  s += ',';
  s += fmt_int(int64_t(r.record_id));
  return s;
}

std::string model_to_json(const ForestModel& forest) {
  nlohmann::json j;
  j["format_version"] = 1;
  j["task"] = forest.task == Task::regression ? "regression" : "classification";
  j["n_features"] = forest.n_features;
  j["n_trees"] = forest.n_trees;
  j["seed"] = forest.seed;
  j["labels"] = forest.labels;
  nlohmann::json trees = nlohmann::json::array();
  for (const TreeModel& t : forest.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& nd : t.nodes) {
      nlohmann::json node = {{"feature", nd.feature}, {"threshold", nd.threshold},
                             {"left", nd.left},       {"right", nd.right},
                             {"value", nd.value},     {"cover", nd.cover}};
      if (!nd.histogram.empty()) node["histogram"] = nd.histogram;
      nodes.push_back(std::move(node));
    }
    trees.push_back({{"max_depth", t.max_depth}, {"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  return j.dump(1);
}

}  // namespace psox
