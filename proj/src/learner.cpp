// Dataset assembly, leave-one-out validation against oracle baselines, and
// tree-rule export for the configuration learner.

#include "psox/learner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

namespace psox {

namespace {

using ConfigKey = std::array<double, 7>;

ConfigKey key_of(const HyperParams& c) {
  return {c.c1,
          c.c2,
          c.w,
          static_cast<double>(c.n_particles),
          static_cast<double>(c.k),
          static_cast<double>(c.p),
          static_cast<double>(c.r)};
}

// shuffle-invariant mean, as perf-metrics computes it
double sorted_mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return mean_of(v);
}

struct RunKey {
  int fid = 0, iid = 0, dim = 0;
  auto operator<=>(const RunKey&) const = default;
};

std::string key_str(const RunKey& k) {
  return "fid=" + fmt_int(k.fid) + " iid=" + fmt_int(k.iid) + " dim=" + fmt_int(k.dim);
}

struct BestConfig {
  HyperParams config;
  double mean = 0.0;
};

// best config by mean AOCC over the given records; ascending map order plus a
// strictly-greater test keeps the lexicographically first config on ties
BestConfig best_config_by_mean(const std::vector<const RunRecord*>& records) {
  std::map<ConfigKey, std::pair<HyperParams, std::vector<double>>> groups;
  for (const RunRecord* r : records) {
    auto& g = groups[key_of(r->config)];
    g.first = r->config;
    g.second.push_back(r->aocc);
  }
  BestConfig best;
  bool first = true;
  for (auto& [key, g] : groups) {
    const double m = sorted_mean(g.second);
    if (first || m > best.mean) {
      best = {g.first, m};
      first = false;
    }
  }
  return best;
}

const std::vector<std::string>& param_names() {
  static const std::vector<std::string> names = {"c1", "c2", "w", "n_particles",
                                                 "k",  "p",  "r"};
  return names;
}

double param_value(const HyperParams& c, size_t i) {
  switch (i) {
    case 0: return c.c1;
    case 1: return c.c2;
    case 2: return c.w;
    case 3: return double(c.n_particles);
    case 4: return double(c.k);
    case 5: return double(c.p);
    default: return double(c.r);
  }
}

void set_param(HyperParams& c, size_t i, double v) {
  switch (i) {
    case 0: c.c1 = v; break;
    case 1: c.c2 = v; break;
    case 2: c.w = v; break;
    case 3: c.n_particles = int(std::lround(v)); break;
    case 4: c.k = int(std::lround(v)); break;
    case 5: c.p = int(std::lround(v)); break;
    default: c.r = int(std::lround(v)); break;
  }
}

std::vector<double> axis_of(size_t i) {
  std::vector<double> axis;
  switch (i) {
    case 0: axis = grid_c1(); break;
    case 1: axis = grid_c2(); break;
    case 2: axis = grid_w(); break;
    case 3: for (int v : grid_n_particles()) axis.push_back(v); break;
    case 4: for (int v : grid_k()) axis.push_back(v); break;
    case 5: for (int v : grid_p()) axis.push_back(v); break;
    default: for (int v : grid_r()) axis.push_back(v); break;
  }
  std::sort(axis.begin(), axis.end());
  return axis;
}

// ascending scan with a strict '<' keeps the smaller value on distance ties
double snap_axis(double v, const std::vector<double>& axis) {
  double best = axis[0];
  for (double a : axis)
    if (std::fabs(v - a) < std::fabs(v - best)) best = a;
  return best;
}

// column medians over the given rows, skipping non-finite entries; a column
// with no finite value imputes to 0
std::vector<double> column_medians(const std::vector<const DatasetRow*>& rows,
                                   size_t n_features) {
  std::vector<double> med(n_features, 0.0);
  std::vector<double> col;
  for (size_t j = 0; j < n_features; ++j) {
    col.clear();
    for (const DatasetRow* r : rows)
      if (std::isfinite(r->features[j])) col.push_back(r->features[j]);
    if (col.empty()) continue;
    std::sort(col.begin(), col.end());
    const size_t n = col.size();
    med[j] = n % 2 == 1 ? col[n / 2] : 0.5 * (col[n / 2 - 1] + col[n / 2]);
  }
  return med;
}

Matrix imputed_features(const std::vector<const DatasetRow*>& rows,
                        const std::vector<double>& medians) {
  Matrix x(rows.size(), medians.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < medians.size(); ++j) {
      const double v = rows[i]->features[j];
      x(i, j) = std::isfinite(v) ? v : medians[j];
    }
  return x;
}

}  // namespace

const char* to_string(Scheme s) { return s == Scheme::lofo ? "LoFo" : "LoIo"; }

LabeledDataset build_dataset(const std::vector<RunRecord>& runs,
                             const std::vector<ElaVector>& ela,
                             const std::vector<double>& aocc_class_bounds) {
  require(!runs.empty(), "build_dataset: empty run table");
  for (size_t i = 1; i < aocc_class_bounds.size(); ++i)
    require(aocc_class_bounds[i - 1] < aocc_class_bounds[i],
            "build_dataset: class bounds must be strictly ascending");
  for (const RunRecord& r : runs)
    require(r.topology == runs[0].topology,
            "build_dataset: runs span more than one topology");

  std::map<RunKey, std::vector<const RunRecord*>> by_key;
  for (const RunRecord& r : runs) by_key[{r.fid, r.iid, r.dim}].push_back(&r);

  std::map<RunKey, const ElaVector*> ela_by_key;
  for (const ElaVector& e : ela) {
    const RunKey k{e.fid, e.iid, e.dim};
    const auto [it, fresh] = ela_by_key.try_emplace(k, &e);
    require(fresh, "build_dataset: duplicate ELA vector for " + key_str(k));
  }

  LabeledDataset ds;
  ds.feature_names = ela_canonical_keys();
  for (const auto& [key, recs] : by_key) {
    const auto it = ela_by_key.find(key);
    if (it == ela_by_key.end()) {
      ds.exclusions.push_back(key_str(key) + ": no ela vector");
      continue;
    }
    DatasetRow row;
    row.fid = key.fid;
    row.iid = key.iid;
    row.dim = key.dim;
    const BestConfig best = best_config_by_mean(recs);
    row.best = best.config;
    row.best_mean_aocc = best.mean;
    row.w_star = best.config.w;
    if (!aocc_class_bounds.empty()) {
      int cls = 0;
      for (double b : aocc_class_bounds)
        if (row.best_mean_aocc >= b) ++cls;
      row.aocc_class = cls;
    }
    row.features.reserve(ds.feature_names.size());
    for (const std::string& name : ds.feature_names) {
      const auto v = it->second->values.find(name);
      require(v != it->second->values.end(),
              "build_dataset: ELA vector for " + key_str(key) + " lacks feature " + name);
      row.features.push_back(v->second);
    }
    ds.rows.push_back(std::move(row));
  }
  require(!ds.rows.empty(), "build_dataset: no run key has a matching ELA vector");
  return ds;
}

HyperParams snap_config(const HyperParams& raw) {
  HyperParams out;
  for (size_t i = 0; i < param_names().size(); ++i)
    set_param(out, i, snap_axis(param_value(raw, i), axis_of(i)));
  return out;
}

ValidationReport validate(const LabeledDataset& dataset,
                          const std::vector<RunRecord>& runs, Scheme scheme,
                          LearnerKind kind, int depth, uint64_t seed) {
  require(!dataset.rows.empty(), "validate: empty dataset");
  require(!runs.empty(), "validate: empty run table");
  require(depth >= 0, "validate: depth must be >= 0");

  std::set<RunKey> keys;
  for (const DatasetRow& r : dataset.rows) keys.insert({r.fid, r.iid, r.dim});
  std::map<RunKey, std::vector<const RunRecord*>> recs_by_key;
  for (const RunRecord& r : runs) {
    const RunKey k{r.fid, r.iid, r.dim};
    if (keys.count(k)) recs_by_key[k].push_back(&r);
  }
  for (const RunKey& k : keys)
    require(recs_by_key.count(k) != 0, "validate: runs do not cover dataset row " + key_str(k));

  std::set<int> fold_keys;
  for (const DatasetRow& r : dataset.rows)
    fold_keys.insert(scheme == Scheme::lofo ? r.fid : r.iid);
  require(fold_keys.size() >= 2, "validate: needs at least two folds to hold one out");

  const size_t n_features = dataset.feature_names.size();
  const std::string learned = kind == LearnerKind::dt ? "DT" : "RF";

  ValidationReport rep;
  rep.scheme = scheme;
  for (const int fold : fold_keys) {
    std::vector<const DatasetRow*> train, test;
    for (const DatasetRow& r : dataset.rows) {
      const int key = scheme == Scheme::lofo ? r.fid : r.iid;
      (key == fold ? test : train).push_back(&r);
    }
    std::vector<const RunRecord*> fold_recs, train_recs;
    for (const auto& [k, v] : recs_by_key) {
      const int key = scheme == Scheme::lofo ? k.fid : k.iid;
      auto& dst = key == fold ? fold_recs : train_recs;
      dst.insert(dst.end(), v.begin(), v.end());
    }

    const BestConfig sb = best_config_by_mean(fold_recs);
    const auto mean_on_fold = [&](const HyperParams& cfg) {
      std::vector<double> v;
      for (const RunRecord* r : fold_recs)
        if (r->config == cfg) v.push_back(r->aocc);
      check_integrity(!v.empty(), "validate: predicted config " + serialize_config(cfg) +
                                      " has no runs on fold " + fmt_int(fold));
      return sorted_mean(std::move(v));
    };
    const auto push = [&](const std::string& method, const HyperParams& cfg) {
      FoldResult fr;
      fr.scheme = scheme;
      fr.fold = fold;
      fr.method = method;
      fr.predicted = cfg;
      fr.achieved = mean_on_fold(cfg);
      fr.sbm = sb.mean;
      fr.loss = fr.sbm - fr.achieved;
      rep.folds.push_back(std::move(fr));
    };

    push("SB", sb.config);
    push("AB", best_config_by_mean(train_recs).config);

    // one classifier per hyperparameter, trained on the remaining folds
    const std::vector<double> medians = column_medians(train, n_features);
    const Matrix xt = imputed_features(train, medians);
    const Matrix xq = imputed_features(test, medians);
    std::vector<HyperParams> preds(test.size());
    std::vector<double> labels(train.size());
    std::vector<double> probe(n_features);
    for (size_t pi = 0; pi < param_names().size(); ++pi) {
      for (size_t i = 0; i < train.size(); ++i)
        labels[i] = param_value(train[i]->best, pi);
      const std::vector<double> axis = axis_of(pi);
      const auto snap_into = [&](size_t q, double raw) {
        set_param(preds[q], pi, snap_axis(raw, axis));
      };
      if (kind == LearnerKind::dt) {
        const TreeModel t = fit_tree(xt, labels, Task::classification, depth, 1);
        for (size_t q = 0; q < test.size(); ++q) {
          std::copy(xq.row(q), xq.row(q) + n_features, probe.begin());
          snap_into(q, predict(t, probe));
        }
      } else {
        const ForestModel f =
            fit_forest(xt, labels, Task::classification, 50, depth, 1,
                       split64(seed, uint64_t(scheme == Scheme::loio), uint64_t(fold), pi));
        for (size_t q = 0; q < test.size(); ++q) {
          std::copy(xq.row(q), xq.row(q) + n_features, probe.begin());
          snap_into(q, predict(f, probe));
        }
      }
    }

    // the fold commits to its modal predicted config, ties lexicographic
    std::map<ConfigKey, std::pair<HyperParams, int>> votes;
    for (const HyperParams& p : preds) {
      auto& v = votes[key_of(p)];
      v.first = p;
      v.second += 1;
    }
    const HyperParams* modal = nullptr;
    int top = 0;
    for (auto& [k, v] : votes)
      if (v.second > top) {
        modal = &v.first;
        top = v.second;
      }
    push(learned, *modal);
  }

  std::sort(rep.folds.begin(), rep.folds.end(), [](const FoldResult& a, const FoldResult& b) {
    return a.fold != b.fold ? a.fold < b.fold : a.method < b.method;
  });
  std::map<std::string, std::vector<double>> by_method;
  for (const FoldResult& f : rep.folds) by_method[f.method].push_back(f.loss);
  for (const auto& [method, losses] : by_method) rep.mean_loss[method] = mean_of(losses);
  return rep;
}

TreeModel fit_param_tree(const LabeledDataset& dataset, const std::string& param,
                         int depth) {
  require(!dataset.rows.empty(), "fit_param_tree: empty dataset");
  const auto& names = param_names();
  const auto it = std::find(names.begin(), names.end(), param);
  require(it != names.end(), "fit_param_tree: unknown parameter '" + param + "'");
  const size_t pi = size_t(it - names.begin());

  std::vector<const DatasetRow*> rows;
  for (const DatasetRow& r : dataset.rows) rows.push_back(&r);
  const Matrix x = imputed_features(rows, column_medians(rows, dataset.feature_names.size()));
  std::vector<double> labels(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) labels[i] = param_value(rows[i]->best, pi);
  return fit_tree(x, labels, Task::classification, depth, 1);
}

std::string export_tree_rules(const TreeModel& tree,
                              const std::vector<std::string>& feature_names) {
  require(!tree.nodes.empty(), "export_tree_rules: empty tree");
  require(int(feature_names.size()) == tree.n_features,
          "export_tree_rules: feature name count mismatch");

  std::string out;
  const auto walk = [&](const auto& self, int id, int depth) -> void {
    std::string prefix;
    for (int i = 0; i < depth; ++i) prefix += "|   ";
    prefix += "|--- ";
    const TreeNode& nd = tree.nodes[size_t(id)];
    if (nd.feature < 0) {
      if (tree.task == Task::classification && !nd.histogram.empty()) {
        out += prefix + "class: " + fmt_double(nd.value) + " {";
        for (size_t k = 0; k < tree.labels.size(); ++k) {
          if (k > 0) out += ", ";
          out += fmt_double(tree.labels[k]) + ": " + fmt_int(int64_t(nd.histogram[k]));
        }
        out += "}\n";
      } else {
        out += prefix + "value: " + fmt_double(nd.value) + " (n=" +
               fmt_int(int64_t(nd.cover)) + ")\n";
      }
      return;
    }
    out += prefix + feature_names[size_t(nd.feature)] + " <= " + fmt_double(nd.threshold) +
           "\n";
    self(self, nd.left, depth + 1);
    out += prefix + feature_names[size_t(nd.feature)] + " > " + fmt_double(nd.threshold) +
           "\n";
    self(self, nd.right, depth + 1);
  };
  walk(walk, 0, 0);
  return out;
}

std::string learner_csv_header() {
  return "scheme,fold,method,predicted_config,achieved_aocc,sbm,aocc_loss";
}

std::string learner_csv_row(const FoldResult& r) {
  std::string s = to_string(r.scheme);
  s += ',';
  s += fmt_int(r.fold);
  s += ',';
  s += r.method;
  s += ',';
  s += serialize_config(r.predicted);
  s += ',';
  s += fmt_double_sig(r.achieved, 17);
  s += ',';
  s += fmt_double_sig(r.sbm, 17);
  s += ',';
  s += fmt_double_sig(r.loss, 17);
  return s;
}

}  // namespace psox
