#include "psox/ela.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace psox {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_sample(const bbob::SampleSet& s, const char* who) {
  require(s.x.rows == s.y.size(), std::string(who) + ": x rows and y length differ");
  require(s.x.cols >= 1, std::string(who) + ": sample has no coordinates");
  for (double v : s.x.a) require(std::isfinite(v), std::string(who) + ": non-finite coordinate");
  for (double v : s.y) require(std::isfinite(v), std::string(who) + ": non-finite objective value");
}

// Content-based row order: coordinates lexicographically, then y, then the
// original index (only exact duplicates fall through to the index). Every
// accumulation below walks points in this order, so feature values come out
// bit-identical no matter how the sample rows were arranged.
std::vector<size_t> canonical_order(const bbob::SampleSet& s) {
  std::vector<size_t> order(s.x.rows);
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const double* ra = s.x.row(a);
    const double* rb = s.x.row(b);
    for (size_t d = 0; d < s.x.cols; ++d)
      if (ra[d] != rb[d]) return ra[d] < rb[d];
    if (s.y[a] != s.y[b]) return s.y[a] < s.y[b];
    return a < b;
  });
  return order;
}

double euclid(const double* a, const double* b, size_t dim) {
  double acc = 0.0;
  for (size_t d = 0; d < dim; ++d) {
    double t = a[d] - b[d];
    acc += t * t;
  }
  return std::sqrt(acc);
}

// ---------------------------------------------------------------------------
// Least squares min ||A b - y|| via Householder QR. Returns false when the
// design is numerically rank-deficient (diagonal of R tested against the
// largest entry). A and rhs are taken by value; both get clobbered.
bool least_squares(Matrix A, std::vector<double> rhs, std::vector<double>* beta) {
  const size_t n = A.rows, p = A.cols;
  require(n >= p, "least_squares: fewer rows than columns");
  for (size_t j = 0; j < p; ++j) {
    double norm2 = 0.0;
    for (size_t i = j; i < n; ++i) norm2 += A(i, j) * A(i, j);
    double norm = std::sqrt(norm2);
    double ajj = A(j, j);
    // sign keeps vj = ajj - alpha away from cancellation
    double alpha = ajj > 0.0 ? -norm : norm;
    double vj = ajj - alpha;
    double vtv = vj * vj;
    for (size_t i = j + 1; i < n; ++i) vtv += A(i, j) * A(i, j);
    A(j, j) = alpha;  // R_jj; the sub-diagonal keeps the reflector tail
    if (vtv == 0.0) continue;
    for (size_t c = j + 1; c < p; ++c) {
      double t = vj * A(j, c);
      for (size_t i = j + 1; i < n; ++i) t += A(i, j) * A(i, c);
      t *= 2.0 / vtv;
      A(j, c) -= t * vj;
      for (size_t i = j + 1; i < n; ++i) A(i, c) -= t * A(i, j);
    }
    double t = vj * rhs[j];
    for (size_t i = j + 1; i < n; ++i) t += A(i, j) * rhs[i];
    t *= 2.0 / vtv;
    rhs[j] -= t * vj;
    for (size_t i = j + 1; i < n; ++i) rhs[i] -= t * A(i, j);
  }
  double maxd = 0.0;
  for (size_t j = 0; j < p; ++j) maxd = std::max(maxd, std::abs(A(j, j)));
  if (maxd == 0.0) return false;
  for (size_t j = 0; j < p; ++j)
    if (std::abs(A(j, j)) <= 1e-10 * maxd) return false;
  beta->assign(p, 0.0);
  for (size_t j = p; j-- > 0;) {
    double v = rhs[j];
    for (size_t c = j + 1; c < p; ++c) v -= A(j, c) * (*beta)[c];
    (*beta)[j] = v / A(j, j);
  }
  return true;
}

// R² of a fitted model; sets *sstot_zero when y has no variance at all.
double r_squared_of(const Matrix& A, const std::vector<double>& y,
                    const std::vector<double>& beta, bool* sstot_zero) {
  double ybar;
  {
    NeumaierSum s;
    for (double v : y) s.add(v);
    ybar = s.value() / static_cast<double>(y.size());
  }
  NeumaierSum res, tot;
  for (size_t i = 0; i < A.rows; ++i) {
    double yhat = 0.0;
    for (size_t j = 0; j < A.cols; ++j) yhat += A(i, j) * beta[j];
    res.add((y[i] - yhat) * (y[i] - yhat));
    tot.add((y[i] - ybar) * (y[i] - ybar));
  }
  *sstot_zero = tot.value() == 0.0;
  if (*sstot_zero) return kNan;
  return 1.0 - res.value() / tot.value();
}

double adjusted_r2(double r2, size_t n, size_t n_predictors) {
  double nn = static_cast<double>(n);
  double pp = static_cast<double>(n_predictors);
  return 1.0 - (1.0 - r2) * (nn - 1.0) / (nn - pp - 1.0);
}

// max|v|/min|v|; NaN + warning when the smallest magnitude is exactly zero.
double max_by_min_abs(const std::vector<double>& v, FeatureSet* out, const char* what) {
  double mx = 0.0, mn = std::numeric_limits<double>::infinity();
  for (double b : v) {
    mx = std::max(mx, std::abs(b));
    mn = std::min(mn, std::abs(b));
  }
  if (mn == 0.0) {
    out->warnings.push_back(std::string(what) + ": zero coefficient, magnitude ratio undefined");
    return kNan;
  }
  return mx / mn;
}

// mean pairwise Euclidean distance over the first m entries of `order`,
// walking pairs in a fixed traversal so the q=1 hook reproduces the
// full-sample value exactly.
double mean_pairwise(const bbob::SampleSet& s, const std::vector<size_t>& order, size_t m) {
  if (m < 2) return 0.0;
  NeumaierSum acc;
  for (size_t i = 0; i + 1 < m; ++i)
    for (size_t j = i + 1; j < m; ++j)
      acc.add(euclid(s.x.row(order[i]), s.x.row(order[j]), s.x.cols));
  return acc.value() / (static_cast<double>(m) * static_cast<double>(m - 1) / 2.0);
}

// indices sorted by (y, original index): the elite-subset order
std::vector<size_t> by_fitness(const bbob::SampleSet& s) {
  std::vector<size_t> order(s.y.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (s.y[a] != s.y[b]) return s.y[a] < s.y[b];
    return a < b;
  });
  return order;
}

}  // namespace

// ---------------------------------------------------------------------------
const std::vector<std::string>& ela_canonical_keys() {
  static const std::vector<std::string> kKeys = {
      "ela_meta.lin_simple.adj_r2",
      "ela_meta.lin_simple.coef.max_by_min",
      "ela_meta.quad_simple.adj_r2",
      "ela_meta.quad_simple.cond",
      "ela_distr.skewness",
      "ela_distr.kurtosis",
      "ela_distr.number_of_peaks",
      "nbc.nn_nb.mean_ratio",
      "nbc.nn_nb.sd_ratio",
      "nbc.nn_nb.cor",
      "nbc.nb_fitness.cor",
      "nbc.dist_ratio.coeff_var",
      "disp.diff_mean_02",
      "disp.diff_mean_05",
      "disp.diff_mean_10",
      "disp.diff_mean_25",
      "disp.ratio_mean_02",
      "disp.ratio_mean_10",
      "ic.h_max",
      "ic.eps_s",
      "ic.eps_max",
      "ic.eps_ratio",
      "ic.m0",
  };
  return kKeys;
}

// ---------------------------------------------------------------------------
FeatureSet ela_meta(const bbob::SampleSet& s) {
  check_sample(s, "ela_meta");
  const size_t n = s.x.rows, dim = s.x.cols;
  require(n > 2 * dim + 2, "ela_meta: needs n > 2*dim + 2 samples");

  FeatureSet out;
  std::vector<size_t> order = canonical_order(s);
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) y[i] = s.y[order[i]];

  // linear model y ~ 1 + x
  {
    Matrix A(n, dim + 1);
    for (size_t i = 0; i < n; ++i) {
      A(i, 0) = 1.0;
      const double* row = s.x.row(order[i]);
      for (size_t d = 0; d < dim; ++d) A(i, 1 + d) = row[d];
    }
    std::vector<double> beta;
    if (!least_squares(A, y, &beta)) {
      out.values["ela_meta.lin_simple.adj_r2"] = kNan;
      out.values["ela_meta.lin_simple.coef.max_by_min"] = kNan;
      out.warnings.push_back("ela_meta: linear design is rank-deficient");
    } else {
      bool flat = false;
      double r2 = r_squared_of(A, y, beta, &flat);
      if (flat) {
        out.values["ela_meta.lin_simple.adj_r2"] = kNan;
        out.warnings.push_back("ela_meta: constant objective values, R^2 undefined");
      } else {
        out.values["ela_meta.lin_simple.adj_r2"] = adjusted_r2(r2, n, dim);
      }
      std::vector<double> slopes(beta.begin() + 1, beta.end());
      out.values["ela_meta.lin_simple.coef.max_by_min"] =
          max_by_min_abs(slopes, &out, "ela_meta.lin_simple");
    }
  }

  // quadratic model y ~ 1 + x + x^2 (pure squares, no interactions)
  {
    Matrix A(n, 2 * dim + 1);
    for (size_t i = 0; i < n; ++i) {
      A(i, 0) = 1.0;
      const double* row = s.x.row(order[i]);
      for (size_t d = 0; d < dim; ++d) {
        A(i, 1 + d) = row[d];
        A(i, 1 + dim + d) = row[d] * row[d];
      }
    }
    std::vector<double> beta;
    if (!least_squares(A, y, &beta)) {
      out.values["ela_meta.quad_simple.adj_r2"] = kNan;
      out.values["ela_meta.quad_simple.cond"] = kNan;
      out.warnings.push_back("ela_meta: quadratic design is rank-deficient");
    } else {
      bool flat = false;
      double r2 = r_squared_of(A, y, beta, &flat);
      if (flat) {
        out.values["ela_meta.quad_simple.adj_r2"] = kNan;
        out.warnings.push_back("ela_meta: constant objective values, R^2 undefined");
      } else {
        out.values["ela_meta.quad_simple.adj_r2"] = adjusted_r2(r2, n, 2 * dim);
      }
      std::vector<double> squares(beta.begin() + 1 + dim, beta.end());
      out.values["ela_meta.quad_simple.cond"] =
          max_by_min_abs(squares, &out, "ela_meta.quad_simple");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
FeatureSet ela_distr(const bbob::SampleSet& s) {
  check_sample(s, "ela_distr");
  const size_t n = s.y.size();
  require(n >= 4, "ela_distr: needs at least 4 samples");

  FeatureSet out;
  std::vector<double> y = s.y;
  std::sort(y.begin(), y.end());

  double m = mean_of(y);
  NeumaierSum s2, s3, s4;
  for (double v : y) {
    double d = v - m;
    s2.add(d * d);
    s3.add(d * d * d);
    s4.add(d * d * d * d);
  }
  double m2 = s2.value() / static_cast<double>(n);
  double m3 = s3.value() / static_cast<double>(n);
  double m4 = s4.value() / static_cast<double>(n);
  out.values["ela_distr.skewness"] = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  out.values["ela_distr.kurtosis"] = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

  // modality: Gaussian KDE on a 512-point grid, modes weighed by the share
  // of density mass between their flanking minima
  double peaks = 1.0;
  double sd = sample_sd(y);
  if (sd > 0.0) {
    const size_t kGrid = 512;
    double h = 1.06 * sd * std::pow(static_cast<double>(n), -0.2);
    double lo = y.front() - 3.0 * h, hi = y.back() + 3.0 * h;
    double step = (hi - lo) / static_cast<double>(kGrid - 1);
    std::vector<double> dens(kGrid, 0.0);
    for (size_t t = 0; t < kGrid; ++t) {
      double g = lo + static_cast<double>(t) * step;
      double acc = 0.0;
      for (double v : y) {
        double z = (g - v) / h;
        acc += std::exp(-0.5 * z * z);
      }
      dens[t] = acc;  // 1/(n h sqrt(2pi)) dropped: only mass ratios matter
    }
    // plateau-aware strict local maxima
    std::vector<size_t> mode_at;
    size_t t = 0;
    while (t < kGrid) {
      size_t u = t;
      while (u + 1 < kGrid && dens[u + 1] == dens[t]) ++u;
      bool rise = t == 0 || dens[t - 1] < dens[t];
      bool fall = u == kGrid - 1 || dens[u + 1] < dens[t];
      if (rise && fall) mode_at.push_back(t);
      t = u + 1;
    }
    if (!mode_at.empty()) {
      std::vector<size_t> bounds = {0};
      for (size_t k = 1; k < mode_at.size(); ++k) {
        size_t valley = mode_at[k - 1] + 1;
        for (size_t i = valley + 1; i < mode_at[k]; ++i)
          if (dens[i] < dens[valley]) valley = i;
        bounds.push_back(valley);
      }
      bounds.push_back(kGrid);
      double total = 0.0;
      for (double d : dens) total += d;
      size_t kept = 0;
      for (size_t k = 0; k + 1 < bounds.size(); ++k) {
        double mass = 0.0;
        for (size_t i = bounds[k]; i < bounds[k + 1]; ++i) mass += dens[i];
        if (mass >= 0.01 * total) ++kept;
      }
      peaks = static_cast<double>(kept);
    }
  }
  out.values["ela_distr.number_of_peaks"] = peaks;
  return out;
}

// ---------------------------------------------------------------------------
FeatureSet nbc(const bbob::SampleSet& s) {
  check_sample(s, "nbc");
  const size_t n = s.y.size(), dim = s.x.cols;
  require(n >= 5, "nbc: needs at least 5 samples");

  FeatureSet out;
  auto all_nan = [&](const std::string& why) {
    for (const char* k : {"nbc.nn_nb.mean_ratio", "nbc.nn_nb.sd_ratio", "nbc.nn_nb.cor",
                          "nbc.nb_fitness.cor", "nbc.dist_ratio.coeff_var"})
      out.values[k] = kNan;
    out.warnings.push_back(why);
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> nn(n, kInf), nb(n, kInf);
  std::vector<size_t> nb_target(n, n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      double d = euclid(s.x.row(i), s.x.row(j), dim);
      if (d < nn[i]) nn[i] = d;
      // strict fitness improvement only; distance ties keep the lower index
      if (s.y[j] < s.y[i] && d < nb[i]) {
        nb[i] = d;
        nb_target[i] = j;
      }
    }
  }

  std::vector<size_t> order = canonical_order(s);
  std::vector<double> nn_all, nn_def, nb_def, ratio_def, y_all, indeg(n, 0.0);
  bool zero_nn = false;  // duplicated rows make nb/nn blow up
  for (size_t i = 0; i < n; ++i)
    if (nb_target[i] < n) indeg[nb_target[i]] += 1.0;
  for (size_t idx : order) {
    nn_all.push_back(nn[idx]);
    y_all.push_back(s.y[idx]);
    if (nb_target[idx] < n) {
      nn_def.push_back(nn[idx]);
      nb_def.push_back(nb[idx]);
      if (nn[idx] == 0.0)
        zero_nn = true;
      else
        ratio_def.push_back(nb[idx] / nn[idx]);
    }
  }
  if (nb_def.empty()) {
    all_nan("nbc: constant objective values, nearest-better distances undefined");
    return out;
  }

  // 0/0 from perfectly regular structures (all distances equal) counts as a
  // ratio of 1; a positive numerator over zero stays undefined
  auto safe_ratio = [&](double num, double den, const char* what) {
    if (den != 0.0) return num / den;
    if (num == 0.0) return 1.0;
    out.warnings.push_back(std::string(what) + ": zero denominator");
    return kNan;
  };
  out.values["nbc.nn_nb.mean_ratio"] =
      safe_ratio(mean_of(nn_all), mean_of(nb_def), "nbc.nn_nb.mean_ratio");

  if (nb_def.size() < 2) {
    out.values["nbc.nn_nb.sd_ratio"] = kNan;
    out.values["nbc.nn_nb.cor"] = kNan;
    out.values["nbc.dist_ratio.coeff_var"] = kNan;
    out.warnings.push_back("nbc: fewer than 2 points have a strictly better neighbor");
  } else {
    out.values["nbc.nn_nb.sd_ratio"] =
        safe_ratio(sample_sd(nn_all), sample_sd(nb_def), "nbc.nn_nb.sd_ratio");
    double cor = pearson(nn_def, nb_def);
    if (std::isnan(cor)) {
      // zero variance: identical vectors are perfectly correlated, anything
      // else is genuinely undefined
      if (nn_def == nb_def) {
        cor = 1.0;
      } else {
        out.warnings.push_back("nbc.nn_nb.cor: zero variance in distances");
      }
    }
    out.values["nbc.nn_nb.cor"] = cor;
    if (zero_nn || ratio_def.size() < 2) {
      out.values["nbc.dist_ratio.coeff_var"] = kNan;
      out.warnings.push_back("nbc.dist_ratio.coeff_var: coincident sample points");
    } else {
      double rmean = mean_of(ratio_def);
      if (rmean == 0.0) {
        out.values["nbc.dist_ratio.coeff_var"] = kNan;
        out.warnings.push_back("nbc.dist_ratio.coeff_var: zero mean ratio");
      } else {
        out.values["nbc.dist_ratio.coeff_var"] = sample_sd(ratio_def) / rmean;
      }
    }
  }

  std::vector<double> indeg_ord;
  for (size_t idx : order) indeg_ord.push_back(indeg[idx]);
  double fcor = pearson(y_all, indeg_ord);
  if (std::isnan(fcor))
    out.warnings.push_back("nbc.nb_fitness.cor: zero variance");  // unreachable for non-constant y
  out.values["nbc.nb_fitness.cor"] = fcor;
  return out;
}

// ---------------------------------------------------------------------------
void dispersion_subset(const bbob::SampleSet& s, double q, double* diff, double* ratio) {
  check_sample(s, "dispersion");
  require(q > 0.0 && q <= 1.0, "dispersion: quantile must be in (0,1]");
  const size_t n = s.y.size();
  std::vector<size_t> order = by_fitness(s);
  size_t m = static_cast<size_t>(std::ceil(q * static_cast<double>(n)));
  m = std::min(m, n);
  double sub = mean_pairwise(s, order, m);
  double all = mean_pairwise(s, order, n);
  *diff = sub - all;
  *ratio = all != 0.0 ? sub / all : kNan;
}

FeatureSet dispersion(const bbob::SampleSet& s) {
  check_sample(s, "dispersion");
  require(s.y.size() >= 50, "dispersion: needs at least 50 samples");

  FeatureSet out;
  const size_t n = s.y.size();
  std::vector<size_t> order = by_fitness(s);
  double all = mean_pairwise(s, order, n);
  if (all == 0.0)
    out.warnings.push_back("dispersion: all sample points coincide, ratios undefined");

  const std::pair<double, const char*> quantiles[] = {
      {0.02, "02"}, {0.05, "05"}, {0.10, "10"}, {0.25, "25"}};
  for (auto [q, tag] : quantiles) {
    size_t m = static_cast<size_t>(std::ceil(q * static_cast<double>(n)));
    double sub = mean_pairwise(s, order, m);
    out.values["disp.diff_mean_" + std::string(tag)] = sub - all;
    if (std::string(tag) == "02" || std::string(tag) == "10")
      out.values["disp.ratio_mean_" + std::string(tag)] = all != 0.0 ? sub / all : kNan;
  }
  return out;
}

// ---------------------------------------------------------------------------
FeatureSet info_content(const bbob::SampleSet& s, uint64_t tour_seed) {
  check_sample(s, "info_content");
  const size_t n = s.y.size(), dim = s.x.cols;
  require(n >= 10, "info_content: needs at least 10 samples");

  // tour bookkeeping runs on the coordinate-sorted order, so the walk (and
  // the seeded start) cannot depend on how the rows happened to be arranged
  std::vector<size_t> canon = canonical_order(s);
  bool two_distinct = false;
  for (size_t i = 1; i < n && !two_distinct; ++i) {
    const double* a = s.x.row(canon[0]);
    const double* b = s.x.row(canon[i]);
    for (size_t d = 0; d < dim; ++d)
      if (a[d] != b[d]) two_distinct = true;
  }
  require(two_distinct, "info_content: needs at least two distinct sample points");

  std::vector<size_t> rank(n);
  for (size_t pos = 0; pos < n; ++pos) rank[canon[pos]] = pos;

  FeatureSet out;
  auto all_nan = [&](const std::string& why) {
    for (const char* k : {"ic.h_max", "ic.eps_s", "ic.eps_max", "ic.eps_ratio", "ic.m0"})
      out.values[k] = kNan;
    out.warnings.push_back(why);
  };

  // nearest-neighbor chaining; distance ties resolved by canonical rank
  size_t start = canon[Rng(tour_seed).below(n)];
  std::vector<char> visited(n, 0);
  std::vector<size_t> tour(n);
  tour[0] = start;
  visited[start] = 1;
  for (size_t step = 1; step < n; ++step) {
    size_t cur = tour[step - 1];
    size_t best = n;
    double best_d = std::numeric_limits<double>::infinity();
    size_t best_rank = n;
    for (size_t j = 0; j < n; ++j) {
      if (visited[j]) continue;
      double d = euclid(s.x.row(cur), s.x.row(j), dim);
      if (d < best_d || (d == best_d && rank[j] < best_rank)) {
        best = j;
        best_d = d;
        best_rank = rank[j];
      }
    }
    tour[step] = best;
    visited[best] = 1;
  }

  std::vector<double> slope;
  for (size_t t = 0; t + 1 < n; ++t) {
    double d = euclid(s.x.row(tour[t]), s.x.row(tour[t + 1]), dim);
    if (d == 0.0) continue;  // coincident consecutive points carry no signal
    slope.push_back((s.y[tour[t + 1]] - s.y[tour[t]]) / d);
  }
  if (slope.size() < 2) {
    all_nan("info_content: fewer than 2 usable tour transitions");
    return out;
  }
  const size_t u = slope.size();

  // H: entropy over the six ordered unequal symbol pairs (base 6); M: length
  // of the zero-pruned, repeat-collapsed symbol string relative to n-1
  auto entropy_at = [&](double eps, double* H, double* M) {
    std::vector<int> sym(u);
    for (size_t i = 0; i < u; ++i) sym[i] = slope[i] > eps ? 1 : (slope[i] < -eps ? -1 : 0);
    double pairs = static_cast<double>(u - 1);
    double h = 0.0;
    size_t count[3][3] = {};
    for (size_t i = 0; i + 1 < u; ++i) ++count[sym[i] + 1][sym[i + 1] + 1];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (a == b || count[a][b] == 0) continue;
        double p = static_cast<double>(count[a][b]) / pairs;
        h -= p * std::log(p) / std::log(6.0);
      }
    *H = h;
    size_t len = 0;
    int prev = 2;  // sentinel outside {-1,0,1}
    for (int v : sym) {
      if (v == 0) continue;
      if (v != prev) ++len;
      prev = v;
    }
    *M = static_cast<double>(len) / static_cast<double>(n - 1);
  };

  // grid {0} ∪ {10^k : k = -5.00, -4.98, ..., 15.00}
  const size_t kSteps = 1001;
  std::vector<double> eps_grid = {0.0}, log_grid = {-std::numeric_limits<double>::infinity()};
  for (size_t j = 0; j < kSteps; ++j) {
    double k = -5.0 + 0.02 * static_cast<double>(j);
    eps_grid.push_back(std::pow(10.0, k));
    log_grid.push_back(k);
  }

  std::vector<double> H(eps_grid.size()), M(eps_grid.size());
  for (size_t g = 0; g < eps_grid.size(); ++g) entropy_at(eps_grid[g], &H[g], &M[g]);

  double h_max = 0.0;
  for (double h : H) h_max = std::max(h_max, h);
  out.values["ic.h_max"] = h_max;
  out.values["ic.m0"] = M[0];

  double eps_max = kNan;
  for (size_t g = 0; g < eps_grid.size(); ++g)
    if (H[g] == h_max) {
      eps_max = eps_grid[g];
      break;
    }
  out.values["ic.eps_max"] = eps_max;

  double eps_s = kNan;
  for (size_t g = 1; g < eps_grid.size(); ++g)
    if (H[g] < 0.05) {
      eps_s = log_grid[g];
      break;
    }
  if (std::isnan(eps_s))
    out.warnings.push_back("info_content: entropy never settles below 0.05 on the grid");
  out.values["ic.eps_s"] = eps_s;

  double eps_ratio = kNan;
  for (size_t g = 1; g < eps_grid.size(); ++g)
    if (M[g] <= 0.5 * M[0]) {
      eps_ratio = log_grid[g];
      break;
    }
  if (std::isnan(eps_ratio))
    out.warnings.push_back("info_content: modality never halves on the grid");
  out.values["ic.eps_ratio"] = eps_ratio;
  return out;
}

// ---------------------------------------------------------------------------
ElaVector compute_ela(const bbob::SampleSet& s, uint64_t tour_seed) {
  ElaVector v;
  v.fid = s.fid;
  v.iid = s.iid;
  v.dim = s.dim;
  v.sample_seed = s.sample_seed;
  for (const FeatureSet& f :
       {ela_meta(s), ela_distr(s), nbc(s), dispersion(s), info_content(s, tour_seed)}) {
    v.values.insert(f.values.begin(), f.values.end());
    v.warnings.insert(v.warnings.end(), f.warnings.begin(), f.warnings.end());
  }
  return v;
}

std::string ela_csv_header() {
  std::string h = "fid,iid,dim,sample_seed";
  for (const std::string& k : ela_canonical_keys()) {
    h += ',';
    h += k;
  }
  return h;
}

std::string ela_csv_row(const ElaVector& v) {
  std::string row = fmt_int(v.fid);
  row += ',';
  row += fmt_int(v.iid);
  row += ',';
  row += fmt_int(v.dim);
  row += ',';
  row += std::to_string(v.sample_seed);
  for (const std::string& k : ela_canonical_keys()) {
    auto it = v.values.find(k);
    require(it != v.values.end(), "ela_csv_row: missing feature " + k);
    row += ',';
    row += fmt_double_sig(it->second, 17);
  }
  return row;
}

}  // namespace psox
