#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "psox/kernels.hpp"
#include "psox/metrics.hpp"

namespace psox {

namespace {

void check_params(const AoccParams& p) {
  require(p.lb < p.ub, "aocc params: lb must be below ub");
  require(p.floor > 0.0, "aocc params: floor must be positive");
}

// shuffle-invariant mean/std: aggregate in sorted order
struct Summary {
  double mean = 0.0, pop_std = 0.0;
};

Summary summarize(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  Summary s;
  s.mean = mean_of(v);
  s.pop_std = pop_std(v);
  return s;
}

using ConfigKey = std::array<double, 7>;

ConfigKey key_of(const HyperParams& c) {
  return {c.c1, c.c2, c.w,
          static_cast<double>(c.n_particles), static_cast<double>(c.k),
          static_cast<double>(c.p), static_cast<double>(c.r)};
}

}  // namespace

std::vector<double> log_regret_series(const RunTrajectory& traj, double f_opt,
                                      const AoccParams& p) {
  check_params(p);
  std::vector<double> y;
  y.reserve(traj.best_so_far.size());
  for (double v : traj.best_so_far) {
    require(std::isfinite(v), "log_regret_series: non-finite best-so-far value");
    double regret = v - f_opt;
    check_integrity(regret >= -1e-9,
                    "best-so-far value " + fmt_double(v) + " beats the optimum " +
                        fmt_double(f_opt) + " (impossible regret)");
    y.push_back(std::log10(std::max(regret, p.floor)));
  }
  return y;
}

double aocc(const std::vector<double>& y, const AoccParams& p) {
  check_params(p);
  require(!y.empty(), "aocc: empty series");
  double s = kern::active_ops().aocc_sum(y.data(), y.size(), p.lb, p.ub);
  return s / static_cast<double>(y.size());
}

PerfStats performance_stats(const std::vector<RunRecord>& records, int fid) {
  require(!records.empty(), "performance_stats: empty record set");
  const TopologyKind topo = records[0].topology;
  const int dim = records[0].dim;

  struct Group {
    HyperParams config;
    std::vector<double> on_fid, pooled;
  };
  std::map<ConfigKey, Group> groups;
  std::vector<double> all_on_fid;
  for (const auto& r : records) {
    require(r.topology == topo && r.dim == dim,
            "performance_stats: records must share one (topology, dim)");
    Group& g = groups[key_of(r.config)];
    g.config = r.config;
    g.pooled.push_back(r.aocc);
    if (r.fid == fid) {
      g.on_fid.push_back(r.aocc);
      all_on_fid.push_back(r.aocc);
    }
  }
  require(!all_on_fid.empty(), "performance_stats: no records for the requested function");

  // map iteration order is lexicographic over the config tuple, so keeping a
  // strictly greater mean implements the documented tie-break
  const Group* single_best = nullptr;
  double sb_mean = 0.0;
  const Group* avg_best = nullptr;
  double ab_mean = 0.0;
  for (const auto& [key, g] : groups) {
    if (!g.on_fid.empty()) {
      double m = summarize(g.on_fid).mean;
      if (!single_best || m > sb_mean) {
        single_best = &g;
        sb_mean = m;
      }
    }
    double pooled = summarize(g.pooled).mean;
    if (!avg_best || pooled > ab_mean) {
      avg_best = &g;
      ab_mean = pooled;
    }
  }
  check_integrity(!avg_best->on_fid.empty(),
                  "performance_stats: avg-best config has no runs on the requested function");

  PerfStats out;
  Summary sb = summarize(single_best->on_fid);
  Summary ab = summarize(avg_best->on_fid);
  Summary all = summarize(all_on_fid);
  out.sbm = sb.mean;
  out.sbs = sb.pop_std;
  out.abm = ab.mean;
  out.abs = ab.pop_std;
  out.all_mean = all.mean;
  out.all_std = all.pop_std;
  out.single_best_config = single_best->config;
  out.avg_best_config = avg_best->config;
  return out;
}

std::string stats_csv_header() {
  return "topology,fid,dim,sbm,sbs,abm,abs,all_mean,all_std,sb_config,ab_config";
}

std::string stats_csv_row(const PerfStats& s, TopologyKind topo, int fid, int dim) {
  std::string row;
  row += std::string(to_string(topo)) + ',';
  row += fmt_int(fid) + ',';
  row += fmt_int(dim) + ',';
  row += fmt_double(s.sbm) + ',';
  row += fmt_double(s.sbs) + ',';
  row += fmt_double(s.abm) + ',';
  row += fmt_double(s.abs) + ',';
  row += fmt_double(s.all_mean) + ',';
  row += fmt_double(s.all_std) + ',';
  row += serialize_config(s.single_best_config) + ',';
  row += serialize_config(s.avg_best_config);
  return row;
}

}  // namespace psox
