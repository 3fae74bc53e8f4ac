#pragma once
// Anytime performance scoring: log-regret series, the area-over-convergence
// measure (1/B)·Σ[1 − (clamp(y,lb,ub) − lb)/(ub − lb)], and the per-function
// single-best / average-best aggregation tables.

#include <string>
#include <vector>

#include "psox/configspace.hpp"
#include "psox/swarm.hpp"

namespace psox {

struct AoccParams {
  double lb = -5.0;      // lower clamp on log10 regret
  double ub = 5.0;       // upper clamp
  double floor = 1e-8;   // regret floor before the log, keeps solved runs at lb
};

struct RunRecord {
  TopologyKind topology = TopologyKind::star;
  int fid = 0, iid = 0, dim = 0, rep = 0;
  uint64_t seed = 0;
  HyperParams config;
  double aocc = 0.0;          // in [0,1]
  double final_regret = 0.0;  // >= 0
  bool operator==(const RunRecord&) const = default;
};

struct PerfStats {
  double sbm = 0.0, sbs = 0.0;  // single-best config: mean/std on this function
  double abm = 0.0, abs = 0.0;  // avg-best config: mean/std on this function
  double all_mean = 0.0, all_std = 0.0;
  HyperParams single_best_config, avg_best_config;
};

// y_i = log10(max(best_so_far_i - f_opt, floor)); clamping happens in aocc()
std::vector<double> log_regret_series(const RunTrajectory& traj, double f_opt,
                                      const AoccParams& p = {});

double aocc(const std::vector<double>& y, const AoccParams& p = {});

// records must share one (topology, dim) and may span many functions; the
// stats are reported for `fid`: single_best maximizes the mean AOCC on fid,
// avg_best maximizes the mean pooled across every function in the set, and
// both are then summarized by their runs on fid. Mean ties keep the
// lexicographically smallest config (field order c1,c2,w,n_particles,k,p,r).
// Standard deviations are population (divide by N).
PerfStats performance_stats(const std::vector<RunRecord>& records, int fid);

std::string stats_csv_header();
std::string stats_csv_row(const PerfStats& s, TopologyKind topo, int fid, int dim);

}  // namespace psox
