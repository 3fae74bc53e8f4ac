// Plan expansion, checkpointed execution, and the CSV/JSON/SVG emitters
// behind the command-line verbs.

#include "psox/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iterator>
#include <limits>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace psox {

namespace {

namespace fs = std::filesystem;

uint64_t parse_u64(const std::string& s) {
  uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc() && p == s.data() + s.size(),
          "bad unsigned field: '" + s + "'");
  return v;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

// schema check that names the first offending column
void require_header(const std::string& got, const std::string& want,
                    const std::string& what) {
  if (got == want) return;
  const std::vector<std::string> g = split_fields(got), w = split_fields(want);
  for (size_t i = 0; i < w.size(); ++i) {
    const std::string have = i < g.size() ? g[i] : "<missing>";
    require(have == w[i], what + ": expected column '" + w[i] + "' at position " +
                              fmt_int(int64_t(i)) + ", found '" + have + "'");
  }
  require(g.size() == w.size(),
          what + ": unexpected extra column '" + g[w.size()] + "'");
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), "cannot open for writing: " + path);
  return out;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out = open_out(path);
  out << content;
  out.close();
  require(out.good(), "write failed: " + path);
}

// a run's identity inside one plan
using TaskKey = std::tuple<int, size_t, int, int, int, int>;  // topo, cfg, fid, iid, dim, rep

struct RunTask {
  TopologyKind topology = TopologyKind::star;
  size_t config_index = 0;
  int fid = 0, iid = 0, dim = 0, rep = 0;
  TaskKey key() const {
    return {int(topology), config_index, fid, iid, dim, rep};
  }
};

void validate_plan(const ExperimentPlan& plan) {
  require(!plan.topologies.empty(), "plan: no topologies");
  require(!plan.configs.empty(), "plan: no configs");
  require(!plan.fids.empty(), "plan: no fids");
  require(!plan.iids.empty(), "plan: no iids");
  require(!plan.dims.empty(), "plan: no dims");
  require(plan.reps >= 1, "plan: reps must be >= 1");
  require(plan.jobs >= 1, "plan: jobs must be >= 1");
  require(!plan.out_dir.empty(), "plan: empty output directory");
  for (const int dim : plan.dims) budget_for(plan, dim);
}

std::vector<RunTask> enumerate_tasks(const ExperimentPlan& plan) {
  std::vector<RunTask> tasks;
  tasks.reserve(plan_total(plan));
  for (const TopologyKind t : plan.topologies)
    for (size_t ci = 0; ci < plan.configs.size(); ++ci)
      for (const int fid : plan.fids)
        for (const int iid : plan.iids)
          for (const int dim : plan.dims)
            for (int rep = 0; rep < plan.reps; ++rep)
              tasks.push_back({t, ci, fid, iid, dim, rep});
  return tasks;
}

bool canonical_less(const IndexedRun& a, const IndexedRun& b) {
  const RunRecord &x = a.record, &y = b.record;
  return std::tuple(int(x.topology), x.fid, x.iid, x.dim, x.rep, a.config_index) <
         std::tuple(int(y.topology), y.fid, y.iid, y.dim, y.rep, b.config_index);
}

// checkpoint rows must have been produced by this very plan
void check_against_plan(const IndexedRun& row, const ExperimentPlan& plan,
                        const std::string& where) {
  const RunRecord& r = row.record;
  check_integrity(row.config_index < plan.configs.size(),
                  where + ": config index out of range");
  check_integrity(plan.configs[row.config_index] == r.config,
                  where + ": row config disagrees with the plan's config list");
  const uint64_t want =
      run_seed(plan.master_seed, r.topology, row.config_index, r.fid, r.iid, r.dim, r.rep);
  check_integrity(r.seed == want, where + ": seed does not match the plan");
}

// everything that determines row content; out_dir and jobs deliberately absent
std::string plan_signature(const ExperimentPlan& plan) {
  std::string s = "master_seed=" + std::to_string(plan.master_seed);
  s += " reps=" + fmt_int(plan.reps);
  s += " topologies=";
  for (const TopologyKind t : plan.topologies) s += std::string(to_string(t)) + ";";
  s += " fids=";
  for (const int v : plan.fids) s += fmt_int(v) + ";";
  s += " iids=";
  for (const int v : plan.iids) s += fmt_int(v) + ";";
  s += " dims=";
  for (const int v : plan.dims) s += fmt_int(v) + ";";
  s += " budgets=";
  for (const auto& [dim, budget] : plan.budget_by_dim)
    s += fmt_int(dim) + ":" + fmt_int(budget) + ";";
  s += " configs=";
  for (const HyperParams& c : plan.configs) s += serialize_config(c) + ";";
  s += "\n";
  return s;
}

std::string failure_row(const RunTask& t, const std::string& error) {
  std::string s = to_string(t.topology);
  s += ',';
  s += fmt_int(int64_t(t.config_index));
  s += ',';
  s += fmt_int(t.fid);
  s += ',';
  s += fmt_int(t.iid);
  s += ',';
  s += fmt_int(t.dim);
  s += ',';
  s += fmt_int(t.rep);
  s += ',';
  std::string msg = error;  // keep the CSV single-line and comma-free
  for (char& c : msg)
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  s += msg;
  return s;
}

}  // namespace

size_t plan_total(const ExperimentPlan& plan) {
  return plan.topologies.size() * plan.configs.size() * plan.fids.size() *
         plan.iids.size() * plan.dims.size() * size_t(plan.reps);
}

int budget_for(const ExperimentPlan& plan, int dim) {
  const auto it = plan.budget_by_dim.find(dim);
  require(it != plan.budget_by_dim.end(),
          "plan: no budget configured for dim " + fmt_int(dim));
  require(it->second >= 1, "plan: budget must be >= 1");
  return it->second;
}

uint64_t run_seed(uint64_t master_seed, TopologyKind topology, size_t config_index,
                  int fid, int iid, int dim, int rep) {
  return split64(master_seed, uint64_t(topology), uint64_t(config_index),
                 uint64_t(fid), uint64_t(iid), uint64_t(dim), uint64_t(rep));
}

RunRecord execute_run(TopologyKind topology, const HyperParams& config, int fid,
                      int iid, int dim, int rep, int budget, uint64_t seed) {
  require(budget >= 1, "execute_run: budget must be >= 1");
  RunSpec spec;
  spec.instance = bbob::make_instance(fid, iid, dim);
  spec.config = config;
  spec.topology = topology;
  spec.budget = budget;
  spec.seed = seed;
  const RunTrajectory traj = run(spec);

  RunRecord rec;
  rec.topology = topology;
  rec.fid = fid;
  rec.iid = iid;
  rec.dim = dim;
  rec.rep = rep;
  rec.seed = seed;
  rec.config = config;
  rec.aocc = aocc(log_regret_series(traj, spec.instance.f_opt));
  rec.final_regret = traj.best_so_far.back() - spec.instance.f_opt;
  return rec;
}

std::string run_csv_header() {
  return "topology,config_index,fid,iid,dim,rep,seed,c1,c2,w,n_particles,k,p,r,"
         "aocc,final_regret";
}

std::string run_csv_row(const IndexedRun& r) {
  const RunRecord& rec = r.record;
  std::string s = to_string(rec.topology);
  s += ',';
  s += fmt_int(int64_t(r.config_index));
  s += ',';
  s += fmt_int(rec.fid);
  s += ',';
  s += fmt_int(rec.iid);
  s += ',';
  s += fmt_int(rec.dim);
  s += ',';
  s += fmt_int(rec.rep);
  s += ',';
  s += std::to_string(rec.seed);
  s += ',';
  s += fmt_double(rec.config.c1);
  s += ',';
  s += fmt_double(rec.config.c2);
  s += ',';
  s += fmt_double(rec.config.w);
  s += ',';
  s += fmt_int(rec.config.n_particles);
  s += ',';
  s += fmt_int(rec.config.k);
  s += ',';
  s += fmt_int(rec.config.p);
  s += ',';
  s += fmt_int(rec.config.r);
  s += ',';
  s += fmt_double(rec.aocc);
  s += ',';
  s += fmt_double(rec.final_regret);
  return s;
}

IndexedRun parse_run_row(const std::string& line) {
  const std::vector<std::string> f = split_fields(line);
  require(f.size() == 16, "run row: expected 16 fields, got " + fmt_int(int64_t(f.size())));
  IndexedRun r;
  r.record.topology = topology_from_string(f[0]);
  r.config_index = size_t(parse_int(f[1]));
  r.record.fid = int(parse_int(f[2]));
  r.record.iid = int(parse_int(f[3]));
  r.record.dim = int(parse_int(f[4]));
  r.record.rep = int(parse_int(f[5]));
  r.record.seed = parse_u64(f[6]);
  r.record.config.c1 = parse_double(f[7]);
  r.record.config.c2 = parse_double(f[8]);
  r.record.config.w = parse_double(f[9]);
  r.record.config.n_particles = int(parse_int(f[10]));
  r.record.config.k = int(parse_int(f[11]));
  r.record.config.p = int(parse_int(f[12]));
  r.record.config.r = int(parse_int(f[13]));
  r.record.aocc = parse_double(f[14]);
  r.record.final_regret = parse_double(f[15]);
  return r;
}

std::vector<IndexedRun> read_run_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open run table: " + path);
  std::string line;
  require(bool(std::getline(in, line)), "run table is empty: " + path);
  require_header(line, run_csv_header(), "run table " + path);
  std::vector<IndexedRun> rows;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      rows.push_back(parse_run_row(line));
    } catch (const ArgumentError& e) {
      throw ArgumentError(path + ":" + fmt_int(int64_t(lineno)) + ": " + e.what());
    }
  }
  return rows;
}

std::vector<RunRecord> records_of(const std::vector<IndexedRun>& rows) {
  std::vector<RunRecord> out;
  out.reserve(rows.size());
  for (const IndexedRun& r : rows) out.push_back(r.record);
  return out;
}

RunOutcome cmd_run(const ExperimentPlan& plan) {
  validate_plan(plan);
  fs::create_directories(plan.out_dir);

  RunOutcome outcome;
  outcome.runs_path = join_path(plan.out_dir, "runs.csv");
  outcome.checkpoint_path = join_path(plan.out_dir, "checkpoint.csv");
  outcome.failures_path = join_path(plan.out_dir, "failures.csv");

  // a sweep directory is bound to one plan; resuming under a different plan
  // (say, a changed budget) would silently mix incompatible rows
  const std::string plan_path = join_path(plan.out_dir, "plan.txt");
  const std::string signature = plan_signature(plan);
  if (fs::exists(plan_path)) {
    std::ifstream in(plan_path, std::ios::binary);
    std::string existing((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
    check_integrity(existing == signature,
                    "output directory holds a different plan (delete " + plan_path +
                        " and checkpoint.csv to start over): " + plan.out_dir);
  } else {
    write_text_file(plan_path, signature);
  }

  const std::vector<RunTask> tasks = enumerate_tasks(plan);
  std::set<TaskKey> planned;
  for (const RunTask& t : tasks) planned.insert(t.key());

  // resume: absorb completed keys from an existing checkpoint, refusing
  // anything that was not produced by this plan
  std::vector<IndexedRun> done;
  std::set<TaskKey> done_keys;
  if (fs::exists(outcome.checkpoint_path)) {
    std::ifstream in(outcome.checkpoint_path, std::ios::binary);
    require(in.good(), "cannot open checkpoint: " + outcome.checkpoint_path);
    std::string line;
    check_integrity(bool(std::getline(in, line)),
                    "checkpoint is empty (delete it to start over): " +
                        outcome.checkpoint_path);
    check_integrity(line == run_csv_header(),
                    "checkpoint header mismatch (delete it to start over): " +
                        outcome.checkpoint_path);
    size_t lineno = 1;
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const std::string where =
          "checkpoint " + outcome.checkpoint_path + ":" + fmt_int(int64_t(lineno));
      IndexedRun row;
      try {
        row = parse_run_row(line);
      } catch (const ArgumentError& e) {
        throw IntegrityError(where + ": unparseable row (" + e.what() + ")");
      }
      const RunRecord& r = row.record;
      const TaskKey key{int(r.topology), row.config_index, r.fid, r.iid, r.dim, r.rep};
      check_integrity(planned.count(key) != 0, where + ": run is not part of this plan");
      check_integrity(done_keys.insert(key).second, where + ": duplicate run");
      check_against_plan(row, plan, where);
      done.push_back(row);
    }
  }
  outcome.resumed = done.size();

  std::ofstream ck(outcome.checkpoint_path, std::ios::binary | std::ios::app);
  require(ck.good(), "cannot open checkpoint for append: " + outcome.checkpoint_path);
  if (outcome.resumed == 0 && fs::file_size(outcome.checkpoint_path) == 0) {
    ck << run_csv_header() << '\n';
    ck.flush();
  }
  std::ofstream fail(outcome.failures_path, std::ios::binary | std::ios::trunc);
  require(fail.good(), "cannot open for writing: " + outcome.failures_path);
  fail << "topology,config_index,fid,iid,dim,rep,error\n";

  std::vector<const RunTask*> todo;
  for (const RunTask& t : tasks)
    if (!done_keys.count(t.key())) todo.push_back(&t);

  std::mutex write_mu;
  std::atomic<size_t> cursor{0};
  const auto worker = [&] {
    while (true) {
      const size_t i = cursor.fetch_add(1);
      if (i >= todo.size()) return;
      const RunTask& t = *todo[i];
      const uint64_t seed = run_seed(plan.master_seed, t.topology, t.config_index,
                                     t.fid, t.iid, t.dim, t.rep);
      try {
        IndexedRun row;
        row.config_index = t.config_index;
        row.record = execute_run(t.topology, plan.configs[t.config_index], t.fid,
                                 t.iid, t.dim, t.rep, budget_for(plan, t.dim), seed);
        const std::lock_guard<std::mutex> lock(write_mu);
        ck << run_csv_row(row) << '\n';
        ck.flush();
        done.push_back(std::move(row));
        ++outcome.executed;
      } catch (const std::exception& e) {
        const std::lock_guard<std::mutex> lock(write_mu);
        fail << failure_row(t, e.what()) << '\n';
        fail.flush();
        ++outcome.failed;
      }
    }
  };

  const size_t n_workers = std::min(size_t(plan.jobs), std::max<size_t>(todo.size(), 1));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (size_t i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  ck.close();
  fail.close();

  std::sort(done.begin(), done.end(), canonical_less);
  std::ofstream out = open_out(outcome.runs_path);
  out << run_csv_header() << '\n';
  for (const IndexedRun& r : done) out << run_csv_row(r) << '\n';
  out.close();
  require(out.good(), "write failed: " + outcome.runs_path);
  return outcome;
}

ElaOutcome cmd_ela(const std::vector<int>& fids, const std::vector<int>& iids,
                   const std::vector<int>& dims, size_t n, uint64_t seed,
                   const std::string& out_dir) {
  require(!fids.empty() && !iids.empty() && !dims.empty(), "ela: empty id lists");
  require(n >= 1, "ela: sample size must be >= 1");
  fs::create_directories(out_dir);

  ElaOutcome outcome;
  outcome.csv_path = join_path(out_dir, "ela.csv");
  std::ofstream out = open_out(outcome.csv_path);
  out << ela_csv_header() << '\n';
  for (const int fid : fids)
    for (const int iid : iids)
      for (const int dim : dims) {
        const bbob::ProblemInstance inst = bbob::make_instance(fid, iid, dim);
        const bbob::SampleSet s =
            bbob::sample_instance(inst, n, split64(seed, uint64_t(fid), uint64_t(iid), uint64_t(dim), 0),
                                  bbob::SampleMethod::latin_hypercube);
        const uint64_t tour_seed =
            split64(seed, uint64_t(fid), uint64_t(iid), uint64_t(dim), 1);

        // unlike the library-level merge, an unmet family precondition must
        // not end the sweep: that family's columns go NaN with a warning
        ElaVector v;
        v.fid = s.fid;
        v.iid = s.iid;
        v.dim = s.dim;
        v.sample_seed = s.sample_seed;
        using FamilyFn = std::function<FeatureSet()>;
        const std::pair<const char*, FamilyFn> families[] = {
            {"ela_meta.", [&] { return ela_meta(s); }},
            {"ela_distr.", [&] { return ela_distr(s); }},
            {"nbc.", [&] { return nbc(s); }},
            {"disp.", [&] { return dispersion(s); }},
            {"ic.", [&] { return info_content(s, tour_seed); }},
        };
        for (const auto& [prefix, fn] : families) {
          try {
            const FeatureSet f = fn();
            v.values.insert(f.values.begin(), f.values.end());
            v.warnings.insert(v.warnings.end(), f.warnings.begin(), f.warnings.end());
          } catch (const ArgumentError& e) {
            for (const std::string& key : ela_canonical_keys())
              if (key.rfind(prefix, 0) == 0)
                v.values[key] = std::numeric_limits<double>::quiet_NaN();
            v.warnings.push_back(std::string(prefix) + "skipped: " + e.what());
          }
        }
        out << ela_csv_row(v) << '\n';
        const std::string tag = "fid=" + fmt_int(fid) + " iid=" + fmt_int(iid) +
                                " dim=" + fmt_int(dim) + ": ";
        for (const std::string& w : v.warnings) outcome.warnings.push_back(tag + w);
      }
  out.close();
  require(out.good(), "write failed: " + outcome.csv_path);
  return outcome;
}

std::vector<ElaVector> read_ela_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "cannot open feature table: " + path);
  std::string line;
  require(bool(std::getline(in, line)), "feature table is empty: " + path);
  require_header(line, ela_csv_header(), "feature table " + path);

  const std::vector<std::string>& keys = ela_canonical_keys();
  std::vector<ElaVector> out;
  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> f = split_fields(line);
    require(f.size() == 4 + keys.size(),
            path + ":" + fmt_int(int64_t(lineno)) + ": expected " +
                fmt_int(int64_t(4 + keys.size())) + " fields, got " +
                fmt_int(int64_t(f.size())));
    ElaVector v;
    v.fid = int(parse_int(f[0]));
    v.iid = int(parse_int(f[1]));
    v.dim = int(parse_int(f[2]));
    v.sample_seed = parse_u64(f[3]);
    for (size_t i = 0; i < keys.size(); ++i) v.values[keys[i]] = parse_double(f[4 + i]);
    out.push_back(std::move(v));
  }
  return out;
}

std::string cmd_stats(const std::string& runs_csv, const std::string& out_dir) {
  const std::vector<RunRecord> records = records_of(read_run_csv(runs_csv));
  require(!records.empty(), "stats: run table has no rows");
  fs::create_directories(out_dir);

  // performance_stats wants one (topology, dim) group spanning its functions
  std::map<std::pair<int, int>, std::vector<RunRecord>> groups;
  for (const RunRecord& r : records)
    groups[{int(r.topology), r.dim}].push_back(r);

  const std::string path = join_path(out_dir, "stats.csv");
  std::ofstream out = open_out(path);
  out << stats_csv_header() << '\n';
  for (const auto& [key, recs] : groups) {
    std::set<int> fids;
    for (const RunRecord& r : recs) fids.insert(r.fid);
    for (const int fid : fids) {
      const PerfStats s = performance_stats(recs, fid);
      out << stats_csv_row(s, TopologyKind(key.first), fid, key.second) << '\n';
    }
  }
  out.close();
  require(out.good(), "write failed: " + path);
  return path;
}

namespace {

// two-color ramp between the diverging endpoints used for the swarm plots
std::string ramp_color(double t) {
  static const int lo[3] = {59, 76, 192};   // #3b4cc0
  static const int hi[3] = {180, 4, 38};    // #b40426
  t = std::clamp(t, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x",
                int(std::lround(lo[0] + t * (hi[0] - lo[0]))),
                int(std::lround(lo[1] + t * (hi[1] - lo[1]))),
                int(std::lround(lo[2] + t * (hi[2] - lo[2]))));
  return buf;
}

std::string svg_num(double v) { return fmt_double_sig(v, 6); }

std::string group_stem(TopologyKind topology, int fid, int dim) {
  return std::string(to_string(topology)) + "_f" + fmt_int(fid) + "_d" + fmt_int(dim);
}

}  // namespace

std::string shap_swarm_svg(const ShapTable& table) {
  const std::vector<std::string>& names = shap_feature_names();
  const size_t m = names.size();
  const size_t n = table.predictions.size();
  require(table.rows.size() == n * m, "swarm plot: malformed attribution table");
  require(n >= 1, "swarm plot: empty table");

  const double band_h = 34.0, left = 180.0, plot_w = 560.0, top = 42.0, bottom = 46.0;
  const double width = left + plot_w + 40.0;
  const double height = top + double(m) * band_h + bottom;

  // symmetric-ish x range: all attributions plus zero, padded 5%
  double xmin = 0.0, xmax = 0.0;
  for (const ShapRow& r : table.rows) {
    xmin = std::min(xmin, r.shap_value);
    xmax = std::max(xmax, r.shap_value);
  }
  const double pad = 0.05 * std::max(xmax - xmin, 1e-12);
  xmin -= pad;
  xmax += pad;
  const auto x_of = [&](double v) { return left + (v - xmin) / (xmax - xmin) * plot_w; };

  // per-feature value range for the fill ramp
  std::vector<double> fmin(m, 0.0), fmax(m, 0.0);
  for (size_t j = 0; j < m; ++j) {
    fmin[j] = fmax[j] = table.rows[j].feature_value;
    for (size_t i = 1; i < n; ++i) {
      const double v = table.rows[i * m + j].feature_value;
      fmin[j] = std::min(fmin[j], v);
      fmax[j] = std::max(fmax[j], v);
    }
  }

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + svg_num(width) +
         "\" height=\"" + svg_num(height) + "\" viewBox=\"0 0 " + svg_num(width) + " " +
         svg_num(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<text x=\"" + svg_num(left) + "\" y=\"20\" font-family=\"sans-serif\" "
         "font-size=\"13\" fill=\"#333\">attribution per run, " +
         std::string(to_string(table.topology)) + " f" + fmt_int(table.fid) + " dim " +
         fmt_int(table.dim) + "</text>\n";

  // alternating band backgrounds, then the zero axis
  for (size_t j = 0; j < m; ++j) {
    if (j % 2 == 0)
      svg += "<rect x=\"" + svg_num(left) + "\" y=\"" + svg_num(top + double(j) * band_h) +
             "\" width=\"" + svg_num(plot_w) + "\" height=\"" + svg_num(band_h) +
             "\" fill=\"#f4f6fa\"/>\n";
    svg += "<text x=\"" + svg_num(left - 8.0) + "\" y=\"" +
           svg_num(top + (double(j) + 0.5) * band_h + 4.0) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
           "fill=\"#333\">" + names[j] + "</text>\n";
  }
  const double axis_bottom = top + double(m) * band_h;
  svg += "<line x1=\"" + svg_num(x_of(0.0)) + "\" y1=\"" + svg_num(top) + "\" x2=\"" +
         svg_num(x_of(0.0)) + "\" y2=\"" + svg_num(axis_bottom) +
         "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  for (const double tick : {xmin + pad, 0.0, xmax - pad}) {
    svg += "<text x=\"" + svg_num(x_of(tick)) + "\" y=\"" + svg_num(axis_bottom + 18.0) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#555\">" + fmt_double_sig(tick, 3) + "</text>\n";
  }

  // points: x = attribution, y jittered inside the band, fill = feature value
  Rng jitter(split64(0x73776172u, uint64_t(table.topology), uint64_t(table.fid),
                     uint64_t(table.dim)));
  for (size_t j = 0; j < m; ++j) {
    const double center = top + (double(j) + 0.5) * band_h;
    const double span = fmax[j] - fmin[j];
    for (size_t i = 0; i < n; ++i) {
      const ShapRow& r = table.rows[i * m + j];
      const double t = span > 0.0 ? (r.feature_value - fmin[j]) / span : 0.5;
      const double y = center + (jitter.u01() - 0.5) * band_h * 0.66;
      svg += "<circle cx=\"" + svg_num(x_of(r.shap_value)) + "\" cy=\"" + svg_num(y) +
             "\" r=\"2.5\" fill=\"" + ramp_color(t) + "\" fill-opacity=\"0.85\"/>\n";
    }
  }

  // ramp legend
  const double ly = axis_bottom + 34.0;
  svg += "<text x=\"" + svg_num(left) + "\" y=\"" + svg_num(ly) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">feature value:"
         "</text>\n";
  for (int step = 0; step <= 20; ++step) {
    svg += "<rect x=\"" + svg_num(left + 90.0 + step * 5.0) + "\" y=\"" + svg_num(ly - 9.0) +
           "\" width=\"5\" height=\"10\" fill=\"" + ramp_color(step / 20.0) + "\"/>\n";
  }
  svg += "<text x=\"" + svg_num(left + 90.0 + 21 * 5.0 + 6.0) + "\" y=\"" + svg_num(ly) +
         "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#555\">low to high"
         "</text>\n";
  svg += "</svg>\n";
  return svg;
}

ExplainOutcome cmd_explain(const std::string& runs_csv, const std::string& out_dir,
                           uint64_t seed) {
  const std::vector<RunRecord> records = records_of(read_run_csv(runs_csv));
  require(!records.empty(), "explain: run table has no rows");
  fs::create_directories(out_dir);

  std::map<std::tuple<int, int, int>, std::vector<RunRecord>> groups;
  for (const RunRecord& r : records)
    groups[{int(r.topology), r.fid, r.dim}].push_back(r);

  ExplainOutcome outcome;
  outcome.csv_path = join_path(out_dir, "shap.csv");
  std::ofstream out = open_out(outcome.csv_path);
  out << shap_csv_header() << '\n';
  for (const auto& [key, recs] : groups) {
    const auto [topo, fid, dim] = key;
    const ShapTable table =
        aggregate_shap(recs, split64(seed, uint64_t(topo), uint64_t(fid), uint64_t(dim)));
    for (size_t i = 0; i < table.rows.size(); ++i) out << shap_csv_row(table, i) << '\n';

    const std::string stem = group_stem(TopologyKind(topo), fid, dim);
    const std::string model_path = join_path(out_dir, "model_" + stem + ".json");
    write_text_file(model_path, model_to_json(table.model));
    outcome.model_paths.push_back(model_path);
    const std::string svg_path = join_path(out_dir, "swarm_" + stem + ".svg");
    write_text_file(svg_path, shap_swarm_svg(table));
    outcome.svg_paths.push_back(svg_path);
    for (const std::string& w : table.warnings)
      outcome.warnings.push_back(stem + ": " + w);
  }
  out.close();
  require(out.good(), "write failed: " + outcome.csv_path);
  return outcome;
}

namespace {

std::vector<RunRecord> topology_slice(const std::string& runs_csv, TopologyKind topology,
                                      const std::string& what) {
  std::vector<RunRecord> out;
  for (const RunRecord& r : records_of(read_run_csv(runs_csv)))
    if (r.topology == topology) out.push_back(r);
  require(!out.empty(), what + ": run table has no rows for topology " +
                            std::string(to_string(topology)));
  return out;
}

}  // namespace

LearnOutcome cmd_learn(const std::string& runs_csv, const std::string& ela_csv,
                       TopologyKind topology, int depth, const std::string& out_dir) {
  const std::vector<RunRecord> records = topology_slice(runs_csv, topology, "learn");
  const LabeledDataset ds = build_dataset(records, read_ela_csv(ela_csv));
  fs::create_directories(out_dir);

  LearnOutcome outcome;
  outcome.exclusions = ds.exclusions;
  outcome.dataset_path = join_path(out_dir, "dataset.csv");
  std::ofstream out = open_out(outcome.dataset_path);
  out << "fid,iid,dim,w_star,best_mean_aocc,best_config\n";
  for (const DatasetRow& r : ds.rows) {
    out << fmt_int(r.fid) << ',' << fmt_int(r.iid) << ',' << fmt_int(r.dim) << ','
        << fmt_double(r.w_star) << ',' << fmt_double_sig(r.best_mean_aocc, 17) << ','
        << serialize_config(r.best) << '\n';
  }
  out.close();
  require(out.good(), "write failed: " + outcome.dataset_path);

  for (const std::string param : {"c1", "c2", "w", "n_particles", "k", "p", "r"}) {
    const TreeModel tree = fit_param_tree(ds, param, depth);
    const std::string path = join_path(out_dir, "rules_" + param + ".txt");
    write_text_file(path, export_tree_rules(tree, ds.feature_names));
    outcome.rules_paths.push_back(path);
  }
  return outcome;
}

ValidateOutcome cmd_validate(const std::string& runs_csv, const std::string& ela_csv,
                             TopologyKind topology, Scheme scheme, LearnerKind kind,
                             int depth, uint64_t seed, const std::string& out_dir) {
  const std::vector<RunRecord> records = topology_slice(runs_csv, topology, "validate");
  const LabeledDataset ds = build_dataset(records, read_ela_csv(ela_csv));
  fs::create_directories(out_dir);

  ValidateOutcome outcome;
  outcome.report = validate(ds, records, scheme, kind, depth, seed);
  outcome.csv_path = join_path(out_dir, "validation.csv");
  std::ofstream out = open_out(outcome.csv_path);
  out << learner_csv_header() << '\n';
  for (const FoldResult& f : outcome.report.folds) out << learner_csv_row(f) << '\n';
  out.close();
  require(out.good(), "write failed: " + outcome.csv_path);
  return outcome;
}

double bench_eval(int fid, int iid, int dim, const std::vector<double>& x) {
  require(int(x.size()) == dim,
          "bench-eval: point has " + fmt_int(int64_t(x.size())) + " coordinates, dim is " +
              fmt_int(dim));
  return bbob::evaluate(bbob::make_instance(fid, iid, dim), x);
}

}  // namespace psox
