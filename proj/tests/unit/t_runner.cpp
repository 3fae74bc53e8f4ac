#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "psox/runner.hpp"

using namespace psox;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start < text.size()) {
    const size_t pos = text.find('\n', start);
    if (pos == std::string::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

// fresh scratch directory per test site
std::string scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "psox_runner_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

HyperParams cfg(double w, double c1 = 0.5, int n = 8) {
  HyperParams c;
  c.c1 = c1;
  c.c2 = 0.4;
  c.w = w;
  c.n_particles = n;
  c.k = 1;
  c.p = 1;
  c.r = 1;
  return c;
}

ExperimentPlan small_plan(const std::string& out_dir) {
  ExperimentPlan plan;
  plan.topologies = {TopologyKind::star, TopologyKind::ring};
  plan.configs = {cfg(0.7), cfg(0.5, 0.9)};
  plan.config_source = "list";
  plan.fids = {1, 2};
  plan.iids = {1};
  plan.dims = {2};
  plan.reps = 2;
  plan.budget_by_dim = {{2, 5}};
  plan.master_seed = 99;
  plan.out_dir = out_dir;
  plan.jobs = 1;
  return plan;
}

// synthetic run table on disk: everything metrics-level, no PSO involved
std::string write_run_table(const std::string& dir,
                            const std::vector<IndexedRun>& rows) {
  const std::string path = (fs::path(dir) / "runs.csv").string();
  std::ofstream out(path, std::ios::binary);
  out << run_csv_header() << '\n';
  for (const IndexedRun& r : rows) out << run_csv_row(r) << '\n';
  return path;
}

IndexedRun synthetic_run(TopologyKind topo, int fid, int iid, int dim, int rep,
                         size_t config_index, const HyperParams& c, double aocc) {
  IndexedRun r;
  r.config_index = config_index;
  r.record.topology = topo;
  r.record.fid = fid;
  r.record.iid = iid;
  r.record.dim = dim;
  r.record.rep = rep;
  r.record.seed = split64(7, config_index, uint64_t(fid), uint64_t(iid), uint64_t(rep));
  r.record.config = c;
  r.record.aocc = aocc;
  r.record.final_regret = 1.0 - aocc;
  return r;
}

constexpr const char* kPlantedKey = "ela_meta.lin_simple.adj_r2";

std::string write_ela_table(const std::string& dir,
                            const std::vector<std::tuple<int, int, double>>& keys) {
  const std::string path = (fs::path(dir) / "ela.csv").string();
  std::ofstream out(path, std::ios::binary);
  out << ela_csv_header() << '\n';
  for (const auto& [fid, iid, planted] : keys) {
    ElaVector v;
    v.fid = fid;
    v.iid = iid;
    v.dim = 2;
    v.sample_seed = 1;
    for (const std::string& k : ela_canonical_keys()) v.values[k] = 0.37;
    v.values[kPlantedKey] = planted;
    out << ela_csv_row(v) << '\n';
  }
  return path;
}

}  // namespace

TEST_SUITE("runner") {
  TEST_CASE("plan accounting and per-dimension budgets") {
    ExperimentPlan plan = small_plan(scratch("plan"));
    CHECK(plan_total(plan) == 2 * 2 * 2 * 1 * 1 * 2);
    CHECK(budget_for(plan, 2) == 5);
    CHECK_THROWS_AS(budget_for(plan, 3), ArgumentError);

    const ExperimentPlan defaults;
    CHECK(budget_for(defaults, 2) == 100);
    CHECK(budget_for(defaults, 5) == 500);

    // seeds separate every coordinate of the cross product
    std::set<uint64_t> seeds;
    for (int t = 0; t < 2; ++t)
      for (size_t ci = 0; ci < 3; ++ci)
        for (int fid = 1; fid <= 3; ++fid)
          for (int rep = 0; rep < 2; ++rep)
            seeds.insert(run_seed(1, TopologyKind(t), ci, fid, 1, 2, rep));
    CHECK(seeds.size() == 2 * 3 * 3 * 2);
    CHECK(run_seed(1, TopologyKind::star, 0, 1, 1, 2, 0) ==
          split64(1, uint64_t(TopologyKind::star), 0, 1, 1, 2, 0));
  }

  TEST_CASE("a single run is reproducible and its row round-trips") {
    const RunRecord a = execute_run(TopologyKind::star, cfg(0.7), 1, 1, 2, 0, 5, 42);
    const RunRecord b = execute_run(TopologyKind::star, cfg(0.7), 1, 1, 2, 0, 5, 42);
    CHECK(a.aocc == b.aocc);
    CHECK(a.final_regret == b.final_regret);
    CHECK(a.aocc >= 0.0);
    CHECK(a.aocc <= 1.0);
    CHECK(a.final_regret >= 0.0);

    IndexedRun row;
    row.config_index = 3;
    row.record = a;
    const std::string line = run_csv_row(row);
    const IndexedRun back = parse_run_row(line);
    CHECK(back == row);
    CHECK(run_csv_row(back) == line);

    // shortest round-trip formatting survives ugly values
    IndexedRun ugly = row;
    ugly.record.seed = UINT64_MAX;
    ugly.record.aocc = 0.1 + 0.2;
    ugly.record.final_regret = 4.9406564584124654e-324;
    CHECK(parse_run_row(run_csv_row(ugly)) == ugly);

    CHECK_THROWS_AS(parse_run_row("star,0,1"), ArgumentError);
    CHECK_THROWS_AS(execute_run(TopologyKind::star, cfg(0.7), 1, 1, 2, 0, 0, 1),
                    ArgumentError);
  }

  TEST_CASE("cmd_run writes canonical sorted artifacts") {
    const std::string dir = scratch("basic");
    const ExperimentPlan plan = small_plan(dir);
    const RunOutcome out = cmd_run(plan);
    CHECK(out.executed == 16);
    CHECK(out.resumed == 0);
    CHECK(out.failed == 0);

    const std::vector<IndexedRun> rows = read_run_csv(out.runs_path);
    REQUIRE(rows.size() == 16);
    for (size_t i = 1; i < rows.size(); ++i) {
      const auto key = [](const IndexedRun& r) {
        return std::tuple(int(r.record.topology), r.record.fid, r.record.iid,
                          r.record.dim, r.record.rep, r.config_index);
      };
      CHECK(key(rows[i - 1]) < key(rows[i]));
    }
    for (const IndexedRun& r : rows) {
      CHECK(r.record.seed == run_seed(plan.master_seed, r.record.topology,
                                      r.config_index, r.record.fid, r.record.iid,
                                      r.record.dim, r.record.rep));
      CHECK(r.record.config == plan.configs[r.config_index]);
    }

    // failures file exists with only its header
    const std::vector<std::string> fail_lines = lines_of(slurp(out.failures_path));
    REQUIRE(fail_lines.size() == 1);
    CHECK(fail_lines[0] == "topology,config_index,fid,iid,dim,rep,error");

    // re-invocation executes nothing and leaves identical bytes
    const std::string before = slurp(out.runs_path);
    const RunOutcome again = cmd_run(plan);
    CHECK(again.executed == 0);
    CHECK(again.resumed == 16);
    CHECK(slurp(out.runs_path) == before);
  }

  TEST_CASE("worker count does not change the artifact") {
    const std::string a = scratch("jobs1"), b = scratch("jobs3");
    ExperimentPlan pa = small_plan(a);
    ExperimentPlan pb = small_plan(b);
    pb.jobs = 3;
    cmd_run(pa);
    cmd_run(pb);
    CHECK(slurp(a + "/runs.csv") == slurp(b + "/runs.csv"));
  }

  TEST_CASE("an interrupted sweep resumes to the identical artifact") {
    const std::string ref_dir = scratch("ref"), cut_dir = scratch("cut");
    cmd_run(small_plan(ref_dir));
    cmd_run(small_plan(cut_dir));

    // simulate a crash: keep only the first five completed rows
    const std::string ck_path = cut_dir + "/checkpoint.csv";
    const std::vector<std::string> ck = lines_of(slurp(ck_path));
    REQUIRE(ck.size() == 17);
    std::ofstream trunc(ck_path, std::ios::binary | std::ios::trunc);
    for (size_t i = 0; i < 6; ++i) trunc << ck[i] << '\n';
    trunc.close();
    fs::remove(cut_dir + "/runs.csv");

    const RunOutcome resumed = cmd_run(small_plan(cut_dir));
    CHECK(resumed.resumed == 5);
    CHECK(resumed.executed == 11);
    CHECK(slurp(cut_dir + "/runs.csv") == slurp(ref_dir + "/runs.csv"));
  }

  TEST_CASE("stale or corrupt checkpoints refuse to resume") {
    const std::string dir = scratch("corrupt");
    const ExperimentPlan plan = small_plan(dir);
    cmd_run(plan);

    // a different plan in the same directory
    ExperimentPlan other = plan;
    other.master_seed = 100;
    CHECK_THROWS_AS(cmd_run(other), IntegrityError);

    const std::string ck_path = dir + "/checkpoint.csv";
    const std::string original = slurp(ck_path);

    const auto rewrite = [&](const std::string& content) {
      std::ofstream out(ck_path, std::ios::binary | std::ios::trunc);
      out << content;
    };

    // tampered header
    rewrite("nonsense\n" + original.substr(original.find('\n') + 1));
    CHECK_THROWS_AS(cmd_run(plan), IntegrityError);

    // garbage row
    rewrite(original + "this,is,not,a,run\n");
    CHECK_THROWS_AS(cmd_run(plan), IntegrityError);

    // duplicated row
    const std::vector<std::string> rows = lines_of(original);
    rewrite(original + rows[1] + "\n");
    CHECK_THROWS_AS(cmd_run(plan), IntegrityError);

    // seed tampered on one row
    std::string edited = rows[1];
    const size_t seed_at = edited.find(",", edited.find(",", 0));  // walk to field 7
    std::vector<std::string> parts;
    {
      size_t start = 0;
      while (true) {
        const size_t pos = edited.find(',', start);
        if (pos == std::string::npos) {
          parts.push_back(edited.substr(start));
          break;
        }
        parts.push_back(edited.substr(start, pos - start));
        start = pos + 1;
      }
    }
    parts[6] = "12345";
    std::string patched = rows[0] + "\n";
    patched += parts[0];
    for (size_t i = 1; i < parts.size(); ++i) patched += "," + parts[i];
    patched += "\n";
    rewrite(patched);
    CHECK_THROWS_AS(cmd_run(plan), IntegrityError);
    (void)seed_at;

    // a row that is not part of the plan
    std::vector<std::string> alien = parts;
    rewrite(original);  // restore, then break the config index
    alien[1] = "9";
    std::string alien_row = alien[0];
    for (size_t i = 1; i < alien.size(); ++i) alien_row += "," + alien[i];
    rewrite(rows[0] + "\n" + alien_row + "\n");
    CHECK_THROWS_AS(cmd_run(plan), IntegrityError);

    // empty checkpoint file
    rewrite("");
    CHECK_THROWS_AS(cmd_run(plan), IntegrityError);
  }

  TEST_CASE("per-run failures are recorded without aborting the sweep") {
    const std::string dir = scratch("failures");
    ExperimentPlan plan = small_plan(dir);
    plan.fids = {1, 99};  // no such benchmark function
    const RunOutcome out = cmd_run(plan);
    CHECK(out.executed == 8);
    CHECK(out.failed == 8);
    CHECK(read_run_csv(out.runs_path).size() == 8);

    const std::vector<std::string> fail_lines = lines_of(slurp(out.failures_path));
    REQUIRE(fail_lines.size() == 9);
    for (size_t i = 1; i < fail_lines.size(); ++i) {
      CHECK(fail_lines[i].find(",99,") != std::string::npos);
      CHECK(fail_lines[i].find("fid") != std::string::npos);
      CHECK(fail_lines[i].find('\n') == std::string::npos);
    }
    for (const IndexedRun& r : read_run_csv(out.runs_path)) CHECK(r.record.fid == 1);
  }

  TEST_CASE("plan validation catches malformed plans") {
    ExperimentPlan plan = small_plan(scratch("badplan"));
    plan.configs.clear();
    CHECK_THROWS_AS(cmd_run(plan), ArgumentError);
    plan = small_plan(scratch("badplan2"));
    plan.reps = 0;
    CHECK_THROWS_AS(cmd_run(plan), ArgumentError);
    plan = small_plan(scratch("badplan3"));
    plan.budget_by_dim = {{2, 0}};
    CHECK_THROWS_AS(cmd_run(plan), ArgumentError);
  }

  TEST_CASE("ela sweep emits one row per crossing, rerun-identical") {
    const std::string a = scratch("ela_a"), b = scratch("ela_b");
    const ElaOutcome out = cmd_ela({1, 2}, {1}, {2}, 60, 5, a);
    const std::vector<ElaVector> rows = read_ela_csv(out.csv_path);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].fid == 1);
    CHECK(rows[1].fid == 2);
    for (const ElaVector& v : rows) CHECK(v.values.size() == ela_canonical_keys().size());

    cmd_ela({1, 2}, {1}, {2}, 60, 5, b);
    CHECK(slurp(a + "/ela.csv") == slurp(b + "/ela.csv"));
  }

  TEST_CASE("unmet family preconditions become warnings and NaN columns") {
    const std::string dir = scratch("ela_thin");
    // ten points: dispersion needs 50, everything else is satisfied
    const ElaOutcome out = cmd_ela({1}, {1}, {2}, 10, 5, dir);
    bool disp_warned = false;
    for (const std::string& w : out.warnings)
      if (w.find("disp.skipped") != std::string::npos) disp_warned = true;
    CHECK(disp_warned);

    const std::vector<ElaVector> rows = read_ela_csv(out.csv_path);
    REQUIRE(rows.size() == 1);
    for (const std::string& key : ela_canonical_keys()) {
      const double v = rows[0].values.at(key);
      if (key.rfind("disp.", 0) == 0)
        CHECK(std::isnan(v));
      else
        CHECK(std::isfinite(v));
    }
  }

  TEST_CASE("stats verb reproduces the per-function summaries") {
    const std::string dir = scratch("stats");
    cmd_run(small_plan(dir));
    const std::string path = cmd_stats(dir + "/runs.csv", dir);

    const std::vector<RunRecord> records = records_of(read_run_csv(dir + "/runs.csv"));
    std::string want = stats_csv_header() + "\n";
    for (const TopologyKind topo : {TopologyKind::star, TopologyKind::ring}) {
      std::vector<RunRecord> group;
      for (const RunRecord& r : records)
        if (r.topology == topo) group.push_back(r);
      for (const int fid : {1, 2})
        want += stats_csv_row(performance_stats(group, fid), topo, fid, 2) + "\n";
    }
    CHECK(slurp(path) == want);
  }

  TEST_CASE("explain verb emits attributions, models, and plots per group") {
    const std::string dir = scratch("explain");
    std::vector<IndexedRun> rows;
    Rng noise(3);
    for (int i = 0; i < 36; ++i) {
      const double w = (i % 3 == 0) ? 0.5 : (i % 3 == 1) ? 0.7 : 0.9;
      const double a = (w == 0.5 ? 0.8 : w == 0.7 ? 0.5 : 0.2) + noise.uniform(-0.05, 0.05);
      rows.push_back(synthetic_run(TopologyKind::star, 1, 1 + i % 5, 2, i / 5,
                                   size_t(i % 3), cfg(w), a));
    }
    const std::string runs_path = write_run_table(dir, rows);

    const ExplainOutcome out = cmd_explain(runs_path, dir, 11);
    REQUIRE(out.model_paths.size() == 1);
    REQUIRE(out.svg_paths.size() == 1);
    CHECK(out.warnings.empty());

    const std::vector<std::string> shap_lines = lines_of(slurp(out.csv_path));
    CHECK(shap_lines.size() == 1 + 36 * 9);
    CHECK(shap_lines[0] == shap_csv_header());

    const std::string svg = slurp(out.svg_paths[0]);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(std::count(svg.begin(), svg.end(), 'c') > 0);
    for (const std::string& name : shap_feature_names())
      CHECK(svg.find(">" + name + "<") != std::string::npos);

    const std::string json = slurp(out.model_paths[0]);
    CHECK(json.find("\"format_version\"") != std::string::npos);

    // deterministic artifacts
    const std::string dir2 = scratch("explain2");
    const std::string runs2 = write_run_table(dir2, rows);
    const ExplainOutcome out2 = cmd_explain(runs2, dir2, 11);
    CHECK(slurp(out2.csv_path) == slurp(out.csv_path));
    CHECK(slurp(out2.svg_paths[0]) == svg);
    CHECK(slurp(out2.model_paths[0]) == json);
  }

  TEST_CASE("explain on a constant outcome column yields all-zero attributions") {
    const std::string dir = scratch("explain_flat");
    std::vector<IndexedRun> rows;
    for (int i = 0; i < 32; ++i)
      rows.push_back(synthetic_run(TopologyKind::ring, 3, 1 + i % 4, 2, i / 4,
                                   size_t(i % 2), cfg(i % 2 ? 0.5 : 0.9), 0.4));
    const ExplainOutcome out = cmd_explain(write_run_table(dir, rows), dir, 1);
    REQUIRE(!out.warnings.empty());
    CHECK(out.warnings[0].find("constant") != std::string::npos);

    const std::vector<std::string> shap_lines = lines_of(slurp(out.csv_path));
    REQUIRE(shap_lines.size() == 1 + 32 * 9);
    for (size_t i = 1; i < shap_lines.size(); ++i) {
      // shap_value is the second-to-last field
      const size_t last = shap_lines[i].rfind(',');
      const size_t prev = shap_lines[i].rfind(',', last - 1);
      CHECK(shap_lines[i].substr(prev + 1, last - prev - 1) == "0");
    }
  }

  TEST_CASE("swarm plot geometry is complete and hand-checkable") {
    ShapTable t;
    t.topology = TopologyKind::star;
    t.fid = 1;
    t.dim = 2;
    t.predictions = {0.5, 0.7};
    const std::vector<std::string>& names = shap_feature_names();
    for (int rec = 0; rec < 2; ++rec)
      for (size_t j = 0; j < names.size(); ++j) {
        ShapRow r;
        r.record_id = rec;
        r.feature = names[j];
        r.feature_value = double(rec);          // spans 0..1 per feature
        r.shap_value = rec == 0 ? -0.1 : 0.25;  // both sides of the axis
        t.rows.push_back(r);
      }
    const std::string svg = shap_swarm_svg(t);
    CHECK(size_t(std::count(svg.begin(), svg.end(), '\n')) > names.size());
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.rfind("</svg>\n") == svg.size() - 7);
    // one point per (record, feature)
    size_t circles = 0, at = 0;
    while ((at = svg.find("<circle", at)) != std::string::npos) {
      ++circles;
      at += 7;
    }
    CHECK(circles == 2 * names.size());
    // ramp endpoints reached: min feature value blue, max red
    CHECK(svg.find("#3b4cc0") != std::string::npos);
    CHECK(svg.find("#b40426") != std::string::npos);

    ShapTable bad = t;
    bad.rows.pop_back();
    CHECK_THROWS_AS(shap_swarm_svg(bad), ArgumentError);
  }

  TEST_CASE("learn and validate verbs round-trip through the csv artifacts") {
    const std::string dir = scratch("learn");
    // planted threshold: low instances want w=0.5, high instances w=0.9
    std::vector<IndexedRun> rows;
    std::vector<std::tuple<int, int, double>> ela_keys;
    for (int fid = 1; fid <= 4; ++fid)
      for (int iid = 1; iid <= 4; ++iid) {
        const bool low = iid <= 2;
        size_t ci = 0;
        rows.push_back(synthetic_run(TopologyKind::star, fid, iid, 2, 0, ci++,
                                     cfg(0.5, 0.5, 50), low ? 0.9 : 0.3));
        rows.push_back(synthetic_run(TopologyKind::star, fid, iid, 2, 0, ci++,
                                     cfg(0.7, 0.5, 50), 0.5));
        rows.push_back(synthetic_run(TopologyKind::star, fid, iid, 2, 0, ci++,
                                     cfg(0.9, 0.5, 50), low ? 0.3 : 0.9));
        ela_keys.emplace_back(fid, iid, (low ? 0.2 : 0.8) + 0.001 * fid);
      }
    const std::string runs_path = write_run_table(dir, rows);
    const std::string ela_path = write_ela_table(dir, ela_keys);

    const LearnOutcome learn = cmd_learn(runs_path, ela_path, TopologyKind::star, 7, dir);
    CHECK(learn.exclusions.empty());
    CHECK(learn.rules_paths.size() == 7);
    const std::vector<std::string> ds_lines = lines_of(slurp(learn.dataset_path));
    REQUIRE(ds_lines.size() == 17);
    CHECK(ds_lines[0] == "fid,iid,dim,w_star,best_mean_aocc,best_config");
    CHECK(ds_lines[1].rfind("1,1,2,0.5,", 0) == 0);

    bool found_w_rules = false;
    for (const std::string& p : learn.rules_paths)
      if (p.find("rules_w.txt") != std::string::npos) {
        found_w_rules = true;
        CHECK(slurp(p).find(kPlantedKey) != std::string::npos);
      }
    CHECK(found_w_rules);

    const ValidateOutcome val = cmd_validate(runs_path, ela_path, TopologyKind::star,
                                             Scheme::loio, LearnerKind::dt, 7, 1, dir);
    CHECK(val.report.mean_loss.at("DT") == 0.0);
    CHECK(val.report.mean_loss.at("SB") == 0.0);
    const std::vector<std::string> val_lines = lines_of(slurp(val.csv_path));
    REQUIRE(val_lines.size() == 1 + 12);
    CHECK(val_lines[0] == learner_csv_header());
    CHECK(val_lines[1].rfind("LoIo,1,AB,", 0) == 0);

    // asking for a topology the table does not hold
    CHECK_THROWS_AS(
        cmd_learn(runs_path, ela_path, TopologyKind::von_neumann, 3, dir),
        ArgumentError);
  }

  TEST_CASE("bench eval probes one point of one instance") {
    const std::vector<double> x = {0.5, -1.25};
    const double got = bench_eval(1, 1, 2, x);
    CHECK(got == bbob::evaluate(bbob::make_instance(1, 1, 2), x));
    CHECK(std::isfinite(got));
    CHECK_THROWS_AS(bench_eval(1, 1, 3, x), ArgumentError);
    CHECK_THROWS_AS(bench_eval(77, 1, 2, x), ArgumentError);
  }

  TEST_CASE("run table readers name the offending column") {
    const std::string dir = scratch("schema");
    const std::string path = (fs::path(dir) / "bad.csv").string();
    std::ofstream out(path, std::ios::binary);
    out << "topology,config_index,fid,iid,dim,rep,seed,c1,c2,w,n_particles,k,p,r,"
           "aocc,regret\n";
    out.close();
    try {
      read_run_csv(path);
      FAIL("expected a schema error");
    } catch (const ArgumentError& e) {
      CHECK(std::string(e.what()).find("final_regret") != std::string::npos);
      CHECK(std::string(e.what()).find("regret") != std::string::npos);
    }
    CHECK_THROWS_AS(read_run_csv(dir + "/absent.csv"), ArgumentError);
  }
}
