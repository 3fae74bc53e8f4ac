#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "psox/kernels.hpp"
#include "psox/swarm.hpp"

namespace psox {

namespace {

void check_spec(const RunSpec& spec) {
  auto bad = validate(spec.config);
  if (!bad.empty()) {
    std::string msg = "invalid config:";
    for (const auto& v : bad) msg += " [" + v + "]";
    throw ArgumentError(msg);
  }
  require(spec.instance.dim >= 1, "run spec has no problem instance");
}

std::string run_context(const RunSpec& spec, int t) {
  return " [fid=" + fmt_int(spec.instance.fid) + " iid=" + fmt_int(spec.instance.iid) +
         " dim=" + fmt_int(spec.instance.dim) + " topology=" + to_string(spec.topology) +
         " seed=" + fmt_int(static_cast<long long>(spec.seed)) +
         " iteration=" + fmt_int(t) + "]";
}

double evaluate_checked(const RunSpec& spec, const double* x, int t, size_t particle) {
  double y = bbob::evaluate(spec.instance, x, spec.instance.dim);
  if (!std::isfinite(y))
    throw IntegrityError("objective returned a non-finite value for particle " +
                         fmt_int(static_cast<long long>(particle)) + run_context(spec, t));
  return y;
}

}  // namespace

void draw_randoms(Rng& rng, size_t n, size_t dim, StepDraws& d) {
  d.r1.resize(n * dim);
  d.r2.resize(n * dim);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < dim; ++j) d.r1[i * dim + j] = rng.u01();
    for (size_t j = 0; j < dim; ++j) d.r2[i * dim + j] = rng.u01();
  }
}

SwarmState init_swarm(const RunSpec& spec) {
  check_spec(spec);
  const size_t n = spec.config.n_particles;
  const size_t dim = spec.instance.dim;
  const HyperParams eff = effective_params(spec.config, spec.topology);

  SwarmState st;
  st.rng = Rng(spec.seed);
  st.positions = Matrix(n, dim);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < dim; ++j)
      st.positions(i, j) = st.rng.uniform(bbob::kBoxLo, bbob::kBoxHi);

  st.velocities = Matrix(n, dim, 0.0);
  st.pbest_pos = st.positions;
  st.pbest_values.resize(n);
  for (size_t i = 0; i < n; ++i)
    st.pbest_values[i] = evaluate_checked(spec, st.positions.row(i), 0, i);

  switch (spec.topology) {
    case TopologyKind::star:
      st.static_graph = star_neighbors(static_cast<int>(n));
      break;
    case TopologyKind::von_neumann: {
      int k = von_neumann_k(static_cast<int>(dim), eff.r, static_cast<int>(n));
      st.static_graph = ring_neighbors(st.positions, k, eff.p);
      st.static_graph.static_flag = true;
      break;
    }
    case TopologyKind::ring:
      break;  // rebuilt from current positions inside each step
  }
  return st;
}

void step_with_draws(SwarmState& st, const RunSpec& spec, const StepDraws& d) {
  const size_t n = st.positions.rows;
  const size_t dim = st.positions.cols;
  require(st.t < spec.budget, "step: iteration budget exhausted");
  require(d.r1.size() == n * dim && d.r2.size() == n * dim,
          "step: draw buffers must hold n_particles*dim values");
  const HyperParams eff = effective_params(spec.config, spec.topology);

  std::vector<int> lb;
  if (spec.topology == TopologyKind::ring) {
    NeighborhoodGraph g = ring_neighbors(st.positions, eff.k, eff.p);
    lb = local_best(g, st.pbest_values);
  } else {
    lb = local_best(st.static_graph, st.pbest_values);
  }

  // gather each particle's attractor row so one flat kernel call updates all
  Matrix lbest(n, dim);
  for (size_t i = 0; i < n; ++i)
    std::memcpy(lbest.row(i), st.pbest_pos.row(lb[i]), dim * sizeof(double));

  kern::active_ops().pso_update(st.velocities.a.data(), st.positions.a.data(),
                                st.pbest_pos.a.data(), lbest.a.data(), d.r1.data(),
                                d.r2.data(), eff.w, eff.c1, eff.c2, n * dim);

  for (size_t i = 0; i < n; ++i) {
    double y = evaluate_checked(spec, st.positions.row(i), st.t + 1, i);
    if (y < st.pbest_values[i]) {
      st.pbest_values[i] = y;
      std::memcpy(st.pbest_pos.row(i), st.positions.row(i), dim * sizeof(double));
    }
  }
  ++st.t;
}

void step(SwarmState& st, const RunSpec& spec) {
  StepDraws d;
  draw_randoms(st.rng, st.positions.rows, st.positions.cols, d);
  step_with_draws(st, spec, d);
}

RunTrajectory run(const RunSpec& spec) {
  check_spec(spec);
  require(spec.budget >= 1, "budget must be >= 1");
  auto t0 = std::chrono::steady_clock::now();

  RunTrajectory traj;
  traj.best_so_far.reserve(spec.budget);
  SwarmState st = init_swarm(spec);
  double best = *std::min_element(st.pbest_values.begin(), st.pbest_values.end());

  for (int it = 0; it < spec.budget; ++it) {
    step(st, spec);  // aborts with run context if the objective goes non-finite
    best = std::min(best, *std::min_element(st.pbest_values.begin(), st.pbest_values.end()));
    traj.best_so_far.push_back(best);
  }

  size_t arg = std::min_element(st.pbest_values.begin(), st.pbest_values.end()) -
               st.pbest_values.begin();
  traj.final_position.assign(st.pbest_pos.row(arg), st.pbest_pos.row(arg) + st.positions.cols);
  traj.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return traj;
}

void write_trajectory_csv(const RunTrajectory& t, std::ostream& out) {
  out << "iteration,best_so_far\n";
  for (size_t i = 0; i < t.best_so_far.size(); ++i)
    out << (i + 1) << ',' << fmt_double(t.best_so_far[i]) << '\n';
}

void write_trajectory_binary(const RunTrajectory& t, uint32_t n_particles, std::ostream& out) {
  auto put32 = [&out](uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16),
                          static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
  };
  put32(kTrajectoryMagic);
  put32(n_particles);
  put32(static_cast<uint32_t>(t.best_so_far.size()));
  for (double v : t.best_so_far) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(bits >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  }
}

RunTrajectory read_trajectory_binary(std::istream& in, uint32_t* n_particles) {
  auto get32 = [&in]() {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    check_integrity(bool(in), "trajectory block truncated");
    return static_cast<uint32_t>(b[0]) | static_cast<uint32_t>(b[1]) << 8 |
           static_cast<uint32_t>(b[2]) << 16 | static_cast<uint32_t>(b[3]) << 24;
  };
  check_integrity(get32() == kTrajectoryMagic, "trajectory block has wrong magic");
  uint32_t n = get32();
  if (n_particles) *n_particles = n;
  uint32_t budget = get32();
  RunTrajectory t;
  t.best_so_far.resize(budget);
  for (uint32_t i = 0; i < budget; ++i) {
    unsigned char b[8];
    in.read(reinterpret_cast<char*>(b), 8);
    check_integrity(bool(in), "trajectory block truncated");
    uint64_t bits = 0;
    for (int j = 0; j < 8; ++j) bits |= static_cast<uint64_t>(b[j]) << (8 * j);
    std::memcpy(&t.best_so_far[i], &bits, 8);
  }
  return t;
}

}  // namespace psox
