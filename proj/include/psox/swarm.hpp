#pragma once
// Swarm state and the velocity/position update
//   v' = w*v + c1*r1*(pbest - x) + c2*r2*(lbest - x);  x' = x + v'
// with per-particle per-dimension uniform draws, no velocity clamping and no
// boundary handling. Ring neighborhoods are rebuilt from the current
// positions every step; star and von Neumann graphs are frozen at init.

#include <cstdint>
#include <iosfwd>

#include "psox/bbob.hpp"
#include "psox/configspace.hpp"
#include "psox/topology.hpp"

namespace psox {

struct RunSpec {
  bbob::ProblemInstance instance;
  HyperParams config;
  TopologyKind topology = TopologyKind::star;
  int budget = 0;  // iterations; total evaluations = n_particles * (budget + 1)
  uint64_t seed = 0;
};

struct SwarmState {
  Matrix positions;   // n x dim
  Matrix velocities;  // n x dim
  Matrix pbest_pos;   // n x dim
  std::vector<double> pbest_values;
  int t = 0;
  Rng rng{0};
  NeighborhoodGraph static_graph;  // star / von neumann; unused for ring
};

// one iteration's random draws, particle-major: for each particle the dim
// r1 values are drawn first, then its dim r2 values
struct StepDraws {
  std::vector<double> r1, r2;
};
void draw_randoms(Rng& rng, size_t n, size_t dim, StepDraws& d);

struct RunTrajectory {
  std::vector<double> best_so_far;  // length budget, monotone nonincreasing
  std::vector<double> final_position;
  double wall_time = 0.0;  // seconds, informational
};

SwarmState init_swarm(const RunSpec& spec);

// advance one iteration drawing from the state's generator
void step(SwarmState& st, const RunSpec& spec);
// same update with caller-supplied draws (deterministic fixtures)
void step_with_draws(SwarmState& st, const RunSpec& spec, const StepDraws& d);

RunTrajectory run(const RunSpec& spec);

// CSV "iteration,best_so_far", iterations numbered from 1
void write_trajectory_csv(const RunTrajectory& t, std::ostream& out);

// packed little-endian block: u32 magic, u32 n_particles, u32 budget,
// budget f64 best-so-far values
inline constexpr uint32_t kTrajectoryMagic = 0x70735472;  // "rTsp" on disk
void write_trajectory_binary(const RunTrajectory& t, uint32_t n_particles, std::ostream& out);
RunTrajectory read_trajectory_binary(std::istream& in, uint32_t* n_particles = nullptr);

}  // namespace psox
