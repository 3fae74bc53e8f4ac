#pragma once
// Hyperparameter grid for the swarm runs: the seven-domain Cartesian product,
// topology-conditional canonicalization, and flat-text / CSV serialization.

#include <string>
#include <vector>

#include "psox/common.hpp"

namespace psox {

enum class TopologyKind { star, ring, von_neumann };

TopologyKind topology_from_string(const std::string& s);
const char* to_string(TopologyKind t);

struct HyperParams {
  double c1 = 0.0;  // cognitive coefficient
  double c2 = 0.0;  // social coefficient
  double w = 0.0;   // inertia weight
  int n_particles = 0;
  int k = 0;  // nearest-neighbor count (ring)
  int p = 0;  // Minkowski norm order, 1 or 2 (ring, von neumann)
  int r = 0;  // interaction range (von neumann)
  bool operator==(const HyperParams&) const = default;
};

struct ConfigSpace {
  TopologyKind topology = TopologyKind::star;
  std::vector<HyperParams> configs;
  bool operator==(const ConfigSpace&) const = default;
};

// grid domains in table row order (w is deliberately 0.9, 0.5, 0.7)
const std::vector<double>& grid_c1();
const std::vector<double>& grid_c2();
const std::vector<double>& grid_w();
const std::vector<int>& grid_n_particles();
const std::vector<int>& grid_k();
const std::vector<int>& grid_p();
const std::vector<int>& grid_r();

// full Cartesian product, 1728 configs, nested c1 (outermost) .. r (innermost)
ConfigSpace full_grid(TopologyKind topology = TopologyKind::star);

// canonicalize fields the topology never reads to their first grid value so
// behaviorally identical configs compare equal (idempotent)
HyperParams effective_params(const HyperParams& cfg, TopologyKind topology);

// every violated bound, empty when the config is usable
std::vector<std::string> validate(const HyperParams& cfg);

// flat "key=value key=value ..." record; parse is its exact inverse
std::string serialize_config(const HyperParams& cfg);
HyperParams parse_config(const std::string& text);

// one "topology=<name>" line followed by one config record per line
std::string serialize_space(const ConfigSpace& space);
ConfigSpace parse_space(const std::string& text);

// shared CSV column block
std::string config_csv_header();  // "c1,c2,w,n_particles,k,p,r,topology"
std::string config_csv_row(const HyperParams& cfg, TopologyKind topology);

}  // namespace psox
