#pragma once
// Neighborhood structure for the three communication patterns: fully
// connected star, k-nearest ring under a Minkowski norm, and the
// Delannoy-sized von Neumann variant (a static ring with derived k).

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "psox/common.hpp"

namespace psox {

struct NeighborhoodGraph {
  // per-particle neighbor indices, ascending, always containing the particle
  std::vector<std::vector<int>> neighbors;
  bool static_flag = false;  // frozen after initialization vs rebuilt per step
  size_t size() const { return neighbors.size(); }
};

// D(m,0) = D(0,n) = 1; D(m,n) = D(m-1,n) + D(m,n-1) + D(m-1,n-1).
// Saturates at uint64 max instead of wrapping (only tiny inputs occur here).
uint64_t delannoy(int m, int n);

// neighborhood size for a von Neumann swarm: min(delannoy(dim, r), n_particles)
int von_neumann_k(int dim, int r, int n_particles);

// k nearest particles under the Minkowski p-norm (p = 1 or 2); the particle
// itself is always nearest at distance zero; distance ties keep lower index
NeighborhoodGraph ring_neighbors(const Matrix& positions, int k, int p);

NeighborhoodGraph star_neighbors(int n_particles);

// index of the minimum value among each particle's neighbors, ties to lower index
std::vector<int> local_best(const NeighborhoodGraph& g, const std::vector<double>& values);

// CSV edge list "particle,neighbor"
void write_edge_list(const NeighborhoodGraph& g, std::ostream& out);

}  // namespace psox
