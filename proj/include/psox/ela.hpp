#pragma once
// Exploratory landscape features over a sampled design: linear/quadratic
// model fits, objective-value distribution, nearest-better clustering,
// dispersion of elite subsets, and information content of a nearest-neighbor
// fitness tour. Feature names follow the flacco-style dotted keys.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "psox/bbob.hpp"

namespace psox {

struct FeatureSet {
  std::map<std::string, double> values;
  std::vector<std::string> warnings;  // every NaN comes with one of these
};

struct ElaVector {
  int fid = 0, iid = 0, dim = 0;
  uint64_t sample_seed = 0;
  std::map<std::string, double> values;
  std::vector<std::string> warnings;
};

// the 23 exported feature keys in canonical column order
const std::vector<std::string>& ela_canonical_keys();

// least-squares meta-model features; requires n > 2*dim + 2
FeatureSet ela_meta(const bbob::SampleSet& s);

// moments and KDE modality of y; requires n >= 4
FeatureSet ela_distr(const bbob::SampleSet& s);

// nearest-better clustering statistics; requires n >= 5
FeatureSet nbc(const bbob::SampleSet& s);

// elite-subset dispersion at 2/5/10/25 percent; requires n >= 50
FeatureSet dispersion(const bbob::SampleSet& s);
// diff/ratio of mean pairwise distance for one quantile (q=1 sanity hook)
void dispersion_subset(const bbob::SampleSet& s, double q, double* diff, double* ratio);

// entropy/modality of the slope-symbol sequence along a seeded
// nearest-neighbor tour; requires n >= 10
FeatureSet info_content(const bbob::SampleSet& s, uint64_t tour_seed);

// all families merged, with provenance; preconditions of every family apply
ElaVector compute_ela(const bbob::SampleSet& s, uint64_t tour_seed);

std::string ela_csv_header();
std::string ela_csv_row(const ElaVector& v);

}  // namespace psox
