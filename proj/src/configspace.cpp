#include <map>
#include <sstream>

#include "psox/configspace.hpp"

namespace psox {

TopologyKind topology_from_string(const std::string& s) {
  if (s == "star") return TopologyKind::star;
  if (s == "ring") return TopologyKind::ring;
  if (s == "von_neumann") return TopologyKind::von_neumann;
  throw ArgumentError("unknown topology '" + s + "' (star|ring|von_neumann)");
}

const char* to_string(TopologyKind t) {
  switch (t) {
    case TopologyKind::star: return "star";
    case TopologyKind::ring: return "ring";
    case TopologyKind::von_neumann: return "von_neumann";
  }
  return "?";
}

const std::vector<double>& grid_c1() {
  static const std::vector<double> v = {0.3, 0.5, 0.7, 0.9};
  return v;
}
const std::vector<double>& grid_c2() {
  static const std::vector<double> v = {0.2, 0.4, 0.6, 0.7};
  return v;
}
const std::vector<double>& grid_w() {
  static const std::vector<double> v = {0.9, 0.5, 0.7};
  return v;
}
const std::vector<int>& grid_n_particles() {
  static const std::vector<int> v = {50, 100, 150};
  return v;
}
const std::vector<int>& grid_k() {
  static const std::vector<int> v = {1, 2, 3};
  return v;
}
const std::vector<int>& grid_p() {
  static const std::vector<int> v = {1, 2};
  return v;
}
const std::vector<int>& grid_r() {
  static const std::vector<int> v = {1, 2};
  return v;
}

ConfigSpace full_grid(TopologyKind topology) {
  ConfigSpace space;
  space.topology = topology;
  space.configs.reserve(1728);
  for (double c1 : grid_c1())
    for (double c2 : grid_c2())
      for (double w : grid_w())
        for (int n : grid_n_particles())
          for (int k : grid_k())
            for (int p : grid_p())
              for (int r : grid_r())
                space.configs.push_back({c1, c2, w, n, k, p, r});
  return space;
}

HyperParams effective_params(const HyperParams& cfg, TopologyKind topology) {
  HyperParams e = cfg;
  switch (topology) {
    case TopologyKind::star:
      e.k = 1;
      e.p = 1;
      e.r = 1;
      break;
    case TopologyKind::ring:
      e.r = 1;
      break;
    case TopologyKind::von_neumann:
      e.k = 1;
      break;
  }
  return e;
}

std::vector<std::string> validate(const HyperParams& cfg) {
  std::vector<std::string> bad;
  if (!(cfg.c1 >= 0.0)) bad.push_back("c1 out of range");
  if (!(cfg.c2 >= 0.0)) bad.push_back("c2 out of range");
  if (!(cfg.w >= 0.0)) bad.push_back("w out of range");
  if (cfg.n_particles < 1) bad.push_back("n_particles < 1");
  if (cfg.k < 1) bad.push_back("k < 1");
  if (cfg.p != 1 && cfg.p != 2) bad.push_back("p not in {1,2}");
  if (cfg.r < 1) bad.push_back("r < 1");
  if (!(cfg.c1 + cfg.c2 < 4.0)) bad.push_back("c1+c2 >= 4");
  return bad;
}

std::string serialize_config(const HyperParams& cfg) {
  std::string s;
  s += "c1=" + fmt_double(cfg.c1);
  s += " c2=" + fmt_double(cfg.c2);
  s += " w=" + fmt_double(cfg.w);
  s += " n_particles=" + fmt_int(cfg.n_particles);
  s += " k=" + fmt_int(cfg.k);
  s += " p=" + fmt_int(cfg.p);
  s += " r=" + fmt_int(cfg.r);
  return s;
}

HyperParams parse_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    size_t eq = tok.find('=');
    if (eq == std::string::npos || eq == 0)
      throw ArgumentError("config record: expected key=value, got '" + tok + "'");
    std::string key = tok.substr(0, eq);
    if (kv.count(key)) throw ArgumentError("config record: duplicate key '" + key + "'");
    kv[key] = tok.substr(eq + 1);
  }
  static const char* keys[] = {"c1", "c2", "w", "n_particles", "k", "p", "r"};
  for (const char* key : keys)
    if (!kv.count(key)) throw ArgumentError(std::string("config record: missing key '") + key + "'");
  if (kv.size() != 7) {
    for (const auto& [key, _] : kv) {
      bool known = false;
      for (const char* k : keys) known = known || key == k;
      if (!known) throw ArgumentError("config record: unknown key '" + key + "'");
    }
  }
  HyperParams cfg;
  cfg.c1 = parse_double(kv["c1"]);
  cfg.c2 = parse_double(kv["c2"]);
  cfg.w = parse_double(kv["w"]);
  cfg.n_particles = static_cast<int>(parse_int(kv["n_particles"]));
  cfg.k = static_cast<int>(parse_int(kv["k"]));
  cfg.p = static_cast<int>(parse_int(kv["p"]));
  cfg.r = static_cast<int>(parse_int(kv["r"]));
  return cfg;
}

std::string serialize_space(const ConfigSpace& space) {
  std::string s = std::string("topology=") + to_string(space.topology) + "\n";
  for (const auto& cfg : space.configs) s += serialize_config(cfg) + "\n";
  return s;
}

ConfigSpace parse_space(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line.rfind("topology=", 0) != 0)
    throw ArgumentError("config space: first line must be topology=<name>");
  ConfigSpace space;
  space.topology = topology_from_string(line.substr(9));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    space.configs.push_back(parse_config(line));
  }
  return space;
}

std::string config_csv_header() { return "c1,c2,w,n_particles,k,p,r,topology"; }

std::string config_csv_row(const HyperParams& cfg, TopologyKind topology) {
  std::string s;
  s += fmt_double(cfg.c1) + ',';
  s += fmt_double(cfg.c2) + ',';
  s += fmt_double(cfg.w) + ',';
  s += fmt_int(cfg.n_particles) + ',';
  s += fmt_int(cfg.k) + ',';
  s += fmt_int(cfg.p) + ',';
  s += fmt_int(cfg.r) + ',';
  s += to_string(topology);
  return s;
}

}  // namespace psox
