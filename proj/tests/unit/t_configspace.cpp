#include <set>

#include "doctest.h"
#include "psox/configspace.hpp"

using namespace psox;

TEST_SUITE("configspace") {

TEST_CASE("full grid enumerates 1728 unique configurations in table order") {
  ConfigSpace space = full_grid();
  CHECK(space.configs.size() == 1728);
  CHECK(4 * 4 * 3 * 3 * 3 * 2 * 2 == 1728);

  HyperParams first{0.3, 0.2, 0.9, 50, 1, 1, 1};
  CHECK(space.configs[0] == first);
  // innermost axis is r, then p, then k
  CHECK(space.configs[1] == HyperParams{0.3, 0.2, 0.9, 50, 1, 1, 2});
  CHECK(space.configs[2] == HyperParams{0.3, 0.2, 0.9, 50, 1, 2, 1});
  CHECK(space.configs[4] == HyperParams{0.3, 0.2, 0.9, 50, 2, 1, 1});
  CHECK(space.configs.back() == HyperParams{0.9, 0.7, 0.7, 150, 3, 2, 2});

  std::set<std::string> seen;
  for (const auto& c : space.configs) {
    seen.insert(serialize_config(c));
    CHECK(validate(c).empty());
  }
  CHECK(seen.size() == 1728);

  // the inertia domain is stored in table row order, not ascending
  CHECK(grid_w() == std::vector<double>{0.9, 0.5, 0.7});
}

TEST_CASE("effective params canonicalize unused fields") {
  HyperParams cfg{0.5, 0.4, 0.7, 100, 3, 2, 2};

  HyperParams star = effective_params(cfg, TopologyKind::star);
  CHECK(star == HyperParams{0.5, 0.4, 0.7, 100, 1, 1, 1});

  HyperParams ring = effective_params(cfg, TopologyKind::ring);
  CHECK(ring == HyperParams{0.5, 0.4, 0.7, 100, 3, 2, 1});

  HyperParams vn = effective_params(cfg, TopologyKind::von_neumann);
  CHECK(vn == HyperParams{0.5, 0.4, 0.7, 100, 1, 2, 2});

  ConfigSpace space = full_grid();
  for (auto topo : {TopologyKind::star, TopologyKind::ring, TopologyKind::von_neumann})
    for (const auto& c : space.configs) {
      HyperParams once = effective_params(c, topo);
      CHECK(effective_params(once, topo) == once);
    }

  std::set<std::string> star_behaviors;
  for (const auto& c : space.configs)
    star_behaviors.insert(serialize_config(effective_params(c, TopologyKind::star)));
  CHECK(star_behaviors.size() == 144);
}

TEST_CASE("validate reports each violated bound") {
  CHECK(validate({0.9, 0.7, 0.5, 50, 1, 1, 1}).empty());

  auto bad = validate({-0.1, 0.2, 0.9, 50, 1, 1, 1});
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == "c1 out of range");

  bad = validate({2.5, 2.0, 0.9, 50, 1, 1, 1});
  REQUIRE(bad.size() == 1);
  CHECK(bad[0] == "c1+c2 >= 4");

  bad = validate({-1.0, -1.0, -1.0, 0, 0, 3, 0});
  CHECK(bad.size() == 7);

  CHECK(validate({0.3, 0.2, 0.9, 0, 1, 1, 1}) == std::vector<std::string>{"n_particles < 1"});
  CHECK(validate({0.3, 0.2, 0.9, 50, 1, 3, 1}) == std::vector<std::string>{"p not in {1,2}"});
}

TEST_CASE("config records round-trip exactly") {
  ConfigSpace space = full_grid(TopologyKind::ring);
  for (const auto& c : space.configs) CHECK(parse_config(serialize_config(c)) == c);

  CHECK(serialize_config(space.configs[0]) ==
        "c1=0.3 c2=0.2 w=0.9 n_particles=50 k=1 p=1 r=1");

  CHECK_THROWS_AS(parse_config("c1=0.3"), ArgumentError);                       // missing keys
  CHECK_THROWS_AS(parse_config("c1=0.3 c1=0.4 c2=0.2 w=0.9 n_particles=50 k=1 p=1 r=1"),
                  ArgumentError);                                               // duplicate
  CHECK_THROWS_AS(parse_config("c1=0.3 c2=0.2 w=0.9 n_particles=50 k=1 p=1 r=1 zz=9"),
                  ArgumentError);                                               // unknown
  CHECK_THROWS_AS(parse_config("c1=abc c2=0.2 w=0.9 n_particles=50 k=1 p=1 r=1"),
                  ArgumentError);                                               // bad number
  CHECK_THROWS_AS(parse_config("nokey"), ArgumentError);
}

TEST_CASE("config space serialization round-trips exactly") {
  ConfigSpace space = full_grid(TopologyKind::von_neumann);
  ConfigSpace back = parse_space(serialize_space(space));
  CHECK(back == space);

  ConfigSpace tiny;
  tiny.topology = TopologyKind::ring;
  tiny.configs = {{0.3, 0.2, 0.9, 50, 1, 1, 1}};
  CHECK(parse_space(serialize_space(tiny)) == tiny);

  CHECK_THROWS_AS(parse_space("c1=0.3 ..."), ArgumentError);  // missing topology line
  CHECK_THROWS_AS(parse_space("topology=mesh\n"), ArgumentError);
}

TEST_CASE("csv block lists the seven parameters plus topology") {
  CHECK(config_csv_header() == "c1,c2,w,n_particles,k,p,r,topology");
  HyperParams cfg{0.3, 0.2, 0.9, 50, 1, 1, 1};
  CHECK(config_csv_row(cfg, TopologyKind::star) == "0.3,0.2,0.9,50,1,1,1,star");
  CHECK(config_csv_row(cfg, TopologyKind::von_neumann) == "0.3,0.2,0.9,50,1,1,1,von_neumann");
}

TEST_CASE("topology names round-trip") {
  for (auto t : {TopologyKind::star, TopologyKind::ring, TopologyKind::von_neumann})
    CHECK(topology_from_string(to_string(t)) == t);
  CHECK_THROWS_AS(topology_from_string("mesh"), ArgumentError);
  CHECK_THROWS_AS(topology_from_string("Star"), ArgumentError);
}

}  // TEST_SUITE
