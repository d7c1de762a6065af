#include "doctest.h"
#include "landau/config.hpp"

using namespace landau;

TEST_CASE("defaults round-trip through the dump") {
  const RunConfig d;
  d.validate();
  const std::string text = dump_config(d);
  CHECK(dump_config(parse_config(text)) == text);
  CHECK(dump_config(parse_config("")) == text);
  CHECK(d.split_target() == kDefaultSplitTarget);
}

TEST_CASE("values are read and echoed") {
  const RunConfig c = parse_config(
      "[kernel]\ngamma = 0.5\n[grid]\nn = 10\nvmax = 5\n[weights]\nlist = poly:6:2, sexp:0.125:2:1\n"
      "[split]\na = -0.5\n[evolve]\ndt = 0.001\ninitial = bimodal\nanisotropy = 2,0.5,0.5\n[run]\nseed = 7\n");
  CHECK(c.gamma == 0.5);
  CHECK(c.n == 10);
  CHECK(c.weights().size() == 2);
  CHECK(c.weights()[1].kind == Weight::Kind::StretchedExp);
  CHECK(c.split_target() == -0.5);
  CHECK(c.evolve.dt.value() == 0.001);
  CHECK(c.initial == InitialData::Bimodal);
  CHECK(c.anisotropy[0] == 2.0);
  CHECK(c.seed == 7);
  CHECK(dump_config(parse_config(dump_config(c))) == dump_config(c));
}

TEST_CASE("unknown keys and invalid values are rejected") {
  CHECK_THROWS_AS(parse_config("[grid]\nsize = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nonsense]\nn = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("n = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nn = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[kernel]\ngamma = 1.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[split]\na = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[evolve]\ninitial = flat\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[evolve]\nconserve_project = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[weights]\nlist = poly:3:1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[weights]\nlist = \n"), ConfigError);
  // s = 2 needs r < 1/(2p)
  CHECK_THROWS_AS(parse_config("[weights]\nlist = sexp:0.3:2:2\n"), ConfigError);
  CHECK_NOTHROW(parse_config("[weights]\nlist = sexp:0.24:2:2\n"));
  CHECK_THROWS_AS(parse_config("[grid\nn = 4\n"), ConfigError);
}

TEST_CASE("initial data have unit mass and energy 3") {
  RunConfig c;
  const VelocityGrid g(20, 8.0);
  for (auto kind : {InitialData::Anisotropic, InitialData::Maxwellian, InitialData::Bimodal, InitialData::Perturbed}) {
    c.initial = kind;
    c.evolve.eps = 0.01;
    const auto m = moments(c.initial_state(g));
    CHECK(m[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(m[1]) + std::abs(m[2]) + std::abs(m[3]) < 1e-12);
    CHECK(m[4] == doctest::Approx(3.0).epsilon(1e-5));
  }
}

TEST_CASE("quick mode shrinks the grids") {
  RunConfig c;
  apply_quick(c);
  CHECK(c.n == 12);
  CHECK(c.decay.n == 12);
  c.validate();
}
