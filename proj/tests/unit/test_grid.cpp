#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "disloc/generators.hpp"
#include "disloc/grid_function.hpp"
#include "disloc/rng.hpp"
#include "disloc/serialize.hpp"

using namespace disloc;

TEST_CASE("construction validates invariants") {
  CHECK_THROWS_AS(GridFunction(1, {0}, {0}, 0, 1.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(1, {0}, {2}, 0, -1.0, {0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(1, {0}, {2}, 0, 1.0, {0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(1, {0}, {2}, 0, 1.0,
                               {0.0, std::numeric_limits<double>::infinity()}),
                  std::invalid_argument);
  CHECK_THROWS_AS(GridFunction(2, {0}, {2, 2}, 0, 1.0, std::vector<double>(4)),
                  std::invalid_argument);
}

TEST_CASE("window lookups and implicit zeros") {
  GridFunction u(1, {-2}, {5}, 0, 0.5, {1, 2, 3, 4, 5});
  CHECK(u.value_at({-2}) == 1.0);
  CHECK(u.value_at({2}) == 5.0);
  CHECK(u.value_at({3}) == 0.0);
  CHECK(u.value_at({-3}) == 0.0);
  CHECK(u.spacing() == 0.5);
}

TEST_CASE("effective spacing follows the level") {
  GridFunction u(1, {0}, {1}, 3, 1.0, {1.0});
  CHECK(u.spacing() == doctest::Approx(0.125));
  GridFunction v(1, {0}, {1}, -2, 1.0, {1.0});
  CHECK(v.spacing() == doctest::Approx(4.0));
}

TEST_CASE("refinement is exact for piecewise linear data") {
  // Tent sampled at level 0 refines to its own samples at level 2.
  const GridFunction coarse = gen::tent(1, 1.0, 0, 1.0, 4.0, {0});
  const GridFunction fine = gen::tent(1, 1.0, 2, 1.0, 4.0, {0});
  const GridFunction refined = coarse.refined_to(2);
  for (std::size_t flat = 0; flat < fine.size(); ++flat) {
    const IndexVec g = fine.node_index(flat);
    CHECK(refined.value_at(g) == doctest::Approx(fine.local(flat)).epsilon(1e-15));
  }
  CHECK_THROWS_AS(fine.refined_to(0), std::invalid_argument);
}

TEST_CASE("refinement is exact for bilinear data in 2D") {
  const GridFunction coarse = gen::tent(2, 1.0, 0, 2.0, 4.0, {0, 0});
  const GridFunction refined = coarse.refined_to(1);
  const GridFunction direct = gen::tent(2, 1.0, 1, 2.0, 4.0, {0, 0});
  for (std::size_t flat = 0; flat < direct.size(); ++flat) {
    const IndexVec g = direct.node_index(flat);
    CHECK(refined.value_at(g) == doctest::Approx(direct.local(flat)).epsilon(1e-15));
  }
}

TEST_CASE("addition reconciles dyadic levels and rejects mixed h0") {
  const GridFunction a = gen::tent(1, 1.0, 0, 1.0, 2.0, {0});
  const GridFunction b = gen::tent(1, 1.0, 1, 0.5, 2.0, {4});
  const GridFunction sum = a + b;
  CHECK(sum.level() == 1);
  CHECK(sum.value_at({0}) == doctest::Approx(1.0 + 0.0));
  CHECK(sum.value_at({4}) == doctest::Approx(a.value_at({2}) + 0.5));

  const GridFunction other(1, {0}, {1}, 0, 0.3, {1.0});
  CHECK_THROWS_AS(a + other, std::invalid_argument);
}

TEST_CASE("trim drops exact zeros only") {
  GridFunction u = GridFunction::zeros(1, {-5}, {11}, 0, 1.0);
  u.mutable_samples()[5] = 3.0; // node 0
  u.mutable_samples()[7] = 1.0; // node 2
  const GridFunction t = u.trimmed();
  CHECK(t.offset()[0] == 0);
  CHECK(t.shape()[0] == 3);
  CHECK(t.value_at({0}) == 3.0);
  CHECK(t.value_at({2}) == 1.0);

  const GridFunction z = GridFunction::zeros(2, {3, 3}, {4, 4}, 0, 1.0);
  const GridFunction tz = z.trimmed();
  CHECK(tz.is_zero());
  CHECK(tz.size() == 1);
}

TEST_CASE("translate and dilate are metadata edits") {
  GridFunction u = gen::tent(1, 1.0, 0, 1.0, 2.0, {0});
  const std::vector<double> before = u.samples();
  u.translate({7});
  CHECK(u.offset()[0] == -2 + 7);
  CHECK(u.samples() == before);
  u.dilate(2, 1.0);
  CHECK(u.level() == 2);
  CHECK(u.samples() == before);
}

TEST_CASE("json round trip") {
  Rng rng(7);
  const GridFunction u = gen::random_smooth(rng, 2, 0.5, 4.0);
  const GridFunction v = grid_from_json(grid_to_json(u));
  CHECK(v.dim() == u.dim());
  CHECK(v.offset() == u.offset());
  CHECK(v.shape() == u.shape());
  CHECK(v.level() == u.level());
  CHECK(v.h0() == u.h0());
  CHECK(v.samples() == u.samples());
  CHECK_THROWS_AS(grid_from_json("{\"format\":\"bogus\"}"),
                  std::invalid_argument);
}

TEST_CASE("csv export covers 1D and 2D") {
  const GridFunction u = gen::tent(1, 0.5, 0, 1.0, 1.0, {0});
  const std::string csv = grid_to_csv(u);
  CHECK(csv.find("x,value") == 0);
  const GridFunction v = gen::tent(2, 1.0, 0, 1.0, 1.0, {0, 0});
  CHECK(grid_to_csv(v).find("x1,x2,value") == 0);
  const GridFunction w = GridFunction::zeros(3, {0, 0, 0}, {2, 2, 2}, 0, 1.0);
  CHECK_THROWS_AS(grid_to_csv(w), std::invalid_argument);
}
