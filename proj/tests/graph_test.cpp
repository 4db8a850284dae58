#include <algorithm>

#include "doctest.h"
#include "shiftthermo/graph.hpp"

using namespace shiftthermo;

TEST_CASE("ladder adjacency and labels") {
  const auto g = GraphModel::ladder();
  CHECK(g.out_edges(3) == std::vector<EdgeId>{6, 7});
  CHECK(g.source(6) == 3);
  CHECK(g.range(6) == 4);
  CHECK(g.range(7) == 0);
  CHECK(g.edge_label(6) == "u_3");
  CHECK(g.edge_label(7) == "d_3");
  CHECK(g.parse_edge_label("d_3") == EdgeId{7});
  CHECK_FALSE(g.parse_edge_label("x_3").has_value());
  CHECK_FALSE(g.parse_edge_label("u_-1").has_value());
  CHECK(g.max_out_degree() == 2);
  CHECK_FALSE(g.is_finite());
}

TEST_CASE("non-wandering cases") {
  SUBCASE("ladder: infinite, aperiodic") {
    const auto r = nonwandering(GraphModel::ladder());
    CHECK(r.case_tag == NwCase::Infinite);
    CHECK(r.period == 1);
    CHECK(r.contains(17));
  }
  SUBCASE("z ray: empty") {
    const auto r = nonwandering(GraphModel::z_ray());
    CHECK(r.case_tag == NwCase::Empty);
    CHECK(r.vertices.empty());
  }
  SUBCASE("golden mean: both vertices") {
    const auto r = nonwandering(GraphModel::explicit_finite({{0, 0, 0}, {1, 0, 1}, {2, 1, 0}}));
    CHECK(r.case_tag == NwCase::FiniteNonEmpty);
    CHECK(r.vertices == std::vector<VertexId>{0, 1});
  }
  SUBCASE("core with rays: only the core recurs") {
    const auto g = GraphModel::core_with_inward_rays({{0, 0, 0}, {1, 0, 0}}, 2);
    const auto r = nonwandering(g);
    CHECK(r.case_tag == NwCase::FiniteNonEmpty);
    CHECK(r.vertices == std::vector<VertexId>{0});
    CHECK_FALSE(r.contains(g.ray_vertex(1, 3)));
  }
  SUBCASE("two-cycle has period 2") {
    const auto r = nonwandering(GraphModel::explicit_finite({{0, 0, 1}, {1, 1, 0}}));
    CHECK(r.period == 2);
  }
  SUBCASE("a transient edge into a sink cycle") {
    const auto r = nonwandering(GraphModel::explicit_finite({{0, 0, 1}, {1, 1, 1}}));
    CHECK(r.vertices == std::vector<VertexId>{1});
  }
}

TEST_CASE("inward rays feed the core") {
  const auto g = GraphModel::core_with_inward_rays({{0, 0, 0}, {1, 0, 0}}, 2);
  const VertexId top = g.ray_vertex(1, 3);
  CHECK(g.ray_level_of_vertex(top) == 3);
  // level n steps down to level n-1, level 1 lands on the target
  const auto out = g.out_edges(top);
  REQUIRE(out.size() == 1);
  CHECK(g.range(out[0]) == g.ray_vertex(1, 2));
  const auto bottom = g.out_edges(g.ray_vertex(1, 1));
  REQUIRE(bottom.size() == 1);
  CHECK(g.range(bottom[0]) == 0);
  CHECK(g.ray_level_of_edge(out[0]) == 3);
}

TEST_CASE("cofinality and H filtration") {
  CHECK(is_cofinal(GraphModel::ladder()) == true);
  const auto disconnected = GraphModel::explicit_finite({{0, 0, 0}, {1, 1, 1}});
  CHECK(is_cofinal(disconnected) == false);
  CHECK_THROWS_AS(h_filtration(GraphModel::ladder(), 3), Error);
  const auto h = h_filtration(GraphModel::core_with_inward_rays({{0, 0, 0}, {1, 0, 0}}, 2), 3);
  REQUIRE(h.levels.size() >= 2);
  for (std::size_t i = 1; i < h.levels.size(); ++i) {
    CHECK(std::includes(h.levels[i].begin(), h.levels[i].end(), h.levels[i - 1].begin(), h.levels[i - 1].end()));
  }
}

TEST_CASE("cycle search") {
  const auto g = GraphModel::ladder();
  const auto c = find_cycle_through(g, 2, 10);
  REQUIRE(c.has_value());
  // 2 -> 0 -> 1 -> 2 is the shortest
  CHECK(c->size() == 3);
  CHECK(g.source(c->front()) == 2);
  CHECK(g.range(c->back()) == 2);
  CHECK_FALSE(find_cycle_through(GraphModel::z_ray(), 0, 20).has_value());
}

TEST_CASE("explicit graphs reject malformed edges") {
  CHECK_THROWS_AS(GraphModel::explicit_finite({{0, 0, 0}, {0, 1, 1}}), Error);
  CHECK_THROWS_AS(GraphModel::weighted_full_shift(0), Error);
}
